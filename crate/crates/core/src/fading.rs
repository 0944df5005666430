//! Ergodic fast-fading bounds: per-realization integrands, their Monte Carlo
//! expectations under a power allocation, and a binned allocation optimizer.
//!
//! Allocations see `h_r` only through `‖h_r‖²`, which is `Gamma(n_t, 1)`
//! under the Rayleigh ensemble, so bin edges and budget checks use the exact
//! law.

use nalgebra::SymmetricEigen;
use statrs::distribution::{ContinuousCDF, Gamma};

use crate::capacity::{masked_beamforming_rate_unclamped, secrecy_capacity, ChannelRealization};
use crate::ensembles::{channel_for_trial, par_trials};
use crate::error::{Error, Result};
use crate::geig::HermitianMatrix;
use crate::scalar::{norm_sqr, Real};
use crate::stats::MonteCarloSummary;

/// Relative slack allowed on the power budget.
pub const BUDGET_TOL: f64 = 1e-6;

/// `R_FF,-` at power `rho`: the unclamped masked-beamforming rate, and `0`
/// when `rho = 0`.
pub fn rate_ff_lower<T: Real>(ch: &ChannelRealization<T>, rho: T) -> Result<T> {
    check_rho(rho)?;
    if rho == T::zero() {
        return Ok(T::zero());
    }
    masked_beamforming_rate_unclamped(rho, ch)
}

/// `R_FF,+` at power `rho`: the secrecy capacity, and `0` when `rho = 0`.
pub fn rate_ff_upper<T: Real>(ch: &ChannelRealization<T>, rho: T) -> Result<T> {
    check_rho(rho)?;
    if rho == T::zero() {
        return Ok(T::zero());
    }
    Ok(secrecy_capacity(rho, ch)?.capacity_bits)
}

fn check_rho<T: Real>(rho: T) -> Result<()> {
    if rho >= T::zero() && rho.is_finite_value() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("power must be finite and nonnegative, got {rho}")))
    }
}

/// A power allocation `rho(‖h_r‖²)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerAllocation {
    Constant(f64),
    /// `levels[k]` applies on `[edges[k-1], edges[k])`, with `edges[-1] = 0`
    /// and `edges[bins-1] = ∞` implied.
    Binned { edges: Vec<f64>, levels: Vec<f64> },
}

impl PowerAllocation {
    pub fn binned(edges: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != edges.len() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} levels need {} interior edges, got {}",
                levels.len(),
                levels.len().saturating_sub(1),
                edges.len()
            )));
        }
        if levels.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
            return Err(Error::InvalidArgument("levels must be finite and nonnegative".into()));
        }
        if edges.iter().any(|e| !(*e > 0.0 && e.is_finite())) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("edges must be positive and strictly increasing".into()));
        }
        Ok(Self::Binned { edges, levels })
    }

    pub fn bins(&self) -> usize {
        match self {
            Self::Constant(_) => 1,
            Self::Binned { levels, .. } => levels.len(),
        }
    }

    pub fn bin_of(&self, norm_sq: f64) -> usize {
        match self {
            Self::Constant(_) => 0,
            Self::Binned { edges, .. } => edges.partition_point(|e| *e <= norm_sq),
        }
    }

    pub fn level(&self, norm_sq: f64) -> f64 {
        match self {
            Self::Constant(p) => *p,
            Self::Binned { levels, .. } => levels[self.bin_of(norm_sq)],
        }
    }

    /// `E[rho(‖h_r‖²)]` under `‖h_r‖² ~ Gamma(n_t, 1)`.
    pub fn expected_power(&self, n_t: usize) -> Result<f64> {
        match self {
            Self::Constant(p) => Ok(*p),
            Self::Binned { edges, levels } => {
                let g = norm_law(n_t)?;
                let mut prev = 0.0;
                let mut total = 0.0;
                for (k, l) in levels.iter().enumerate() {
                    let next = edges.get(k).map_or(1.0, |e| g.cdf(*e));
                    total += l * (next - prev);
                    prev = next;
                }
                Ok(total)
            }
        }
    }

    pub fn is_feasible(&self, n_t: usize, budget: f64) -> Result<bool> {
        Ok(self.expected_power(n_t)? <= budget * (1.0 + BUDGET_TOL))
    }
}

fn norm_law(n_t: usize) -> Result<Gamma> {
    Gamma::new(n_t as f64, 1.0).map_err(|e| Error::InvalidArgument(format!("Gamma({n_t}, 1): {e}")))
}

/// Interior edges splitting `Gamma(n_t, 1)` into `bins` equal-probability cells.
pub fn equal_probability_edges(n_t: usize, bins: usize) -> Result<Vec<f64>> {
    let g = norm_law(n_t)?;
    Ok((1..bins).map(|k| g.inverse_cdf(k as f64 / bins as f64)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FadingBoundReport {
    pub lower_bits: f64,
    /// Evaluated at the given allocation, so it under-estimates the
    /// maximized upper bound when the allocation is not its maximizer.
    pub upper_bits: f64,
    pub std_error_lower: f64,
    pub std_error_upper: f64,
    /// `E[R_FF,+]` at the constant allocation `rho = P`.
    pub upper_bits_constant: f64,
    pub std_error_upper_constant: f64,
    /// Sample mean of `rho(‖h_r‖²)`.
    pub mean_power: f64,
    pub allocation: PowerAllocation,
}

/// Monte Carlo means of both integrands over `trials` Rayleigh draws.
pub fn expected_bounds(
    n_t: usize,
    n_e: usize,
    p: f64,
    allocation: &PowerAllocation,
    trials: usize,
    seed: u64,
) -> Result<FadingBoundReport> {
    if n_t == 0 {
        return Err(Error::InvalidArgument("n_t must be positive".into()));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositivePower(p));
    }
    let expected = allocation.expected_power(n_t)?;
    if expected > p * (1.0 + BUDGET_TOL) {
        return Err(Error::InfeasibleAllocation { expected, budget: p });
    }
    let constant = matches!(allocation, PowerAllocation::Constant(c) if *c == p);
    let rows = par_trials(trials, |k| {
        let ch = channel_for_trial(n_t, n_e, seed, k)?;
        let rho = allocation.level(norm_sqr(ch.h_r()));
        let lo = rate_ff_lower(&ch, rho)?;
        let up = rate_ff_upper(&ch, rho)?;
        let up_c = if constant { up } else { rate_ff_upper(&ch, p)? };
        Ok([lo, up, up_c, rho])
    })?;
    let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
    let lo = MonteCarloSummary::from_samples("rate_ff_lower", &col(0))?;
    let up = MonteCarloSummary::from_samples("rate_ff_upper", &col(1))?;
    let up_c = MonteCarloSummary::from_samples("rate_ff_upper_constant", &col(2))?;
    let mean_power = col(3).iter().sum::<f64>() / trials as f64;
    Ok(FadingBoundReport {
        lower_bits: lo.mean,
        upper_bits: up.mean,
        std_error_lower: lo.std_error,
        std_error_upper: up.std_error,
        upper_bits_constant: up_c.mean,
        std_error_upper_constant: up_c.std_error,
        mean_power,
        allocation: allocation.clone(),
    })
}

/// Spectral data that makes `R_FF,-` at any `rho` an `O(n_t)` sum:
/// `h†(I + s H†H)^-1 h = Σ_k w_k / (1 + s μ_k)` with `H†H = Σ μ_k u_k u_k†`
/// and `w_k = |u_k† h|²`.
#[derive(Debug, Clone)]
pub struct LowerRateCache {
    n_t: usize,
    norm_sq: f64,
    weights: Vec<f64>,
    mu: Vec<f64>,
}

impl LowerRateCache {
    pub fn new(ch: &ChannelRealization<f64>) -> Result<Self> {
        let norm_sq = norm_sqr(ch.h_r());
        if norm_sq == 0.0 {
            return Err(Error::ZeroReceiverChannel);
        }
        let g = HermitianMatrix::gram(ch.h_e());
        let eig = SymmetricEigen::new(g.into_matrix());
        let weights = eig.eigenvectors.column_iter().map(|u| u.dotc(ch.h_r()).norm_sqr()).collect();
        let mu = eig.eigenvalues.iter().map(|m| m.max(0.0)).collect();
        Ok(Self { n_t: ch.n_t(), norm_sq, weights, mu })
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn rate(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        let nt = self.n_t as f64;
        let s = rho / nt;
        let q: f64 = self.weights.iter().zip(&self.mu).map(|(w, m)| w / (1.0 + s * m)).sum();
        (s * q).log2() + (1.0 + nt / (rho * self.norm_sq)).log2()
    }
}

/// Per-bin objective over a fixed sample, normalized by the sample size.
struct BinnedObjective {
    members: Vec<Vec<LowerRateCache>>,
    total: f64,
}

impl BinnedObjective {
    fn new(caches: Vec<LowerRateCache>, alloc_shape: &PowerAllocation) -> Self {
        let total = caches.len() as f64;
        let mut members: Vec<Vec<LowerRateCache>> = vec![Vec::new(); alloc_shape.bins()];
        for c in caches {
            members[alloc_shape.bin_of(c.norm_sq())].push(c);
        }
        Self { members, total }
    }

    fn bin(&self, k: usize, level: f64) -> f64 {
        self.members[k].iter().map(|c| c.rate(level)).sum::<f64>() / self.total
    }

    fn value(&self, levels: &[f64]) -> f64 {
        levels.iter().enumerate().map(|(k, l)| self.bin(k, *l)).sum()
    }
}

const RESTARTS: usize = 3;
const MAX_SWEEPS: usize = 200;

/// Pairwise-transfer coordinate ascent on `levels` with `Σ levels = budget`
/// held fixed and every level kept nonnegative.
fn ascend(obj: &BinnedObjective, mut levels: Vec<f64>, budget: f64) -> Vec<f64> {
    let n = levels.len();
    let mut cur: Vec<f64> = (0..n).map(|k| obj.bin(k, levels[k])).collect();
    let mut step = 0.5 * budget / n as f64;
    let min_step = 1e-6 * budget / n as f64;
    for _ in 0..MAX_SWEEPS {
        if step < min_step {
            break;
        }
        let mut improved = false;
        for i in 0..n {
            for j in 0..n {
                if i == j || levels[j] <= 0.0 {
                    continue;
                }
                let d = step.min(levels[j]);
                let fi = obj.bin(i, levels[i] + d);
                let fj = obj.bin(j, levels[j] - d);
                if fi + fj > cur[i] + cur[j] + 1e-15 {
                    levels[i] += d;
                    levels[j] = (levels[j] - d).max(0.0);
                    cur[i] = fi;
                    cur[j] = fj;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    levels
}

fn starting_points(bins: usize, p: f64) -> [Vec<f64>; RESTARTS] {
    let budget = p * bins as f64;
    let ramp_sum = (bins * (bins + 1) / 2) as f64;
    let upper = bins - bins / 2;
    [
        vec![p; bins],
        (1..=bins).map(|k| budget * k as f64 / ramp_sum).collect(),
        (0..bins).map(|k| if k >= bins / 2 { budget / upper as f64 } else { 0.0 }).collect(),
    ]
}

/// Maximizes the Monte Carlo `E[R_FF,-]` over allocations constant on
/// `bins` equal-probability cells of `‖h_r‖²`.
///
/// Training uses trial streams `0..trials`; the restarts and the constant
/// allocation are then compared on streams `trials..2·trials`.
pub fn optimize_allocation(
    n_t: usize,
    n_e: usize,
    p: f64,
    bins: usize,
    trials: usize,
    seed: u64,
) -> Result<PowerAllocation> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be positive".into()));
    }
    if n_t == 0 {
        return Err(Error::InvalidArgument("n_t must be positive".into()));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositivePower(p));
    }
    if bins == 1 {
        return Ok(PowerAllocation::Constant(p));
    }
    if trials < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 trials, got {trials}")));
    }
    let edges = equal_probability_edges(n_t, bins)?;
    let shape = PowerAllocation::binned(edges.clone(), vec![0.0; bins])?;
    let caches = |offset: u64| {
        par_trials(trials, |k| LowerRateCache::new(&channel_for_trial(n_t, n_e, seed, offset + k)?))
    };
    let train = BinnedObjective::new(caches(0)?, &shape);
    let held_out = BinnedObjective::new(caches(trials as u64)?, &shape);

    let budget = p * bins as f64;
    let mut best = vec![p; bins];
    let mut best_value = held_out.value(&best);
    for start in starting_points(bins, p) {
        let levels = ascend(&train, start, budget);
        let v = held_out.value(&levels);
        if v > best_value {
            best_value = v;
            best = levels;
        }
    }
    PowerAllocation::binned(edges, best)
}
