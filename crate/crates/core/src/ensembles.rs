//! Rayleigh channel ensembles and large-system scaling laws.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, trial)`,
//! so trials run in parallel and still reproduce bit-for-bit.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::capacity::{secrecy_capacity, ChannelRealization};
use crate::error::{Error, Result};
use crate::geig::{lambda_max_rank_one, HermitianMatrix};
use crate::scalar::{log2, Real};
use crate::stats::MonteCarloSummary;

/// A Rayleigh Monte Carlo experiment at received SNR `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub n_t: usize,
    /// Eavesdropper antennas per transmit antenna.
    pub beta: f64,
    /// Linear received SNR; per-antenna power is `gamma / n_t`.
    pub gamma: f64,
    pub trials: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(n_t: usize, beta: f64, gamma: f64, trials: usize, seed: u64) -> Result<Self> {
        let spec = Self { n_t, beta, gamma, trials, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 {
            return Err(Error::InvalidArgument("n_t must be positive".into()));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be finite and nonnegative, got {}", self.beta)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must be finite and positive, got {}", self.gamma)));
        }
        if self.trials < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 trials, got {}", self.trials)));
        }
        Ok(())
    }

    /// `round(beta * n_t)`, halves rounded up.
    pub fn n_e(&self) -> usize {
        eavesdropper_antennas(self.n_t, self.beta)
    }

    /// Per-antenna transmit power `gamma / n_t`.
    pub fn power(&self) -> f64 {
        self.gamma / self.n_t as f64
    }
}

pub fn eavesdropper_antennas(n_t: usize, beta: f64) -> usize {
    (beta * n_t as f64 + 0.5).floor() as usize
}

/// Independent generator for one trial of an experiment.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One CN(0, 1) draw: real and imaginary parts i.i.d. N(0, 1/2).
pub fn sample_cn<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(s * re, s * im)
}

/// Draws `h_r` then `H_e` row by row with i.i.d. CN(0, 1) entries.
pub fn sample_channel<R: Rng + ?Sized>(n_t: usize, n_e: usize, rng: &mut R) -> Result<ChannelRealization<f64>> {
    let h = DVector::from_fn(n_t, |_, _| sample_cn(rng));
    let mut rows = Vec::with_capacity(n_e * n_t);
    for _ in 0..n_e * n_t {
        rows.push(sample_cn(rng));
    }
    let he = DMatrix::from_row_slice(n_e, n_t, &rows);
    ChannelRealization::new(h, he)
}

/// The realization for trial `stream` of the experiment keyed by `seed`.
pub fn channel_for_trial(n_t: usize, n_e: usize, seed: u64, stream: u64) -> Result<ChannelRealization<f64>> {
    sample_channel(n_t, n_e, &mut trial_rng(seed, stream))
}

/// Runs `f` over trial indices in parallel and returns results in index order.
pub(crate) fn par_trials<R, F>(trials: usize, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(u64) -> Result<R> + Sync + Send,
{
    (0..trials as u64).into_par_iter().map(f).collect()
}

/// `γ − ¼[√(1+γ(1+√β)²) − √(1+γ(1−√β)²)]²`.
///
/// Evaluated without cancellation: with `c = 1 + γ(β−1)` and `s1·s2` the
/// product of the two roots, `ξ = 2γ / (s1 s2 + c)` when `c ≥ 0` and
/// `ξ = (s1 s2 − c) / 2` otherwise.
pub fn xi<T: Real>(gamma: T, beta: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let rb = beta.sqrt();
    let s1 = (one + gamma * (one + rb) * (one + rb)).sqrt();
    let s2 = (one + gamma * (one - rb) * (one - rb)).sqrt();
    let c = one + gamma * (beta - one);
    let p = s1 * s2;
    if c >= T::zero() {
        two * gamma / (p + c)
    } else {
        (p - c) / two
    }
}

/// Large-system secrecy capacity as `γ → ∞`: `0` for `β ≥ 2`,
/// `−log2(β−1)` for `1 < β < 2`, and `+∞` for `β ≤ 1`.
pub fn asymptotic_capacity_infinite_snr<T: Real>(beta: T) -> T {
    let one = T::one();
    if beta <= one {
        T::infinity()
    } else if beta >= T::lit(2.0) {
        T::zero()
    } else {
        -log2(beta - one)
    }
}

/// `{log2 ξ(γ, β)}⁺`.
pub fn scaled_capacity_lower_bound<T: Real>(gamma: T, beta: T) -> T {
    let l = log2(xi(gamma, beta));
    if l > T::zero() {
        l
    } else {
        T::zero()
    }
}

/// `h†(I + P·H†H)⁻¹h` at `P = gamma / n_t`, i.e. the normalized quadratic
/// form `γ·h̃†(I + γH̃†H̃)⁻¹h̃` of the large-system analysis.
pub fn scaled_quadratic_form(gamma: f64, ch: &ChannelRealization<f64>) -> Result<f64> {
    let p = gamma / ch.n_t() as f64;
    let b = HermitianMatrix::identity_plus_gram(p, ch.h_e());
    Ok(p * lambda_max_rank_one(ch.h_r(), &b)?.lambda_max)
}

/// Draws `λmax(hh†, H†H) = h†(H†H)⁻¹h` over Rayleigh trials.
pub fn sample_lambda_max_rayleigh(n_t: usize, n_e: usize, trials: usize, seed: u64) -> Result<Vec<f64>> {
    if n_t == 0 {
        return Err(Error::InvalidArgument("n_t must be positive".into()));
    }
    if n_e <= n_t {
        return Err(Error::InvalidArgument(format!(
            "the top-eigenvalue law needs n_e > n_t, got n_t = {n_t}, n_e = {n_e}"
        )));
    }
    par_trials(trials, |k| {
        let ch = channel_for_trial(n_t, n_e, seed, k)?;
        let b = HermitianMatrix::gram(ch.h_e());
        Ok(lambda_max_rank_one(ch.h_r(), &b)?.lambda_max)
    })
}

/// Degrees of freedom and scale of the top-eigenvalue law for complex
/// Rayleigh channels, `λmax ~ scale · F(d1, d2)`.
///
/// `‖h‖² ~ Gamma(n_t, 1)` and `1/[(H†H)^-1]_11 ~ Gamma(n_e − n_t + 1, 1)`
/// independently, so `d1 = 2n_t`, `d2 = 2(n_e − n_t + 1)` and
/// `scale = d1/d2`.
pub fn lambda_max_f_parameters(n_t: usize, n_e: usize) -> (f64, f64, f64) {
    let d1 = 2.0 * n_t as f64;
    let d2 = 2.0 * (n_e as f64 - n_t as f64 + 1.0);
    (d1, d2, d1 / d2)
}

/// Monte Carlo estimates over one ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledCapacityEstimate {
    /// Secrecy capacity `C(γ/n_t)` per trial.
    pub capacity: MonteCarloSummary,
    /// `log2(γ·h̃†(I + γH̃†H̃)⁻¹h̃)` per trial, unclamped.
    pub lower_bound_statistic: MonteCarloSummary,
}

pub fn monte_carlo_scaled_capacity(spec: &EnsembleSpec) -> Result<ScaledCapacityEstimate> {
    spec.validate()?;
    let (n_t, n_e, p) = (spec.n_t, spec.n_e(), spec.power());
    let pairs = par_trials(spec.trials, |k| {
        let ch = channel_for_trial(n_t, n_e, spec.seed, k)?;
        let cap = secrecy_capacity(p, &ch)?.capacity_bits;
        let q = scaled_quadratic_form(spec.gamma, &ch)?;
        Ok((cap, q.log2()))
    })?;
    let (caps, stats): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok(ScaledCapacityEstimate {
        capacity: MonteCarloSummary::from_samples("capacity_bits", &caps)?,
        lower_bound_statistic: MonteCarloSummary::from_samples("rank_one_log2", &stats)?,
    })
}
