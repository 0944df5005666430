//! Summary statistics and the one-sample Kolmogorov–Smirnov test used to
//! validate sampled eigenvalue laws against their reference distributions.

use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::{Error, Result};

/// Mean and standard error of a Monte Carlo quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub mean: f64,
    /// `sample_std / sqrt(trials)`.
    pub std_error: f64,
    pub trials: usize,
    pub quantity: String,
}

impl MonteCarloSummary {
    /// Summarizes `samples` in index order (sequential sum, so the result is
    /// independent of how the samples were produced).
    pub fn from_samples(quantity: impl Into<String>, samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 trials, got {n}")));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Ok(Self {
            mean,
            std_error: (var / n as f64).sqrt(),
            trials: n,
            quantity: quantity.into(),
        })
    }
}

pub fn median(samples: &[f64]) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => v[n / 2],
        _ => 0.5 * (v[n / 2 - 1] + v[n / 2]),
    }
}

/// Outcome of a one-sample KS test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    /// `sup_x |F_n(x) - F(x)|`.
    pub statistic: f64,
    pub p_value: f64,
    pub samples: usize,
}

impl KsOutcome {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value > significance
    }
}

/// Two-sided KS distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Survival function of the Kolmogorov distribution,
/// `Q(t) = 2 Σ_{k≥1} (-1)^(k-1) exp(-2 k² t²)`.
pub fn kolmogorov_survival(t: f64) -> f64 {
    if t < 1e-3 {
        return 1.0;
    }
    if t < 1.18 {
        // small-t form: 1 - sqrt(2π)/t Σ exp(-(2k-1)² π² / (8 t²))
        let pi2 = std::f64::consts::PI.powi(2);
        let s: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-m * m * pi2 / (8.0 * t * t)).exp()
            })
            .sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / t * s).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * t * t).exp();
        sum += sign * term;
        if term < 1e-17 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS test with the finite-sample correction `t = (√n + 0.12 + 0.11/√n)·D`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> KsOutcome {
    let d = ks_statistic(samples, cdf);
    let sn = (samples.len() as f64).sqrt();
    KsOutcome {
        statistic: d,
        p_value: kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d),
        samples: samples.len(),
    }
}

/// Law of `scale · F` with `F ~ F(d1, d2)`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledF {
    dist: FisherSnedecor,
    scale: f64,
}

impl ScaledF {
    pub fn new(d1: f64, d2: f64, scale: f64) -> Result<Self> {
        let dist = FisherSnedecor::new(d1, d2)
            .map_err(|e| Error::InvalidArgument(format!("F({d1}, {d2}): {e}")))?;
        if !(scale > 0.0) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
        }
        Ok(Self { dist, scale })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            self.dist.cdf(x / self.scale)
        }
    }

    pub fn quantile(&self, q: f64) -> f64 {
        self.scale * self.dist.inverse_cdf(q)
    }
}
