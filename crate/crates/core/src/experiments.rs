//! CSV experiment runners: SNR sweeps over one channel, large-system scaling
//! tables, top-eigenvalue distribution checks, fading bounds, and the
//! two-antenna example datasets.
//!
//! Rows are computed in parallel and emitted in grid order. Every cell is a
//! finite decimal except `inf` for an unbounded infinite-SNR capacity.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::capacity::{example_channel, high_snr_asymptote, masked_beamforming_rate, secrecy_capacity, ChannelRealization};
use crate::ensembles::{
    asymptotic_capacity_infinite_snr, lambda_max_f_parameters, monte_carlo_scaled_capacity, sample_lambda_max_rayleigh,
    scaled_capacity_lower_bound, EnsembleSpec,
};
use crate::error::{Error, Result};
use crate::fading::{expected_bounds, optimize_allocation, PowerAllocation};
use crate::io::{format_channel, write_atomic};
use crate::stats::{ks_test, median, ScaledF};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(p: f64) -> f64 {
    10.0 * p.log10()
}

/// One CSV cell.
pub fn cell(x: f64) -> Result<String> {
    if x.is_finite() {
        Ok(format!("{x}"))
    } else if x == f64::INFINITY {
        Ok("inf".into())
    } else {
        Err(Error::NonFinite("CSV cell"))
    }
}

fn csv_line(out: &mut String, cells: &[f64]) -> Result<()> {
    let parts = cells.iter().map(|x| cell(*x)).collect::<Result<Vec<_>>>()?;
    writeln!(out, "{}", parts.join(",")).expect("writing to a String");
    Ok(())
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Parses `v`, `a,b,c` or `start:stop:step` (inclusive of `stop`).
///
/// Range points are `start + k·step` rounded to 1e-9, so decimal steps land
/// on the expected grid values.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t.trim().parse().map_err(|_| bad(format!("malformed number '{}' in grid '{text}'", t.trim())))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad(format!("non-finite value in grid '{text}'")))
        }
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.len() {
        1 => text.split(',').map(num).collect(),
        3 => {
            let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(step > 0.0) {
                return Err(bad(format!("grid step must be positive in '{text}'")));
            }
            if stop < start {
                return Err(bad(format!("empty grid '{text}': stop < start")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9).collect())
        }
        _ => Err(bad(format!("grid '{text}' must be 'v', 'a,b,c' or 'start:stop:step'"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub capacity_bits: f64,
    pub rmb_bits: f64,
    pub asymptote_bits: f64,
    /// `capacity_bits - rmb_bits`.
    pub gap_bits: f64,
}

pub const SWEEP_HEADER: &str = "snr_db,capacity_bits,rmb_bits,asymptote_bits,gap_bits";

pub fn sweep(ch: &ChannelRealization<f64>, snr_db: &[f64]) -> Result<Vec<SweepRow>> {
    if snr_db.is_empty() {
        return Err(bad("empty SNR grid"));
    }
    let asym = high_snr_asymptote(ch)?;
    snr_db
        .par_iter()
        .map(|&db| {
            let p = db_to_linear(db);
            let c = secrecy_capacity(p, ch)?.capacity_bits;
            let r = masked_beamforming_rate(p, ch)?;
            Ok(SweepRow {
                snr_db: db,
                capacity_bits: c,
                rmb_bits: r,
                asymptote_bits: asym.asymptote_bits(p),
                gap_bits: c - r,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut s = format!("{SWEEP_HEADER}\n");
    for r in rows {
        csv_line(&mut s, &[r.snr_db, r.capacity_bits, r.rmb_bits, r.asymptote_bits, r.gap_bits])?;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingConfig {
    pub betas: Vec<f64>,
    /// Linear received SNRs.
    pub gammas: Vec<f64>,
    /// Transmit antennas of the Monte Carlo ensemble.
    pub n_t: usize,
    pub trials: usize,
    /// Shared by every cell, so cells with equal `n_e` see the same draws.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub beta: f64,
    pub gamma: f64,
    pub xi_lower_bits: f64,
    pub infinite_snr_bits: f64,
    /// Mean secrecy capacity `C(γ/n_t)` over the ensemble.
    pub mc_mean_bits: f64,
    pub mc_stderr: f64,
}

pub const SCALING_HEADER: &str = "beta,gamma,xi_lower_bits,infinite_snr_bits,mc_mean_bits,mc_stderr";

pub fn scaling(cfg: &ScalingConfig) -> Result<Vec<ScalingRow>> {
    if cfg.betas.is_empty() || cfg.gammas.is_empty() {
        return Err(bad("beta and gamma grids must be nonempty"));
    }
    if let Some(b) = cfg.betas.iter().find(|b| !(**b > 0.0)) {
        return Err(bad(format!("beta must be positive, got {b}")));
    }
    let cells: Vec<(f64, f64)> = cfg.betas.iter().flat_map(|&b| cfg.gammas.iter().map(move |&g| (b, g))).collect();
    let mut rows = Vec::with_capacity(cells.len());
    for (beta, gamma) in cells {
        let spec = EnsembleSpec::new(cfg.n_t, beta, gamma, cfg.trials, cfg.seed)?;
        let mc = monte_carlo_scaled_capacity(&spec)?;
        rows.push(ScalingRow {
            beta,
            gamma,
            xi_lower_bits: scaled_capacity_lower_bound(gamma, beta),
            infinite_snr_bits: asymptotic_capacity_infinite_snr(beta),
            mc_mean_bits: mc.capacity.mean,
            mc_stderr: mc.capacity.std_error,
        });
    }
    Ok(rows)
}

pub fn scaling_csv(rows: &[ScalingRow]) -> Result<String> {
    let mut s = format!("{SCALING_HEADER}\n");
    for r in rows {
        csv_line(&mut s, &[r.beta, r.gamma, r.xi_lower_bits, r.infinite_snr_bits, r.mc_mean_bits, r.mc_stderr])?;
    }
    Ok(s)
}

/// KS test of sampled `λmax(hh†, H†H)` against its scaled-F law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FstatRow {
    pub n_t: usize,
    pub n_e: usize,
    pub trials: usize,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub sample_median: f64,
    pub reference_median: f64,
}

pub const FSTAT_HEADER: &str = "n_t,n_e,trials,ks_statistic,p_value,sample_median,reference_median";

pub fn fstat(n_t: usize, n_e: usize, trials: usize, seed: u64) -> Result<FstatRow> {
    let samples = sample_lambda_max_rayleigh(n_t, n_e, trials, seed)?;
    let (d1, d2, scale) = lambda_max_f_parameters(n_t, n_e);
    let law = ScaledF::new(d1, d2, scale)?;
    let ks = ks_test(&samples, |x| law.cdf(x));
    Ok(FstatRow {
        n_t,
        n_e,
        trials,
        ks_statistic: ks.statistic,
        p_value: ks.p_value,
        sample_median: median(&samples),
        reference_median: law.quantile(0.5),
    })
}

pub fn fstat_csv(row: &FstatRow) -> Result<String> {
    let mut s = format!("{FSTAT_HEADER}\n");
    csv_line(
        &mut s,
        &[
            row.n_t as f64,
            row.n_e as f64,
            row.trials as f64,
            row.ks_statistic,
            row.p_value,
            row.sample_median,
            row.reference_median,
        ],
    )?;
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingConfig {
    pub n_t: usize,
    pub n_e: usize,
    /// Average transmit power, linear.
    pub power: f64,
    /// `1` evaluates the constant allocation.
    pub bins: usize,
    pub trials: usize,
    pub seed: u64,
}

pub const FADING_HEADER: &str = "snr_db,power,bins,lower_bits,std_error_lower,upper_bits,std_error_upper,\
upper_constant_bits,std_error_upper_constant,mean_power";

/// Optimizes an allocation on streams keyed by `seed` and evaluates it on
/// fresh draws keyed by `seed + 1`.
pub fn fading(cfg: &FadingConfig) -> Result<(PowerAllocation, String)> {
    let alloc = optimize_allocation(cfg.n_t, cfg.n_e, cfg.power, cfg.bins, cfg.trials, cfg.seed)?;
    let rep = expected_bounds(cfg.n_t, cfg.n_e, cfg.power, &alloc, cfg.trials, cfg.seed.wrapping_add(1))?;
    let mut s = format!("{FADING_HEADER}\n");
    csv_line(
        &mut s,
        &[
            linear_to_db(cfg.power),
            cfg.power,
            cfg.bins as f64,
            rep.lower_bits,
            rep.std_error_lower,
            rep.upper_bits,
            rep.std_error_upper,
            rep.upper_bits_constant,
            rep.std_error_upper_constant,
            rep.mean_power,
        ],
    )?;
    Ok((alloc, s))
}

/// Settings for the bundled two-antenna example datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleConfig {
    pub snr_db: Vec<f64>,
    pub betas: Vec<f64>,
    /// Received SNRs of the scaling table, in dB.
    pub gamma_db: Vec<f64>,
    pub n_t: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ExampleConfig {
    fn default() -> Self {
        Self {
            snr_db: parse_grid("-10:40:1").expect("static grid"),
            betas: parse_grid("0.1:4:0.1").expect("static grid"),
            gamma_db: vec![0.0, 10.0, 20.0, 30.0],
            n_t: 32,
            trials: 100,
            seed: 1,
        }
    }
}

/// Writes the example channel files, one sweep per eavesdropper setting,
/// and the scaling table into `dir`. Returns the written paths.
pub fn run_example(dir: &Path, cfg: &ExampleConfig) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let full = example_channel::<f64>();
    let single = full.with_eavesdropper_rows(1)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: String| -> Result<()> {
        let path = dir.join(name);
        write_atomic(&path, body.as_bytes())?;
        written.push(path);
        Ok(())
    };
    put("example_channel_ne1.txt", format_channel(&single))?;
    put("example_channel_ne2.txt", format_channel(&full))?;
    put("fig1_ne1.csv", sweep_csv(&sweep(&single, &cfg.snr_db)?)?)?;
    put("fig1_ne2.csv", sweep_csv(&sweep(&full, &cfg.snr_db)?)?)?;
    let scfg = ScalingConfig {
        betas: cfg.betas.clone(),
        gammas: cfg.gamma_db.iter().map(|d| db_to_linear(*d)).collect(),
        n_t: cfg.n_t,
        trials: cfg.trials,
        seed: cfg.seed,
    };
    put("fig2.csv", scaling_csv(&scaling(&scfg)?)?)?;
    Ok(written)
}
