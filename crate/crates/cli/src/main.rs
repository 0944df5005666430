use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use misome::capacity::{
    check_certificate, converse_certificate, high_snr_asymptote, masked_beamforming_rate, mb_gap_bound, secrecy_capacity,
    HighSnrRegime,
};
use misome::ensembles::eavesdropper_antennas;
use misome::experiments::{
    cell, db_to_linear, fading, fstat, fstat_csv, parse_grid, run_example, scaling, scaling_csv, sweep, sweep_csv,
    ExampleConfig, FadingConfig, ScalingConfig,
};
use misome::io::{parse_channel_file, parse_complex, write_atomic};
use misome::{ChannelRealization, ComplexMatrix, ComplexVector};

/// Secrecy capacity of the multi-antenna-transmitter, single-antenna-receiver,
/// multi-antenna-eavesdropper Gaussian wiretap channel.
#[derive(Parser, Debug)]
#[command(name = "misome", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Secrecy capacity and optimal beamformer.
    Capacity(SingleArgs),
    /// Masked-beamforming rate and its gap bracket.
    MbRate(SingleArgs),
    /// High-SNR regime and low-SNR slope.
    Asymptote(ChannelArgs),
    /// Converse certificate and its verification.
    Certificate(SingleArgs),
    /// Capacity, masked-beamforming rate and asymptote over an SNR grid.
    Sweep(SweepArgs),
    /// Large-system bounds and Monte Carlo capacity over beta and gamma grids.
    Scaling(ScalingArgs),
    /// KS test of the top generalized eigenvalue against its scaled-F law.
    Fstat(FstatArgs),
    /// Fast-fading lower and upper bounds.
    Fading(FadingArgs),
    /// Write the two-antenna example datasets into a directory.
    Example(ExampleArgs),
}

#[derive(Args, Debug)]
struct ChannelArgs {
    /// Channel file: "n_t n_e", then h_r, then the rows of H_e.
    #[arg(long, conflicts_with_all = ["hr", "he"])]
    channel: Option<PathBuf>,
    /// Inline h_r entries, comma separated (e.g. "1+2i,0.5-i").
    #[arg(long, allow_hyphen_values = true)]
    hr: Option<String>,
    /// Inline H_e rows separated by ';', entries by ','.
    #[arg(long, allow_hyphen_values = true, requires = "hr")]
    he: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SingleArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Transmit SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: f64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// `v`, `a,b,c` or `start:stop:step`, in dB.
    #[arg(long, allow_hyphen_values = true, default_value = "-10:40:1")]
    snr_db: String,
}

#[derive(Args, Debug)]
struct ScalingArgs {
    /// Antenna-ratio grid: `v`, `a,b,c` or `start:stop:step`.
    #[arg(long, default_value = "0.1:4:0.1")]
    beta: String,
    /// Linear received-SNR grid.
    #[arg(long, conflicts_with = "snr_db")]
    gamma: Option<String>,
    /// Received-SNR grid in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long, default_value_t = 64)]
    nt: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FstatArgs {
    #[arg(long)]
    nt: usize,
    #[arg(long, conflicts_with = "beta")]
    ne: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FadingArgs {
    #[arg(long)]
    nt: usize,
    #[arg(long, conflicts_with = "beta")]
    ne: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Average transmit SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: f64,
    /// Equal-probability bins of |h_r|^2; 1 keeps the power constant.
    #[arg(long, default_value_t = 1)]
    bins: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Transmit antennas of the scaling-table ensemble.
    #[arg(long)]
    nt: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Capacity(a) => {
            let ch = load_channel(&a.channel)?;
            let p = db_to_linear(a.snr_db);
            let rep = secrecy_capacity(p, &ch)?;
            let mut header = vec!["snr_db".to_string(), "power".into(), "capacity_bits".into(), "lambda_max".into(), "clamped".into()];
            let mut row = vec![a.snr_db, p, rep.capacity_bits, rep.lambda_max, rep.clamped as u8 as f64];
            for (k, z) in rep.psi_max.iter().enumerate() {
                header.push(format!("psi_re_{}", k + 1));
                header.push(format!("psi_im_{}", k + 1));
                row.extend([z.re, z.im]);
            }
            emit(&a.channel.out, &table(&header, &row)?)
        }
        Command::MbRate(a) => {
            let ch = load_channel(&a.channel)?;
            let p = db_to_linear(a.snr_db);
            let r = masked_beamforming_rate(p, &ch)?;
            let gap = mb_gap_bound(p, &ch)?;
            emit(
                &a.channel.out,
                &table(&["snr_db", "power", "rmb_bits", "gap_lower_bits", "gap_upper_bits"], &[a.snr_db, p, r, gap.lower, gap.upper])?,
            )
        }
        Command::Asymptote(a) => {
            let ch = load_channel(&a)?;
            let rep = high_snr_asymptote(&ch)?;
            let (code, value) = match rep.regime {
                HighSnrRegime::FiniteLimit { limit_bits } => (0.0, limit_bits),
                HighSnrRegime::LogGrowth { offset_bits } => (1.0, offset_bits),
            };
            emit(&a.out, &table(&["log_growth", "limit_or_offset_bits", "low_snr_slope"], &[code, value, rep.low_snr_slope])?)
        }
        Command::Certificate(a) => {
            let ch = load_channel(&a.channel)?;
            let p = db_to_linear(a.snr_db);
            let nc = converse_certificate(p, &ch)?;
            let chk = check_certificate(p, &ch, &nc)?;
            emit(
                &a.channel.out,
                &table(
                    &["snr_db", "case", "phi_norm", "upper_bound_bits", "capacity_bits", "gap_bits", "theta_residual"],
                    &[
                        a.snr_db,
                        nc.case.code() as f64,
                        nc.norm(),
                        chk.upper_bound_bits,
                        chk.capacity_bits,
                        chk.gap_bits,
                        chk.theta_residual.unwrap_or(0.0),
                    ],
                )?,
            )
        }
        Command::Sweep(a) => {
            let ch = load_channel(&a.channel)?;
            let grid = parse_grid(&a.snr_db)?;
            emit(&a.channel.out, &sweep_csv(&sweep(&ch, &grid)?)?)
        }
        Command::Scaling(a) => {
            let gammas = match (&a.gamma, &a.snr_db) {
                (Some(g), _) => parse_grid(g)?,
                (None, Some(d)) => parse_grid(d)?.into_iter().map(db_to_linear).collect(),
                (None, None) => vec![1.0, 10.0, 100.0, 1000.0],
            };
            let cfg = ScalingConfig { betas: parse_grid(&a.beta)?, gammas, n_t: a.nt, trials: a.trials, seed: a.seed };
            emit(&a.out, &scaling_csv(&scaling(&cfg)?)?)
        }
        Command::Fstat(a) => {
            let n_e = antennas(a.nt, a.ne, a.beta)?;
            emit(&a.out, &fstat_csv(&fstat(a.nt, n_e, a.trials, a.seed)?)?)
        }
        Command::Fading(a) => {
            let n_e = antennas(a.nt, a.ne, a.beta)?;
            let cfg = FadingConfig {
                n_t: a.nt,
                n_e,
                power: db_to_linear(a.snr_db),
                bins: a.bins,
                trials: a.trials,
                seed: a.seed,
            };
            let (_, csv) = fading(&cfg)?;
            emit(&a.out, &csv)
        }
        Command::Example(a) => {
            let mut cfg = ExampleConfig::default();
            cfg.n_t = a.nt.unwrap_or(cfg.n_t);
            cfg.trials = a.trials.unwrap_or(cfg.trials);
            cfg.seed = a.seed.unwrap_or(cfg.seed);
            for path in run_example(&a.out, &cfg)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn antennas(n_t: usize, ne: Option<usize>, beta: Option<f64>) -> Result<usize> {
    match (ne, beta) {
        (Some(n), _) => Ok(n),
        (None, Some(b)) if b >= 0.0 && b.is_finite() => Ok(eavesdropper_antennas(n_t, b)),
        (None, Some(b)) => bail!("--beta must be finite and nonnegative, got {b}"),
        (None, None) => bail!("one of --ne or --beta is required"),
    }
}

fn load_channel(a: &ChannelArgs) -> Result<ChannelRealization> {
    match (&a.channel, &a.hr) {
        (Some(path), _) => Ok(parse_channel_file(path)?),
        (None, Some(hr)) => {
            let h = entries(hr).context("--hr")?;
            let n_t = h.len();
            let mut rows = Vec::new();
            if let Some(he) = a.he.as_deref().filter(|s| !s.trim().is_empty()) {
                for (k, r) in he.split(';').enumerate() {
                    let row = entries(r).with_context(|| format!("--he row {}", k + 1))?;
                    if row.len() != n_t {
                        bail!("--he row {} has {} entries, expected n_t = {n_t}", k + 1, row.len());
                    }
                    rows.extend(row);
                }
            }
            let n_e = rows.len() / n_t;
            Ok(ChannelRealization::new(
                ComplexVector::from_vec(h),
                ComplexMatrix::from_row_slice(n_e, n_t, &rows),
            )?)
        }
        (None, None) => bail!("a channel is required: pass --channel <file> or --hr/--he"),
    }
}

fn entries(s: &str) -> Result<Vec<misome::scalar::C<f64>>> {
    s.split(',')
        .enumerate()
        .map(|(k, t)| parse_complex(t).map_err(|m| anyhow::anyhow!("entry {}: {m}", k + 1)))
        .collect()
}

fn table<S: AsRef<str>>(header: &[S], row: &[f64]) -> Result<String> {
    let head: Vec<&str> = header.iter().map(|h| h.as_ref()).collect();
    let cells = row.iter().map(|x| cell(*x)).collect::<misome::Result<Vec<_>>>()?;
    Ok(format!("{}\n{}\n", head.join(","), cells.join(",")))
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(path) => Ok(write_atomic(path, body.as_bytes())?),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
