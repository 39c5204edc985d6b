//! Command-line and config-file parsing for the experiment driver.
//!
//! Precedence: command-line flags, then the `--config` file, then defaults.
//! The config file is flat `key = value` text whose keys are the long flag
//! names without dashes prefix (`snr-min = -5`); `#` starts a comment.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{CommandFactory, Parser};

use super::{ExperimentSpec, Method, Modulation};
use crate::channel::SystemConfig;

#[derive(Debug, Parser)]
#[command(
    name = "ssm-pa",
    version,
    about = "Secrecy-rate sweeps for power allocation in secure spatial modulation"
)]
struct Args {
    /// Transmit antennas (power of two)
    #[arg(long)]
    nt: Option<usize>,
    /// Bob receive antennas
    #[arg(long)]
    nr: Option<usize>,
    /// Eve receive antennas
    #[arg(long)]
    ne: Option<usize>,
    /// Modulation: qpsk, bpsk or 16qam
    #[arg(long = "mod")]
    modulation: Option<String>,
    /// Lowest SNR in dB [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    snr_min: Option<f64>,
    /// Highest SNR in dB [default: 20]
    #[arg(long, allow_negative_numbers = true)]
    snr_max: Option<f64>,
    /// SNR spacing in dB [default: 5]
    #[arg(long)]
    snr_step: Option<f64>,
    /// Channel realizations per SNR point
    #[arg(long)]
    trials: Option<usize>,
    /// Noise samples per mutual-information estimate
    #[arg(long)]
    nsamp: Option<usize>,
    /// Comma-separated methods: es, co, mpsan, fixed:<beta>
    #[arg(long)]
    method: Option<String>,
    /// Exhaustive-search grid size
    #[arg(long)]
    es_grid: Option<usize>,
    /// DC iteration stopping threshold
    #[arg(long)]
    co_eps: Option<f64>,
    /// DC iteration cap
    #[arg(long)]
    co_max_iter: Option<usize>,
    /// Master seed for all random streams
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a matplotlib script for the sweep
    #[arg(long)]
    plot_script: Option<PathBuf>,
    /// Sweep β on a grid per SNR instead of running the methods
    #[arg(long)]
    beta_profile: bool,
    /// Flat key = value config file
    #[arg(long)]
    config: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "nt",
    "nr",
    "ne",
    "mod",
    "snr-min",
    "snr-max",
    "snr-step",
    "trials",
    "nsamp",
    "method",
    "es-grid",
    "co-eps",
    "co-max-iter",
    "seed",
    "out",
    "plot-script",
    "beta-profile",
];

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    /// Rejected by the argument parser (also covers `--help`/`--version`).
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Invalid(String),
}

impl SpecError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SpecError::Clap(e) => e.exit_code(),
            SpecError::Invalid(_) => 2,
        }
    }
}

/// Usage text for error messages.
pub fn usage() -> String {
    Args::command().render_usage().to_string()
}

fn parse_config(text: &str) -> Result<BTreeMap<String, String>, SpecError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| SpecError::Invalid(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim().trim_start_matches("--").to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(SpecError::Invalid(format!(
                "config line {}: unknown key '{key}'",
                n + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn pick<T: FromStr>(cli: Option<T>, file: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, SpecError> {
    if let Some(v) = cli {
        return Ok(v);
    }
    match file.get(key) {
        Some(s) => s
            .parse()
            .map_err(|_| SpecError::Invalid(format!("invalid value '{s}' for '{key}'"))),
        None => Ok(default),
    }
}

fn snr_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, SpecError> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || max < min {
        return Err(SpecError::Invalid(format!("invalid SNR range {min}..{max}")));
    }
    if min == max {
        return Ok(vec![min]);
    }
    if step <= 0.0 {
        return Err(SpecError::Invalid(format!("SNR step must be positive, got {step}")));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| min + step * k as f64).collect())
}

fn invalid(e: impl std::fmt::Display) -> SpecError {
    SpecError::Invalid(e.to_string())
}

/// Builds an [`ExperimentSpec`] from command-line arguments (including the
/// program name) and the optional `--config` file they name.
pub fn parse_spec<I, T>(args: I) -> Result<ExperimentSpec, SpecError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(args)?;
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| SpecError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    let d = ExperimentSpec::default();

    let modulation: Modulation = match args.modulation {
        Some(m) => m.parse().map_err(invalid)?,
        None => match file.get("mod") {
            Some(m) => m.parse().map_err(invalid)?,
            None => d.modulation,
        },
    };
    let cfg = SystemConfig {
        n_t: pick(args.nt, &file, "nt", d.cfg.n_t)?,
        n_r: pick(args.nr, &file, "nr", d.cfg.n_r)?,
        n_e: pick(args.ne, &file, "ne", d.cfg.n_e)?,
        m: modulation.order(),
        ..d.cfg.clone()
    };

    let methods = match args.method.or_else(|| file.get("method").cloned()) {
        Some(list) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse::<Method>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?,
        None => d.methods.clone(),
    };

    let snr_db_grid = snr_grid(
        pick(args.snr_min, &file, "snr-min", 0.0)?,
        pick(args.snr_max, &file, "snr-max", 20.0)?,
        pick(args.snr_step, &file, "snr-step", 5.0)?,
    )?;

    let co = crate::strategies::CoSettings {
        epsilon: pick(args.co_eps, &file, "co-eps", d.co.epsilon)?,
        max_outer_iterations: pick(args.co_max_iter, &file, "co-max-iter", d.co.max_outer_iterations)?,
        ..d.co.clone()
    };

    let plot_script = args.plot_script.or_else(|| file.get("plot-script").map(PathBuf::from));
    let beta_profile = args.beta_profile || pick(None, &file, "beta-profile", false)?;

    let spec = ExperimentSpec {
        cfg,
        modulation,
        methods,
        snr_db_grid,
        trials: pick(args.trials, &file, "trials", d.trials)?,
        n_samp: pick(args.nsamp, &file, "nsamp", d.n_samp)?,
        seed: pick(args.seed, &file, "seed", d.seed)?,
        es_grid_points: pick(args.es_grid, &file, "es-grid", d.es_grid_points)?,
        co,
        out: pick(args.out, &file, "out", d.out.clone())?,
        plot_script,
        beta_profile,
    };
    spec.validate().map_err(invalid)?;
    Ok(spec)
}
