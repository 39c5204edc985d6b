//! Seeded Monte Carlo experiments over SNR.
//!
//! Every trial draws its channel, its search noise and its evaluation noise
//! from substreams keyed by `(seed, SNR, trial)`, so all methods at one SNR
//! see the same channels and the whole run is a pure function of the
//! [`ExperimentSpec`]. Trials run in parallel; results are reduced in trial
//! order.

pub mod cli;
mod output;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

pub use output::{emit_plot_script, write_csv, write_profile_csv, CSV_HEADER, PROFILE_CSV_HEADER};

use crate::channel::{
    AnProjector, ChannelPair, Constellation, ModulationScheme, ProjectorMode, SystemConfig, TransmitAlphabet,
};
use crate::info::{mean_and_std_error, secrecy_rate_with_noise, NoiseSamples};
use crate::rng;
use crate::strategies::{co_optimize, es_optimize, fixed_beta, max_p_san_optimize, CoSettings, EsSettings, PaResult};
use crate::{Error, Result};

const STREAM_CHANNEL: u64 = 0;
const STREAM_SEARCH: u64 = 1;
const STREAM_EVAL: u64 = 2;

/// Fraction of realizations allowed to fail before a run is aborted.
pub const MAX_SKIP_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    Bpsk,
    Qpsk,
    Qam16,
}

impl Modulation {
    pub fn order(self) -> usize {
        match self {
            Modulation::Bpsk => 2,
            Modulation::Qpsk => 4,
            Modulation::Qam16 => 16,
        }
    }

    pub fn constellation(self) -> Result<Constellation> {
        match self {
            Modulation::Bpsk => Constellation::new(ModulationScheme::Psk, 2),
            Modulation::Qpsk => Constellation::new(ModulationScheme::Psk, 4),
            Modulation::Qam16 => Constellation::new(ModulationScheme::Qam, 16),
        }
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" => Ok(Modulation::Qpsk),
            "16qam" => Ok(Modulation::Qam16),
            other => Err(Error::Config(format!(
                "unknown modulation '{other}' (expected qpsk, bpsk or 16qam)"
            ))),
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "16qam",
        })
    }
}

/// A power-allocation strategy selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Es,
    Co,
    MaxPSan,
    Fixed(f64),
}

impl Method {
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Es => f.write_str("es"),
            Method::Co => f.write_str("co"),
            Method::MaxPSan => f.write_str("mpsan"),
            Method::Fixed(b) => write!(f, "fixed:{b}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "es" => return Ok(Method::Es),
            "co" => return Ok(Method::Co),
            "mpsan" | "max-p-san" => return Ok(Method::MaxPSan),
            _ => {}
        }
        let value = s
            .strip_prefix("fixed:")
            .ok_or_else(|| Error::Config(format!("unknown method '{s}' (expected es, co, mpsan or fixed:<beta>)")))?;
        let beta: f64 = value
            .parse()
            .map_err(|_| Error::Config(format!("invalid fixed β '{value}'")))?;
        fixed_beta(beta)?;
        Ok(Method::Fixed(beta))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Antenna counts, constellation order and power; noise variances are set
    /// per SNR point with `σ_E² = σ_B² = P / SNR`.
    pub cfg: SystemConfig,
    pub modulation: Modulation,
    pub methods: Vec<Method>,
    pub snr_db_grid: Vec<f64>,
    pub trials: usize,
    pub n_samp: usize,
    pub seed: u64,
    pub es_grid_points: usize,
    pub co: CoSettings,
    pub out: PathBuf,
    pub plot_script: Option<PathBuf>,
    pub beta_profile: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            cfg: SystemConfig::default(),
            modulation: Modulation::Qpsk,
            methods: vec![
                Method::Es,
                Method::Co,
                Method::MaxPSan,
                Method::Fixed(0.1),
                Method::Fixed(0.25),
                Method::Fixed(0.5),
            ],
            snr_db_grid: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            trials: 100,
            n_samp: 500,
            seed: 1,
            es_grid_points: EsSettings::default().grid_points,
            co: CoSettings::default(),
            out: PathBuf::from("sweep.csv"),
            plot_script: None,
            beta_profile: false,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        if self.cfg.m != self.modulation.order() {
            return Err(Error::Config(format!(
                "constellation size {} does not match {}",
                self.cfg.m, self.modulation
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        if self.snr_db_grid.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if self.snr_db_grid.iter().any(|s| !s.is_finite()) {
            return Err(Error::Config("SNR values must be finite".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        self.es_settings().validate()?;
        self.co.validate()
    }

    pub fn es_settings(&self) -> EsSettings {
        EsSettings {
            grid_points: self.es_grid_points,
            n_samp: self.n_samp,
        }
    }

    pub fn projector_mode(&self) -> ProjectorMode {
        if self.cfg.n_t > self.cfg.n_r {
            ProjectorMode::NullSpace
        } else {
            ProjectorMode::Isotropic
        }
    }

    fn alphabet(&self) -> Result<TransmitAlphabet> {
        TransmitAlphabet::new(&self.cfg, &self.modulation.constellation()?)
    }
}

/// One row of the sweep output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub snr_db: f64,
    pub method: String,
    pub mean_beta: f64,
    pub mean_sr: f64,
    pub sr_std_error: f64,
    pub mean_iterations: f64,
    pub trials: usize,
}

/// Everything one trial needs: the channel, its AN projector and the noise
/// used to score every method.
struct Trial {
    ch: ChannelPair,
    t: AnProjector,
    noise_b: NoiseSamples,
    noise_e: NoiseSamples,
}

impl Trial {
    fn draw(spec: &ExperimentSpec, cfg: &SystemConfig, snr_db: f64, index: usize) -> Result<Self> {
        let key = |purpose| [snr_db.to_bits(), index as u64, purpose];
        let ch = ChannelPair::generate(&mut rng::substream(spec.seed, &key(STREAM_CHANNEL)), cfg);
        let t = AnProjector::build(&ch.h_b, spec.projector_mode())?;
        let mut eval = rng::substream(spec.seed, &key(STREAM_EVAL));
        let noise_b = NoiseSamples::draw(&mut eval, cfg.n_r, spec.n_samp);
        let noise_e = NoiseSamples::draw(&mut eval, cfg.n_e, spec.n_samp);
        Ok(Self {
            ch,
            t,
            noise_b,
            noise_e,
        })
    }

    fn secrecy_rate(&self, beta: f64, cfg: &SystemConfig, alphabet: &TransmitAlphabet) -> Result<f64> {
        Ok(secrecy_rate_with_noise(&self.ch, &self.t, beta, cfg, alphabet, &self.noise_b, &self.noise_e)?.rate)
    }
}

#[derive(Debug, Clone, Copy)]
struct MethodOutcome {
    beta: f64,
    sr: f64,
    iterations: usize,
}

fn optimize(
    method: &Method,
    spec: &ExperimentSpec,
    trial: &Trial,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    snr_db: f64,
    index: usize,
) -> Result<PaResult> {
    match *method {
        Method::Es => {
            let mut search = rng::substream(spec.seed, &[snr_db.to_bits(), index as u64, STREAM_SEARCH]);
            es_optimize(&trial.ch, &trial.t, cfg, alphabet, &spec.es_settings(), &mut search)
        }
        Method::Co => co_optimize(&trial.ch, &trial.t, cfg, alphabet, &spec.co),
        Method::MaxPSan => Ok(max_p_san_optimize(&trial.ch, &trial.t, cfg)),
        Method::Fixed(beta) => fixed_beta(beta),
    }
}

fn run_trial(
    spec: &ExperimentSpec,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    snr_db: f64,
    index: usize,
) -> Result<Vec<MethodOutcome>> {
    let trial = Trial::draw(spec, cfg, snr_db, index)?;
    spec.methods
        .iter()
        .map(|m| {
            let pa = optimize(m, spec, &trial, cfg, alphabet, snr_db, index)?;
            let sr = trial.secrecy_rate(pa.beta, cfg, alphabet)?;
            Ok(MethodOutcome {
                beta: pa.beta,
                sr,
                iterations: pa.iterations,
            })
        })
        .collect()
}

fn check_budget(skipped: usize, total: usize) -> Result<()> {
    if skipped as f64 > MAX_SKIP_FRACTION * total as f64 {
        Err(Error::FailureBudget { skipped, total })
    } else {
        Ok(())
    }
}

/// Average secrecy rate per (SNR, method), SNR-major in the spec's order.
///
/// A realization that fails numerically is dropped for every method and
/// counted; more than [`MAX_SKIP_FRACTION`] dropped realizations abort the run.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let alphabet = spec.alphabet()?;
    let mut records = Vec::with_capacity(spec.snr_db_grid.len() * spec.methods.len());
    let mut skipped = 0;
    let mut total = 0;

    for &snr_db in &spec.snr_db_grid {
        let cfg = spec.cfg.with_snr_db(snr_db);
        let outcomes: Vec<Result<Vec<MethodOutcome>>> = (0..spec.trials)
            .into_par_iter()
            .map(|i| run_trial(spec, &cfg, &alphabet, snr_db, i))
            .collect();
        total += outcomes.len();
        let ok: Vec<Vec<MethodOutcome>> = outcomes
            .into_iter()
            .filter_map(|o| match o {
                Ok(v) => Some(v),
                Err(_) => {
                    skipped += 1;
                    None
                }
            })
            .collect();
        if ok.is_empty() {
            return Err(Error::FailureBudget { skipped, total });
        }

        for (k, method) in spec.methods.iter().enumerate() {
            let betas: Vec<f64> = ok.iter().map(|t| t[k].beta).collect();
            let srs: Vec<f64> = ok.iter().map(|t| t[k].sr).collect();
            let iters: Vec<f64> = ok.iter().map(|t| t[k].iterations as f64).collect();
            let (mean_sr, sr_std_error) = mean_and_std_error(&srs);
            records.push(SweepRecord {
                snr_db,
                method: method.label(),
                mean_beta: mean_and_std_error(&betas).0,
                mean_sr,
                sr_std_error,
                mean_iterations: mean_and_std_error(&iters).0,
                trials: ok.len(),
            });
        }
    }
    check_budget(skipped, total)?;
    Ok(records)
}

/// Mean secrecy rate as a function of β at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaProfile {
    pub snr_db: f64,
    pub betas: Vec<f64>,
    pub mean_sr: Vec<f64>,
    pub sr_std_error: Vec<f64>,
    pub trials: usize,
    /// β with the largest mean secrecy rate (smallest β on ties).
    pub argmax_beta: f64,
}

impl BetaProfile {
    /// β grid of a profile: zero followed by the exhaustive-search grid.
    pub fn grid(spec: &ExperimentSpec) -> Vec<f64> {
        std::iter::once(0.0).chain(spec.es_settings().grid()).collect()
    }
}

/// Sweeps β on [`BetaProfile::grid`] for every SNR in `snr_db_list`, using the
/// same channels and evaluation noise that [`run_sweep`] uses at that SNR.
pub fn run_beta_profile(spec: &ExperimentSpec, snr_db_list: &[f64]) -> Result<Vec<BetaProfile>> {
    spec.validate()?;
    let alphabet = spec.alphabet()?;
    let betas = BetaProfile::grid(spec);
    let mut skipped = 0;
    let mut total = 0;
    let mut profiles = Vec::with_capacity(snr_db_list.len());

    for &snr_db in snr_db_list {
        let cfg = spec.cfg.with_snr_db(snr_db);
        let rows: Vec<Result<Vec<f64>>> = (0..spec.trials)
            .into_par_iter()
            .map(|i| {
                let trial = Trial::draw(spec, &cfg, snr_db, i)?;
                betas.iter().map(|&b| trial.secrecy_rate(b, &cfg, &alphabet)).collect()
            })
            .collect();
        total += rows.len();
        let ok: Vec<Vec<f64>> = rows
            .into_iter()
            .filter_map(|r| r.map_err(|_| skipped += 1).ok())
            .collect();
        if ok.is_empty() {
            return Err(Error::FailureBudget { skipped, total });
        }

        let mut mean_sr = Vec::with_capacity(betas.len());
        let mut sr_std_error = Vec::with_capacity(betas.len());
        for k in 0..betas.len() {
            let col: Vec<f64> = ok.iter().map(|r| r[k]).collect();
            let (m, se) = mean_and_std_error(&col);
            mean_sr.push(m);
            sr_std_error.push(se);
        }
        let mut best = 0;
        for k in 1..betas.len() {
            if mean_sr[k] > mean_sr[best] {
                best = k;
            }
        }
        profiles.push(BetaProfile {
            snr_db,
            argmax_beta: betas[best],
            betas: betas.clone(),
            mean_sr,
            sr_std_error,
            trials: ok.len(),
        });
    }
    check_budget(skipped, total)?;
    Ok(profiles)
}

/// Runs whatever `spec` asks for, writes its files and prints a short
/// summary to `log`.
pub fn execute(spec: &ExperimentSpec, log: &mut impl Write) -> Result<()> {
    if spec.beta_profile {
        let profiles = run_beta_profile(spec, &spec.snr_db_grid)?;
        write_profile_csv(&profiles, &spec.out)?;
        for p in &profiles {
            let best = p.betas.iter().position(|&b| b == p.argmax_beta).unwrap_or(0);
            writeln!(
                log,
                "snr {:>6} dB  argmax beta {:.3}  mean SR {:.4} bits",
                p.snr_db, p.argmax_beta, p.mean_sr[best]
            )?;
        }
    } else {
        let records = run_sweep(spec)?;
        write_csv(&records, &spec.out)?;
        if let Some(script) = &spec.plot_script {
            emit_plot_script(&records, &spec.out, script)?;
        }
        writeln!(
            log,
            "{:>8}  {:<12} {:>8} {:>10} {:>10}",
            "snr_db", "method", "beta", "mean_sr", "std_err"
        )?;
        for r in &records {
            writeln!(
                log,
                "{:>8}  {:<12} {:>8.4} {:>10.4} {:>10.4}",
                r.snr_db, r.method, r.mean_beta, r.mean_sr, r.sr_std_error
            )?;
        }
    }
    writeln!(log, "wrote {}", spec.out.display())?;
    Ok(())
}
