use rand::Rng;

use super::{ObjectiveKind, PaResult};
use crate::channel::{AnProjector, ChannelPair, SystemConfig, TransmitAlphabet};
use crate::info::{secrecy_rate_with_noise, NoiseSamples};
use crate::{Error, Result};

/// Exhaustive-search grid: `grid_points` values `k / (grid_points + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EsSettings {
    pub grid_points: usize,
    pub n_samp: usize,
}

impl Default for EsSettings {
    fn default() -> Self {
        Self {
            grid_points: 99,
            n_samp: 500,
        }
    }
}

impl EsSettings {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::Config("exhaustive search needs at least 2 grid points".into()));
        }
        if self.n_samp == 0 {
            return Err(Error::Config("n_samp must be at least 1".into()));
        }
        Ok(())
    }

    /// Open uniform grid on (0, 1).
    pub fn grid(&self) -> Vec<f64> {
        let denom = (self.grid_points + 1) as f64;
        (1..=self.grid_points).map(|k| k as f64 / denom).collect()
    }
}

/// Grid search on the Monte Carlo secrecy rate.
///
/// One set of noise draws is taken from `rng` and reused at every grid point.
/// Ties go to the smaller β.
pub fn es_optimize<R: Rng + ?Sized>(
    ch: &ChannelPair,
    t: &AnProjector,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    es: &EsSettings,
    rng: &mut R,
) -> Result<PaResult> {
    es.validate()?;
    let noise_b = NoiseSamples::draw(rng, cfg.n_r, es.n_samp);
    let noise_e = NoiseSamples::draw(rng, cfg.n_e, es.n_samp);
    let grid = es.grid();
    let mut diagnostics = Vec::with_capacity(grid.len());
    let mut best = (grid[0], f64::NEG_INFINITY);
    for (k, &beta) in grid.iter().enumerate() {
        let sr = secrecy_rate_with_noise(ch, t, beta, cfg, alphabet, &noise_b, &noise_e)?.rate;
        diagnostics.push((k, sr));
        if sr > best.1 {
            best = (beta, sr);
        }
    }
    Ok(PaResult {
        beta: best.0,
        objective: best.1,
        objective_kind: ObjectiveKind::SecrecyRate,
        iterations: grid.len(),
        converged: true,
        fallback_used: false,
        diagnostics,
    })
}
