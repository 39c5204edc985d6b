//! Power-allocation strategies.
//!
//! Every strategy maps one channel realization to a PA factor `β ∈ [0, 1]`
//! (the share of power spent on the confidential signal) wrapped in a
//! [`PaResult`].

mod co;
mod es;
mod flops;
mod leakage;

pub use co::{co_optimize, golden_section_max, CoSettings, TangentMinorant};
pub use es::{es_optimize, EsSettings};
pub use flops::{flop_estimates, FlopEstimates};
pub use leakage::{
    compute_leakage_stats, compute_phi, compute_phi_with, leakage_grid_argmax, leakage_product, max_p_san_from_stats,
    max_p_san_optimize, LeakageStats, PhiCoefficients, PhiForm, FALLBACK_GRID_STEP,
};

use crate::{Error, Result};

/// What the `objective` field of a [`PaResult`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Monte Carlo secrecy rate, bits.
    SecrecyRate,
    /// Cut-off-rate surrogate `κ̃_E(β) − κ̃_B(β)`.
    Surrogate,
    /// SLNR·ANLNR product `F(β)`.
    LeakageProduct,
    /// No objective was evaluated.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaResult {
    pub beta: f64,
    pub objective: f64,
    pub objective_kind: ObjectiveKind,
    pub iterations: usize,
    pub converged: bool,
    pub fallback_used: bool,
    /// `(iteration, objective)` trace; grid index for exhaustive search.
    pub diagnostics: Vec<(usize, f64)>,
}

/// Passes a fixed β through unchanged.
pub fn fixed_beta(beta: f64) -> Result<PaResult> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Config(format!("fixed β = {beta} is outside [0, 1]")));
    }
    Ok(PaResult {
        beta,
        objective: f64::NAN,
        objective_kind: ObjectiveKind::None,
        iterations: 0,
        converged: true,
        fallback_used: false,
        diagnostics: Vec::new(),
    })
}
