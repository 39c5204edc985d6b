//! Closed-form PA maximizing the product of SLNR and ANLNR.
//!
//! With `A = σ_B² N_t N_r` and `B = σ_E² N_e` the objective is
//!
//! ```text
//! F(β) = κ_B β / (κ_E β + A) · (1−β) ω_E / ((1−β) ω_B + B)
//! ```
//!
//! and `F′(β) = φ_a (φ_o β² − 2 φ_d β + φ_d) / (−φ_b β² + φ_c β + φ_d)²`.

use super::{ObjectiveKind, PaResult};
use crate::channel::{AnProjector, ChannelPair, SystemConfig};

/// Step of the dense grid used when the closed form does not apply.
pub const FALLBACK_GRID_STEP: f64 = 1e-5;

/// Trace statistics of the two links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageStats {
    /// `(P/N_t) tr(H_Bᴴ H_B)`
    pub kappa_b: f64,
    /// `(P/N_t) tr(H_Eᴴ H_E)`
    pub kappa_e: f64,
    /// `P tr(C_B)`
    pub omega_b: f64,
    /// `P tr(C_E)`
    pub omega_e: f64,
}

pub fn compute_leakage_stats(ch: &ChannelPair, t: &AnProjector, cfg: &SystemConfig) -> LeakageStats {
    let per_antenna = cfg.p / cfg.n_t as f64;
    LeakageStats {
        kappa_b: per_antenna * ch.h_b.norm_squared(),
        kappa_e: per_antenna * ch.h_e.norm_squared(),
        omega_b: cfg.p * (&ch.h_b * &t.t).norm_squared(),
        omega_e: cfg.p * (&ch.h_e * &t.t).norm_squared(),
    }
}

/// Which expressions to use for `φ_c` and `φ_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiForm {
    /// Obtained by expanding the denominator of `F`; consistent with `F′`.
    Derived,
    /// `φ_c = κ_E ω_B + σ_B² κ_E N_e`, `φ_d = σ_B² ω_B N_r + σ_B² σ_E² N_r N_e`.
    /// Kept for comparison only.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiCoefficients {
    pub phi_a: f64,
    pub phi_b: f64,
    pub phi_c: f64,
    pub phi_d: f64,
    pub phi_o: f64,
    /// `φ_d² − φ_o φ_d`
    pub delta: f64,
}

impl PhiCoefficients {
    pub fn from_parts(phi_a: f64, phi_b: f64, phi_c: f64, phi_d: f64) -> Self {
        let phi_o = phi_b - phi_c;
        Self {
            phi_a,
            phi_b,
            phi_c,
            phi_d,
            phi_o,
            delta: phi_d * phi_d - phi_o * phi_d,
        }
    }

    /// `−φ_b β² + φ_c β + φ_d`
    pub fn denominator(&self, beta: f64) -> f64 {
        (-self.phi_b * beta + self.phi_c) * beta + self.phi_d
    }

    /// `F′(β)` from the coefficients.
    pub fn derivative(&self, beta: f64) -> f64 {
        let num = (self.phi_o * beta - 2.0 * self.phi_d) * beta + self.phi_d;
        let den = self.denominator(beta);
        self.phi_a * num / (den * den)
    }

    /// Stationary point `(φ_d − √Δ)/φ_o`, when it is well defined and in (0, 1).
    ///
    /// Evaluated as `φ_d / (φ_d + √Δ)`, the same root without cancellation.
    pub fn interior_root(&self) -> Option<f64> {
        if !(self.phi_o < 0.0 && self.delta > 0.0 && self.phi_d > 0.0) {
            return None;
        }
        let beta = self.phi_d / (self.phi_d + self.delta.sqrt());
        (beta > 0.0 && beta < 1.0).then_some(beta)
    }
}

/// Derived coefficients (the default).
pub fn compute_phi(stats: &LeakageStats, cfg: &SystemConfig) -> PhiCoefficients {
    compute_phi_with(stats, cfg, PhiForm::Derived)
}

pub fn compute_phi_with(stats: &LeakageStats, cfg: &SystemConfig, form: PhiForm) -> PhiCoefficients {
    let LeakageStats {
        kappa_b,
        kappa_e,
        omega_b,
        omega_e,
    } = *stats;
    let phi_a = kappa_b * omega_e;
    let phi_b = kappa_e * omega_b;
    let (phi_c, phi_d) = match form {
        PhiForm::Derived => {
            let a = cfg.sigma2_b * (cfg.n_t * cfg.n_r) as f64;
            let b = cfg.sigma2_e * cfg.n_e as f64;
            (kappa_e * omega_b + kappa_e * b - a * omega_b, a * (omega_b + b))
        }
        PhiForm::Printed => {
            let (nr, ne) = (cfg.n_r as f64, cfg.n_e as f64);
            (
                kappa_e * omega_b + cfg.sigma2_b * kappa_e * ne,
                cfg.sigma2_b * omega_b * nr + cfg.sigma2_b * cfg.sigma2_e * nr * ne,
            )
        }
    };
    PhiCoefficients::from_parts(phi_a, phi_b, phi_c, phi_d)
}

/// The SLNR·ANLNR objective `F(β)`.
pub fn leakage_product(beta: f64, stats: &LeakageStats, cfg: &SystemConfig) -> f64 {
    let a = cfg.sigma2_b * (cfg.n_t * cfg.n_r) as f64;
    let b = cfg.sigma2_e * cfg.n_e as f64;
    let slnr = stats.kappa_b * beta / (stats.kappa_e * beta + a);
    let anlnr = (1.0 - beta) * stats.omega_e / ((1.0 - beta) * stats.omega_b + b);
    slnr * anlnr
}

/// Argmax of `F` over `points` equally spaced values spanning `[lo, hi]`.
/// Ties go to the smaller β.
pub fn leakage_grid_argmax(stats: &LeakageStats, cfg: &SystemConfig, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let step = if points > 1 {
        (hi - lo) / (points - 1) as f64
    } else {
        0.0
    };
    let mut best = (lo, f64::NEG_INFINITY);
    for k in 0..points {
        let beta = lo + step * k as f64;
        let f = leakage_product(beta, stats, cfg);
        if f > best.1 {
            best = (beta, f);
        }
    }
    best
}

/// Closed-form PA for one channel realization.
pub fn max_p_san_optimize(ch: &ChannelPair, t: &AnProjector, cfg: &SystemConfig) -> PaResult {
    let stats = compute_leakage_stats(ch, t, cfg);
    max_p_san_from_stats(&stats, &compute_phi(&stats, cfg), cfg)
}

/// Uses the interior stationary point when the coefficient signs allow it and
/// a dense grid over `[0.001, 0.999]` otherwise.
pub fn max_p_san_from_stats(stats: &LeakageStats, phi: &PhiCoefficients, cfg: &SystemConfig) -> PaResult {
    let (beta, objective, fallback_used) = match phi.interior_root() {
        Some(beta) => (beta, leakage_product(beta, stats, cfg), false),
        None => {
            let (lo, hi) = (1e-3, 1.0 - 1e-3);
            let points = ((hi - lo) / FALLBACK_GRID_STEP).round() as usize + 1;
            let (beta, f) = leakage_grid_argmax(stats, cfg, lo, hi, points);
            (beta, f, true)
        }
    };
    PaResult {
        beta,
        objective,
        objective_kind: ObjectiveKind::LeakageProduct,
        iterations: 0,
        converged: true,
        fallback_used,
        diagnostics: Vec::new(),
    }
}
