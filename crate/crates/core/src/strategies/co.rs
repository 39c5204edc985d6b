//! Difference-of-convex (minorize-maximize) optimizer on the cut-off-rate
//! surrogate `κ̃_E(β) − κ̃_B(β)`.
//!
//! Each outer step replaces `κ̃_E` by its tangent at the current point and
//! maximizes the resulting concave function by golden-section search.
//!
//! `κ̃_E` is convex in `u = β/(1−β)` but, as a function of β, it is convex only
//! on part of the interval for most channels, so the tangent can overshoot it.
//! A step that lowers the surrogate is therefore shortened toward the current
//! point until it no longer does. Where the tangent really is a minorant the
//! safeguard never fires and the iteration is plain minorize-maximize.

use super::{ObjectiveKind, PaResult};
use crate::channel::{AnProjector, ChannelPair, SystemConfig, TransmitAlphabet};
use crate::info::{kappa_tilde_b, kappa_tilde_e, kappa_tilde_e_prime, QSet};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CoSettings {
    /// Stop once `|G(β_k) − G(β_{k−1})| ≤ epsilon`.
    pub epsilon: f64,
    pub max_outer_iterations: usize,
    /// Bracket width at which golden-section search stops.
    pub inner_tolerance: f64,
    pub beta_0: f64,
}

impl Default for CoSettings {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            max_outer_iterations: 50,
            inner_tolerance: 1e-6,
            beta_0: 0.5,
        }
    }
}

impl CoSettings {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.inner_tolerance.is_nan() || self.inner_tolerance <= 0.0 {
            return Err(Error::Config("inner tolerance must be positive".into()));
        }
        if !(self.beta_0 > 0.0 && self.beta_0 < 1.0) {
            return Err(Error::Config(format!("beta_0 = {} is outside (0, 1)", self.beta_0)));
        }
        if self.max_outer_iterations == 0 {
            return Err(Error::Config("max_outer_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Tangent of `κ̃_E` at `at`: `g_E(β) = value + slope (β − at)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentMinorant {
    pub at: f64,
    pub value: f64,
    pub slope: f64,
}

impl TangentMinorant {
    pub fn new(at: f64, qset: &QSet) -> Result<Self> {
        Ok(Self {
            at,
            value: kappa_tilde_e(at, qset)?,
            slope: kappa_tilde_e_prime(at, qset)?,
        })
    }

    pub fn eval(&self, beta: f64) -> f64 {
        self.value + self.slope * (beta - self.at)
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Only interior points are evaluated. Returns `(argmax, max)`.
pub fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Halvings tried before a non-improving step is rejected outright.
const MAX_BACKTRACKS: usize = 40;

/// Iterative DC optimizer on the cut-off-rate surrogate.
///
/// `diagnostics[k]` holds the surrogate `κ̃_E(β_k) − κ̃_B(β_k)` after outer
/// iteration `k` (`k = 0` is the starting point); the sequence is
/// non-decreasing. Stops once consecutive entries differ by at most
/// `epsilon`; `converged = false` when the iteration cap is hit first.
/// `fallback_used` reports that `C_E` had to be pseudo-inverted.
pub fn co_optimize(
    ch: &ChannelPair,
    t: &AnProjector,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    co: &CoSettings,
) -> Result<PaResult> {
    co.validate()?;
    let qset = QSet::build(&ch.h_e, t, alphabet)?;
    let kappa_b = |beta: f64| kappa_tilde_b(beta, ch, t, cfg, alphabet);
    let surrogate = |beta: f64| -> Result<f64> { Ok(kappa_tilde_e(beta, &qset)? - kappa_b(beta)?) };

    let mut beta = co.beta_0;
    let mut f_prev = surrogate(beta)?;
    let mut diagnostics = vec![(0, f_prev)];
    let mut converged = false;
    let mut iterations = 0;

    for k in 1..=co.max_outer_iterations {
        iterations = k;
        let tangent = TangentMinorant::new(beta, &qset)?;
        // At the expansion point the tangent model equals the surrogate.
        let (cand, g_cand) = golden_section_max(|b| Ok(tangent.eval(b) - kappa_b(b)?), 0.0, 1.0, co.inner_tolerance)?;
        let (mut next, mut f_next) = (beta, f_prev);
        if g_cand > f_prev {
            let mut step = 1.0;
            for _ in 0..MAX_BACKTRACKS {
                let trial = beta + step * (cand - beta);
                let f_trial = surrogate(trial)?;
                if f_trial >= f_prev {
                    (next, f_next) = (trial, f_trial);
                    break;
                }
                step *= 0.5;
            }
        }
        if !f_next.is_finite() {
            return Err(Error::Numeric(format!("surrogate is not finite at iteration {k}")));
        }
        diagnostics.push((k, f_next));
        let change = f_next - f_prev;
        beta = next;
        f_prev = f_next;
        if change.abs() <= co.epsilon {
            converged = true;
            break;
        }
    }

    Ok(PaResult {
        beta,
        objective: f_prev,
        objective_kind: ObjectiveKind::Surrogate,
        iterations,
        converged,
        fallback_used: qset.pseudo_inverse,
        diagnostics,
    })
}
