//! Power allocation for secure spatial modulation (SSM) with artificial noise.
//!
//! The crate is split along the processing chain:
//!
//! - [`channel`]: constellations, the spatial-modulation alphabet, Rayleigh
//!   channel draws, the AN shaping matrix and the AN-plus-noise whitener.
//! - [`info`]: Monte Carlo finite-alphabet mutual information, secrecy rate,
//!   cut-off rates and the high-SNR eavesdropper surrogate.
//! - [`strategies`]: exhaustive search, the DC/MM iterative optimizer, the
//!   closed-form leakage-product rule, fixed baselines and FLOP models.
//! - [`experiment`]: seeded SNR sweeps, β profiles, CSV and plot-script output.

pub mod channel;
pub mod error;
pub mod experiment;
pub mod info;
mod linalg;
pub mod math;
pub mod rng;
pub mod strategies;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
