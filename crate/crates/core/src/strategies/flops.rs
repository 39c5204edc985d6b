use crate::channel::SystemConfig;

/// Floating-point operation counts of the three strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlopEstimates {
    pub es: u128,
    pub co: u128,
    pub max_p_san: u128,
}

/// Closed-form FLOP models.
///
/// * exhaustive search: `2 N_t² M² l N_samp [2 (N_r + N_e) N_t² + N_r + N_e]`
/// * DC iteration: `3 N_t² M² D_ite (2 N_t² + 2 N_t)`
/// * closed form: `2 N_t² (2 N_r + 3 N_e) + 2 N_r² N_t + 2 N_e² N_t + N_t + N_r + N_e`
pub fn flop_estimates(cfg: &SystemConfig, l: u64, n_samp: u64, d_ite: u64) -> FlopEstimates {
    let (nt, nr, ne, m) = (cfg.n_t as u128, cfg.n_r as u128, cfg.n_e as u128, cfg.m as u128);
    let (l, n_samp, d_ite) = (l as u128, n_samp as u128, d_ite as u128);
    let es = 2 * nt * nt * m * m * l * n_samp * (2 * (nr + ne) * nt * nt + nr + ne);
    let co = 3 * nt * nt * m * m * d_ite * (2 * nt * nt + 2 * nt);
    let max_p_san = 2 * nt * nt * (2 * nr + 3 * ne) + 2 * nr * nr * nt + 2 * ne * ne * nt + nt + nr + ne;
    FlopEstimates { es, co, max_p_san }
}
