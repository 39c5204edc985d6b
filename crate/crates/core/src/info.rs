//! Information metrics for the whitened SSM link.
//!
//! Both receivers are handled by whitening their AN-plus-noise with
//! [`Whitener`], after which the link is `y′ = √(βP) W^{-1/2} H x + n′` with
//! `n′ ~ CN(0, I)`. All expectations over the finite alphabet are evaluated in
//! the log domain.

use std::f64::consts::LN_2;

use rand::Rng;

use crate::channel::{complex_gaussian, AnProjector, ChannelPair, Side, SystemConfig, TransmitAlphabet, Whitener};
use crate::linalg::pinv_sqrt;
use crate::math::{log2_count, log_sum_exp};
use crate::{CMatrix, Error, Result, C64};

/// Condition number above which `C_E` is pseudo-inverted.
pub const MAX_CONDITION: f64 = 1e12;

/// Monte Carlo estimate of a mutual information, in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samp: usize,
}

/// Whitened receiver noise draws `n′ ~ CN(0, I_dim)`, stored sample-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSamples {
    pub dim: usize,
    data: Vec<C64>,
}

impl NoiseSamples {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, dim: usize, n_samp: usize) -> Self {
        let data = (0..dim * n_samp).map(|_| complex_gaussian(rng)).collect();
        Self { dim, data }
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sample(&self, s: usize) -> &[C64] {
        &self.data[s * self.dim..(s + 1) * self.dim]
    }
}

/// Received constellation `√(βP) W^{-1/2} H x_k`, flattened `n × dim`.
struct WhitenedPoints {
    dim: usize,
    n: usize,
    points: Vec<C64>,
}

impl WhitenedPoints {
    fn new(
        h: &CMatrix,
        t: &AnProjector,
        beta: f64,
        cfg: &SystemConfig,
        alphabet: &TransmitAlphabet,
        side: Side,
    ) -> Result<Self> {
        let whitener = Whitener::build(h, t, beta, cfg, side)?;
        let g = &whitener.w_inv_sqrt * h;
        let points = alphabet.image_under(&g, (beta * cfg.p).sqrt());
        if points.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Numeric("whitened constellation has non-finite entries".into()));
        }
        Ok(Self {
            dim: h.nrows(),
            n: alphabet.len(),
            points,
        })
    }

    fn point(&self, k: usize) -> &[C64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    /// `‖p_i − p_j‖²`, row-major.
    fn pairwise_sq_distances(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            let pi = self.point(i);
            for j in 0..self.n {
                let d: f64 = pi.iter().zip(self.point(j)).map(|(a, b)| (a - b).norm_sqr()).sum();
                out.push(d);
            }
        }
        out
    }
}

/// Finite-alphabet mutual information with Monte Carlo over the noise.
///
/// Draws `n_samp` whitened noise vectors from `rng` and defers to
/// [`mutual_information_with_noise`].
#[allow(clippy::too_many_arguments)]
pub fn mutual_information_mc<R: Rng + ?Sized>(
    h: &CMatrix,
    t: &AnProjector,
    beta: f64,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    side: Side,
    n_samp: usize,
    rng: &mut R,
) -> Result<MiEstimate> {
    if n_samp == 0 {
        return Err(Error::Config("n_samp must be at least 1".into()));
    }
    let noise = NoiseSamples::draw(rng, h.nrows(), n_samp);
    mutual_information_with_noise(h, t, beta, cfg, alphabet, side, &noise)
}

/// Finite-alphabet mutual information using caller-supplied noise draws.
///
/// Each noise draw is shared by all `n_t·m` transmitted hypotheses. For a
/// draw `n′` and hypothesis `i` the inner term is
/// `log2 Σ_j exp(−‖a_ij‖² − 2 Re(a_ijᴴ n′))` with `a_ij = p_i − p_j`, which is
/// `−f_ij + ‖n′‖²` with the `‖n′‖²` cancelled analytically. The estimate is
/// floored at zero.
pub fn mutual_information_with_noise(
    h: &CMatrix,
    t: &AnProjector,
    beta: f64,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    side: Side,
    noise: &NoiseSamples,
) -> Result<MiEstimate> {
    if noise.dim != h.nrows() {
        return Err(Error::Config(format!(
            "noise dimension {} does not match {} receive antennas",
            noise.dim,
            h.nrows()
        )));
    }
    if noise.is_empty() {
        return Err(Error::Config("at least one noise sample is required".into()));
    }
    let pts = WhitenedPoints::new(h, t, beta, cfg, alphabet, side)?;
    let n = pts.n;
    let dist = pts.pairwise_sq_distances();
    let log2_n = log2_count(n);

    let mut proj = vec![0.0; n];
    let mut expo = vec![0.0; n];
    let mut per_sample = Vec::with_capacity(noise.len());
    for s in 0..noise.len() {
        let z = noise.sample(s);
        for (k, r) in proj.iter_mut().enumerate() {
            *r = pts.point(k).iter().zip(z).map(|(p, z)| p.re * z.re + p.im * z.im).sum();
        }
        let mut acc = 0.0;
        for i in 0..n {
            let row = &dist[i * n..(i + 1) * n];
            for j in 0..n {
                expo[j] = -row[j] - 2.0 * (proj[i] - proj[j]);
            }
            acc += log2_n - log_sum_exp(&expo) / LN_2;
        }
        per_sample.push(acc / n as f64);
    }

    let (mean, std_error) = mean_and_std_error(&per_sample);
    if !mean.is_finite() {
        return Err(Error::Numeric("mutual information estimate is not finite".into()));
    }
    Ok(MiEstimate {
        value: mean.max(0.0),
        std_error,
        n_samp: noise.len(),
    })
}

/// Sample mean and standard error of the mean (zero for a single sample).
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Instantaneous secrecy rate for one channel realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyEstimate {
    /// `max(I_B − I_E, 0)`.
    pub rate: f64,
    pub bob: MiEstimate,
    pub eve: MiEstimate,
}

impl SecrecyEstimate {
    /// Standard error of `I_B − I_E` (independent estimates).
    pub fn std_error(&self) -> f64 {
        self.bob.std_error.hypot(self.eve.std_error)
    }
}

/// `[I_B − I_E]⁺`, drawing Bob's noise then Eve's from `rng`.
pub fn instantaneous_secrecy_rate<R: Rng + ?Sized>(
    ch: &ChannelPair,
    t: &AnProjector,
    beta: f64,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    n_samp: usize,
    rng: &mut R,
) -> Result<SecrecyEstimate> {
    if n_samp == 0 {
        return Err(Error::Config("n_samp must be at least 1".into()));
    }
    let noise_b = NoiseSamples::draw(rng, cfg.n_r, n_samp);
    let noise_e = NoiseSamples::draw(rng, cfg.n_e, n_samp);
    secrecy_rate_with_noise(ch, t, beta, cfg, alphabet, &noise_b, &noise_e)
}

pub fn secrecy_rate_with_noise(
    ch: &ChannelPair,
    t: &AnProjector,
    beta: f64,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    noise_b: &NoiseSamples,
    noise_e: &NoiseSamples,
) -> Result<SecrecyEstimate> {
    let bob = mutual_information_with_noise(&ch.h_b, t, beta, cfg, alphabet, Side::Bob, noise_b)?;
    let eve = mutual_information_with_noise(&ch.h_e, t, beta, cfg, alphabet, Side::Eve, noise_e)?;
    Ok(SecrecyEstimate {
        rate: (bob.value - eve.value).max(0.0),
        bob,
        eve,
    })
}

/// `log2 Σ_i Σ_j exp(−(βP/4) d_ijᴴ Hᴴ W⁻¹ H d_ij)` for one receiver.
pub fn pairwise_log2_sum(
    h: &CMatrix,
    t: &AnProjector,
    beta: f64,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    side: Side,
) -> Result<f64> {
    let pts = WhitenedPoints::new(h, t, beta, cfg, alphabet, side)?;
    let expo: Vec<f64> = pts.pairwise_sq_distances().into_iter().map(|d| -0.25 * d).collect();
    Ok(log_sum_exp(&expo) / LN_2)
}

/// Bob's log-sum-exp term `κ̃_B(β)`.
pub fn kappa_tilde_b(
    beta: f64,
    ch: &ChannelPair,
    t: &AnProjector,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
) -> Result<f64> {
    pairwise_log2_sum(&ch.h_b, t, beta, cfg, alphabet, Side::Bob)
}

/// `2 log2(n_t m)`.
pub fn zeta(alphabet: &TransmitAlphabet) -> f64 {
    log2_count(alphabet.len() * alphabet.len())
}

/// Closed-form cut-off rate of one receiver, in bits.
pub fn cutoff_rate(
    h: &CMatrix,
    t: &AnProjector,
    beta: f64,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
    side: Side,
) -> Result<f64> {
    Ok(zeta(alphabet) - pairwise_log2_sum(h, t, beta, cfg, alphabet, side)?)
}

/// Cut-off rates of both receivers and their (unclamped) difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPair {
    pub i0_b: f64,
    pub i0_e: f64,
    pub r_s_approx: f64,
}

pub fn approx_secrecy_rate(
    ch: &ChannelPair,
    t: &AnProjector,
    beta: f64,
    cfg: &SystemConfig,
    alphabet: &TransmitAlphabet,
) -> Result<CutoffPair> {
    let i0_b = cutoff_rate(&ch.h_b, t, beta, cfg, alphabet, Side::Bob)?;
    let i0_e = cutoff_rate(&ch.h_e, t, beta, cfg, alphabet, Side::Eve)?;
    Ok(CutoffPair {
        i0_b,
        i0_e,
        r_s_approx: i0_b - i0_e,
    })
}

/// Eavesdropper distances `Q_mk = d_mkᴴ H_Eᴴ C_E⁻¹ H_E d_mk`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSet {
    pub n: usize,
    /// Row-major `n × n`.
    pub q: Vec<f64>,
    /// `C_E` was too ill-conditioned and was pseudo-inverted.
    pub pseudo_inverse: bool,
}

impl QSet {
    pub fn build(h_e: &CMatrix, t: &AnProjector, alphabet: &TransmitAlphabet) -> Result<Self> {
        let c_e = t.leakage_covariance(h_e);
        let (c_inv_sqrt, pseudo_inverse) = pinv_sqrt(&c_e, MAX_CONDITION);
        let g = c_inv_sqrt * h_e;
        let pts = alphabet.image_under(&g, 1.0);
        let dim = h_e.nrows();
        let n = alphabet.len();
        let mut q = Vec::with_capacity(n * n);
        for m in 0..n {
            for k in 0..n {
                let d: f64 = (0..dim).map(|r| (pts[m * dim + r] - pts[k * dim + r]).norm_sqr()).sum();
                q.push(d);
            }
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("Q_mk has non-finite entries".into()));
        }
        Ok(Self { n, q, pseudo_inverse })
    }

    pub fn from_values(n: usize, q: Vec<f64>) -> Result<Self> {
        if q.len() != n * n {
            return Err(Error::Config(format!("expected {} entries, got {}", n * n, q.len())));
        }
        Ok(Self {
            n,
            q,
            pseudo_inverse: false,
        })
    }

    fn exponents(&self, beta: f64) -> Result<Vec<f64>> {
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::Domain(format!("κ̃_E is defined on [0, 1), got β = {beta}")));
        }
        let c = beta / (4.0 * (1.0 - beta));
        Ok(self.q.iter().map(|q| -c * q).collect())
    }
}

/// High-SNR eavesdropper term `log2 Σ exp(−β Q_mk / (4(1−β)))`.
pub fn kappa_tilde_e(beta: f64, qset: &QSet) -> Result<f64> {
    Ok(log_sum_exp(&qset.exponents(beta)?) / LN_2)
}

/// Exact derivative of [`kappa_tilde_e`] with respect to β.
pub fn kappa_tilde_e_prime(beta: f64, qset: &QSet) -> Result<f64> {
    let expo = qset.exponents(beta)?;
    let lse = log_sum_exp(&expo);
    let scale = 4.0 * (1.0 - beta) * (1.0 - beta);
    let d: f64 = expo
        .iter()
        .zip(&qset.q)
        .map(|(e, q)| (e - lse).exp() * (-q / scale))
        .sum();
    Ok(d / LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{Constellation, ModulationScheme, ProjectorMode};
    use crate::rng;

    fn setup(seed: u64, snr_db: f64) -> (SystemConfig, TransmitAlphabet, ChannelPair, AnProjector) {
        let cfg = SystemConfig::default().with_snr_db(snr_db);
        let c = Constellation::new(ModulationScheme::Psk, 4).unwrap();
        let a = TransmitAlphabet::new(&cfg, &c).unwrap();
        let ch = ChannelPair::generate(&mut rng::stream(seed), &cfg);
        let t = AnProjector::build(&ch.h_b, ProjectorMode::NullSpace).unwrap();
        (cfg, a, ch, t)
    }

    #[test]
    fn mi_zero_at_zero_power() {
        let (cfg, a, ch, t) = setup(1, 10.0);
        let mi = mutual_information_mc(&ch.h_b, &t, 0.0, &cfg, &a, Side::Bob, 50, &mut rng::stream(2)).unwrap();
        assert_eq!(mi.value, 0.0);
        assert_eq!(mi.std_error, 0.0);
        assert_eq!(mi.n_samp, 50);
    }

    #[test]
    fn mi_saturates_at_high_snr() {
        let (mut cfg, a, ch, t) = setup(3, 0.0);
        cfg.sigma2_b = 1e-6;
        let mi = mutual_information_mc(&ch.h_b, &t, 0.5, &cfg, &a, Side::Bob, 200, &mut rng::stream(4)).unwrap();
        assert!((mi.value - 4.0).abs() <= 0.05, "{mi:?}");
    }

    #[test]
    fn mi_rejects_bad_inputs() {
        let (cfg, a, ch, t) = setup(1, 0.0);
        assert!(mutual_information_mc(&ch.h_b, &t, 0.5, &cfg, &a, Side::Bob, 0, &mut rng::stream(1)).is_err());
        assert!(mutual_information_mc(&ch.h_b, &t, -0.1, &cfg, &a, Side::Bob, 5, &mut rng::stream(1)).is_err());
        let wrong_dim = NoiseSamples::draw(&mut rng::stream(1), 3, 5);
        assert!(mutual_information_with_noise(&ch.h_b, &t, 0.5, &cfg, &a, Side::Bob, &wrong_dim).is_err());
    }

    #[test]
    fn secrecy_rate_edge_cases() {
        let (cfg, a, ch, t) = setup(5, 10.0);
        let sr = instantaneous_secrecy_rate(&ch, &t, 0.0, &cfg, &a, 100, &mut rng::stream(6)).unwrap();
        assert_eq!(sr.rate, 0.0);

        let low = cfg.with_snr_db(-30.0);
        let sr = instantaneous_secrecy_rate(&ch, &t, 0.5, &low, &a, 500, &mut rng::stream(7)).unwrap();
        assert!(sr.rate <= 0.05, "{sr:?}");
    }

    #[test]
    fn symmetric_channels_give_zero_secrecy() {
        let (cfg, a, ch, _) = setup(8, 5.0);
        let same = ChannelPair {
            h_b: ch.h_b.clone(),
            h_e: ch.h_b.clone(),
        };
        let iso = AnProjector::isotropic(cfg.n_t);
        for beta in [0.2, 0.6] {
            let pair = approx_secrecy_rate(&same, &iso, beta, &cfg, &a).unwrap();
            assert!(pair.r_s_approx.abs() <= 1e-10);
            // Same noise on both sides makes the two estimates identical.
            let noise = NoiseSamples::draw(&mut rng::stream(9), cfg.n_r, 300);
            let sr = secrecy_rate_with_noise(&same, &iso, beta, &cfg, &a, &noise, &noise).unwrap();
            assert_eq!(sr.rate, 0.0);
            let sr = instantaneous_secrecy_rate(&same, &iso, beta, &cfg, &a, 500, &mut rng::stream(10)).unwrap();
            assert!(sr.rate <= 3.0 * sr.std_error() + 1e-12, "{sr:?}");
        }
    }

    #[test]
    fn cutoff_edges() {
        let (cfg, a, ch, t) = setup(11, 10.0);
        assert_eq!(cutoff_rate(&ch.h_b, &t, 0.0, &cfg, &a, Side::Bob).unwrap(), 0.0);
        let pair = approx_secrecy_rate(&ch, &t, 0.0, &cfg, &a).unwrap();
        assert_eq!((pair.i0_b, pair.i0_e, pair.r_s_approx), (0.0, 0.0, 0.0));

        let noisy = SystemConfig {
            sigma2_b: 1e12,
            sigma2_e: 1e12,
            ..cfg.clone()
        };
        assert!(cutoff_rate(&ch.h_b, &t, 0.7, &noisy, &a, Side::Bob).unwrap().abs() <= 1e-6);

        for beta in [0.1, 0.5, 0.9, 1.0] {
            for side in [Side::Bob, Side::Eve] {
                let i0 = cutoff_rate(ch.gain(side), &t, beta, &cfg, &a, side).unwrap();
                assert!((0.0..=4.0 + 1e-9).contains(&i0), "{i0}");
            }
            let kb = kappa_tilde_b(beta, &ch, &t, &cfg, &a).unwrap();
            let i0 = cutoff_rate(&ch.h_b, &t, beta, &cfg, &a, Side::Bob).unwrap();
            assert!((i0 - (zeta(&a) - kb)).abs() <= 1e-12);
        }
        assert_eq!(kappa_tilde_b(0.0, &ch, &t, &cfg, &a).unwrap(), 8.0);
    }

    #[test]
    fn cutoff_matches_naive_double_loop() {
        let (cfg, a, ch, _) = setup(12, 5.0);
        let iso = AnProjector::isotropic(cfg.n_t);
        let beta = 0.35;
        for (side, h) in [(Side::Bob, &ch.h_b), (Side::Eve, &ch.h_e)] {
            let sigma2 = cfg.noise_variance(side);
            let nr = h.nrows();
            let w = h * &iso.t * iso.t.adjoint() * h.adjoint() * C64::new((1.0 - beta) * cfg.p, 0.0)
                + CMatrix::identity(nr, nr) * C64::new(sigma2, 0.0);
            let w_inv = w.try_inverse().unwrap();
            let xs = a.vectors();
            let mut sum = 0.0;
            for xi in &xs {
                for xj in &xs {
                    let hd = h * (xi - xj);
                    let quad = (hd.adjoint() * &w_inv * &hd)[(0, 0)].re;
                    sum += (-beta * cfg.p / 4.0 * quad).exp();
                }
            }
            let naive = 2.0 * 16f64.log2() - sum.log2();
            let got = cutoff_rate(h, &iso, beta, &cfg, &a, side).unwrap();
            assert!((got - naive).abs() <= 1e-10, "{got} vs {naive}");
        }
    }

    #[test]
    fn kappa_e_edges_and_derivative() {
        let (_, a, ch, t) = setup(13, 10.0);
        let q = QSet::build(&ch.h_e, &t, &a).unwrap();
        assert!(!q.pseudo_inverse);
        assert_eq!(q.q.len(), 256);
        for m in 0..16 {
            assert_eq!(q.q[m * 16 + m], 0.0);
        }
        assert!(q.q.iter().all(|&v| v >= 0.0));
        assert_eq!(kappa_tilde_e(0.0, &q).unwrap(), 8.0);
        assert!((kappa_tilde_e(1.0 - 1e-9, &q).unwrap() - 4.0).abs() < 1e-6);
        assert!(matches!(kappa_tilde_e(1.0, &q), Err(Error::Domain(_))));
        assert!(matches!(kappa_tilde_e_prime(1.0, &q), Err(Error::Domain(_))));

        let zero = QSet::from_values(16, vec![0.0; 256]).unwrap();
        assert_eq!(kappa_tilde_e_prime(0.3, &zero).unwrap(), 0.0);

        let h = 1e-6;
        let fd = (kappa_tilde_e(0.5 + h, &q).unwrap() - kappa_tilde_e(0.5 - h, &q).unwrap()) / (2.0 * h);
        let d = kappa_tilde_e_prime(0.5, &q).unwrap();
        assert!(((d - fd) / fd).abs() <= 1e-4, "{d} vs {fd}");
        for beta in [0.0, 0.2, 0.7, 0.95] {
            assert!(kappa_tilde_e_prime(beta, &q).unwrap() <= 0.0);
        }
    }

    #[test]
    fn rank_deficient_c_e_is_flagged() {
        // With n_e = 3 and a rank-2 AN projector C_E is singular.
        let cfg = SystemConfig {
            n_e: 3,
            ..SystemConfig::default()
        };
        let c = Constellation::new(ModulationScheme::Psk, 4).unwrap();
        let a = TransmitAlphabet::new(&cfg, &c).unwrap();
        let ch = ChannelPair::generate(&mut rng::stream(14), &cfg);
        let t = AnProjector::build(&ch.h_b, ProjectorMode::NullSpace).unwrap();
        let q = QSet::build(&ch.h_e, &t, &a).unwrap();
        assert!(q.pseudo_inverse);
        assert!(q.q.iter().all(|v| v.is_finite() && *v >= -1e-9));
    }

    #[test]
    fn kappa_e_is_convex_in_u() {
        let (_, a, ch, t) = setup(15, 10.0);
        let q = QSet::build(&ch.h_e, &t, &a).unwrap();
        let psi = |u: f64| kappa_tilde_e(u / (1.0 + u), &q).unwrap();
        let h = 1e-2;
        for k in 1..200 {
            let u = k as f64 * 0.05;
            let second = psi(u + h) + psi(u - h) - 2.0 * psi(u);
            assert!(second >= -1e-9, "u={u}: {second}");
        }
    }

    #[test]
    fn kappa_b_is_convex_with_null_space_an() {
        let (cfg, a, ch, t) = setup(16, 5.0);
        let kb = |b: f64| kappa_tilde_b(b, &ch, &t, &cfg, &a).unwrap();
        let h = 1e-3;
        for k in 1..100 {
            let b = k as f64 / 100.0;
            let second = kb(b + h) + kb(b - h) - 2.0 * kb(b);
            assert!(second >= -1e-9, "beta={b}: {second}");
        }
    }

    #[test]
    fn rates_are_invariant_to_constellation_rotation() {
        let cfg = SystemConfig::default().with_snr_db(5.0);
        let c = Constellation::new(ModulationScheme::Psk, 4).unwrap();
        let a = TransmitAlphabet::new(&cfg, &c).unwrap();
        let ar = TransmitAlphabet::new(&cfg, &c.rotated(0.37)).unwrap();
        let ch = ChannelPair::generate(&mut rng::stream(17), &cfg);
        let t = AnProjector::build(&ch.h_b, ProjectorMode::NullSpace).unwrap();
        for side in [Side::Bob, Side::Eve] {
            let r0 = cutoff_rate(ch.gain(side), &t, 0.6, &cfg, &a, side).unwrap();
            let r1 = cutoff_rate(ch.gain(side), &t, 0.6, &cfg, &ar, side).unwrap();
            assert!((r0 - r1).abs() <= 1e-12);
            let m0 = mutual_information_mc(ch.gain(side), &t, 0.6, &cfg, &a, side, 2000, &mut rng::stream(1)).unwrap();
            let m1 = mutual_information_mc(ch.gain(side), &t, 0.6, &cfg, &ar, side, 2000, &mut rng::stream(2)).unwrap();
            let tol = 3.0 * m0.std_error.hypot(m1.std_error);
            assert!(
                (m0.value - m1.value).abs() <= tol,
                "{} vs {} (tol {tol})",
                m0.value,
                m1.value
            );
        }
    }
}
