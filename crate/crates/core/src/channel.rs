//! Signal model: constellations, the spatial-modulation alphabet, channel
//! draws, the AN shaping matrix and the AN-plus-noise whitener.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ensure_finite, hermitian_eigen, inv_sqrt_floored, null_space_basis};
use crate::{CMatrix, Error, Result, C64};

/// Relative floor applied to whitener eigenvalues, in units of the noise variance.
pub const WHITENER_EIGEN_FLOOR: f64 = 1e-12;

/// Receiver on one end of the wiretap link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Bob,
    Eve,
}

/// Antenna counts, constellation order, transmit power and noise variances.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub n_e: usize,
    /// Constellation size.
    pub m: usize,
    /// Total transmit power (linear).
    pub p: f64,
    pub sigma2_b: f64,
    pub sigma2_e: f64,
}

impl Default for SystemConfig {
    /// Four transmit antennas, two antennas at each receiver, QPSK, unit power
    /// and unit noise (0 dB).
    fn default() -> Self {
        Self {
            n_t: 4,
            n_r: 2,
            n_e: 2,
            m: 4,
            p: 1.0,
            sigma2_b: 1.0,
            sigma2_e: 1.0,
        }
    }
}

impl SystemConfig {
    pub fn new(n_t: usize, n_r: usize, n_e: usize, m: usize, p: f64, sigma2_b: f64, sigma2_e: f64) -> Result<Self> {
        let cfg = Self {
            n_t,
            n_r,
            n_e,
            m,
            p,
            sigma2_b,
            sigma2_e,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 || self.n_r == 0 || self.n_e == 0 || self.m == 0 {
            return Err(Error::Config(
                "antenna counts and constellation size must be at least 1".into(),
            ));
        }
        if !self.n_t.is_power_of_two() {
            return Err(Error::Config(format!("n_t = {} is not a power of two", self.n_t)));
        }
        if !self.m.is_power_of_two() {
            return Err(Error::Config(format!("m = {} is not a power of two", self.m)));
        }
        for (name, v) in [("p", self.p), ("sigma2_b", self.sigma2_b), ("sigma2_e", self.sigma2_e)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Same configuration with both noise variances set to `p / 10^(snr_db/10)`.
    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        let sigma2 = self.p / 10f64.powf(snr_db / 10.0);
        Self {
            sigma2_b: sigma2,
            sigma2_e: sigma2,
            ..self.clone()
        }
    }

    /// Number of transmit vectors, `n_t · m`.
    pub fn alphabet_size(&self) -> usize {
        self.n_t * self.m
    }

    /// Bits carried per channel use.
    pub fn bits_per_use(&self) -> f64 {
        (self.alphabet_size() as f64).log2()
    }

    pub fn noise_variance(&self, side: Side) -> f64 {
        match side {
            Side::Bob => self.sigma2_b,
            Side::Eve => self.sigma2_e,
        }
    }

    pub fn rx_antennas(&self, side: Side) -> usize {
        match side {
            Side::Bob => self.n_r,
            Side::Eve => self.n_e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulationScheme {
    Psk,
    Qam,
}

/// Unit-mean-energy symbol set.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub symbols: Vec<C64>,
}

fn gray_decode(mut g: usize) -> usize {
    let mut b = g;
    while g > 0 {
        g >>= 1;
        b ^= g;
    }
    b
}

impl Constellation {
    /// PSK points sit on the unit circle starting at angle `π/m` (0 for BPSK),
    /// so QPSK is `(±1 ± j)/√2`. Square QAM uses Gray-labelled I/Q levels.
    pub fn new(scheme: ModulationScheme, m: usize) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::Config(format!(
                "constellation size {m} must be a power of two ≥ 2"
            )));
        }
        let symbols = match scheme {
            ModulationScheme::Psk => {
                let offset = if m == 2 { 0.0 } else { PI / m as f64 };
                (0..m)
                    .map(|k| C64::from_polar(1.0, offset + 2.0 * PI * k as f64 / m as f64))
                    .collect()
            }
            ModulationScheme::Qam => {
                let bits = m.trailing_zeros();
                if !bits.is_multiple_of(2) {
                    return Err(Error::Config(format!("{m}-QAM is not a square constellation")));
                }
                let half = bits / 2;
                let levels = 1usize << half;
                let scale = (2.0 * (m as f64 - 1.0) / 3.0).sqrt().recip();
                let level = |g: usize| (2.0 * gray_decode(g) as f64 - (levels as f64 - 1.0)) * scale;
                (0..m)
                    .map(|k| C64::new(level(k >> half), level(k & (levels - 1))))
                    .collect()
            }
        };
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn mean_energy(&self) -> f64 {
        self.symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.symbols.len() as f64
    }

    /// Every symbol multiplied by `e^{jθ}`.
    pub fn rotated(&self, theta: f64) -> Self {
        let r = C64::from_polar(1.0, theta);
        Self {
            symbols: self.symbols.iter().map(|s| s * r).collect(),
        }
    }
}

/// One spatial-modulation transmit vector `e_antenna · symbol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmVector {
    pub antenna: usize,
    pub symbol: C64,
}

/// All `n_t · m` transmit vectors, antenna-major then symbol index.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmitAlphabet {
    pub n_t: usize,
    pub entries: Vec<SmVector>,
}

impl TransmitAlphabet {
    pub fn new(cfg: &SystemConfig, constellation: &Constellation) -> Result<Self> {
        if constellation.len() != cfg.m {
            return Err(Error::Config(format!(
                "constellation has {} symbols but configuration expects {}",
                constellation.len(),
                cfg.m
            )));
        }
        let entries = (0..cfg.n_t)
            .flat_map(|antenna| {
                constellation
                    .symbols
                    .iter()
                    .map(move |&symbol| SmVector { antenna, symbol })
            })
            .collect();
        Ok(Self { n_t: cfg.n_t, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vector(&self, k: usize) -> DVector<C64> {
        let mut v = DVector::zeros(self.n_t);
        let e = self.entries[k];
        v[e.antenna] = e.symbol;
        v
    }

    pub fn vectors(&self) -> Vec<DVector<C64>> {
        (0..self.len()).map(|k| self.vector(k)).collect()
    }

    /// All pairwise differences `x_i − x_j`, row-major in `(i, j)`.
    pub fn differences(&self) -> Vec<DVector<C64>> {
        let v = self.vectors();
        v.iter().flat_map(|a| v.iter().map(move |b| a - b)).collect()
    }

    pub fn mean_energy(&self) -> f64 {
        self.entries.iter().map(|e| e.symbol.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    /// `G · x_k` for every transmit vector, flattened as `len() × G.nrows()`.
    pub(crate) fn image_under(&self, g: &CMatrix, scale: f64) -> Vec<C64> {
        let rows = g.nrows();
        let mut out = Vec::with_capacity(self.len() * rows);
        for e in &self.entries {
            let s = e.symbol * scale;
            out.extend(g.column(e.antenna).iter().map(|z| z * s));
        }
        out
    }
}

/// Draws one `CN(0, 1)` sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Gain matrices toward Bob (`n_r × n_t`) and Eve (`n_e × n_t`).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    pub h_b: CMatrix,
    pub h_e: CMatrix,
}

impl ChannelPair {
    /// I.i.d. Rayleigh entries. Bob's matrix is drawn first, column-major.
    pub fn generate<R: Rng + ?Sized>(rng: &mut R, cfg: &SystemConfig) -> Self {
        let h_b = CMatrix::from_fn(cfg.n_r, cfg.n_t, |_, _| complex_gaussian(rng));
        let h_e = CMatrix::from_fn(cfg.n_e, cfg.n_t, |_, _| complex_gaussian(rng));
        Self { h_b, h_e }
    }

    pub fn gain(&self, side: Side) -> &CMatrix {
        match side {
            Side::Bob => &self.h_b,
            Side::Eve => &self.h_e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorMode {
    /// Scaled projector onto the null space of Bob's channel.
    NullSpace,
    /// `I / √n_t`; AN reaches Bob as well.
    Isotropic,
}

/// AN shaping matrix with `tr(T Tᴴ) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnProjector {
    pub t: CMatrix,
    pub mode: ProjectorMode,
}

impl AnProjector {
    /// Builds `T` for Bob's channel `h_b` (`n_r × n_t`).
    ///
    /// In null-space mode `T = V Vᴴ / √k` where the `k` columns of `V` span the
    /// null space of `h_b`; this needs `n_t > n_r`.
    pub fn build(h_b: &CMatrix, mode: ProjectorMode) -> Result<Self> {
        ensure_finite(h_b, "channel")?;
        let n_t = h_b.ncols();
        match mode {
            ProjectorMode::Isotropic => Ok(Self::isotropic(n_t)),
            ProjectorMode::NullSpace => {
                if n_t <= h_b.nrows() {
                    return Err(Error::Capability(format!(
                        "null-space AN needs more transmit antennas ({n_t}) than Bob receive antennas ({})",
                        h_b.nrows()
                    )));
                }
                let v = null_space_basis(h_b);
                if v.ncols() == 0 {
                    return Err(Error::Capability("Bob's channel has an empty null space".into()));
                }
                let scale = C64::new((v.ncols() as f64).sqrt().recip(), 0.0);
                Ok(Self {
                    t: &v * v.adjoint() * scale,
                    mode,
                })
            }
        }
    }

    pub fn isotropic(n_t: usize) -> Self {
        let scale = C64::new((n_t as f64).sqrt().recip(), 0.0);
        Self {
            t: CMatrix::identity(n_t, n_t) * scale,
            mode: ProjectorMode::Isotropic,
        }
    }

    /// `tr(T Tᴴ)`, i.e. `‖T‖_F²`.
    pub fn energy(&self) -> f64 {
        self.t.norm_squared()
    }

    /// AN covariance seen through `h`: `C = h T Tᴴ hᴴ`.
    pub fn leakage_covariance(&self, h: &CMatrix) -> CMatrix {
        let ht = h * &self.t;
        &ht * ht.adjoint()
    }
}

/// AN-plus-noise covariance `W = (1−β) P C + σ² I` and its inverse square root.
#[derive(Debug, Clone, PartialEq)]
pub struct Whitener {
    pub w: CMatrix,
    pub w_inv_sqrt: CMatrix,
    pub side: Side,
}

impl Whitener {
    pub fn build(h: &CMatrix, t: &AnProjector, beta: f64, cfg: &SystemConfig, side: Side) -> Result<Self> {
        check_beta(beta)?;
        ensure_finite(h, "channel")?;
        let sigma2 = cfg.noise_variance(side);
        let n = h.nrows();
        let c = t.leakage_covariance(h);
        let w = c * C64::new((1.0 - beta) * cfg.p, 0.0) + CMatrix::identity(n, n) * C64::new(sigma2, 0.0);
        ensure_finite(&w, "AN-plus-noise covariance")?;
        let w_inv_sqrt = inv_sqrt_floored(&w, WHITENER_EIGEN_FLOOR * sigma2);
        ensure_finite(&w_inv_sqrt, "whitening matrix")?;
        Ok(Self { w, w_inv_sqrt, side })
    }

    /// Eigenvalues of `W`, ascending order not guaranteed.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.w).0.iter().copied().collect()
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "power allocation factor {beta} is outside [0, 1]"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn bpsk_and_qpsk_points() {
        let bpsk = Constellation::new(ModulationScheme::Psk, 2).unwrap();
        assert!(close(bpsk.symbols[0], C64::new(1.0, 0.0)));
        assert!(close(bpsk.symbols[1], C64::new(-1.0, 0.0)));

        let qpsk = Constellation::new(ModulationScheme::Psk, 4).unwrap();
        let r = FRAC_1_SQRT_2;
        let want = [C64::new(r, r), C64::new(-r, r), C64::new(-r, -r), C64::new(r, -r)];
        for (s, w) in qpsk.symbols.iter().zip(want) {
            assert!(close(*s, w), "{s} vs {w}");
        }
    }

    #[test]
    fn qam_energy_and_shape() {
        let qam = Constellation::new(ModulationScheme::Qam, 16).unwrap();
        assert_eq!(qam.len(), 16);
        assert!((qam.mean_energy() - 1.0).abs() <= 1e-12);
        // Gray labelling: neighbouring labels in the I rail differ by one level step.
        let step = 2.0 / 10f64.sqrt();
        let i_levels: Vec<f64> = (0..4).map(|g| qam.symbols[g << 2].re).collect();
        let mut sorted = i_levels.clone();
        sorted.sort_by(f64::total_cmp);
        for w in sorted.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-12);
        }
        assert!(Constellation::new(ModulationScheme::Qam, 8).is_err());
        assert!(Constellation::new(ModulationScheme::Psk, 3).is_err());
    }

    #[test]
    fn psk_unit_energy() {
        for m in [2, 4, 8, 16] {
            let c = Constellation::new(ModulationScheme::Psk, m).unwrap();
            assert!((c.mean_energy() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::new(3, 2, 2, 4, 1.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(4, 2, 2, 6, 1.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(4, 2, 2, 4, 0.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(4, 0, 2, 4, 1.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(4, 2, 2, 4, 1.0, 1.0, f64::NAN).is_err());
        let cfg = SystemConfig::default().with_snr_db(10.0);
        assert!((cfg.sigma2_b - 0.1).abs() < 1e-15);
        assert_eq!(cfg.sigma2_b, cfg.sigma2_e);
    }

    #[test]
    fn alphabet_layout() {
        let cfg = SystemConfig {
            n_t: 2,
            m: 2,
            ..SystemConfig::default()
        };
        let bpsk = Constellation::new(ModulationScheme::Psk, 2).unwrap();
        let a = TransmitAlphabet::new(&cfg, &bpsk).unwrap();
        let v = a.vectors();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let want = [[one, zero], [-one, zero], [zero, one], [zero, -one]];
        for (got, w) in v.iter().zip(want) {
            assert!(close(got[0], w[0]) && close(got[1], w[1]));
        }

        let cfg = SystemConfig::default();
        let qpsk = Constellation::new(ModulationScheme::Psk, 4).unwrap();
        let a = TransmitAlphabet::new(&cfg, &qpsk).unwrap();
        assert_eq!(a.len(), 16);
        for v in a.vectors() {
            assert_eq!(v.iter().filter(|z| z.norm() > 0.0).count(), 1);
        }
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a.vector(i * 4 + j)[i], qpsk.symbols[j]);
            }
        }
        let d = a.differences();
        assert_eq!(d.len(), 256);
        assert_eq!(d.iter().filter(|v| v.norm() == 0.0).count(), 16);
        assert!((a.mean_energy() - 1.0).abs() < 1e-12);

        let bpsk_cfg = SystemConfig::default();
        assert!(TransmitAlphabet::new(&bpsk_cfg, &bpsk).is_err());
    }

    #[test]
    fn channel_is_deterministic_and_sized() {
        let cfg = SystemConfig {
            n_r: 3,
            n_e: 1,
            ..SystemConfig::default()
        };
        let a = ChannelPair::generate(&mut rng::stream(5), &cfg);
        let b = ChannelPair::generate(&mut rng::stream(5), &cfg);
        assert_eq!(a, b);
        assert_eq!(a.h_b.shape(), (3, 4));
        assert_eq!(a.h_e.shape(), (1, 4));
    }

    #[test]
    fn channel_entry_statistics() {
        let cfg = SystemConfig {
            n_t: 1,
            n_r: 1,
            n_e: 1,
            ..SystemConfig::default()
        };
        let mut s = rng::stream(11);
        let draws: Vec<C64> = (0..10_000)
            .map(|_| ChannelPair::generate(&mut s, &cfg).h_b[(0, 0)])
            .collect();
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<C64>() / n;
        let var = draws.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
        let var_re = draws.iter().map(|z| z.re * z.re).sum::<f64>() / n;
        assert!((var - 1.0).abs() <= 0.05, "variance {var}");
        assert!((var_re - 0.5).abs() <= 0.05, "real-part variance {var_re}");
        assert!(mean.norm() < 0.05);
    }

    #[test]
    fn projectors() {
        let cfg = SystemConfig::default();
        let ch = ChannelPair::generate(&mut rng::stream(1), &cfg);
        let t = AnProjector::build(&ch.h_b, ProjectorMode::NullSpace).unwrap();
        assert!((t.energy() - 1.0).abs() <= 1e-10);
        assert!((&ch.h_b * &t.t).norm() <= 1e-9);

        let iso = AnProjector::build(&ch.h_b, ProjectorMode::Isotropic).unwrap();
        assert!((iso.energy() - 1.0).abs() <= 1e-12);
        assert_eq!(iso.t[(0, 0)], C64::new(0.5, 0.0));
        assert_eq!(iso.t[(0, 1)], C64::new(0.0, 0.0));

        let square = SystemConfig { n_r: 4, ..cfg };
        let ch = ChannelPair::generate(&mut rng::stream(2), &square);
        assert!(matches!(
            AnProjector::build(&ch.h_b, ProjectorMode::NullSpace),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn whitener_special_cases() {
        let cfg = SystemConfig {
            sigma2_b: 0.3,
            sigma2_e: 0.7,
            ..SystemConfig::default()
        };
        let ch = ChannelPair::generate(&mut rng::stream(3), &cfg);
        let iso = AnProjector::isotropic(4);
        let w = Whitener::build(&ch.h_e, &iso, 1.0, &cfg, Side::Eve).unwrap();
        assert_eq!(w.w, CMatrix::identity(2, 2) * C64::new(0.7, 0.0));

        let ns = AnProjector::build(&ch.h_b, ProjectorMode::NullSpace).unwrap();
        for beta in [0.0, 0.2, 0.9] {
            let w = Whitener::build(&ch.h_b, &ns, beta, &cfg, Side::Bob).unwrap();
            assert!((&w.w - CMatrix::identity(2, 2) * C64::new(0.3, 0.0)).norm() < 1e-12);
        }
        assert!(Whitener::build(&ch.h_b, &ns, 1.5, &cfg, Side::Bob).is_err());

        let mut bad = ch.h_b.clone();
        bad[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            Whitener::build(&bad, &iso, 0.5, &cfg, Side::Bob),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn whitener_multiplies_back_to_identity() {
        let cfg = SystemConfig {
            n_t: 2,
            n_r: 2,
            n_e: 2,
            ..SystemConfig::default()
        };
        let ch = ChannelPair::generate(&mut rng::stream(4), &cfg);
        let iso = AnProjector::isotropic(2);
        let w = Whitener::build(&ch.h_b, &iso, 0.4, &cfg, Side::Bob).unwrap();
        let id = &w.w_inv_sqrt * &w.w * w.w_inv_sqrt.adjoint();
        assert!((id - CMatrix::identity(2, 2)).norm() <= 1e-8);
    }

    #[test]
    fn whitener_eigenvalues_bounded_by_noise() {
        let cfg = SystemConfig {
            sigma2_b: 0.4,
            sigma2_e: 0.25,
            ..SystemConfig::default()
        };
        for seed in 0..10 {
            let ch = ChannelPair::generate(&mut rng::stream(seed), &cfg);
            let t = AnProjector::build(&ch.h_b, ProjectorMode::NullSpace).unwrap();
            for side in [Side::Bob, Side::Eve] {
                for beta in [0.0, 0.3, 1.0] {
                    let w = Whitener::build(ch.gain(side), &t, beta, &cfg, side).unwrap();
                    let s2 = cfg.noise_variance(side);
                    assert!(w.eigenvalues().iter().all(|&e| e >= s2 * (1.0 - 1e-9)));
                }
            }
        }
    }
}
