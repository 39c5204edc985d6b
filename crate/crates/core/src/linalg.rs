use nalgebra::{DVector, SymmetricEigen};

use crate::{CMatrix, Error, Result, C64};

pub(crate) fn ensure_finite(m: &CMatrix, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric(format!("{what} has non-finite entries")))
    }
}

/// Eigendecomposition of the Hermitian part of `m`.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    (eig.eigenvalues, eig.eigenvectors)
}

/// `U diag(g(λ)) Uᴴ`.
pub(crate) fn spectral_map(values: &DVector<f64>, vectors: &CMatrix, g: impl Fn(f64) -> f64) -> CMatrix {
    let mut scaled = vectors.clone();
    for (k, &lambda) in values.iter().enumerate() {
        let s = C64::new(g(lambda), 0.0);
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= s);
    }
    scaled * vectors.adjoint()
}

/// Inverse principal square root of a Hermitian matrix whose eigenvalues are
/// floored at `floor`.
pub(crate) fn inv_sqrt_floored(m: &CMatrix, floor: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    spectral_map(&values, &vectors, |l| 1.0 / l.max(floor).sqrt())
}

/// Pseudo-inverse square root of a PSD matrix.
///
/// Eigenvalues below `max_eigenvalue / max_condition` are treated as zero.
/// The flag reports whether any were dropped.
pub(crate) fn pinv_sqrt(m: &CMatrix, max_condition: f64) -> (CMatrix, bool) {
    let (values, vectors) = hermitian_eigen(m);
    let max = values.iter().copied().fold(0.0, f64::max);
    let cutoff = max / max_condition;
    let dropped = values.iter().any(|&l| l <= cutoff);
    let map = spectral_map(&values, &vectors, |l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    (map, dropped)
}

/// Orthonormal basis (as columns) of the null space of `h`.
pub(crate) fn null_space_basis(h: &CMatrix) -> CMatrix {
    let gram = h.adjoint() * h;
    let (values, vectors) = hermitian_eigen(&gram);
    let max = values.iter().copied().fold(0.0, f64::max);
    let tol = max * 1e-10 * h.ncols() as f64;
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] <= tol).collect();
    let mut basis = CMatrix::zeros(h.ncols(), keep.len());
    for (c, &k) in keep.iter().enumerate() {
        basis.set_column(c, &vectors.column(k));
    }
    basis
}
