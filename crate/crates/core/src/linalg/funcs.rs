//! Spectral matrix functions and norms.

use super::eig::{herm_eig, herm_eigvals, HermitianEig};
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigendecomposition of a PSD matrix, rejecting eigenvalues below `-tol * lambda_max`.
pub(crate) fn psd_eig<T: Real>(m: &CMatrix<T>) -> Result<HermitianEig<T>> {
    let eig = herm_eig(m)?;
    let scale = eig.max().abs().max(eig.min().abs());
    if eig.min() < -T::check_tol() * scale.max(T::min_positive_value()) && eig.min() < T::zero() {
        return Err(Error::NotPsd(eig.min().as_f64()));
    }
    Ok(eig)
}

/// `m^p` for PSD `m`, acting only on the support.
///
/// Eigenvalues at or below `support_cutoff * lambda_max` are treated as exact
/// zeros, so negative `p` gives the Moore-Penrose pseudo-inverse power.
pub fn mat_power<T: Real>(m: &CMatrix<T>, p: T, support_cutoff: T) -> Result<CMatrix<T>> {
    let eig = psd_eig(m)?;
    Ok(power_from_eig(&eig, p, support_cutoff))
}

pub(crate) fn power_from_eig<T: Real>(eig: &HermitianEig<T>, p: T, support_cutoff: T) -> CMatrix<T> {
    let lmax = eig.max();
    if lmax <= T::zero() {
        let n = eig.eigenvalues.len();
        return CMatrix::zeros(n, n);
    }
    let thresh = support_cutoff * lmax;
    eig.map_spectrum(|l| if l > thresh { l.powf(p) } else { T::zero() })
}

/// Projector onto the eigenspaces with eigenvalue above `cutoff * lambda_max`.
pub fn support_projector<T: Real>(m: &CMatrix<T>, cutoff: T) -> Result<CMatrix<T>> {
    let eig = psd_eig(m)?;
    Ok(power_from_eig(&eig, T::zero(), cutoff))
}

/// Sum of singular values; for Hermitian input the sum of `|eigenvalues|`.
pub fn trace_norm<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if m.is_square() && m.is_hermitian(T::check_tol()) {
        return Ok(herm_eigvals(m)?.into_iter().map(T::abs).sum());
    }
    let gram = &m.dagger() * m;
    Ok(herm_eigvals(&gram)?
        .into_iter()
        .map(|s| s.max(T::zero()).sqrt())
        .sum())
}

/// Largest singular value.
pub fn op_norm<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if m.is_square() && m.is_hermitian(T::check_tol()) {
        let vals = herm_eigvals(m)?;
        let lo = vals.first().copied().unwrap_or_else(T::zero);
        let hi = vals.last().copied().unwrap_or_else(T::zero);
        return Ok(lo.abs().max(hi.abs()));
    }
    let gram = &m.dagger() * m;
    let vals = herm_eigvals(&gram)?;
    Ok(vals.last().copied().unwrap_or_else(T::zero).max(T::zero()).sqrt())
}

/// Squared fidelity `F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2`.
pub fn fidelity<T: Real>(rho: &CMatrix<T>, sigma: &CMatrix<T>) -> Result<T> {
    if rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square() {
        return Err(Error::Dimension(format!(
            "fidelity of {}x{} and {}x{}",
            rho.rows(),
            rho.cols(),
            sigma.rows(),
            sigma.cols()
        )));
    }
    let sqrt_rho = mat_power(rho, T::lit(0.5), T::support_cutoff())?;
    let inner = &(&sqrt_rho * sigma) * &sqrt_rho;
    let root: T = herm_eigvals(&inner.hermitian_part())?
        .into_iter()
        .map(|l| l.max(T::zero()).sqrt())
        .sum();
    Ok(root * root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn identity_powers() {
        let i = CMatrix::<f64>::identity(3);
        assert!(mat_power(&i, 0.5, 1e-10).unwrap().max_abs_diff(&i) < 1e-14);
    }

    #[test]
    fn pseudo_inverse_on_support() {
        let m = CMatrix::from_real_diag(&[4.0, 0.0]);
        let inv = mat_power(&m, -1.0, 1e-10).unwrap();
        assert!(inv.max_abs_diff(&CMatrix::from_real_diag(&[0.25, 0.0])) < 1e-14);
    }

    #[test]
    fn negative_spectrum_rejected() {
        let m = CMatrix::from_real_diag(&[1.0, -0.1]);
        assert!(matches!(mat_power(&m, 0.5, 1e-10), Err(Error::NotPsd(_))));
    }

    #[test]
    fn support_of_diag() {
        let p = support_projector(&CMatrix::from_real_diag(&[1.0, 0.0]), 1e-10).unwrap();
        assert!(p.max_abs_diff(&CMatrix::from_real_diag(&[1.0, 0.0])) < 1e-14);
        let i = CMatrix::<f64>::identity(4);
        assert!(support_projector(&i, 1e-10).unwrap().max_abs_diff(&i) < 1e-14);
    }

    #[test]
    fn fidelity_extremes() {
        let z = CMatrix::<f64>::from_real_diag(&[1.0, 0.0]);
        let o = CMatrix::from_real_diag(&[0.0, 1.0]);
        assert!(fidelity(&z, &o).unwrap().abs() < 1e-14);
        assert!((fidelity(&z, &z).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norms_of_non_hermitian() {
        let mut m = CMatrix::<f64>::zeros(2, 2);
        m[(0, 1)] = Complex::new(3.0, 0.0);
        assert!((trace_norm(&m).unwrap() - 3.0).abs() < 1e-12);
        assert!((op_norm(&m).unwrap() - 3.0).abs() < 1e-12);
    }
}
