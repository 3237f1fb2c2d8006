//! Dense Hermitian eigensolver.
//!
//! Householder reduction of the Hermitian input to a complex tridiagonal
//! matrix, a diagonal phase similarity that makes the off-diagonal real, and
//! implicit QL iterations with Wilkinson-style shifts on the real tridiagonal.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigendecomposition `A = V diag(lambda) V^dagger` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermitianEig<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: CMatrix<T>,
}

impl<T: Real> HermitianEig<T> {
    /// Rebuilds `V f(Lambda) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for (k, &w) in fl.iter().enumerate() {
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                if vik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn min(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }
}

fn check_hermitian<T: Real>(m: &CMatrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let defect = m.hermiticity_defect();
    if defect > T::check_tol() * T::one().max(m.frobenius_norm()) {
        return Err(Error::NotHermitian(defect.as_f64()));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn herm_eig<T: Real>(m: &CMatrix<T>) -> Result<HermitianEig<T>> {
    check_hermitian(m)?;
    let n = m.rows();
    let (q, mut d, mut e) = tridiagonalize(&m.hermitian_part(), true);
    let q = q.expect("requested accumulation");
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;
    // eigenvectors = (Q D) Z, with the phases already folded into q
    let mut v = CMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let qik = q[(i, k)];
            if qik.is_zero() {
                continue;
            }
            let zrow = &z[k * n..(k + 1) * n];
            for (j, &zkj) in zrow.iter().enumerate() {
                v[(i, j)] = v[(i, j)] + qik * zkj;
            }
        }
    }
    Ok(HermitianEig {
        eigenvalues: d,
        eigenvectors: v,
    })
}

/// Eigenvalues only, ascending.
pub fn herm_eigvals<T: Real>(m: &CMatrix<T>) -> Result<Vec<T>> {
    check_hermitian(m)?;
    let (_, mut d, mut e) = tridiagonalize(&m.hermitian_part(), false);
    tridiagonal_ql(&mut d, &mut e, None)?;
    Ok(d)
}

/// Reduces a Hermitian matrix to real symmetric tridiagonal form.
///
/// Returns the accumulated unitary (including the phase correction) when
/// requested, the diagonal, and the off-diagonal with `e[k]` coupling `k` and
/// `k + 1` (`e[n - 1] = 0`).
fn tridiagonalize<T: Real>(m: &CMatrix<T>, accumulate: bool) -> (Option<CMatrix<T>>, Vec<T>, Vec<T>) {
    let n = m.rows();
    let mut a = m.clone();
    let mut q = accumulate.then(|| CMatrix::identity(n));
    let two = T::lit(2.0);

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<Complex<T>> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        // work with x / |x| so tiny columns neither underflow nor overflow tau
        let xmax = x.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
        if xmax < T::min_positive_value() || x[1..].iter().all(|z| z.is_zero()) {
            continue;
        }
        let mut v: Vec<Complex<T>> = x.iter().map(|z| z / xmax).collect();
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let xnorm = vn * xmax;
        let x0 = v[0].norm();
        let phase = if x0 > T::zero() { v[0] / x0 } else { Complex::new(T::one(), T::zero()) };
        let alpha = -phase * xnorm;
        v[0] = v[0] + phase * vn;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).sum::<T>();
        let tau = two / vnorm2;

        // p = tau * A22 v
        let mut p = vec![Complex::zero(); len];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a.row(k + 1 + i)[k + 1..];
            let s = row.iter().zip(&v).fold(Complex::zero(), |acc, (aij, vj)| acc + aij * vj);
            *pi = s * tau;
        }
        let kappa = v
            .iter()
            .zip(&p)
            .fold(Complex::zero(), |acc, (vi, pi)| acc + vi.conj() * pi)
            * (tau / two);
        let w: Vec<Complex<T>> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kappa).collect();
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                a[(k + 1 + i, k + 1 + j)] = a[(k + 1 + i, k + 1 + j)] - upd;
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in 1..len {
            a[(k + 1 + i, k)] = Complex::zero();
            a[(k, k + 1 + i)] = Complex::zero();
        }

        if let Some(q) = q.as_mut() {
            // Q <- Q (I - tau v v^dagger) on columns k+1..n
            for r in 0..n {
                let qv = (0..len).fold(Complex::zero(), |acc, j| acc + q[(r, k + 1 + j)] * v[j]) * tau;
                for j in 0..len {
                    q[(r, k + 1 + j)] = q[(r, k + 1 + j)] - qv * v[j].conj();
                }
            }
        }
    }

    let d: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![T::zero(); n];
    let mut phase = Complex::new(T::one(), T::zero());
    let mut phases = vec![phase; n];
    for k in 0..n.saturating_sub(1) {
        let s = a[(k + 1, k)];
        let r = s.norm();
        e[k] = r;
        if r > T::zero() {
            phase = phase * (s / r);
        }
        phases[k + 1] = phase;
    }
    if let Some(q) = q.as_mut() {
        for r in 0..n {
            for (c, ph) in phases.iter().enumerate() {
                q[(r, c)] = q[(r, c)] * ph;
            }
        }
    }
    (q, d, e)
}

/// Implicit QL on a real symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[k]` the coupling between `k` and `k + 1`.
/// When `z` (row-major `n x n`, initialized by the caller) is given, the
/// rotations are accumulated into its columns. On return `d` is sorted
/// ascending and the columns of `z` are permuted to match.
pub(crate) fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T], mut z: Option<&mut [T]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let mut f = T::zero();
    // global scale for the deflation test; a running maximum stalls on
    // matrices whose leading rows vanish
    let tst1 = d
        .iter()
        .zip(e.iter())
        .fold(T::zero(), |acc, (a, b)| acc.max(a.abs() + b.abs()));

    for l in 0..n {
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence(format!("QL stalled at index {l}")));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk = &mut z[k * n..(k + 1) * n];
                            let hh = zk[i + 1];
                            zk[i + 1] = s * zk[i] + c * hh;
                            zk[i] = c * zk[i] - s * hh;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }

    // selection sort keeps eigenvector columns aligned
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d.swap(i, k);
            if let Some(z) = z.as_deref_mut() {
                for r in 0..n {
                    z.swap(r * n + i, r * n + k);
                }
            }
        }
    }
    Ok(())
}

/// Eigendecomposition of a real symmetric matrix given row-major.
///
/// Used by the SDP layer, which works on real embeddings.
pub(crate) fn sym_eig_real<T: Real>(a: &[T], n: usize, vectors: bool) -> Result<(Vec<T>, Option<Vec<T>>)> {
    let m = CMatrix::from_fn(n, n, |i, j| Complex::new(a[i * n + j], T::zero()));
    if vectors {
        let eig = herm_eig(&m)?;
        let v: Vec<T> = eig.eigenvectors.as_slice().iter().map(|z| z.re).collect();
        Ok((eig.eigenvalues, Some(v)))
    } else {
        Ok((herm_eigvals(&m)?, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &CMatrix<f64>, eig: &HermitianEig<f64>) -> f64 {
        let rec = eig.map_spectrum(|l| l);
        (&rec - m).frobenius_norm()
    }

    #[test]
    fn identity_spectrum() {
        let eig = herm_eig(&CMatrix::<f64>::identity(3)).unwrap();
        for l in eig.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let m = CMatrix::from_real_diag(&[3.0, 1.0, 2.0]);
        let eig = herm_eig(&m).unwrap();
        for (l, want) in eig.eigenvalues.iter().zip([1.0f64, 2.0, 3.0]) {
            assert!((l - want).abs() < 1e-14);
        }
        assert!(residual(&m, &eig) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::<f64>::identity(2);
        m[(0, 1)] = Complex::new(1.0, 0.0);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn complex_two_by_two() {
        // sigma_y has eigenvalues -1, 1
        let mut m = CMatrix::<f64>::zeros(2, 2);
        m[(0, 1)] = Complex::new(0.0, -1.0);
        m[(1, 0)] = Complex::new(0.0, 1.0);
        let eig = herm_eig(&m).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(residual(&m, &eig) < 1e-13);
    }

    #[test]
    fn single_precision_small() {
        let m = CMatrix::<f32>::from_real_diag(&[2.0, -1.0]);
        let vals = herm_eigvals(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-6 && (vals[1] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn real_symmetric_helper() {
        let a = [2.0f64, 1.0, 1.0, 2.0];
        let (vals, vecs) = sym_eig_real(&a, 2, true).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        let v = vecs.unwrap();
        assert!((v[0].abs() - v[2].abs()).abs() < 1e-12);
    }
}
