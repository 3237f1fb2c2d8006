//! Private states `U^tw (omega_K (x) sigma) U^tw^dagger` and their privacy tests.

use num_complex::Complex;
use num_traits::Zero;

use super::Density;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;

/// Private state on `A_k (K), B_k (K), A_s, B_s`.
#[derive(Clone, Debug)]
pub struct PrivateState<T> {
    state: Density<T>,
    key_dim: usize,
    twisting: Vec<Vec<CMatrix<T>>>,
    shield: Density<T>,
}

/// Two-outcome test `{Pi, 1 - Pi}` with `Pi = U^tw (omega_K (x) 1) U^tw^dagger`.
#[derive(Clone, Debug)]
pub struct PrivacyTest<T> {
    pub projector: CMatrix<T>,
    pub key_dim: usize,
}

/// Conjugates a key-block operator `sum |ij><kl| (x) B_{ij,kl}` by the
/// twisting unitary, with `B_{ij,kl} = w_{ij,kl} * inner` for the key
/// weights of `omega_K`.
fn twist<T: Real>(twisting: &[Vec<CMatrix<T>>], inner: &CMatrix<T>, k: usize) -> CMatrix<T> {
    let n = inner.rows();
    let w = T::one() / T::lit(k as f64);
    let mut out = CMatrix::zeros(k * k * n, k * k * n);
    // omega_K only has weight on the (ii, jj) key blocks
    for i in 0..k {
        for j in 0..k {
            let blk = &(&twisting[i][i] * inner) * &twisting[j][j].dagger();
            let (r0, c0) = ((i * k + i) * n, (j * k + j) * n);
            for a in 0..n {
                for b in 0..n {
                    out[(r0 + a, c0 + b)] = blk[(a, b)] * w;
                }
            }
        }
    }
    out
}

/// Builds the private state of a `K x K` array of twisting unitaries on the shield.
pub fn private_state<T: Real>(
    twisting: Vec<Vec<CMatrix<T>>>,
    shield: Density<T>,
    k: usize,
) -> Result<PrivateState<T>> {
    let sd = shield.dims();
    if sd.len() != 2 || sd[0] != sd[1] {
        return Err(Error::Dimension(format!(
            "shield must be a pair of equal systems, got dims {sd:?}"
        )));
    }
    if k == 0 || twisting.len() != k || twisting.iter().any(|row| row.len() != k) {
        return Err(Error::Dimension(format!("twisting must be a {k}x{k} array")));
    }
    let n = shield.dim();
    let tol = T::check_tol();
    for row in &twisting {
        for u in row {
            if u.rows() != n || u.cols() != n {
                return Err(Error::Dimension(format!(
                    "twisting unitary is {}x{}, shield dimension {n}",
                    u.rows(),
                    u.cols()
                )));
            }
            let defect = (&u.dagger() * u).max_abs_diff(&CMatrix::identity(n));
            if defect > tol {
                return Err(Error::NotUnitary(defect.as_f64()));
            }
        }
    }
    let mat = twist(&twisting, shield.matrix(), k);
    let state = Density::new_unchecked(mat.hermitian_part(), vec![k, k, sd[0], sd[1]])
        .with_labels(&["A_k", "B_k", "A_s", "B_s"]);
    Ok(PrivateState {
        state,
        key_dim: k,
        twisting,
        shield,
    })
}

impl<T: Real> PrivateState<T> {
    pub fn state(&self) -> &Density<T> {
        &self.state
    }

    pub fn key_dim(&self) -> usize {
        self.key_dim
    }

    pub fn twisting(&self) -> &[Vec<CMatrix<T>>] {
        &self.twisting
    }

    pub fn shield(&self) -> &Density<T> {
        &self.shield
    }

    /// Full twisting unitary `sum_ij |i><i| (x) |j><j| (x) U^{ij}`.
    pub fn twisting_unitary(&self) -> CMatrix<T> {
        let k = self.key_dim;
        let n = self.shield.dim();
        let mut u = CMatrix::zeros(k * k * n, k * k * n);
        for i in 0..k {
            for j in 0..k {
                let off = (i * k + j) * n;
                let blk = &self.twisting[i][j];
                for a in 0..n {
                    for b in 0..n {
                        u[(off + a, off + b)] = blk[(a, b)];
                    }
                }
            }
        }
        u
    }

    /// `U^tw^dagger gamma U^tw`, which should equal `omega_K (x) sigma`.
    pub fn untwisted(&self) -> Density<T> {
        let u = self.twisting_unitary();
        let m = &(&u.dagger() * self.state.matrix()) * &u;
        Density::new_unchecked(m, self.state.dims().to_vec())
    }
}

pub fn privacy_test<T: Real>(gamma: &PrivateState<T>) -> PrivacyTest<T> {
    let n = gamma.shield.dim();
    let projector = twist(&gamma.twisting, &CMatrix::identity(n), gamma.key_dim).hermitian_part();
    PrivacyTest {
        projector,
        key_dim: gamma.key_dim,
    }
}

/// `tr(Pi rho)`.
pub fn test_probability<T: Real>(t: &PrivacyTest<T>, rho: &Density<T>) -> Result<T> {
    let p = &t.projector;
    if rho.dim() != p.rows() {
        return Err(Error::Dimension(format!(
            "state of dimension {} against a test of dimension {}",
            rho.dim(),
            p.rows()
        )));
    }
    let r = rho.matrix();
    let n = p.rows();
    let mut acc = Complex::zero();
    for i in 0..n {
        for j in 0..n {
            acc = acc + p[(i, j)] * r[(j, i)];
        }
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, partial_trace};
    use crate::states::{gamma2, max_entangled, random_state};

    fn identities(k: usize, n: usize) -> Vec<Vec<CMatrix<f64>>> {
        vec![vec![CMatrix::identity(n); k]; k]
    }

    #[test]
    fn trivial_twisting_gives_product() {
        let shield = random_state::<f64>(&[2, 2], 3);
        let g = private_state(identities(2, 4), shield.clone(), 2).unwrap();
        let want = kron(max_entangled::<f64>(2).matrix(), shield.matrix());
        assert!(g.state().matrix().max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn non_unitary_twisting_rejected() {
        let shield = random_state::<f64>(&[2, 2], 3);
        let mut tw = identities(2, 4);
        tw[1][1] = CMatrix::identity(4).scale(2.0);
        assert!(matches!(private_state(tw, shield, 2), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn gamma2_passes_own_test_and_untwists() {
        let g = gamma2::<f64>(4);
        let t = privacy_test(&g);
        assert!((test_probability(&t, g.state()).unwrap() - 1.0).abs() < 1e-10);
        let pi2 = &t.projector * &t.projector;
        assert!(pi2.max_abs_diff(&t.projector) < 1e-12);
        let key = partial_trace(g.untwisted().matrix(), g.state().dims(), &[0, 1]).unwrap();
        assert!(key.max_abs_diff(max_entangled::<f64>(2).matrix()) < 1e-10);
    }

    #[test]
    fn dimension_mismatch() {
        let g = gamma2::<f64>(2);
        let t = privacy_test(&g);
        assert!(test_probability(&t, &random_state::<f64>(&[3], 1)).is_err());
    }
}
