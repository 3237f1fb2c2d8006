//! Dense primal-dual interior-point SDP solver and the Hermitian programs
//! behind the bounds.

mod dense;
mod problem;
mod programs;
mod solver;

pub use dense::RMat;
pub use problem::{hermitian_coordinates, HermVar, SdpProblem, SdpProblemJson, Sense, SparseSym};
pub use programs::{bmax_ppt, diamond_norm, dmax_over_ppt, trace_norm_sdp, ProgramOptions};
pub use solver::{solve, IterationLog, SdpSolution, SolverOptions, Status};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Hermitian tolerance for [`embed_hermitian`].
const HERMITIAN_TOL: f64 = 1e-10;

/// `[[Re h, -Im h], [Im h, Re h]]`: real symmetric, with the spectrum of `h`
/// doubled in multiplicity.
pub fn embed_hermitian(h: &CMatrix<f64>) -> Result<RMat> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", h.rows(), h.cols())));
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.rows();
    let mut out = RMat::zeros(2 * n);
    for a in 0..n {
        for b in 0..n {
            let z = h[(a, b)];
            out.set(a, b, z.re);
            out.set(n + a, n + b, z.re);
            out.set(a, n + b, -z.im);
            out.set(n + a, b, z.im);
        }
    }
    Ok(out.sym())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::herm_eigvals;
    use crate::states::random_state;
    use num_complex::Complex;

    #[test]
    fn embed_identity() {
        assert_eq!(embed_hermitian(&CMatrix::identity(3)).unwrap(), RMat::identity(6));
    }

    #[test]
    fn embed_sigma_y_spectrum() {
        let mut y = CMatrix::<f64>::zeros(2, 2);
        y[(0, 1)] = Complex::new(0.0, -1.0);
        y[(1, 0)] = Complex::new(0.0, 1.0);
        let vals = dense::sym_eigvals(&embed_hermitian(&y).unwrap()).unwrap();
        for (v, w) in vals.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((v - w).abs() < 1e-14, "{vals:?}");
        }
    }

    #[test]
    fn embed_spectrum_doubles() {
        let rho = random_state::<f64>(&[3], 11);
        let h = &rho.matrix().scale(2.0) - &CMatrix::identity(3).scale(0.5);
        let want = herm_eigvals(&h).unwrap();
        let got = dense::sym_eigvals(&embed_hermitian(&h).unwrap()).unwrap();
        for (k, w) in want.iter().enumerate() {
            assert!((got[2 * k] - w).abs() < 1e-12 && (got[2 * k + 1] - w).abs() < 1e-12);
        }
    }

    #[test]
    fn embed_rejects_non_hermitian() {
        let mut m = CMatrix::<f64>::zeros(2, 2);
        m[(0, 1)] = Complex::new(1.0, 0.0);
        assert!(matches!(embed_hermitian(&m), Err(Error::NotHermitian(_))));
    }
}
