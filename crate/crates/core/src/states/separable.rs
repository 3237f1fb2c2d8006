//! Explicit separable decompositions used as certificates.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron_all, CMatrix};
use crate::scalar::Real;

/// Weighted pure product state `w |a><a| (x) |b><b| (x) ...`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductTerm<T> {
    pub weight: T,
    /// One normalized vector per party.
    pub factors: Vec<Vec<Complex<T>>>,
}

/// Convex combination of pure product states over the parties `party_dims`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparableDecomposition<T> {
    pub party_dims: Vec<usize>,
    pub terms: Vec<ProductTerm<T>>,
}

impl<T: Real> SeparableDecomposition<T> {
    pub fn new(party_dims: Vec<usize>) -> Self {
        Self {
            party_dims,
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, weight: T, factors: Vec<Vec<Complex<T>>>) {
        self.terms.push(ProductTerm { weight, factors });
    }

    /// Adds the product basis projector `|i_1 ... i_n><i_1 ... i_n|` with the given weight.
    pub fn push_basis(&mut self, weight: T, digits: &[usize]) {
        let factors = digits
            .iter()
            .zip(&self.party_dims)
            .map(|(&i, &d)| {
                let mut v = vec![Complex::new(T::zero(), T::zero()); d];
                v[i] = Complex::new(T::one(), T::zero());
                v
            })
            .collect();
        self.push(weight, factors);
    }

    pub fn reconstruct(&self) -> Result<CMatrix<T>> {
        let n: usize = self.party_dims.iter().product();
        let mut out = CMatrix::zeros(n, n);
        let tol = T::check_tol();
        for (t, term) in self.terms.iter().enumerate() {
            if term.weight < -tol {
                return Err(Error::NotSeparable(format!("term {t} has negative weight")));
            }
            if term.factors.len() != self.party_dims.len() {
                return Err(Error::NotSeparable(format!("term {t} has the wrong number of factors")));
            }
            let mut projs = Vec::with_capacity(term.factors.len());
            for (v, &d) in term.factors.iter().zip(&self.party_dims) {
                let norm: T = v.iter().map(|z| z.norm_sqr()).sum();
                if v.len() != d || (norm - T::one()).abs() > tol {
                    return Err(Error::NotSeparable(format!("term {t} has an invalid factor")));
                }
                projs.push(CMatrix::outer(v));
            }
            let refs: Vec<&CMatrix<T>> = projs.iter().collect();
            out += &kron_all(&refs).scale(term.weight);
        }
        Ok(out)
    }

    /// Checks that the decomposition reproduces `sigma` within `tol` entrywise.
    pub fn certify(&self, sigma: &CMatrix<T>, tol: T) -> Result<()> {
        let rec = self.reconstruct()?;
        if rec.rows() != sigma.rows() {
            return Err(Error::NotSeparable(format!(
                "certificate dimension {} vs {}",
                rec.rows(),
                sigma.rows()
            )));
        }
        let diff = rec.max_abs_diff(sigma);
        if diff > tol {
            return Err(Error::NotSeparable(format!(
                "reconstruction differs by {:e}",
                diff.as_f64()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_mixture() {
        let mut dec = SeparableDecomposition::<f64>::new(vec![2, 2]);
        dec.push_basis(0.5, &[0, 0]);
        dec.push_basis(0.5, &[1, 1]);
        let want = CMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5]);
        assert!(dec.certify(&want, 1e-12).is_ok());
        assert!(dec.certify(&CMatrix::identity(4).scale(0.25), 1e-9).is_err());
    }

    #[test]
    fn rejects_negative_weight() {
        let mut dec = SeparableDecomposition::<f64>::new(vec![2]);
        dec.push_basis(-0.5, &[0]);
        assert!(dec.reconstruct().is_err());
    }
}
