//! Density matrices, the explicit state families, private states and
//! privacy tests.

mod families;
mod private;
mod random;
mod separable;

use serde::{Deserialize, Serialize};

pub use families::{
    antisymmetric_state, approx_pbit, approx_pbit_blocks, flower_state, gamma2, max_entangled, pbit_p, qft,
    swap_operator, PbitBlocks,
};
pub(crate) use families::KEY_FIRST_TO_PAIRED;
pub use private::{privacy_test, private_state, test_probability, PrivacyTest, PrivateState};
pub use random::{
    haar_isometry, haar_unitary, random_product_pure, random_pure, random_pure_with, random_separable,
    random_state, random_state_with, seeded_rng,
};
pub use separable::{ProductTerm, SeparableDecomposition};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, partial_transpose, permute_systems, psd_eig, CMatrix, MatrixJson};
use crate::scalar::Real;

/// Trace-one PSD matrix with an ordered list of subsystem dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct Density<T> {
    mat: CMatrix<T>,
    dims: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl<T: Real> Density<T> {
    /// Validates Hermiticity, positivity and unit trace.
    pub fn new(mat: CMatrix<T>, dims: Vec<usize>) -> Result<Self> {
        let tol = T::check_tol();
        if dims.iter().product::<usize>() != mat.rows() || !mat.is_square() {
            return Err(Error::Dimension(format!(
                "dims {dims:?} for a {}x{} matrix",
                mat.rows(),
                mat.cols()
            )));
        }
        let defect = mat.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect.as_f64()));
        }
        let tr = mat.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidTrace(tr.re.as_f64()));
        }
        let mat = mat.hermitian_part();
        let eig = psd_eig(&mat)?;
        if eig.min() < -tol {
            return Err(Error::NotPsd(eig.min().as_f64()));
        }
        Ok(Self { mat, dims, labels: None })
    }

    /// Single-system state.
    pub fn from_matrix(mat: CMatrix<T>) -> Result<Self> {
        let n = mat.rows();
        Self::new(mat, vec![n])
    }

    /// Skips validation; for constructors whose output is valid by construction.
    pub(crate) fn new_unchecked(mat: CMatrix<T>, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), mat.rows());
        Self { mat, dims, labels: None }
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        assert_eq!(labels.len(), self.dims.len(), "one label per subsystem");
        self.labels = Some(labels.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn purity(&self) -> T {
        (&self.mat * &self.mat).trace().re
    }

    /// Marginal on `keep`; labels follow the kept systems.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let mat = partial_trace(&self.mat, &self.dims, keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| keep.iter().map(|&k| l[k].clone()).collect());
        Ok(Self { mat, dims, labels })
    }

    /// Partial transpose; the result need not be a state.
    pub fn partial_transpose(&self, sys: &[usize]) -> Result<CMatrix<T>> {
        partial_transpose(&self.mat, &self.dims, sys)
    }

    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let mat = permute_systems(&self.mat, &self.dims, perm)?;
        let dims = perm.iter().map(|&p| self.dims[p]).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&p| l[p].clone()).collect());
        Ok(Self { mat, dims, labels })
    }

    /// Collapses the subsystem list into one factor per group, e.g. `[[0,1],[2,3]]`.
    pub fn regroup(&self, groups: &[usize]) -> Result<Self> {
        if groups.iter().sum::<usize>() != self.dims.len() {
            return Err(Error::Dimension(format!(
                "grouping {groups:?} of {} systems",
                self.dims.len()
            )));
        }
        let mut dims = Vec::with_capacity(groups.len());
        let mut at = 0;
        for &g in groups {
            dims.push(self.dims[at..at + g].iter().product());
            at += g;
        }
        Ok(Self {
            mat: self.mat.clone(),
            dims,
            labels: None,
        })
    }

    /// Reinterprets the matrix with a different factorization of the same dimension.
    pub(crate) fn regroup_to(&self, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), self.dim());
        let labels = if dims == self.dims { self.labels.clone() } else { None };
        Self {
            mat: self.mat.clone(),
            dims,
            labels,
        }
    }

    pub fn to_json(&self) -> DensityJson {
        DensityJson {
            matrix: MatrixJson::from_matrix(&self.mat),
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(json: &DensityJson) -> Result<Self> {
        let mut s = Self::new(json.matrix.to_matrix()?, json.dims.clone())?;
        s.labels = json.labels.clone();
        Ok(s)
    }

    pub fn cast<U: Real>(&self) -> Density<U> {
        Density {
            mat: self.mat.cast(),
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        }
    }
}

/// DensityMatrix JSON: matrix JSON plus `"dims"` and optional `"labels"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityJson {
    #[serde(flatten)]
    pub matrix: MatrixJson,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn validation_errors() {
        let m = CMatrix::<f64>::from_real_diag(&[0.5, 0.6]);
        assert!(matches!(Density::new(m, vec![2]), Err(Error::InvalidTrace(_))));
        let m = CMatrix::<f64>::from_real_diag(&[1.2, -0.2]);
        assert!(matches!(Density::new(m, vec![2]), Err(Error::NotPsd(_))));
        let mut m = CMatrix::<f64>::from_real_diag(&[0.5, 0.5]);
        m[(0, 1)] = Complex::new(0.1, 0.0);
        assert!(matches!(Density::new(m, vec![2]), Err(Error::NotHermitian(_))));
        let m = CMatrix::<f64>::from_real_diag(&[0.5, 0.5]);
        assert!(Density::new(m, vec![3]).is_err());
    }

    #[test]
    fn json_round_trip_keeps_labels() {
        let s = max_entangled::<f64>(2).with_labels(&["A", "B"]);
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back: DensityJson = serde_json::from_str(&text).unwrap();
        let t = Density::<f64>::from_json(&back).unwrap();
        assert_eq!(t.labels(), s.labels());
        assert!(t.matrix().max_abs_diff(s.matrix()) == 0.0);
    }
}
