//! The repo-wide matrix JSON layout:
//! `{"rows": n, "cols": m, "re": [[...]], "im": [[...]]}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix<T: Real>(m: &CMatrix<T>) -> Self {
        let grid = |f: &dyn Fn(Complex<T>) -> T| -> Vec<Vec<f64>> {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(m[(i, j)]).as_f64()).collect())
                .collect()
        };
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: grid(&|z| z.re),
            im: grid(&|z| z.im),
        }
    }

    pub fn to_matrix<T: Real>(&self) -> Result<CMatrix<T>> {
        let shape_ok = self.re.len() == self.rows
            && self.im.len() == self.rows
            && self.re.iter().chain(&self.im).all(|r| r.len() == self.cols);
        if !shape_ok {
            return Err(Error::Dimension(format!(
                "matrix JSON arrays do not match declared {}x{}",
                self.rows, self.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for (rr, ir) in self.re.iter().zip(&self.im) {
            for (&a, &b) in rr.iter().zip(ir) {
                data.push(Complex::new(T::lit(a), T::lit(b)));
            }
        }
        CMatrix::from_vec(self.rows, self.cols, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_mismatch_is_an_error() {
        let j = MatrixJson {
            rows: 2,
            cols: 2,
            re: vec![vec![1.0, 0.0]],
            im: vec![vec![0.0, 0.0]],
        };
        assert!(j.to_matrix::<f64>().is_err());
    }

    #[test]
    fn parse_literal() {
        let j: MatrixJson =
            serde_json::from_str(r#"{"rows":1,"cols":2,"re":[[1.5,2]],"im":[[0,-1]]}"#).unwrap();
        let m: CMatrix<f64> = j.to_matrix().unwrap();
        assert_eq!(m[(0, 1)], Complex::new(2.0, -1.0));
    }
}
