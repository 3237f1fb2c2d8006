//! Small dense real-symmetric kernels for the interior-point solver.

use crate::error::Result;
use crate::linalg::sym_eig_real;

/// Square real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RMat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl RMat {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::identity(n);
        m.data.iter_mut().for_each(|v| *v *= s);
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    /// `(A + A^T) / 2`.
    pub fn sym(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
            }
        }
        out
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        for (s, &v) in self.data.iter_mut().zip(&x.data) {
            *s += a * v;
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        let lj = &l[j * n..j * n + j];
        d -= lj.iter().map(|v| v * v).sum::<f64>();
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l[j * n + j] = dj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / dj;
        }
    }
    Some(l)
}

/// Solves `L L^T x = b` in place.
pub fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Inverse of a lower-triangular matrix.
pub fn lower_inverse(l: &[f64], n: usize) -> Vec<f64> {
    let mut inv = vec![0.0; n * n];
    for j in 0..n {
        inv[j * n + j] = 1.0 / l[j * n + j];
        for i in j + 1..n {
            let mut s = 0.0;
            for k in j..i {
                s -= l[i * n + k] * inv[k * n + j];
            }
            inv[i * n + j] = s / l[i * n + i];
        }
    }
    inv
}

/// `A^{-1}` from the Cholesky factor of `A`.
pub fn spd_inverse(a: &RMat) -> Option<RMat> {
    let n = a.n;
    let l = cholesky(&a.data, n)?;
    let li = lower_inverse(&l, n);
    // A^{-1} = L^{-T} L^{-1}
    let mut out = RMat::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = 0.0;
            for k in i..n {
                s += li[k * n + i] * li[k * n + j];
            }
            out.data[i * n + j] = s;
            out.data[j * n + i] = s;
        }
    }
    Some(out)
}

pub fn sym_eigvals(a: &RMat) -> Result<Vec<f64>> {
    Ok(sym_eig_real(&a.sym().data, a.n, false)?.0)
}

/// Largest `alpha` (capped at `f64::INFINITY`) with `X + alpha dX >= 0`,
/// for positive definite `X`.
pub fn max_step(x: &RMat, dx: &RMat) -> Result<f64> {
    let n = x.n;
    if n == 0 {
        return Ok(f64::INFINITY);
    }
    let l = match cholesky(&x.data, n) {
        Some(l) => l,
        None => return Ok(0.0),
    };
    let li = RMat {
        n,
        data: lower_inverse(&l, n),
    };
    let w = li.matmul(dx).matmul(&li.transpose());
    let lmin = sym_eigvals(&w)?[0];
    Ok(if lmin >= 0.0 { f64::INFINITY } else { -1.0 / lmin })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_solve() {
        let a = RMat {
            n: 2,
            data: vec![4.0, 1.0, 1.0, 3.0],
        };
        let inv = spd_inverse(&a).unwrap();
        let prod = a.matmul(&inv);
        assert!((prod.get(0, 0) - 1.0).abs() < 1e-14 && prod.get(0, 1).abs() < 1e-14);
        let l = cholesky(&a.data, 2).unwrap();
        let mut b = vec![1.0, 2.0];
        cholesky_solve(&l, 2, &mut b);
        assert!((4.0 * b[0] + b[1] - 1.0).abs() < 1e-14);
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }

    #[test]
    fn step_to_boundary() {
        let x = RMat::identity(2);
        let dx = RMat {
            n: 2,
            data: vec![-2.0, 0.0, 0.0, 1.0],
        };
        assert!((max_step(&x, &dx).unwrap() - 0.5).abs() < 1e-14);
        assert!(max_step(&x, &RMat::identity(2)).unwrap().is_infinite());
    }
}
