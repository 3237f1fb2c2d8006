//! Tensor-product bookkeeping: Kronecker products, partial traces,
//! partial transposes and subsystem permutations.
//!
//! Subsystems are 0-based and ordered left to right; the leftmost factor is
//! the most significant digit of the basis index.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij.is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<T: Real>(factors: &[&CMatrix<T>]) -> CMatrix<T> {
    let mut acc = CMatrix::identity(1);
    for f in factors {
        acc = kron(&acc, f);
    }
    acc
}

fn check_dims<T: Real>(m: &CMatrix<T>, dims: &[usize]) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let total: usize = dims.iter().product();
    if total != m.rows() || dims.iter().any(|&d| d == 0) {
        return Err(Error::Dimension(format!(
            "subsystem dims {dims:?} do not match matrix dimension {}",
            m.rows()
        )));
    }
    Ok(total)
}

fn check_indices(sys: &[usize], n: usize) -> Result<()> {
    for (k, &s) in sys.iter().enumerate() {
        if s >= n || sys[..k].contains(&s) {
            return Err(Error::Dimension(format!("invalid subsystem index list {sys:?}")));
        }
    }
    Ok(())
}

/// Digits of `idx` in the mixed radix given by `dims`.
fn digits(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

/// Marginal on the subsystems listed in `keep`, in their original order.
pub fn partial_trace<T: Real>(m: &CMatrix<T>, dims: &[usize], keep: &[usize]) -> Result<CMatrix<T>> {
    let total = check_dims(m, dims)?;
    check_indices(keep, dims.len())?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&s| dims[s]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&s| dims[s]).collect();
    let nk: usize = kept_dims.iter().product();
    let nt: usize = traced_dims.iter().product();

    // group full indices by their traced part
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(nk); nt];
    let mut dig = vec![0; dims.len()];
    let mut kd = vec![0; keep.len()];
    let mut td = vec![0; traced.len()];
    for i in 0..total {
        digits(i, dims, &mut dig);
        for (slot, &s) in kd.iter_mut().zip(&keep) {
            *slot = dig[s];
        }
        for (slot, &s) in td.iter_mut().zip(&traced) {
            *slot = dig[s];
        }
        groups[compose(&td, &traced_dims)].push((i, compose(&kd, &kept_dims)));
    }

    let mut out = CMatrix::zeros(nk, nk);
    for g in &groups {
        for &(i, ki) in g {
            for &(j, kj) in g {
                out[(ki, kj)] = out[(ki, kj)] + m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Transposes the listed tensor factors in the computational basis.
pub fn partial_transpose<T: Real>(m: &CMatrix<T>, dims: &[usize], sys: &[usize]) -> Result<CMatrix<T>> {
    let total = check_dims(m, dims)?;
    check_indices(sys, dims.len())?;
    let digit_table: Vec<Vec<usize>> = (0..total)
        .map(|i| {
            let mut d = vec![0; dims.len()];
            digits(i, dims, &mut d);
            d
        })
        .collect();
    let mut out = CMatrix::zeros(total, total);
    let mut ri = vec![0; dims.len()];
    let mut ci = vec![0; dims.len()];
    for i in 0..total {
        for j in 0..total {
            ri.copy_from_slice(&digit_table[i]);
            ci.copy_from_slice(&digit_table[j]);
            for &s in sys {
                std::mem::swap(&mut ri[s], &mut ci[s]);
            }
            out[(compose(&ri, dims), compose(&ci, dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Reorders tensor factors: factor `k` of the output is factor `perm[k]` of the input.
pub fn permute_systems<T: Real>(m: &CMatrix<T>, dims: &[usize], perm: &[usize]) -> Result<CMatrix<T>> {
    let total = check_dims(m, dims)?;
    if perm.len() != dims.len() {
        return Err(Error::Dimension(format!("permutation {perm:?} for {} systems", dims.len())));
    }
    check_indices(perm, dims.len())?;
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut old = vec![0; dims.len()];
    let mut new = vec![0; dims.len()];
    let map: Vec<usize> = (0..total)
        .map(|i| {
            digits(i, dims, &mut old);
            for (slot, &p) in new.iter_mut().zip(perm) {
                *slot = old[p];
            }
            compose(&new, &new_dims)
        })
        .collect();
    let mut out = CMatrix::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Permutes a state vector the same way [`permute_systems`] permutes operators.
pub fn permute_vector<T: Real>(v: &[Complex<T>], dims: &[usize], perm: &[usize]) -> Vec<Complex<T>> {
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut old = vec![0; dims.len()];
    let mut new = vec![0; dims.len()];
    let mut out = vec![Complex::zero(); v.len()];
    for (i, &vi) in v.iter().enumerate() {
        digits(i, dims, &mut old);
        for (slot, &p) in new.iter_mut().zip(perm) {
            *slot = old[p];
        }
        out[compose(&new, &new_dims)] = vi;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn kron_identities_and_scalars() {
        let i2 = CMatrix::<f64>::identity(2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4));
        let a = CMatrix::from_real_diag(&[1.0, 2.0]);
        let b = CMatrix::from_real_diag(&[3.0]);
        assert_eq!(kron(&a, &b), CMatrix::from_real_diag(&[3.0, 6.0]));
    }

    #[test]
    fn partial_trace_product() {
        let a = CMatrix::from_real_rows(&[vec![0.7, 0.1], vec![0.1, 0.3]]);
        let b = CMatrix::from_real_diag(&[0.5, 1.5, 1.0]);
        let ab = kron(&a, &b);
        let ra = partial_trace(&ab, &[2, 3], &[0]).unwrap();
        assert!(ra.max_abs_diff(&a.scale(3.0)) < 1e-14);
        let rb = partial_trace(&ab, &[2, 3], &[1]).unwrap();
        assert!(rb.max_abs_diff(&b) < 1e-14);
        let scalar = partial_trace(&ab, &[2, 3], &[]).unwrap();
        assert!((scalar[(0, 0)] - ab.trace()).norm() < 1e-14);
    }

    #[test]
    fn partial_trace_dimension_errors() {
        let m = CMatrix::<f64>::identity(6);
        assert!(partial_trace(&m, &[2, 2], &[0]).is_err());
        assert!(partial_trace(&m, &[2, 3], &[2]).is_err());
        assert!(partial_transpose(&m, &[4], &[0]).is_err());
    }

    #[test]
    fn partial_transpose_of_product() {
        let mut b = CMatrix::<f64>::zeros(2, 2);
        b[(0, 1)] = Complex::new(0.2, 0.3);
        b[(1, 0)] = Complex::new(0.2, -0.3);
        b[(0, 0)] = c(0.4);
        b[(1, 1)] = c(0.6);
        let a = CMatrix::from_real_diag(&[0.25, 0.75]);
        let pt = partial_transpose(&kron(&a, &b), &[2, 2], &[1]).unwrap();
        assert!(pt.max_abs_diff(&kron(&a, &b.transpose())) < 1e-15);
    }

    #[test]
    fn permutation_moves_factors() {
        let a = CMatrix::from_real_diag(&[1.0, 2.0]);
        let b = CMatrix::from_real_diag(&[3.0, 5.0, 7.0]);
        let ab = kron(&a, &b);
        let ba = permute_systems(&ab, &[2, 3], &[1, 0]).unwrap();
        assert_eq!(ba, kron(&b, &a));
    }
}
