//! Seeded random states, unitaries and isometries.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::separable::SeparableDecomposition;
use super::Density;
use crate::linalg::{kron_all, CMatrix};
use crate::scalar::Real;

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

fn random_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    let mut v: Vec<Complex<T>> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    for z in &mut v {
        *z = *z / norm;
    }
    v
}

/// Hilbert–Schmidt random state `G G^dagger / tr(G G^dagger)`.
pub fn random_state_with<T: Real, R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Density<T> {
    let n: usize = dims.iter().product();
    let g = ginibre::<T, _>(n, n, rng);
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    Density::new_unchecked(m.scale(T::one() / tr).hermitian_part(), dims.to_vec())
}

pub fn random_state<T: Real>(dims: &[usize], seed: u64) -> Density<T> {
    random_state_with(dims, &mut seeded_rng(seed))
}

pub fn random_pure_with<T: Real, R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Density<T> {
    let n: usize = dims.iter().product();
    let v = random_vector::<T, _>(n, rng);
    Density::new_unchecked(CMatrix::outer(&v), dims.to_vec())
}

pub fn random_pure<T: Real>(dims: &[usize], seed: u64) -> Density<T> {
    random_pure_with(dims, &mut seeded_rng(seed))
}

/// Isometry `V: C^d_in -> C^d_out` from the Gram–Schmidt QR of a complex
/// Gaussian matrix; the positive diagonal of `R` makes it Haar distributed.
pub fn haar_isometry<T: Real, R: Rng + ?Sized>(d_out: usize, d_in: usize, rng: &mut R) -> CMatrix<T> {
    assert!(d_in <= d_out, "isometry needs d_in <= d_out");
    let g = ginibre::<T, _>(d_out, d_in, rng);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(d_in);
    for j in 0..d_in {
        let mut v = g.column(j);
        // two passes of modified Gram–Schmidt for orthogonality at round-off level
        for _ in 0..2 {
            for q in &cols {
                let mut proj = Complex::zero();
                for (a, b) in q.iter().zip(&v) {
                    proj = proj + a.conj() * b;
                }
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi = *vi - *qi * proj;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for z in &mut v {
            *z = *z / norm;
        }
        cols.push(v);
    }
    CMatrix::from_fn(d_out, d_in, |i, j| cols[j][i])
}

pub fn haar_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix<T> {
    haar_isometry(d, d, rng)
}

/// Pure product state, one Haar-random vector per subsystem.
pub fn random_product_pure<T: Real, R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> (Density<T>, Vec<Vec<Complex<T>>>) {
    let factors: Vec<Vec<Complex<T>>> = dims.iter().map(|&d| random_vector(d, rng)).collect();
    let projs: Vec<CMatrix<T>> = factors.iter().map(|v| CMatrix::outer(v)).collect();
    let refs: Vec<&CMatrix<T>> = projs.iter().collect();
    (Density::new_unchecked(kron_all(&refs), dims.to_vec()), factors)
}

/// Convex mixture of between one and `max_terms` random pure product
/// states, returned with its decomposition.
pub fn random_separable<T: Real, R: Rng + ?Sized>(
    dims: &[usize],
    max_terms: usize,
    rng: &mut R,
) -> (Density<T>, SeparableDecomposition<T>) {
    let terms = rng.random_range(1..=max_terms.max(1));
    let raw: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let mut dec = SeparableDecomposition::new(dims.to_vec());
    for w in raw {
        let (_, factors) = random_product_pure::<T, _>(dims, rng);
        dec.push(T::lit(w / total), factors);
    }
    let m = dec.reconstruct().expect("valid by construction");
    (Density::new_unchecked(m.hermitian_part(), dims.to_vec()), dec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let a = random_state::<f64>(&[2, 3], 11);
        let b = random_state::<f64>(&[2, 3], 11);
        assert_eq!(a, b);
        assert!(Density::new(a.matrix().clone(), vec![2, 3]).is_ok());
        let c = random_state::<f64>(&[2, 3], 12);
        assert!(a.matrix().max_abs_diff(c.matrix()) > 1e-3);
    }

    #[test]
    fn pure_has_unit_purity() {
        let p = random_pure::<f64>(&[4], 5);
        assert!((p.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn isometry_columns_orthonormal() {
        let mut rng = seeded_rng(1);
        let v = haar_isometry::<f64, _>(6, 3, &mut rng);
        assert!((&v.dagger() * &v).max_abs_diff(&CMatrix::identity(3)) < 1e-12);
        let u = haar_unitary::<f64, _>(5, &mut rng);
        assert!((&u * &u.dagger()).max_abs_diff(&CMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn separable_mixture_is_state() {
        let mut rng = seeded_rng(2);
        let (s, dec) = random_separable::<f64, _>(&[2, 3], 10, &mut rng);
        assert!(dec.terms.len() <= 10);
        assert!(Density::new(s.matrix().clone(), vec![2, 3]).is_ok());
    }
}
