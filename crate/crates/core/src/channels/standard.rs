//! Channel constructors.

use num_complex::Complex;

use super::{choi_from_state, Choi};
use crate::error::{Error, Result};
use crate::linalg::{permute_systems, CMatrix};
use crate::scalar::Real;
use crate::states::{
    approx_pbit, approx_pbit_blocks, flower_state, haar_isometry, max_entangled, seeded_rng, SeparableDecomposition,
};

fn check_prob<T: Real>(name: &str, p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidParameter(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

pub fn identity_channel<T: Real>(d: usize) -> Choi<T> {
    Choi::new_unchecked(max_entangled::<T>(d).into_matrix(), d, d)
}

/// Choi of `rho -> sum_k K_k rho K_k^dagger`.
pub fn choi_from_kraus<T: Real>(kraus: &[CMatrix<T>]) -> Result<Choi<T>> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty Kraus list".into()))?;
    let (d_out, d_in) = (first.rows(), first.cols());
    let mut sum = CMatrix::zeros(d_in, d_in);
    for k in kraus {
        if k.rows() != d_out || k.cols() != d_in {
            return Err(Error::Dimension("Kraus operators of different shapes".into()));
        }
        sum += &(&k.dagger() * k);
    }
    let defect = sum.max_abs_diff(&CMatrix::identity(d_in));
    if defect > T::check_tol() {
        return Err(Error::NotTracePreserving(format!(
            "sum K^dagger K deviates from identity by {:e}",
            defect.as_f64()
        )));
    }
    // C = (1/d_in) sum_{ij} |i><j| (x) K |i><j| K^dagger
    let n = d_in * d_out;
    let w = T::one() / T::lit(d_in as f64);
    let mut m = CMatrix::zeros(n, n);
    for k in kraus {
        for i in 0..d_in {
            for j in 0..d_in {
                for b in 0..d_out {
                    let kb = k[(b, i)] * w;
                    for b1 in 0..d_out {
                        let o = (i * d_out + b, j * d_out + b1);
                        m[o] = m[o] + kb * k[(b1, j)].conj();
                    }
                }
            }
        }
    }
    Ok(Choi::new_unchecked(m.hermitian_part(), d_in, d_out))
}

/// `rho -> (1 - p) rho + p tr(rho) 1/d`.
pub fn depolarizing<T: Real>(d: usize, p: T) -> Result<Choi<T>> {
    check_prob("p", p)?;
    let w = max_entangled::<T>(d).into_matrix().scale(T::one() - p);
    let mixed = CMatrix::identity(d * d).scale(p / T::lit((d * d) as f64));
    Ok(Choi::new_unchecked(&w + &mixed, d, d))
}

/// `rho -> (1 - p) rho (+) p |e><e|`, the flag `e` being the last of `d + 1` outputs.
pub fn erasure<T: Real>(d: usize, p: T) -> Result<Choi<T>> {
    check_prob("p", p)?;
    let d_out = d + 1;
    let n = d * d_out;
    let dt = T::lit(d as f64);
    let mut m = CMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            m[(i * d_out + i, j * d_out + j)] = Complex::new((T::one() - p) / dt, T::zero());
        }
        let e = i * d_out + d;
        m[(e, e)] = m[(e, e)] + Complex::new(p / dt, T::zero());
    }
    Ok(Choi::new_unchecked(m, d, d_out))
}

/// Qubit amplitude damping with decay probability `gamma`.
pub fn amplitude_damping<T: Real>(gamma: T) -> Result<Choi<T>> {
    check_prob("gamma", gamma)?;
    let c = |x: T| Complex::new(x, T::zero());
    let mut k0 = CMatrix::zeros(2, 2);
    k0[(0, 0)] = c(T::one());
    k0[(1, 1)] = c((T::one() - gamma).sqrt());
    let mut k1 = CMatrix::zeros(2, 2);
    k1[(0, 1)] = c(gamma.sqrt());
    choi_from_kraus(&[k0, k1])
}

/// `rho -> tr_env V rho V^dagger` with `V` a Haar isometry into `d_out (x) d_env`.
pub fn random_channel<T: Real>(d_in: usize, d_out: usize, d_env: usize, seed: u64) -> Choi<T> {
    assert!(d_env >= 1 && d_in <= d_out * d_env, "isometry needs d_in <= d_out * d_env");
    let mut rng = seeded_rng(seed);
    let v = haar_isometry::<T, _>(d_out * d_env, d_in, &mut rng);
    let kraus: Vec<CMatrix<T>> = (0..d_env)
        .map(|e| CMatrix::from_fn(d_out, d_in, |b, a| v[(b * d_env + e, a)]))
        .collect();
    choi_from_kraus(&kraus).expect("isometry gives a trace-preserving map")
}

/// Channel `AA' -> BB'` whose Choi is the flower state.
pub fn flower_channel<T: Real>(d: usize) -> Choi<T> {
    choi_from_state(&flower_state::<T>(d), 2 * d, 2 * d).expect("flower marginals are maximally mixed")
}

/// Channel `A'A -> B'B` whose Choi is the approximate private bit.
pub fn pbit_channel<T: Real>(d: usize) -> Choi<T> {
    choi_from_state(&approx_pbit::<T>(d), 2 * d, 2 * d).expect("pbit marginals are maximally mixed")
}

/// The entanglement-breaking Choi
/// `C_S = 1/(2(1+p)) diag[(1-p) 1/d^2, 2p sqrt(YY^dagger), 2p sqrt(Y^dagger Y), (1-p) 1/d^2]`
/// (key blocks `A'B'`, shield `AB`), returned on `A' A, B' B` with a
/// product-state decomposition across that cut.
pub fn pbit_separable_choi<T: Real>(d: usize) -> Result<(Choi<T>, SeparableDecomposition<T>)> {
    let b = approx_pbit_blocks::<T>(d);
    let p = b.p;
    let n = d * d;
    let norm = T::one() / (T::lit(2.0) * (T::one() + p));
    let mixed = CMatrix::<T>::identity(n).scale((T::one() - p) / T::lit(n as f64));
    let blocks = [
        mixed.clone(),
        b.sqrt_yyd.scale(T::lit(2.0) * p),
        b.sqrt_ydy.scale(T::lit(2.0) * p),
        mixed,
    ];
    let mut key_first = CMatrix::zeros(4 * n, 4 * n);
    for (k, blk) in blocks.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                key_first[(k * n + i, k * n + j)] = blk[(i, j)] * norm;
            }
        }
    }
    let m = permute_systems(&key_first, &[2, 2, d, d], &crate::states::KEY_FIRST_TO_PAIRED)?;
    let cert = diagonal_certificate(&m, 2 * d, 2 * d)?;
    let choi = Choi::new(
        crate::states::Density::new(m, vec![2 * d, 2 * d])?,
        2 * d,
        2 * d,
    )?;
    cert.certify(choi.matrix(), T::check_tol())?;
    Ok((choi, cert))
}

/// A matrix diagonal in the product basis is a mixture of product basis
/// projectors; the weights are its diagonal.
pub fn diagonal_certificate<T: Real>(m: &CMatrix<T>, da: usize, db: usize) -> Result<SeparableDecomposition<T>> {
    let n = m.rows();
    let tol = T::check_tol();
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)].norm() > tol {
                return Err(Error::NotSeparable(format!("entry ({i}, {j}) is off-diagonal")));
            }
        }
    }
    let mut dec = SeparableDecomposition::new(vec![da, db]);
    for i in 0..n {
        let w = m[(i, i)].re;
        if w.abs() > T::zero() {
            dec.push_basis(w, &[i / db, i % db]);
        }
    }
    Ok(dec)
}
