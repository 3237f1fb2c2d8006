//! Explicit state families: maximally entangled, flower, approximate
//! private bit and its target private state, antisymmetric.

use num_complex::Complex;
use num_traits::One;

use super::private::{private_state, PrivateState};
use super::Density;
use crate::linalg::{mat_power, CMatrix};
use crate::scalar::Real;

/// Discrete Fourier matrix `U[j][k] = exp(2 pi i j k / d) / sqrt(d)` with
/// 1-based labels `j, k` stored at 0-based positions `j - 1, k - 1`.
pub fn qft<T: Real>(d: usize) -> CMatrix<T> {
    let norm = T::one() / T::lit(d as f64).sqrt();
    let two_pi = T::TAU();
    CMatrix::from_fn(d, d, |j, k| {
        // reduce the exponent mod d before the trig call
        let e = ((j + 1) * (k + 1)) % d;
        let theta = two_pi * T::lit(e as f64) / T::lit(d as f64);
        Complex::new(theta.cos(), theta.sin()) * norm
    })
}

/// Swap operator on `C^d (x) C^d`.
pub fn swap_operator<T: Real>(d: usize) -> CMatrix<T> {
    let mut f = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = Complex::one();
        }
    }
    f
}

/// `omega_d = |Omega><Omega|` with `|Omega> = sum_i |ii> / sqrt(d)`, dims `[d, d]`.
pub fn max_entangled<T: Real>(d: usize) -> Density<T> {
    assert!(d >= 1, "dimension must be positive");
    let w = T::one() / T::lit(d as f64);
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for k in 0..d {
            m[(i * d + i, k * d + k)] = Complex::new(w, T::zero());
        }
    }
    Density::new_unchecked(m, vec![d, d])
}

/// Flower state on `A (d), A' (2), B (d), B' (2)`.
///
/// `rho = 1/(2d) sum_{i,k,j,l} <k|U_l^dagger U_j|i> |ii><kk|_{AB} (x) |jj><ll|_{A'B'}`
/// with `U_1 = 1` and `U_2` the Fourier matrix.
pub fn flower_state<T: Real>(d: usize) -> Density<T> {
    assert!(d >= 2, "flower states need d >= 2");
    let us = [CMatrix::<T>::identity(d), qft::<T>(d)];
    let w = T::one() / T::lit(2.0 * d as f64);
    let n = 4 * d * d;
    let idx = |a: usize, ap: usize, b: usize, bp: usize| ((a * 2 + ap) * d + b) * 2 + bp;
    let mut m = CMatrix::zeros(n, n);
    for j in 0..2 {
        for l in 0..2 {
            let ulj = &us[l].dagger() * &us[j];
            for i in 0..d {
                for k in 0..d {
                    let c = ulj[(k, i)] * w;
                    m[(idx(i, j, i, j), idx(k, l, k, l))] = c;
                }
            }
        }
    }
    Density::new_unchecked(m, vec![d, 2, d, 2]).with_labels(&["A", "A'", "B", "B'"])
}

/// `p(d) = 1 / (sqrt(d) + 1)`.
pub fn pbit_p<T: Real>(d: usize) -> T {
    T::one() / (T::lit(d as f64).sqrt() + T::one())
}

/// Building blocks of the approximate private bit, all operators on the
/// `d x d` shield pair `AB`.
#[derive(Clone, Debug)]
pub struct PbitBlocks<T> {
    pub d: usize,
    pub p: T,
    /// `X = 1/(d sqrt d) sum_ij u_ij |ij><ji|`
    pub x: CMatrix<T>,
    /// `Y = 1/d sum_ij u_ij |ii><jj|`
    pub y: CMatrix<T>,
    pub sqrt_yyd: CMatrix<T>,
    pub sqrt_ydy: CMatrix<T>,
}

pub fn approx_pbit_blocks<T: Real>(d: usize) -> PbitBlocks<T> {
    let u = qft::<T>(d);
    let n = d * d;
    let df = T::lit(d as f64);
    let mut x = CMatrix::zeros(n, n);
    let mut y = CMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            x[(i * d + j, j * d + i)] = u[(i, j)] / (df * df.sqrt());
            y[(i * d + i, j * d + j)] = u[(i, j)] / df;
        }
    }
    let cut = T::support_cutoff();
    let sqrt_yyd = mat_power(&(&y * &y.dagger()).hermitian_part(), T::lit(0.5), cut)
        .expect("Y Y^dagger is PSD");
    let sqrt_ydy = mat_power(&(&y.dagger() * &y).hermitian_part(), T::lit(0.5), cut)
        .expect("Y^dagger Y is PSD");
    PbitBlocks {
        d,
        p: pbit_p(d),
        x,
        y,
        sqrt_yyd,
        sqrt_ydy,
    }
}

/// Assembles a `4 x 4` block matrix over the key pair `(A'B')` in the order
/// `00, 01, 10, 11`, each block acting on `AB`, and returns it on
/// `A' (2), B' (2), A (d), B (d)`.
pub(crate) fn key_block_matrix<T: Real>(d: usize, blocks: &[[Option<CMatrix<T>>; 4]; 4]) -> CMatrix<T> {
    let n = d * d;
    let mut m = CMatrix::zeros(4 * n, 4 * n);
    for (r, row) in blocks.iter().enumerate() {
        for (c, blk) in row.iter().enumerate() {
            if let Some(b) = blk {
                for i in 0..n {
                    for j in 0..n {
                        m[(r * n + i, c * n + j)] = b[(i, j)];
                    }
                }
            }
        }
    }
    m
}

/// Key-first `(A', B', A, B)` to `(A', A, B', B)`.
pub(crate) const KEY_FIRST_TO_PAIRED: [usize; 4] = [0, 2, 1, 3];

/// Approximate private bit `rho_d` on `A' (2), A (d), B' (2), B (d)`.
pub fn approx_pbit<T: Real>(d: usize) -> Density<T> {
    assert!(d >= 2, "approximate private bits need d >= 2");
    let b = approx_pbit_blocks::<T>(d);
    let half = T::lit(0.5);
    let q = T::one() - b.p;
    let mixed = CMatrix::<T>::identity(d * d).scale(T::one() / T::lit((d * d) as f64));
    let blocks = [
        [Some(mixed.scale(q * half)), None, None, Some(b.x.scale(q * half))],
        [None, Some(b.sqrt_yyd.scale(b.p * half)), None, None],
        [None, None, Some(b.sqrt_ydy.scale(b.p * half)), None],
        [Some(b.x.dagger().scale(q * half)), None, None, Some(mixed.scale(q * half))],
    ];
    let key_first = Density::new_unchecked(key_block_matrix(d, &blocks), vec![2, 2, d, d]);
    key_first
        .permute(&KEY_FIRST_TO_PAIRED)
        .expect("fixed permutation")
        .with_labels(&["A'", "A", "B'", "B"])
}

/// Private state `gamma_2` on key `A' B'` and shield `A B`.
///
/// Twisting: `U^{00} = U^{01} = U^{10} = 1`, `U^{11} = d^2 X^dagger`, shield
/// `1/d^2`, so the `(00, 11)` block is `X / 2`.
pub fn gamma2<T: Real>(d: usize) -> PrivateState<T> {
    assert!(d >= 2, "gamma_2 needs d >= 2");
    let b = approx_pbit_blocks::<T>(d);
    let n = d * d;
    let id = CMatrix::<T>::identity(n);
    let u11 = b.x.dagger().scale(T::lit((d * d) as f64));
    let twisting = vec![vec![id.clone(), id.clone()], vec![id.clone(), u11]];
    let shield = Density::new_unchecked(id.scale(T::one() / T::lit(n as f64)), vec![d, d]);
    private_state(twisting, shield, 2).expect("gamma_2 twisting is unitary")
}

/// `alpha_d = (1 - F) / (d (d - 1))` on `[d, d]`.
pub fn antisymmetric_state<T: Real>(d: usize) -> Density<T> {
    assert!(d >= 2, "antisymmetric state needs d >= 2");
    let f = swap_operator::<T>(d);
    let m = &CMatrix::identity(d * d) - &f;
    Density::new_unchecked(m.scale(T::one() / T::lit((d * (d - 1)) as f64)), vec![d, d])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{herm_eigvals, partial_trace, trace_norm};

    #[test]
    fn qft_is_unitary() {
        for d in [2, 3, 4, 9] {
            let u = qft::<f64>(d);
            let uu = &u.dagger() * &u;
            assert!(uu.max_abs_diff(&CMatrix::identity(d)) < 1e-13);
        }
    }

    #[test]
    fn max_entangled_small_cases() {
        let one = max_entangled::<f64>(1);
        assert_eq!(one.dim(), 1);
        assert!((one.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        let w2 = max_entangled::<f64>(2);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((w2.matrix()[(i, j)].re - 0.5).abs() < 1e-15);
        }
        assert!(w2.matrix()[(1, 1)].norm() == 0.0);
        let w5 = max_entangled::<f64>(5);
        assert!((w5.purity() - 1.0).abs() < 1e-12);
        let marg = w5.partial_trace(&[0]).unwrap();
        assert!(marg.matrix().max_abs_diff(&CMatrix::identity(5).scale(0.2)) < 1e-14);
    }

    #[test]
    fn flower_is_a_state_with_mixed_marginals() {
        for d in [2, 3, 4] {
            let f = flower_state::<f64>(d);
            let valid = Density::new(f.matrix().clone(), f.dims().to_vec());
            assert!(valid.is_ok(), "d={d}: {valid:?}");
            let mixed = CMatrix::identity(2 * d).scale(1.0 / (2 * d) as f64);
            let aa = f.partial_trace(&[0, 1]).unwrap();
            let bb = f.partial_trace(&[2, 3]).unwrap();
            assert!(aa.matrix().max_abs_diff(&mixed) < 1e-10);
            assert!(bb.matrix().max_abs_diff(&mixed) < 1e-10);
        }
    }

    #[test]
    fn flower_reduced_state_is_classical() {
        let d = 4;
        let f = flower_state::<f64>(d);
        let red = partial_trace(f.matrix(), f.dims(), &[0, 1, 2]).unwrap();
        // (1/2d) sum_{i,j} |ii><ii|_{AB} (x) |j><j|_{A'}, in A A' B order
        let mut want = CMatrix::zeros(2 * d * d, 2 * d * d);
        for i in 0..d {
            for j in 0..2 {
                let k = (i * 2 + j) * d + i;
                want[(k, k)] = Complex::new(1.0 / (2 * d) as f64, 0.0);
            }
        }
        assert!(red.max_abs_diff(&want) <= 1e-12);
    }

    #[test]
    fn flower_negativity_small() {
        let f = flower_state::<f64>(4);
        let pt = f.partial_transpose(&[2, 3]).unwrap();
        assert!((trace_norm(&pt).unwrap() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn pbit_blocks_have_closed_forms() {
        let d = 4;
        let b = approx_pbit_blocks::<f64>(d);
        // sqrt(Y Y^dagger) = sqrt(Y^dagger Y) = (1/d) sum_i |ii><ii|
        let mut diag = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            diag[(i * d + i, i * d + i)] = Complex::new(1.0 / d as f64, 0.0);
        }
        assert!(b.sqrt_yyd.max_abs_diff(&diag) < 1e-12);
        assert!(b.sqrt_ydy.max_abs_diff(&diag) < 1e-12);
        // X^{T_B} = Y / sqrt(d)
        let xtb = crate::linalg::partial_transpose(&b.x, &[d, d], &[1]).unwrap();
        assert!(xtb.max_abs_diff(&b.y.scale(1.0 / (d as f64).sqrt())) < 1e-14);
    }

    #[test]
    fn pbit_is_valid_state() {
        let rho = approx_pbit::<f64>(4);
        assert!(Density::new(rho.matrix().clone(), rho.dims().to_vec()).is_ok());
        let marg = rho.partial_trace(&[0, 1]).unwrap();
        let want = CMatrix::identity(8).scale(1.0 / 8.0);
        assert!(marg.matrix().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn antisymmetric_properties() {
        let a2 = antisymmetric_state::<f64>(2);
        // singlet (|01> - |10>)/sqrt 2
        let s = [0.0, 1.0, -1.0, 0.0].map(|x| Complex::new(x / 2f64.sqrt(), 0.0));
        assert!(a2.matrix().max_abs_diff(&CMatrix::outer(&s)) < 1e-15);
        let a4 = antisymmetric_state::<f64>(4);
        let rank = herm_eigvals(a4.matrix()).unwrap().iter().filter(|&&l| l > 1e-10).count();
        assert_eq!(rank, 6);
        // brute-force swap expectation: tr(F alpha_d) = -1 for every d
        for d in 2..=5 {
            let f = swap_operator::<f64>(d);
            let v = (&f * antisymmetric_state::<f64>(d).matrix()).trace();
            assert!((v.re + 1.0).abs() < 1e-13 && v.im.abs() < 1e-13, "d={d}: {v}");
        }
    }
}
