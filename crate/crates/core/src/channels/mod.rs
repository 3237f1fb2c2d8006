//! Channels as normalized Choi states `C_T = (id (x) T)(omega)`.

mod standard;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use standard::{
    amplitude_damping, choi_from_kraus, depolarizing, diagonal_certificate, erasure, flower_channel, identity_channel, pbit_channel,
    pbit_separable_choi, random_channel,
};

use crate::error::{Error, Result};
use crate::linalg::{herm_eigvals, partial_trace, partial_transpose, CMatrix};
use crate::scalar::Real;
use crate::states::{Density, DensityJson};

/// Which side of `T` the transpose map is composed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `T o theta`: transpose the input (reference) factor.
    In,
    /// `theta o T`: transpose the output factor.
    Out,
}

/// Normalized Choi state on `A' (d_in), B (d_out)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Choi<T> {
    state: Density<T>,
    d_in: usize,
    d_out: usize,
}

fn marginal_defect<T: Real>(m: &CMatrix<T>, d_in: usize, d_out: usize) -> Result<T> {
    let marg = partial_trace(m, &[d_in, d_out], &[0])?;
    let want = CMatrix::identity(d_in).scale(T::one() / T::lit(d_in as f64));
    Ok(marg.max_abs_diff(&want))
}

impl<T: Real> Choi<T> {
    /// Wraps a state whose input marginal is maximally mixed (within `1e-9`).
    pub fn new(state: Density<T>, d_in: usize, d_out: usize) -> Result<Self> {
        Self::with_tolerance(state, d_in, d_out, T::check_tol())
    }

    fn with_tolerance(state: Density<T>, d_in: usize, d_out: usize, tol: T) -> Result<Self> {
        if d_in * d_out != state.dim() || d_in == 0 || d_out == 0 {
            return Err(Error::Dimension(format!(
                "Choi state of dimension {} for d_in = {d_in}, d_out = {d_out}",
                state.dim()
            )));
        }
        let defect = marginal_defect(state.matrix(), d_in, d_out)?;
        if defect > tol {
            return Err(Error::NotTracePreserving(format!(
                "input marginal deviates from I/{d_in} by {:e}",
                defect.as_f64()
            )));
        }
        let state = state.regroup_to(vec![d_in, d_out]).with_labels(&["A'", "B"]);
        Ok(Self { state, d_in, d_out })
    }

    pub(crate) fn new_unchecked(m: CMatrix<T>, d_in: usize, d_out: usize) -> Self {
        Self {
            state: Density::new_unchecked(m, vec![d_in, d_out]).with_labels(&["A'", "B"]),
            d_in,
            d_out,
        }
    }

    pub fn state(&self) -> &Density<T> {
        &self.state
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        self.state.matrix()
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `d_in * C`, the Choi operator `sum |i><j| (x) T(|i><j|)`.
    pub fn unnormalized(&self) -> CMatrix<T> {
        self.matrix().scale(T::lit(self.d_in as f64))
    }

    /// `T(X) = d_in tr_A[(X^T (x) 1) C]` for any operator `X`.
    pub fn apply_operator(&self, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        if x.rows() != self.d_in || x.cols() != self.d_in {
            return Err(Error::Dimension(format!(
                "input of size {}x{} for a channel with d_in = {}",
                x.rows(),
                x.cols(),
                self.d_in
            )));
        }
        let (di, dout) = (self.d_in, self.d_out);
        let c = self.matrix();
        let scale = T::lit(di as f64);
        let mut out = CMatrix::zeros(dout, dout);
        for a1 in 0..di {
            for a in 0..di {
                let w = x[(a1, a)];
                if w.is_zero() {
                    continue;
                }
                let w = w * scale;
                for b in 0..dout {
                    for b1 in 0..dout {
                        out[(b, b1)] = out[(b, b1)] + w * c[(a1 * dout + b, a * dout + b1)];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &Density<T>) -> Result<Density<T>> {
        let out = self.apply_operator(rho.matrix())?;
        Ok(Density::new_unchecked(out.hermitian_part(), vec![self.d_out]))
    }

    /// Applies the channel to subsystem `sys` of a multipartite operator.
    pub fn apply_partial_operator(&self, x: &CMatrix<T>, dims: &[usize], sys: usize) -> Result<CMatrix<T>> {
        if sys >= dims.len() || dims[sys] != self.d_in || dims.iter().product::<usize>() != x.rows() {
            return Err(Error::Dimension(format!(
                "cannot apply a {}-dimensional input channel to system {sys} of {dims:?}",
                self.d_in
            )));
        }
        let left: usize = dims[..sys].iter().product();
        let right: usize = dims[sys + 1..].iter().product();
        let (di, dout) = (self.d_in, self.d_out);
        let c = self.matrix();
        let scale = T::lit(di as f64);
        let n_out = left * dout * right;
        let mut out = CMatrix::zeros(n_out, n_out);
        let idx_in = |l: usize, a: usize, r: usize| (l * di + a) * right + r;
        let idx_out = |l: usize, b: usize, r: usize| (l * dout + b) * right + r;
        for l in 0..left {
            for r in 0..right {
                for l1 in 0..left {
                    for r1 in 0..right {
                        for a1 in 0..di {
                            for a in 0..di {
                                let w = x[(idx_in(l, a1, r), idx_in(l1, a, r1))];
                                if w.is_zero() {
                                    continue;
                                }
                                let w = w * scale;
                                for b in 0..dout {
                                    for b1 in 0..dout {
                                        let o = (idx_out(l, b, r), idx_out(l1, b1, r1));
                                        out[o] = out[o] + w * c[(a1 * dout + b, a * dout + b1)];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply_partial(&self, rho: &Density<T>, sys: usize) -> Result<Density<T>> {
        let out = self.apply_partial_operator(rho.matrix(), rho.dims(), sys)?;
        let mut dims = rho.dims().to_vec();
        dims[sys] = self.d_out;
        Ok(Density::new_unchecked(out.hermitian_part(), dims))
    }

    /// Choi of `theta o T` (`Side::Out`) or `T o theta` (`Side::In`).
    pub fn compose_transpose(&self, side: Side) -> Result<Self> {
        let sys = match side {
            Side::In => 0,
            Side::Out => 1,
        };
        let m = partial_transpose(self.matrix(), &[self.d_in, self.d_out], &[sys])?;
        let min = herm_eigvals(&m)?[0];
        if min < -T::check_tol() {
            return Err(Error::NotCompletelyPositive(min.as_f64()));
        }
        Ok(Self::new_unchecked(m, self.d_in, self.d_out))
    }

    /// Traces out output factors: the output is split as `out_dims` and only
    /// the factors in `keep` survive.
    pub fn reduce_output(&self, out_dims: &[usize], keep: &[usize]) -> Result<Self> {
        if out_dims.iter().product::<usize>() != self.d_out || out_dims.is_empty() {
            return Err(Error::Dimension(format!(
                "output split {out_dims:?} does not factor d_out = {}",
                self.d_out
            )));
        }
        let mut dims = vec![self.d_in];
        dims.extend_from_slice(out_dims);
        let mut keep_all = vec![0];
        keep_all.extend(keep.iter().map(|&k| k + 1));
        let m = partial_trace(self.matrix(), &dims, &keep_all)?;
        let d_out = m.rows() / self.d_in;
        Ok(Self::new_unchecked(m, self.d_in, d_out))
    }

    /// Minimum eigenvalue of `C^{T_B}` and whether it clears `-1e-9`.
    pub fn is_ppt(&self) -> Result<(bool, T)> {
        let m = partial_transpose(self.matrix(), &[self.d_in, self.d_out], &[1])?;
        let min = herm_eigvals(&m)?[0];
        Ok((min >= -T::check_tol(), min))
    }

    pub fn to_json(&self) -> ChoiJson {
        ChoiJson {
            state: self.state.to_json(),
            d_in: self.d_in,
            d_out: self.d_out,
        }
    }

    pub fn from_json(json: &ChoiJson) -> Result<Self> {
        let state = Density::from_json(&json.state)?;
        Self::new(state, json.d_in, json.d_out)
    }

    pub fn cast<U: Real>(&self) -> Choi<U> {
        Choi {
            state: self.state.cast(),
            d_in: self.d_in,
            d_out: self.d_out,
        }
    }
}

/// Lifts a state with maximally mixed input marginal (within `1e-8`) to a channel.
pub fn choi_from_state<T: Real>(rho: &Density<T>, d_in: usize, d_out: usize) -> Result<Choi<T>> {
    Choi::with_tolerance(rho.clone(), d_in, d_out, T::lit(1e-8).max(T::check_tol()))
}

/// `min eig(C^{T_B}) >= -1e-9`, with the eigenvalue.
pub fn is_ppt_choi<T: Real>(c: &Choi<T>) -> Result<(bool, T)> {
    c.is_ppt()
}

/// Switch `T_0 (x) P_0 + T_1 (x) P_1` with `P_i(rho) = <i|rho|i> |i><i|`.
///
/// The Choi is ordered `A' (d_in), a' (2), B (d_out), b (2)`.
pub fn switch_channel<T: Real>(c0: &Choi<T>, c1: &Choi<T>) -> Result<Choi<T>> {
    if c0.d_in != c1.d_in || c0.d_out != c1.d_out {
        return Err(Error::Dimension(format!(
            "switch of {}->{} and {}->{} channels",
            c0.d_in, c0.d_out, c1.d_in, c1.d_out
        )));
    }
    let (di, dout) = (c0.d_in, c0.d_out);
    let n = 4 * di * dout;
    let half = T::lit(0.5);
    let idx = |a: usize, k: usize, b: usize| ((a * 2 + k) * dout + b) * 2 + k;
    let mut m = CMatrix::zeros(n, n);
    for (k, c) in [c0, c1].into_iter().enumerate() {
        let cm = c.matrix();
        for a in 0..di {
            for b in 0..dout {
                for a1 in 0..di {
                    for b1 in 0..dout {
                        m[(idx(a, k, b), idx(a1, k, b1))] = cm[(a * dout + b, a1 * dout + b1)] * half;
                    }
                }
            }
        }
    }
    Ok(Choi::new_unchecked(m, 2 * di, 2 * dout))
}

/// Channel JSON: DensityMatrix JSON plus `"d_in"` and `"d_out"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChoiJson {
    #[serde(flatten)]
    pub state: DensityJson,
    pub d_in: usize,
    pub d_out: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{flower_state, max_entangled, random_state};

    #[test]
    fn identity_channel_acts_trivially() {
        let id = identity_channel::<f64>(3);
        let rho = random_state::<f64>(&[3], 4);
        let out = id.apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        let rho2 = random_state::<f64>(&[2, 3], 5);
        let out2 = id.apply_partial(&rho2, 1).unwrap();
        assert!(out2.matrix().max_abs_diff(rho2.matrix()) < 1e-12);
    }

    #[test]
    fn partial_application_to_omega_is_choi() {
        let c = random_channel::<f64>(2, 3, 2, 9);
        let w = max_entangled::<f64>(2);
        let out = c.apply_partial(&w, 1).unwrap();
        assert!(out.matrix().max_abs_diff(c.matrix()) < 1e-12);
    }

    #[test]
    fn lifted_flower_channel_reproduces_state() {
        let f = flower_state::<f64>(2);
        let c = choi_from_state(&f, 4, 4).unwrap();
        let out = c.apply_partial(&max_entangled::<f64>(4), 1).unwrap();
        assert!(out.matrix().max_abs_diff(f.matrix()) < 1e-12);
    }

    #[test]
    fn choi_from_state_rejects_bad_marginal() {
        let rho = random_state::<f64>(&[2, 2], 1);
        assert!(matches!(choi_from_state(&rho, 2, 2), Err(Error::NotTracePreserving(_))));
    }

    #[test]
    fn transpose_composition() {
        let id = identity_channel::<f64>(2);
        assert!(matches!(id.compose_transpose(Side::Out), Err(Error::NotCompletelyPositive(_))));
        let dep = depolarizing::<f64>(2, 0.9).unwrap();
        let once = dep.compose_transpose(Side::In).unwrap();
        let twice = once.compose_transpose(Side::In).unwrap();
        assert_eq!(twice.matrix(), dep.matrix());
    }

    #[test]
    fn switch_preserves_flags() {
        let c = random_channel::<f64>(2, 2, 2, 3);
        let s = switch_channel(&c, &c).unwrap();
        let rho = random_state::<f64>(&[2], 8);
        let flag0 = CMatrix::from_real_diag(&[1.0, 0.0]);
        let input = Density::new(crate::linalg::kron(rho.matrix(), &flag0), vec![2, 2]).unwrap();
        let out = s.apply(&input).unwrap();
        let want = crate::linalg::kron(c.apply(&rho).unwrap().matrix(), &flag0);
        assert!(out.matrix().max_abs_diff(&want) < 1e-12);
    }
}
