//! Capacity bounds assembled from closed-form formulas, fixed-σ evaluations
//! and SDPs.

mod report;

pub use report::{BoundReport, Direction, Method, Relaxation, Target};

use serde::{Deserialize, Serialize};

use crate::channels::{diagonal_certificate, pbit_separable_choi, Choi};
use crate::divergences::{d_max, d_max_operator, Alpha, DivergenceValue};
use crate::error::{Error, Result};
use crate::linalg::{kron, partial_transpose, trace_norm, CMatrix};
use crate::sdp::{diamond_norm, ProgramOptions};
use crate::states::{approx_pbit, flower_state, pbit_p, Density, SeparableDecomposition};

/// Reconstruction tolerance for separability certificates.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Slack on the non-lockability inequality.
pub const NONLOCK_TOL: f64 = 1e-8;

fn bits_of(v: &DivergenceValue<f64>) -> f64 {
    v.finite().unwrap_or(f64::INFINITY)
}

/// Binary entropy in bits, `h2(0) = h2(1) = 0`.
pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `log2 ||C_T^{T_B}||_1`, a lower bound on the transposition bound.
pub fn log_negativity(c: &Choi<f64>) -> Result<BoundReport> {
    let pt = partial_transpose(c.matrix(), &[c.d_in(), c.d_out()], &[1])?;
    let norm = trace_norm(&pt)?;
    Ok(
        BoundReport::new("log-negativity", Target::DiamondNorm, Direction::Lower, norm.log2(), Method::Formula)
            .diag("trace_norm", norm),
    )
}

/// `Q_two_way(T) <= log2 ||theta o T||_diamond`, with `theta` the transpose
/// on the output.
pub fn transposition_bound(c: &Choi<f64>, opts: &ProgramOptions) -> Result<BoundReport> {
    let pt = partial_transpose(c.matrix(), &[c.d_in(), c.d_out()], &[1])?;
    let neg = trace_norm(&pt)?;
    let dn = diamond_norm(&pt, c.d_in(), c.d_out(), opts)?;
    let mut r = BoundReport::new(
        "transposition",
        Target::QTwoWay,
        Direction::Upper,
        dn.bits.max(0.0),
        Method::Sdp,
    );
    r.diagnostics = dn.diagnostics;
    Ok(r.diag("log_negativity", neg.log2()))
}

/// `E_max(rho) <= D_max(rho || sigma)` for a certified separable `sigma`.
pub fn emax_fixed_sigma(
    rho: &Density<f64>,
    sigma: &Density<f64>,
    cert: &SeparableDecomposition<f64>,
) -> Result<BoundReport> {
    cert.certify(sigma.matrix(), CERTIFICATE_TOL)?;
    let v = d_max(rho, sigma)?;
    Ok(BoundReport::new("emax-fixed", Target::EMax, Direction::Upper, bits_of(&v), Method::FixedSigma)
        .diag("certificate_terms", cert.terms.len()))
}

/// `P_two_way(T) <= E_max(T) <= B_max(T) <= D_max(C_T || C_S)` for an
/// entanglement-breaking `S` certified by a separable decomposition of `C_S`.
pub fn bmax_upper_fixed(
    c: &Choi<f64>,
    c_s: &Choi<f64>,
    cert: &SeparableDecomposition<f64>,
) -> Result<BoundReport> {
    if (c.d_in(), c.d_out()) != (c_s.d_in(), c_s.d_out()) {
        return Err(Error::Dimension(format!(
            "channel {}->{} compared with {}->{}",
            c.d_in(),
            c.d_out(),
            c_s.d_in(),
            c_s.d_out()
        )));
    }
    cert.certify(c_s.matrix(), CERTIFICATE_TOL)?;
    let v = d_max_operator(c.matrix(), c_s.matrix())?;
    Ok(BoundReport::new("bmax-fixed", Target::PTwoWay, Direction::Upper, bits_of(&v), Method::FixedSigma)
        .diag("bounds", "P_two_way <= E_max <= B_max")
        .diag("certificate_terms", cert.terms.len()))
}

/// The separable `rho^f_{AA'B} (x) 1/2` used for the flower state, across
/// `AA' : BB'`; it is diagonal in the product basis.
pub fn flower_product_sigma(d: usize) -> Result<(Density<f64>, SeparableDecomposition<f64>)> {
    let f = flower_state::<f64>(d);
    let reduced = f.partial_trace(&[0, 1, 2])?;
    let m = kron(reduced.matrix(), &CMatrix::identity(2).scale(0.5));
    let sigma = Density::new(m, vec![d, 2, d, 2])?;
    let cert = diagonal_certificate(sigma.matrix(), 2 * d, 2 * d)?;
    Ok((sigma, cert))
}

/// Closed-form flower-channel values: squashed entanglement, the
/// log-negativity lower bound on the transposition bound, and the `E_max`
/// upper bound obtained by discarding the flagged qubit.
pub fn flower_reports(d: usize) -> Result<Vec<BoundReport>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("flower dimension {d} < 2")));
    }
    let df = d as f64;
    Ok(vec![
        BoundReport::new("flower-squashed", Target::ESq, Direction::Exact, 1.0 + 0.5 * df.log2(), Method::Formula)
            .diag("d", d),
        BoundReport::new(
            "flower-transposition",
            Target::DiamondNorm,
            Direction::Lower,
            (df.sqrt() + 1.0).log2(),
            Method::Formula,
        )
        .diag("d", d),
        BoundReport::new("flower-emax", Target::EMax, Direction::Upper, 2.0, Method::Formula)
            .diag("d", d)
            .diag("bounds", "Q_two_way <= P_two_way <= E_max"),
    ])
}

/// Lower bound on the error of any private protocol transmitting `k` bits
/// with `m` channel uses: `1 - 2^{-((alpha-1)/(2 alpha)) (k - m E_max)}`,
/// floored at zero when `k <= m E_max`.
pub fn error_floor(k: usize, m: usize, emax_bits: f64, alpha: Alpha) -> Result<f64> {
    let factor = match alpha {
        Alpha::Infinity => 0.5,
        Alpha::Finite(a) if a > 1.0 => (a - 1.0) / (2.0 * a),
        _ => return Err(Error::InvalidParameter(format!("alpha = {alpha} must exceed 1"))),
    };
    if !emax_bits.is_finite() || emax_bits < 0.0 {
        return Err(Error::InvalidParameter(format!("E_max = {emax_bits} bits")));
    }
    let excess = k as f64 - m as f64 * emax_bits;
    Ok((1.0 - (-factor * excess).exp2()).max(0.0))
}

/// The Choi state of `theta o T_d` (transpose after the approximate
/// private-bit channel), i.e. `rho_d^{T_{B'B}}`.
pub fn pbit_transposed_choi(d: usize) -> Result<Choi<f64>> {
    let rho = approx_pbit::<f64>(d).regroup_to(vec![2 * d, 2 * d]);
    let pt = rho.partial_transpose(&[1])?;
    Choi::new(Density::new(pt.hermitian_part(), vec![2 * d, 2 * d])?, 2 * d, 2 * d)
}

/// `P_two_way(T_d) >= 1 - h2(p(d))` and, through the repeater, the upper
/// bound `D_max(rho_d^{T_{B'B}} || C_S)` (formula `log2(1 + p(d))`).
pub fn pbit_capacity_gap(d: usize) -> Result<(BoundReport, BoundReport)> {
    let p = pbit_p::<f64>(d);
    let lower = BoundReport::new("pbit-key-rate", Target::PTwoWay, Direction::Lower, 1.0 - h2(p), Method::Formula)
        .diag("d", d)
        .diag("p", p);
    let c = pbit_transposed_choi(d)?;
    let (c_s, cert) = pbit_separable_choi::<f64>(d)?;
    let mut upper = bmax_upper_fixed(&c, &c_s, &cert)?;
    upper.bound = "pbit-repeater".into();
    upper.targets = Target::PRepeater;
    let upper = upper.diag("d", d).diag("formula", (1.0 + p).log2());
    Ok((lower, upper))
}

/// Closed-form values for `tau0 = alpha_{2l}^{(x) n}` and `tau1` the flower
/// state of dimension `2^{n-1} l^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixTable {
    pub n: usize,
    pub l: usize,
    /// `E_R(tau0) >= n (log2 sqrt(4/3) - 1/2)`.
    pub er_tau0_lower: f64,
    /// `E_R(tau1) <= 2`.
    pub er_tau1_upper: f64,
    /// `E_sq(tau0) <= n log2(1 + 1/l)`.
    pub esq_tau0_upper: f64,
    /// `E_sq(tau1) = 1/2 + n/2 + (n/2) log2 l`.
    pub esq_tau1: f64,
    /// `E_R(tau1) << E_R(tau0)`: lower bound on `E_R(tau0)` at least
    /// `ratio` times the upper bound on `E_R(tau1)`.
    pub er_separated: bool,
    /// `E_sq(tau1) >> E_sq(tau0)` at the same ratio.
    pub esq_separated: bool,
    pub ratio: f64,
}

/// Separation ratio for the dichotomy flags.
pub const DICHOTOMY_RATIO: f64 = 10.0;

pub fn appendix_dichotomy(n: usize, l: usize) -> Result<AppendixTable> {
    if n == 0 || l == 0 {
        return Err(Error::InvalidParameter(format!("n = {n}, l = {l} must be positive")));
    }
    let (nf, lf) = (n as f64, l as f64);
    let er_tau0_lower = nf * ((4.0f64 / 3.0).sqrt().log2() - 0.5);
    let er_tau1_upper = 2.0;
    let esq_tau0_upper = nf * (1.0 + 1.0 / lf).log2();
    let esq_tau1 = 0.5 + 0.5 * nf + 0.5 * nf * lf.log2();
    Ok(AppendixTable {
        n,
        l,
        er_tau0_lower,
        er_tau1_upper,
        esq_tau0_upper,
        esq_tau1,
        er_separated: er_tau0_lower >= DICHOTOMY_RATIO * er_tau1_upper,
        esq_separated: esq_tau1 >= DICHOTOMY_RATIO * esq_tau0_upper,
        ratio: DICHOTOMY_RATIO,
    })
}

/// Dimension of the flower state playing `tau1`.
pub fn appendix_flower_dim(n: usize, l: usize) -> f64 {
    2f64.powi(n as i32 - 1) * (l as f64).powi(n as i32)
}

/// `D_max(rho_{ABB'} || rho_{AB} (x) 1/d_{B'})` for a tripartite state,
/// together with the limit `2 log2 d_{B'}`.
pub fn nonlockability_value(rho: &Density<f64>) -> Result<(f64, f64)> {
    let dims = rho.dims().to_vec();
    if dims.len() != 3 {
        return Err(Error::Dimension(format!("expected a tripartite state, got dims {dims:?}")));
    }
    let db2 = dims[2];
    let marginal = rho.partial_trace(&[0, 1])?;
    let sigma = Density::new(
        kron(marginal.matrix(), &CMatrix::identity(db2).scale(1.0 / db2 as f64)),
        dims,
    )?;
    Ok((bits_of(&d_max(rho, &sigma)?), 2.0 * (db2 as f64).log2()))
}

/// [`nonlockability_value`], failing if the value exceeds `2 log2 d_{B'}`.
pub fn nonlockability_check(rho: &Density<f64>) -> Result<f64> {
    let (v, limit) = nonlockability_value(rho)?;
    if !(v <= limit + NONLOCK_TOL) {
        return Err(Error::Violation(format!("D_max = {v} exceeds 2 log2 d_B' = {limit}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{identity_channel, random_channel};
    use crate::states::{max_entangled, random_state};

    #[test]
    fn error_floor_values() {
        assert_eq!(error_floor(10, 5, 2.0, Alpha::Infinity).unwrap(), 0.0);
        assert_eq!(error_floor(12, 5, 2.0, Alpha::Infinity).unwrap(), 0.5);
        let v = error_floor(12, 5, 2.0, Alpha::Finite(2.0)).unwrap();
        assert_eq!(v, 1.0 - 2f64.powf(-0.5));
        assert!(error_floor(1, 1, 0.0, Alpha::One).is_err());
    }

    #[test]
    fn binary_entropy() {
        assert_eq!(h2(0.0), 0.0);
        assert_eq!(h2(1.0), 0.0);
        assert!((h2(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn omega2_against_maximally_mixed() {
        let id4 = Density::new(CMatrix::identity(4).scale(0.25), vec![2, 2]).unwrap();
        let mut cert = SeparableDecomposition::new(vec![2, 2]);
        for i in 0..4 {
            cert.push_basis(0.25, &[i / 2, i % 2]);
        }
        let r = emax_fixed_sigma(&max_entangled(2), &id4, &cert).unwrap();
        assert!((r.bits - 2.0).abs() < 1e-10);
        let bad = SeparableDecomposition::new(vec![2, 2]);
        let err = emax_fixed_sigma(&max_entangled(2), &id4, &bad).unwrap_err();
        assert!(err.to_string().contains("sigma not certified separable"));
    }

    #[test]
    fn transposition_of_identity() {
        let r = transposition_bound(&identity_channel(2), &ProgramOptions::default()).unwrap();
        assert!((r.bits - 1.0).abs() < 1e-9);
        assert!((r.diag_f64("log_negativity").unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn flower_transposition_reaches_log3() {
        let r = transposition_bound(&crate::channels::flower_channel(4), &ProgramOptions::default()).unwrap();
        assert!(r.bits >= 3f64.log2() - 1e-8, "{r:?}");
    }

    #[test]
    fn flower_emax_fixed_sigma() {
        let (sigma, cert) = flower_product_sigma(2).unwrap();
        let r = emax_fixed_sigma(&flower_state(2), &sigma, &cert).unwrap();
        assert!(r.bits <= 2.0 + 1e-9, "{}", r.bits);
    }

    #[test]
    fn eb_channel_self_bound_is_zero() {
        let (c_s, cert) = pbit_separable_choi::<f64>(4).unwrap();
        let r = bmax_upper_fixed(&c_s, &c_s, &cert).unwrap();
        assert!(r.bits.abs() < 1e-9);
        let c = random_channel::<f64>(2, 2, 2, 1);
        assert!(bmax_upper_fixed(&c, &c_s, &cert).is_err());
    }

    #[test]
    fn appendix_reference_point() {
        let t = appendix_dichotomy(20, 16).unwrap();
        assert_eq!(t.esq_tau1, 50.5);
        assert!((t.esq_tau0_upper - 20.0 * (17.0f64 / 16.0).log2()).abs() < 1e-15);
        assert_eq!(t.er_tau1_upper, 2.0);
        let flower = flower_reports(4).unwrap();
        let dim = appendix_flower_dim(3, 2);
        let via_flower = 1.0 + 0.5 * dim.log2();
        assert!((appendix_dichotomy(3, 2).unwrap().esq_tau1 - via_flower).abs() < 1e-12);
        assert_eq!(flower[0].bits, 2.0);
    }

    #[test]
    fn nonlock_product_is_zero() {
        let a = random_state::<f64>(&[2, 2], 3);
        let m = kron(a.matrix(), &CMatrix::identity(2).scale(0.5));
        let rho = Density::new(m, vec![2, 2, 2]).unwrap();
        assert!(nonlockability_check(&rho).unwrap().abs() < 1e-9);
    }
}
