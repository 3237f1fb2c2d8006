//! Hermitian SDPs: trace norm, PPT relaxations of the max-relative entropy
//! of entanglement, and the diamond norm.

use serde::{Deserialize, Serialize};

use super::problem::{hermitian_coordinates, HermVar, SdpProblem, Sense, SparseSym};
use super::solver::{solve, SdpSolution, SolverOptions, Status};
use crate::bounds::{BoundReport, Direction, Method, Relaxation, Target};
use crate::channels::Choi;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, op_norm, partial_trace, partial_transpose, trace_norm, CMatrix, MatrixJson};
use crate::states::Density;

/// Partial-transpose violation below which a state is treated as PPT.
const PPT_TOL: f64 = 1e-12;

fn require_optimal(sol: &SdpSolution, what: &str) -> Result<()> {
    if sol.status != Status::Optimal {
        let last = sol.log.last().map(|l| format!("{l:?}")).unwrap_or_default();
        return Err(Error::Solver(format!(
            "{what}: solver stopped with status {:?} after {} iterations; last iterate {last}",
            sol.status, sol.iterations
        )));
    }
    Ok(())
}

fn with_solver_diag(r: BoundReport, sol: &SdpSolution) -> BoundReport {
    r.diag("status", serde_json::to_value(sol.status).unwrap_or_default())
        .diag("iterations", sol.iterations)
        .diag("primal", sol.primal_value)
        .diag("dual", sol.dual_value)
        .diag("gap", sol.gap)
        .diag("primal_infeasibility", sol.primal_infeasibility)
        .diag("dual_infeasibility", sol.dual_infeasibility)
}

/// Adds one constraint per real Hermitian coordinate of an `n x n` matrix
/// expression; `form` fills the constraint for `Re`/`Im` of entry `(a, b)`
/// and returns its right-hand side.
fn hermitian_equalities(
    p: &mut SdpProblem,
    n: usize,
    mut form: impl FnMut(&mut SparseSym, usize, usize, bool) -> f64,
) {
    for (a, b, im) in hermitian_coordinates(n) {
        let mut m = SparseSym::new();
        let rhs = form(&mut m, a, b, im);
        p.add_constraint(m, rhs);
    }
}

fn coord(h: &CMatrix<f64>, a: usize, b: usize, im: bool) -> f64 {
    if im {
        h[(a, b)].im
    } else {
        h[(a, b)].re
    }
}

fn add_coord(v: &HermVar, m: &mut SparseSym, a: usize, b: usize, im: bool, coef: f64) {
    if im {
        v.im(m, a, b, coef);
    } else {
        v.re(m, a, b, coef);
    }
}

/// Index pair of `X^{T_B}` entry `(a, b)` in `X`, for a `d_a x d_b` split.
fn pt_source(a: usize, b: usize, db: usize) -> (usize, usize) {
    let (i, j) = (a / db, a % db);
    let (k, l) = (b / db, b % db);
    (i * db + l, k * db + j)
}

/// `||H||_1` as `min tr P + tr N` s.t. `P - N = H`, `P, N >= 0`.
pub fn trace_norm_sdp(h: &CMatrix<f64>, opts: &SolverOptions) -> Result<(f64, SdpSolution)> {
    let defect = h.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.rows();
    let mut p = SdpProblem::new(Sense::Min);
    let pos = HermVar::new(&mut p, n);
    let neg = HermVar::new(&mut p, n);
    pos.trace(&mut p.c, 1.0);
    neg.trace(&mut p.c, 1.0);
    hermitian_equalities(&mut p, n, |m, a, b, im| {
        add_coord(&pos, m, a, b, im, 1.0);
        add_coord(&neg, m, a, b, im, -1.0);
        coord(h, a, b, im)
    });
    let sol = solve(&p, opts)?;
    require_optimal(&sol, "trace-norm program")?;
    Ok((sol.primal_value, sol))
}

/// Builds `min tr P` s.t. `Q - P^{T_B} = rho^{T_B}`, `P, Q >= 0`, so that
/// `M = P + rho` ranges over `M >= rho`, `M^{T_B} >= 0`.
fn ppt_program(rho: &CMatrix<f64>, da: usize, db: usize) -> (SdpProblem, HermVar, HermVar) {
    let n = da * db;
    let rho_pt = partial_transpose(rho, &[da, db], &[1]).expect("dimensions checked by caller");
    let mut p = SdpProblem::new(Sense::Min);
    let pv = HermVar::new(&mut p, n);
    let qv = HermVar::new(&mut p, n);
    pv.trace(&mut p.c, 1.0);
    hermitian_equalities(&mut p, n, |m, a, b, im| {
        add_coord(&qv, m, a, b, im, 1.0);
        let (a2, b2) = pt_source(a, b, db);
        add_coord(&pv, m, a2, b2, im, -1.0);
        coord(&rho_pt, a, b, im)
    });
    (p, pv, qv)
}

fn is_ppt(m: &CMatrix<f64>, da: usize, db: usize) -> Result<(bool, f64)> {
    let pt = partial_transpose(m, &[da, db], &[1])?;
    let min = herm_eig(&pt)?.min();
    Ok((min >= -PPT_TOL, min))
}

/// PPT relaxation of `E_max`: `log2 min{tr M : M >= rho, M^{T_B} >= 0}`,
/// with `A` the first `split` subsystems. A lower bound on `E_max(rho)`.
pub fn dmax_over_ppt(rho: &Density<f64>, split: usize, opts: &ProgramOptions) -> Result<BoundReport> {
    let dims = rho.dims();
    if split == 0 || split >= dims.len() {
        return Err(Error::Dimension(format!("split {split} does not bipartition {dims:?}")));
    }
    let da: usize = dims[..split].iter().product();
    let db: usize = dims[split..].iter().product();
    let base = BoundReport::new("emax-ppt", Target::EMax, Direction::Lower, 0.0, Method::Sdp).relaxed(Relaxation::Ppt);
    let (ppt, min) = is_ppt(rho.matrix(), da, db)?;
    if ppt && !opts.force_ipm {
        // rho itself is feasible and tr M >= tr rho = 1
        return Ok(base
            .with_certificate(MatrixJson::from_matrix(rho.matrix()))
            .diag("route", "ppt-input")
            .diag("min_pt_eigenvalue", min));
    }
    let (p, pv, _) = ppt_program(rho.matrix(), da, db);
    let sol = solve(&p, &opts.solver)?;
    require_optimal(&sol, "PPT max-relative entropy program")?;
    let m = &pv.extract(&sol.primal_matrix[pv.block].data) + rho.matrix();
    let value = sol.primal_value + 1.0;
    let mut r = with_solver_diag(base, &sol)
        .with_certificate(MatrixJson::from_matrix(&m))
        .diag("route", "ipm")
        .diag("trace", value);
    r.bits = value.log2().max(0.0);
    Ok(r)
}

/// PPT relaxation of `B_max`: `log2 min tr M` over `M >= C_T`, `M^{T_B} >= 0`,
/// `tr_B M = (tr M / d_A) 1`. A lower bound on `B_max(T)`; the certificate is
/// `M / tr M`, a PPT Choi state.
pub fn bmax_ppt(c: &Choi<f64>, opts: &ProgramOptions) -> Result<BoundReport> {
    let (da, db) = (c.d_in(), c.d_out());
    let base = BoundReport::new("bmax-ppt", Target::BMax, Direction::Lower, 0.0, Method::Sdp).relaxed(Relaxation::Ppt);
    let (ppt, min) = is_ppt(c.matrix(), da, db)?;
    if ppt && !opts.force_ipm {
        return Ok(base
            .with_certificate(MatrixJson::from_matrix(c.matrix()))
            .diag("route", "ppt-input")
            .diag("min_pt_eigenvalue", min));
    }
    let (mut p, pv, _) = ppt_program(c.matrix(), da, db);
    // tr_B P - (tr P / d_A) 1 = 0; the diagonal equations sum to zero, so
    // the last one is dropped
    for (a, b, im) in hermitian_coordinates(da) {
        if !im && a == b && a == da - 1 {
            continue;
        }
        let mut m = SparseSym::new();
        for j in 0..db {
            add_coord(&pv, &mut m, a * db + j, b * db + j, im, 1.0);
        }
        if !im && a == b {
            pv.trace(&mut m, -1.0 / da as f64);
        }
        p.add_constraint(m, 0.0);
    }
    let sol = solve(&p, &opts.solver)?;
    require_optimal(&sol, "PPT B_max program")?;
    let m = &pv.extract(&sol.primal_matrix[pv.block].data) + c.matrix();
    let value = sol.primal_value + 1.0;
    let mut r = with_solver_diag(base, &sol)
        .with_certificate(MatrixJson::from_matrix(&m.scale(1.0 / value)))
        .diag("route", "ipm")
        .diag("trace", value);
    r.bits = value.log2().max(0.0);
    Ok(r)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProgramOptions {
    pub solver: SolverOptions,
    /// Always run the interior-point method, even when a closed-form
    /// shortcut (PPT input, agreeing feasible points) already settles the value.
    pub force_ipm: bool,
}

/// Relative agreement at which the closed-form bounds certify the value.
const CERTIFIED_GAP: f64 = 1e-10;

/// Diamond norm of the Hermiticity-preserving map whose normalized Choi
/// operator is `choi` (on `d_in x d_out`), via
/// `max <J, X0 - X1>` s.t. `X0 + X1 = rho (x) 1`, `tr rho = 1`, with
/// `J = d_in * choi`.
///
/// Two feasible points are always evaluated first: `rho = 1/d_in` gives
/// `||J||_1 / d_in` from below, and the split `J = J+ - J-` gives
/// `||tr_out |J| ||_inf` from above. When they agree the program is solved.
pub fn diamond_norm(choi: &CMatrix<f64>, d_in: usize, d_out: usize, opts: &ProgramOptions) -> Result<BoundReport> {
    if choi.rows() != d_in * d_out || !choi.is_square() {
        return Err(Error::Dimension(format!(
            "Choi operator is {}x{}, expected {}",
            choi.rows(),
            choi.cols(),
            d_in * d_out
        )));
    }
    let defect = choi.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::NotHermitian(defect));
    }
    let j = choi.scale(d_in as f64).hermitian_part();
    let eig = herm_eig(&j)?;
    let lower = trace_norm(&j)? / d_in as f64;
    let abs_j = eig.map_spectrum(f64::abs);
    let upper = op_norm(&partial_trace(&abs_j, &[d_in, d_out], &[0])?)?;
    let base = BoundReport::new("diamond-norm", Target::DiamondNorm, Direction::Exact, 0.0, Method::Sdp)
        .diag("lower", lower)
        .diag("upper", upper);

    if !opts.force_ipm && upper - lower <= CERTIFIED_GAP * upper.max(1.0) {
        let value = 0.5 * (upper + lower);
        let mut r = base.diag("route", "certified-feasible-points").diag("value", value);
        r.bits = value.log2();
        return Ok(r);
    }

    let n = d_in * d_out;
    let mut p = SdpProblem::new(Sense::Max);
    let x0 = HermVar::new(&mut p, n);
    let x1 = HermVar::new(&mut p, n);
    let rho = HermVar::new(&mut p, d_in);
    x0.inner(&mut p.c, &j);
    x1.inner(&mut p.c, &j.scale(-1.0));
    hermitian_equalities(&mut p, n, |m, a, b, im| {
        add_coord(&x0, m, a, b, im, 1.0);
        add_coord(&x1, m, a, b, im, 1.0);
        let (i, x) = (a / d_out, a % d_out);
        let (k, y) = (b / d_out, b % d_out);
        if x == y {
            add_coord(&rho, m, i, k, im, -1.0);
        }
        0.0
    });
    let mut t = SparseSym::new();
    rho.trace(&mut t, 1.0);
    p.add_constraint(t, 1.0);
    let sol = solve(&p, &opts.solver)?;
    require_optimal(&sol, "diamond-norm program")?;
    let value = sol.primal_value;
    let input = rho.extract(&sol.primal_matrix[rho.block].data);
    let mut r = with_solver_diag(base, &sol)
        .with_certificate(MatrixJson::from_matrix(&input))
        .diag("route", "ipm")
        .diag("value", value);
    r.bits = value.log2();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, identity_channel};
    use crate::states::{max_entangled, random_state};
    use crate::linalg::kron;

    fn forced() -> ProgramOptions {
        ProgramOptions {
            force_ipm: true,
            ..Default::default()
        }
    }

    #[test]
    fn trace_norm_matches_eigenvalues() {
        let h = &random_state::<f64>(&[3], 4).matrix().scale(3.0) - &CMatrix::identity(3);
        let (v, sol) = trace_norm_sdp(&h, &SolverOptions::default()).unwrap();
        assert!((v - trace_norm(&h).unwrap()).abs() < 1e-6, "{v}");
        assert!(sol.primal_min_eigenvalue().unwrap() >= -1e-8);
    }

    #[test]
    fn ppt_relaxation_of_omega2_is_one_bit() {
        let r = dmax_over_ppt(&max_entangled::<f64>(2), 1, &ProgramOptions::default()).unwrap();
        assert!((r.bits - 1.0).abs() < 1e-5, "{}", r.bits);
        assert_eq!(r.relaxation, Some(Relaxation::Ppt));
    }

    #[test]
    fn product_state_is_zero() {
        let a = random_state::<f64>(&[2], 1);
        let b = random_state::<f64>(&[3], 2);
        let rho = Density::new(kron(a.matrix(), b.matrix()), vec![2, 3]).unwrap();
        let r = dmax_over_ppt(&rho, 1, &ProgramOptions::default()).unwrap();
        assert_eq!(r.bits, 0.0);
        let r = dmax_over_ppt(&rho, 1, &forced()).unwrap();
        assert!(r.bits.abs() < 1e-6, "{}", r.bits);
    }

    #[test]
    fn bmax_ppt_identity_is_one_bit() {
        let r = bmax_ppt(&identity_channel::<f64>(2), &ProgramOptions::default()).unwrap();
        assert!((r.bits - 1.0).abs() < 1e-5, "{}", r.bits);
        let dep = depolarizing::<f64>(2, 0.9).unwrap();
        assert_eq!(bmax_ppt(&dep, &ProgramOptions::default()).unwrap().bits, 0.0);
        assert!(bmax_ppt(&dep, &forced()).unwrap().bits.abs() < 1e-6);
    }

    #[test]
    fn diamond_identity_and_transpose() {
        let id = identity_channel::<f64>(2);
        for opts in [ProgramOptions::default(), forced()] {
            let r = diamond_norm(id.matrix(), 2, 2, &opts).unwrap();
            assert!((r.diag_f64("value").unwrap() - 1.0).abs() < 1e-6);
            let t = partial_transpose(id.matrix(), &[2, 2], &[1]).unwrap();
            let r = diamond_norm(&t, 2, 2, &opts).unwrap();
            assert!((r.diag_f64("value").unwrap() - 2.0).abs() < 1e-5, "{r:?}");
        }
    }

    #[test]
    fn diamond_ipm_between_feasible_points() {
        // a Hermiticity-preserving difference of channels
        let a = crate::channels::random_channel::<f64>(2, 2, 2, 3);
        let b = crate::channels::random_channel::<f64>(2, 2, 2, 4);
        let diff = a.matrix() - b.matrix();
        let r = diamond_norm(&diff, 2, 2, &forced()).unwrap();
        let v = r.diag_f64("value").unwrap();
        assert!(v >= r.diag_f64("lower").unwrap() - 1e-7 && v <= r.diag_f64("upper").unwrap() + 1e-7);
    }
}
