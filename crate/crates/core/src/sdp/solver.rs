//! Infeasible-start primal-dual interior-point method with the HKM search
//! direction and Mehrotra's predictor-corrector.
//!
//! Internally the problem is `min <C, X>` s.t. `A(X) = b`, `X >= 0`, with dual
//! `max b^T y` s.t. `A^*(y) + Z = C`, `Z >= 0`. Maximization is handled by
//! negating `C`.

use serde::{Deserialize, Serialize};

use super::dense::{cholesky, cholesky_solve, max_step, spd_inverse, sym_eigvals, RMat};
use super::problem::{SdpProblem, Sense, SparseSym};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Relative duality gap `|p - d| / (1 + |p| + |d|)`.
    pub gap_tol: f64,
    /// Relative primal and dual residuals.
    pub feas_tol: f64,
    pub max_iter: usize,
    /// Ratio threshold for the Farkas-type infeasibility tests.
    pub infeas_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-7,
            feas_tol: 1e-8,
            max_iter: 200,
            infeas_tol: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    MaxIter,
}

impl Status {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Status::PrimalInfeasible | Status::DualInfeasible)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iter: usize,
    pub primal: f64,
    pub dual: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub mu: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    /// `<C, X>` in the problem's own sense.
    pub primal_value: f64,
    /// `b^T y` for the matching dual, in the problem's own sense.
    pub dual_value: f64,
    pub primal_matrix: Vec<RMat>,
    pub dual_slack: Vec<RMat>,
    pub dual_vector: Vec<f64>,
    pub gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
    pub status: Status,
    pub log: Vec<IterationLog>,
}

impl SdpSolution {
    /// Smallest eigenvalue over all primal blocks.
    pub fn primal_min_eigenvalue(&self) -> Result<f64> {
        let mut m = f64::INFINITY;
        for x in &self.primal_matrix {
            if x.n > 0 {
                m = m.min(sym_eigvals(x)?[0]);
            }
        }
        Ok(m)
    }
}

struct Data<'a> {
    blocks: &'a [usize],
    c: Vec<RMat>,
    a: &'a [SparseSym],
    b: &'a [f64],
}

fn dense_blocks(m: &SparseSym, blocks: &[usize]) -> Vec<RMat> {
    let mut out: Vec<RMat> = blocks.iter().map(|&n| RMat::zeros(n)).collect();
    for &(blk, i, j, v) in &m.entries {
        let n = blocks[blk];
        out[blk].data[i * n + j] += v;
        if i != j {
            out[blk].data[j * n + i] += v;
        }
    }
    out
}

fn block_data(x: &[RMat]) -> Vec<Vec<f64>> {
    x.iter().map(|m| m.data.clone()).collect()
}

impl Data<'_> {
    fn apply(&self, x: &[RMat]) -> Vec<f64> {
        let xs = block_data(x);
        self.a.iter().map(|a| a.dot(&xs, self.blocks)).collect()
    }

    fn adjoint(&self, y: &[f64]) -> Vec<RMat> {
        let mut out: Vec<RMat> = self.blocks.iter().map(|&n| RMat::zeros(n)).collect();
        for (a, &yi) in self.a.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for &(blk, i, j, v) in &a.entries {
                let n = self.blocks[blk];
                out[blk].data[i * n + j] += yi * v;
                if i != j {
                    out[blk].data[j * n + i] += yi * v;
                }
            }
        }
        out
    }

    /// `M_ij = tr(A_i X A_j W)`.
    fn schur(&self, x: &[RMat], w: &[RMat]) -> Vec<f64> {
        let m = self.a.len();
        let mut out = vec![0.0; m * m];
        let pairs = |p: usize, q: usize| -> ([(usize, usize); 2], usize) {
            if p == q {
                ([(p, p), (p, p)], 1)
            } else {
                ([(p, q), (q, p)], 2)
            }
        };
        for i in 0..m {
            for j in i..m {
                let mut s = 0.0;
                for &(bi, p, q, vi) in &self.a[i].entries {
                    let (pi, ni) = pairs(p, q);
                    for &(bj, s0, t0, vj) in &self.a[j].entries {
                        if bi != bj {
                            continue;
                        }
                        let n = self.blocks[bi];
                        let (xb, wb) = (&x[bi].data, &w[bi].data);
                        let (pj, nj) = pairs(s0, t0);
                        let mut acc = 0.0;
                        for &(a, b) in &pi[..ni] {
                            for &(c, d) in &pj[..nj] {
                                acc += xb[b * n + c] * wb[d * n + a];
                            }
                        }
                        s += vi * vj * acc;
                    }
                }
                out[i * m + j] = s;
                out[j * m + i] = s;
            }
        }
        out
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn blocks_frob(x: &[RMat]) -> f64 {
    x.iter().map(RMat::frobenius_sq).sum::<f64>().sqrt()
}

fn blocks_dot(x: &[RMat], y: &[RMat]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a.dot(b)).sum()
}

fn blocks_step(x: &[RMat], dx: &[RMat]) -> Result<f64> {
    let mut s = f64::INFINITY;
    for (a, d) in x.iter().zip(dx) {
        s = s.min(max_step(a, d)?);
    }
    Ok(s)
}

fn summarize(log: &[IterationLog]) -> String {
    log.iter()
        .rev()
        .take(5)
        .rev()
        .map(|l| {
            format!(
                "it {}: p={:.6e} d={:.6e} pinf={:.1e} dinf={:.1e} mu={:.1e}",
                l.iter, l.primal, l.dual, l.primal_infeasibility, l.dual_infeasibility, l.mu
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Solves a standard-form SDP. Deterministic for fixed input and options.
pub fn solve(problem: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    let blocks = &problem.blocks;
    let sign = match problem.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    let mut c = dense_blocks(&problem.c, blocks);
    for blk in &mut c {
        blk.data.iter_mut().for_each(|v| *v *= sign);
    }
    let data = Data {
        blocks,
        c,
        a: &problem.a,
        b: &problem.b,
    };
    let m = data.a.len();
    let total: usize = blocks.iter().sum();
    let norm_b = norm2(data.b);
    let norm_c = blocks_frob(&data.c);

    // per-block infeasible start, scaled by the data
    let mut x = Vec::with_capacity(blocks.len());
    let mut z = Vec::with_capacity(blocks.len());
    for (k, &n) in blocks.iter().enumerate() {
        let rn = (n as f64).sqrt();
        let mut xi = 10f64.max(rn);
        let mut eta = 10f64.max(rn).max(data.c[k].frobenius_sq().sqrt());
        for (a, &bi) in data.a.iter().zip(data.b) {
            let na: f64 = a
                .entries
                .iter()
                .filter(|e| e.0 == k)
                .map(|&(_, i, j, v)| if i == j { v * v } else { 2.0 * v * v })
                .sum::<f64>()
                .sqrt();
            if na > 0.0 {
                xi = xi.max(rn * (1.0 + bi.abs()) / (1.0 + na));
                eta = eta.max(na);
            }
        }
        x.push(RMat::scaled_identity(n, xi));
        z.push(RMat::scaled_identity(n, eta));
    }
    let mut y = vec![0.0; m];
    let mut log = Vec::new();
    let mut status = Status::MaxIter;
    let mut iterations = 0;
    let (mut pinf, mut dinf);

    loop {
        let ax = data.apply(&x);
        let rp: Vec<f64> = data.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let aty = data.adjoint(&y);
        let rd: Vec<RMat> = (0..blocks.len())
            .map(|k| {
                let mut r = data.c[k].clone();
                r.axpy(-1.0, &aty[k]);
                r.axpy(-1.0, &z[k]);
                r
            })
            .collect();
        let pobj = blocks_dot(&data.c, &x);
        let dobj: f64 = data.b.iter().zip(&y).map(|(b, y)| b * y).sum();
        let mu = if total > 0 { blocks_dot(&x, &z) / total as f64 } else { 0.0 };
        pinf = norm2(&rp) / (1.0 + norm_b);
        dinf = blocks_frob(&rd) / (1.0 + norm_c);
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let (last_ap, last_ad) = log
            .last()
            .map(|l: &IterationLog| (l.step_primal, l.step_dual))
            .unwrap_or((0.0, 0.0));
        log.push(IterationLog {
            iter: iterations,
            primal: sign * pobj,
            dual: sign * dobj,
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
            mu,
            step_primal: last_ap,
            step_dual: last_ad,
        });

        if rel_gap <= opts.gap_tol && pinf <= opts.feas_tol && dinf <= opts.feas_tol {
            status = Status::Optimal;
            break;
        }
        // Farkas-type certificates along the iterates
        if dobj > 0.0 {
            let mut ray = aty.clone();
            for (r, zk) in ray.iter_mut().zip(&z) {
                r.axpy(1.0, zk);
            }
            if blocks_frob(&ray) / dobj <= opts.infeas_tol {
                status = Status::PrimalInfeasible;
                break;
            }
        }
        if pobj < 0.0 && norm2(&ax) / (-pobj) <= opts.infeas_tol {
            status = Status::DualInfeasible;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let mut w = Vec::with_capacity(blocks.len());
        for zk in &z {
            w.push(spd_inverse(zk).ok_or_else(|| {
                Error::Solver(format!("dual slack lost definiteness; {}", summarize(&log)))
            })?);
        }
        let schur = data.schur(&x, &w);
        let l = match cholesky(&schur, m) {
            Some(l) => l,
            None => {
                let dmax = (0..m).map(|i| schur[i * m + i]).fold(0.0, f64::max);
                let mut reg = schur.clone();
                for i in 0..m {
                    reg[i * m + i] += 1e-13 * dmax.max(1.0);
                }
                cholesky(&reg, m).ok_or_else(|| {
                    Error::Solver(format!("Schur complement is singular; {}", summarize(&log)))
                })?
            }
        };
        // X Rd W, shared by both solves
        let xrdw: Vec<RMat> = (0..blocks.len()).map(|k| x[k].matmul(&rd[k]).matmul(&w[k])).collect();
        let a_xrdw = data.apply(&xrdw);

        let direction = |r: &[RMat]| -> (Vec<RMat>, Vec<f64>, Vec<RMat>) {
            let ar = data.apply(r);
            let mut dy: Vec<f64> = (0..m).map(|i| rp[i] - ar[i] + a_xrdw[i]).collect();
            cholesky_solve(&l, m, &mut dy);
            let atdy = data.adjoint(&dy);
            let dz: Vec<RMat> = (0..blocks.len())
                .map(|k| {
                    let mut d = rd[k].clone();
                    d.axpy(-1.0, &atdy[k]);
                    d
                })
                .collect();
            let dx: Vec<RMat> = (0..blocks.len())
                .map(|k| {
                    let mut d = r[k].clone();
                    d.axpy(-1.0, &x[k].matmul(&dz[k]).matmul(&w[k]).sym());
                    d
                })
                .collect();
            (dx, dy, dz)
        };

        // predictor
        let r_aff: Vec<RMat> = x.iter().map(|xk| xk.scale(-1.0)).collect();
        let (dx_a, _, dz_a) = direction(&r_aff);
        let ap = (0.95 * blocks_step(&x, &dx_a)?).min(1.0);
        let ad = (0.95 * blocks_step(&z, &dz_a)?).min(1.0);
        let mut mu_aff = 0.0;
        for k in 0..blocks.len() {
            let mut xa = x[k].clone();
            xa.axpy(ap, &dx_a[k]);
            let mut za = z[k].clone();
            za.axpy(ad, &dz_a[k]);
            mu_aff += xa.dot(&za);
        }
        mu_aff /= total.max(1) as f64;
        let sigma = if mu > 0.0 { (mu_aff / mu).max(0.0).powi(3).min(1.0) } else { 0.0 };

        // corrector
        let r_cor: Vec<RMat> = (0..blocks.len())
            .map(|k| {
                let mut r = w[k].scale(sigma * mu);
                r.axpy(-1.0, &x[k]);
                r.axpy(-1.0, &dx_a[k].matmul(&dz_a[k]).matmul(&w[k]).sym());
                r
            })
            .collect();
        let (dx, dy, dz) = direction(&r_cor);
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let sp = (gamma * blocks_step(&x, &dx)?).min(1.0);
        let sd = (gamma * blocks_step(&z, &dz)?).min(1.0);
        for k in 0..blocks.len() {
            x[k].axpy(sp, &dx[k]);
            z[k].axpy(sd, &dz[k]);
        }
        for (yi, d) in y.iter_mut().zip(&dy) {
            *yi += sd * d;
        }
        if let Some(last) = log.last_mut() {
            last.step_primal = sp;
            last.step_dual = sd;
        }
        if !y.iter().all(|v| v.is_finite()) || x.iter().any(|b| b.data.iter().any(|v| !v.is_finite())) {
            return Err(Error::Solver(format!("non-finite iterate; {}", summarize(&log))));
        }
    }

    let pobj = blocks_dot(&data.c, &x);
    let dobj: f64 = data.b.iter().zip(&y).map(|(b, y)| b * y).sum();
    Ok(SdpSolution {
        primal_value: sign * pobj,
        dual_value: sign * dobj,
        primal_matrix: x,
        dual_slack: z,
        dual_vector: y.iter().map(|v| sign * v).collect(),
        gap: (pobj - dobj).abs(),
        primal_infeasibility: pinf,
        dual_infeasibility: dinf,
        iterations,
        status,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_onto_shifted_cone() {
        // min tr X s.t. X - S = diag(1, 2), X, S >= 0
        let mut p = SdpProblem::new(Sense::Min);
        let bx = p.add_block(2);
        let bs = p.add_block(2);
        for i in 0..2 {
            p.c.add(bx, i, i, 1.0);
        }
        for (i, j, rhs) in [(0, 0, 1.0), (0, 1, 0.0), (1, 1, 2.0)] {
            let mut a = SparseSym::new();
            a.add(bx, i, j, 1.0);
            a.add(bs, i, j, -1.0);
            p.add_constraint(a, rhs);
        }
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.primal_value - 3.0).abs() < 1e-6, "{}", sol.primal_value);
        assert!((sol.primal_value - sol.dual_value).abs() <= 1e-6 * sol.primal_value.abs().max(1.0));
        assert!(sol.primal_min_eigenvalue().unwrap() >= -1e-8);
    }

    #[test]
    fn infeasible_trace() {
        let mut p = SdpProblem::new(Sense::Min);
        let b0 = p.add_block(2);
        let mut a = SparseSym::new();
        a.add(b0, 0, 0, 1.0);
        a.add(b0, 1, 1, 1.0);
        p.add_constraint(a, -1.0);
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::PrimalInfeasible, "{:?}", sol.log.last());
    }

    #[test]
    fn unbounded_primal_is_dual_infeasible() {
        // min -X_00 s.t. X_11 = 1: X_00 can grow without bound
        let mut p = SdpProblem::new(Sense::Min);
        let b0 = p.add_block(2);
        p.c.add(b0, 0, 0, -1.0);
        let mut a = SparseSym::new();
        a.add(b0, 1, 1, 1.0);
        p.add_constraint(a, 1.0);
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::DualInfeasible, "{:?}", sol.log.last());
    }

    #[test]
    fn maximization_sense() {
        // max X_01 * 2 s.t. X_00 = X_11 = 1  -> 2
        let mut p = SdpProblem::new(Sense::Max);
        let b0 = p.add_block(2);
        p.c.add(b0, 0, 1, 1.0);
        for i in 0..2 {
            let mut a = SparseSym::new();
            a.add(b0, i, i, 1.0);
            p.add_constraint(a, 1.0);
        }
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.primal_value - 2.0).abs() < 1e-6);
        assert!((sol.dual_value - 2.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic() {
        let mut p = SdpProblem::new(Sense::Max);
        let b0 = p.add_block(3);
        p.c.add(b0, 0, 2, 1.0);
        p.c.add(b0, 1, 1, 0.5);
        let mut a = SparseSym::new();
        for i in 0..3 {
            a.add(b0, i, i, 1.0);
        }
        p.add_constraint(a, 1.0);
        let s1 = solve(&p, &SolverOptions::default()).unwrap();
        let s2 = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(s1.log, s2.log);
    }
}
