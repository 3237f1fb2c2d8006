//! Suite bodies. Random instances are drawn sequentially from one seeded
//! stream per suite, so a report is a pure function of its seed.

use num_complex::Complex;
use rand::Rng;

use super::{Case, Provenance, Relation};
use crate::bounds::{
    appendix_dichotomy, appendix_flower_dim, bmax_upper_fixed, emax_fixed_sigma, error_floor, flower_product_sigma,
    flower_reports, h2, nonlockability_value, pbit_capacity_gap, pbit_transposed_choi, transposition_bound,
};
use crate::channels::{diagonal_certificate, flower_channel, identity_channel, pbit_separable_choi, random_channel, Choi};
use crate::divergences::{d_max, divergence, Alpha, DivergenceValue};
use crate::error::Result;
use crate::linalg::{fidelity, herm_eigvals, kron, partial_transpose, trace_norm, CMatrix};
use crate::sdp::{bmax_ppt, diamond_norm, dmax_over_ppt, trace_norm_sdp, ProgramOptions, SolverOptions};
use crate::states::{
    approx_pbit, flower_state, gamma2, haar_unitary, max_entangled, pbit_p, privacy_test, private_state,
    random_pure_with, random_separable, random_state_with, seeded_rng, test_probability, Density,
};

use Provenance::{Derived, Paper, Trivial};
use Relation::{AtLeast, AtMost, Equal};

const ALPHAS_DPT: [Alpha; 4] = [Alpha::Finite(1.3), Alpha::Finite(2.0), Alpha::Finite(5.0), Alpha::Infinity];
const ALPHAS_DPI: [Alpha; 5] = [
    Alpha::One,
    Alpha::Finite(1.3),
    Alpha::Finite(2.0),
    Alpha::Finite(5.0),
    Alpha::Infinity,
];

fn bits(v: DivergenceValue<f64>) -> f64 {
    v.finite().unwrap_or(f64::INFINITY)
}

fn state<R: Rng>(d: usize, pure: bool, rng: &mut R) -> Density<f64> {
    if pure {
        random_pure_with(&[d], rng)
    } else {
        random_state_with(&[d], rng)
    }
}

/// `D_a(P(rho) || sigma) <= D_a(rho || sigma') + D_max(P(sigma') || sigma)`.
pub(super) fn dpt(seed: u64) -> Vec<Case> {
    let mut rng = seeded_rng(seed);
    let mut cases = Vec::with_capacity(500);
    for i in 0..500 {
        let alpha = ALPHAS_DPT[i % 4];
        let d_in: usize = rng.random_range(2..=4);
        let d_out: usize = rng.random_range(2..=4);
        let d_env = rng.random_range(1..=2).max(d_in.div_ceil(d_out));
        let chan = random_channel::<f64>(d_in, d_out, d_env, rng.random());
        let rho = state(d_in, i % 5 == 0, &mut rng);
        let sigma_p = random_state_with(&[d_in], &mut rng);
        let fresh = random_state_with(&[d_out], &mut rng);
        let name = format!("instance {i} ({d_in}->{d_out}, alpha {alpha})");
        let sides = (|| -> Result<(f64, f64)> {
            // every third instance makes the D_max term vanish
            let sigma = if i % 3 == 0 { chan.apply(&sigma_p)? } else { fresh.clone() };
            let lhs = bits(divergence(&chan.apply(&rho)?, &sigma, alpha)?);
            let rhs = bits(divergence(&rho, &sigma_p, alpha)?) + bits(d_max(&chan.apply(&sigma_p)?, &sigma)?);
            Ok((lhs, rhs))
        })();
        cases.push(match sides {
            Ok((lhs, rhs)) => Case::new(name, lhs, AtMost, rhs, 1e-7, Paper),
            Err(e) => Case::errored(name, AtMost, f64::NAN, Paper, &e),
        });
    }
    cases
}

/// `D_a(P(rho) || P(sigma)) <= D_a(rho || sigma)`.
pub(super) fn dpi(seed: u64) -> Vec<Case> {
    let mut rng = seeded_rng(seed);
    let mut cases = Vec::with_capacity(200);
    for i in 0..200 {
        let alpha = ALPHAS_DPI[i % 5];
        let d_in: usize = rng.random_range(2..=4);
        let d_out: usize = rng.random_range(2..=4);
        let d_env = rng.random_range(1..=2).max(d_in.div_ceil(d_out));
        let chan = random_channel::<f64>(d_in, d_out, d_env, rng.random());
        let rho = state(d_in, i % 7 == 0, &mut rng);
        let sigma = random_state_with(&[d_in], &mut rng);
        let name = format!("instance {i} ({d_in}->{d_out}, alpha {alpha})");
        let sides = (|| -> Result<(f64, f64)> {
            let out = bits(divergence(&chan.apply(&rho)?, &chan.apply(&sigma)?, alpha)?);
            Ok((out, bits(divergence(&rho, &sigma, alpha)?)))
        })();
        cases.push(match sides {
            Ok((lhs, rhs)) => Case::new(name, lhs, AtMost, rhs, 1e-7, Derived),
            Err(e) => Case::errored(name, AtMost, f64::NAN, Derived, &e),
        });
    }
    cases
}

/// `D_max(rho1 (x) rho2 || sigma1 (x) sigma2) = D_max(rho1 || sigma1) + D_max(rho2 || sigma2)`.
pub(super) fn dmax_additivity(seed: u64) -> Vec<Case> {
    let mut rng = seeded_rng(seed);
    let mut cases = Vec::with_capacity(100);
    for i in 0..100 {
        let (d1, d2) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let r1 = state(d1, i % 4 == 0, &mut rng);
        let s1 = random_state_with(&[d1], &mut rng);
        let r2 = random_state_with(&[d2], &mut rng);
        let s2 = random_state_with(&[d2], &mut rng);
        let name = format!("instance {i} ({d1}x{d2})");
        let sides = (|| -> Result<(f64, f64)> {
            let joint_r = Density::new(kron(r1.matrix(), r2.matrix()), vec![d1, d2])?;
            let joint_s = Density::new(kron(s1.matrix(), s2.matrix()), vec![d1, d2])?;
            Ok((bits(d_max(&joint_r, &joint_s)?), bits(d_max(&r1, &s1)?) + bits(d_max(&r2, &s2)?)))
        })();
        cases.push(match sides {
            Ok((joint, sum)) => Case::new(name, joint, Equal, sum, 1e-8, Derived),
            Err(e) => Case::errored(name, Equal, f64::NAN, Derived, &e),
        });
    }
    cases
}

/// `D_max(rho_{ABB'} || rho_{AB} (x) 1/d_{B'}) <= 2 log2 d_{B'}`.
pub(super) fn nonlock(seed: u64) -> Vec<Case> {
    const DIMS: [[usize; 3]; 4] = [[2, 2, 2], [2, 3, 2], [3, 2, 2], [2, 2, 3]];
    let mut rng = seeded_rng(seed);
    let mut cases = Vec::with_capacity(203);
    for i in 0..200 {
        let dims = DIMS[i % DIMS.len()];
        let rho = if i % 2 == 0 {
            random_pure_with::<f64, _>(&dims, &mut rng)
        } else {
            random_state_with::<f64, _>(&dims, &mut rng)
        };
        let name = format!("random {i} {dims:?}");
        cases.push(match nonlockability_value(&rho) {
            Ok((v, limit)) => Case::new(name, v, AtMost, limit, 1e-8, Paper),
            Err(e) => Case::errored(name, AtMost, f64::NAN, Paper, &e),
        });
    }
    for d in [2, 3, 4] {
        let name = format!("flower d={d}, B' the qubit");
        let rho = flower_state::<f64>(d).regroup(&[2, 1, 1]);
        let value = rho.and_then(|r| nonlockability_value(&r));
        cases.push(match value {
            Ok((v, limit)) => Case::new(name, v, AtMost, limit, 1e-8, Paper),
            Err(e) => Case::errored(name, AtMost, 2.0, Paper, &e),
        });
    }
    cases
}

/// Key `K = 2` private state with a two-qubit shield and Haar twisting.
fn random_private_state<R: Rng>(rng: &mut R) -> Result<crate::states::PrivateState<f64>> {
    let twisting: Vec<Vec<CMatrix<f64>>> =
        (0..2).map(|_| (0..2).map(|_| haar_unitary::<f64, _>(4, rng)).collect()).collect();
    let shield = random_state_with::<f64, _>(&[2, 2], rng);
    private_state(twisting, shield, 2)
}

/// Privacy tests and the private-communication error floor.
pub(super) fn privacy(seed: u64) -> Vec<Case> {
    let mut rng = seeded_rng(seed);
    let mut cases = Vec::new();
    for i in 0..100 {
        let name = format!("separable {i}: tr(Pi sigma) <= 1/K");
        let value = (|| -> Result<f64> {
            let gamma = random_private_state(&mut rng)?;
            let test = privacy_test(&gamma);
            // separable across A_k A_s : B_k B_s, reordered to A_k B_k A_s B_s
            let (sigma, _) = random_separable::<f64, _>(&[4, 4], 6, &mut rng);
            let sigma = sigma.regroup_to(vec![2, 2, 2, 2]).permute(&[0, 2, 1, 3])?;
            test_probability(&test, &sigma)
        })();
        cases.push(Case::from_result(name, value, AtMost, 0.5, 1e-9, Paper));
    }
    for i in 0..100 {
        let name = format!("state {i}: tr(Pi rho) >= F(rho, gamma)");
        let value = (|| -> Result<(f64, f64)> {
            let gamma = random_private_state(&mut rng)?;
            let test = privacy_test(&gamma);
            let noise = random_state_with::<f64, _>(&[2, 2, 2, 2], &mut rng);
            let t: f64 = rng.random();
            let m = &gamma.state().matrix().scale(t) + &noise.matrix().scale(1.0 - t);
            let rho = Density::new(m, vec![2, 2, 2, 2])?;
            Ok((test_probability(&test, &rho)?, fidelity(rho.matrix(), gamma.state().matrix())?))
        })();
        cases.push(match value {
            Ok((pass, fid)) => Case::new(name, pass, AtLeast, fid, 1e-9, Paper),
            Err(e) => Case::errored(name, AtLeast, f64::NAN, Paper, &e),
        });
    }
    {
        let value = random_private_state(&mut rng)
            .and_then(|g| test_probability(&privacy_test(&g), g.state()));
        cases.push(Case::from_result("private state passes its own test", value, Equal, 1.0, 1e-10, Trivial));
    }
    cases.extend(error_floor_cases());
    cases
}

fn error_floor_cases() -> Vec<Case> {
    let alphas = [Alpha::Finite(1.5), Alpha::Finite(2.0), Alpha::Finite(5.0), Alpha::Infinity];
    let printed = |k: usize, m: usize, e: f64, a: Alpha| -> f64 {
        let factor = match a {
            Alpha::Infinity => 0.5,
            other => (other.value() - 1.0) / (2.0 * other.value()),
        };
        (1.0 - 2f64.powf(-factor * (k as f64 - m as f64 * e))).max(0.0)
    };
    let ulp_tol = |v: f64| 4.0 * f64::EPSILON * v.abs().max(1.0);
    let mut cases = Vec::new();
    for &e in &[0.0, 0.5, 1.0, 2.0] {
        for m in [1usize, 3, 5] {
            let mut prev_k: Option<f64> = None;
            for k in (0..=24).step_by(4) {
                let mut prev_a: Option<f64> = None;
                for a in alphas {
                    let name = format!("error floor k={k} m={m} E={e} alpha={a}");
                    let want = printed(k, m, e, a);
                    let got = error_floor(k, m, e, a);
                    cases.push(Case::from_result(name.clone(), got, Equal, want, ulp_tol(want), Derived));
                    if (k as f64) > m as f64 * e {
                        if let (Some(p), Ok(v)) = (prev_a, error_floor(k, m, e, a)) {
                            cases.push(Case::new(format!("{name}: nondecreasing in alpha"), p, AtMost, v, 0.0, Paper));
                        }
                    }
                    prev_a = error_floor(k, m, e, a).ok();
                }
                let at_inf = error_floor(k, m, e, Alpha::Infinity).unwrap_or(f64::NAN);
                if let Some(p) = prev_k {
                    cases.push(Case::new(
                        format!("error floor k={k} m={m} E={e}: nondecreasing in k"),
                        p,
                        AtMost,
                        at_inf,
                        0.0,
                        Derived,
                    ));
                }
                prev_k = Some(at_inf);
            }
        }
    }
    for k in [8usize, 16] {
        let values: Vec<f64> = [0.0, 0.5, 1.0, 2.0]
            .iter()
            .map(|&e| error_floor(k, 2, e, Alpha::Finite(2.0)).unwrap_or(f64::NAN))
            .collect();
        for w in values.windows(2) {
            cases.push(Case::new(
                format!("error floor k={k} m=2: nonincreasing in m E_max"),
                w[1],
                AtMost,
                w[0],
                0.0,
                Derived,
            ));
        }
    }
    cases
}

/// Flower-state negativity, transposition bound and closed forms.
pub(super) fn flower() -> Vec<Case> {
    let mut cases = Vec::new();
    for d in [2usize, 4, 9] {
        let target = (d as f64).sqrt() + 1.0;
        let rho = flower_state::<f64>(d);
        let neg = rho.partial_transpose(&[2, 3]).and_then(|pt| trace_norm(&pt));
        cases.push(Case::from_result(
            format!("d={d}: ||(rho^f)^T_BB'||_1 = sqrt(d)+1"),
            neg,
            Equal,
            target,
            1e-8,
            Paper,
        ));
        match transposition_bound(&flower_channel(d), &ProgramOptions::default()) {
            Ok(r) => {
                cases.push(Case::new(
                    format!("d={d}: transposition bound >= log2(sqrt(d)+1)"),
                    r.bits,
                    AtLeast,
                    target.log2(),
                    1e-8,
                    Paper,
                ));
                let lneg = r.diag_f64("log_negativity").unwrap_or(f64::NAN);
                cases.push(Case::new(
                    format!("d={d}: diamond norm dominates the Choi negativity"),
                    r.bits,
                    AtLeast,
                    lneg,
                    1e-6,
                    Derived,
                ));
            }
            Err(e) => cases.push(Case::errored(
                format!("d={d}: transposition bound >= log2(sqrt(d)+1)"),
                AtLeast,
                target.log2(),
                Paper,
                &e,
            )),
        }
        match flower_reports(d) {
            Ok(r) => {
                cases.push(Case::new(
                    format!("d={d}: E_sq = 1 + log2(d)/2"),
                    r[0].bits,
                    Equal,
                    1.0 + (d as f64).log2() / 2.0,
                    0.0,
                    Paper,
                ));
                cases.push(Case::new(format!("d={d}: transposition formula"), r[1].bits, Equal, target.log2(), 0.0, Paper));
                cases.push(Case::new(format!("d={d}: E_max upper bound = 2"), r[2].bits, Equal, 2.0, 0.0, Paper));
            }
            Err(e) => cases.push(Case::errored(format!("d={d}: formulas"), Equal, 2.0, Paper, &e)),
        }
    }
    for d in [2usize, 4] {
        let value = flower_product_sigma(d).and_then(|(s, cert)| emax_fixed_sigma(&flower_state(d), &s, &cert));
        cases.push(Case::from_result(
            format!("d={d}: D_max(rho^f || rho^f_AA'B (x) 1/2) <= 2"),
            value.map(|r| r.bits),
            AtMost,
            2.0,
            1e-9,
            Paper,
        ));
    }
    {
        let ppt = flower_state::<f64>(2)
            .regroup(&[2, 2])
            .and_then(|r| dmax_over_ppt(&r, 1, &ProgramOptions::default()));
        cases.push(Case::from_result("d=2: PPT relaxation of E_max <= 2", ppt.map(|r| r.bits), AtMost, 2.0, 1e-6, Derived));
    }
    cases
}

/// Approximate private bits: PPT, closeness to `gamma_2`, repeater bound.
pub(super) fn pbit() -> Vec<Case> {
    let mut cases = Vec::new();
    for d in [4usize, 9] {
        let p = pbit_p::<f64>(d);
        let rho = approx_pbit::<f64>(d);
        let min = rho.partial_transpose(&[2, 3]).and_then(|pt| herm_eigvals(&pt)).map(|v| v[0]);
        cases.push(Case::from_result(format!("d={d}: min eig of rho^T_B'B"), min, AtLeast, 0.0, 1e-10, Paper));

        let dist = gamma2::<f64>(d)
            .state()
            .permute(&[0, 2, 1, 3])
            .and_then(|g| trace_norm(&(rho.matrix() - g.matrix())));
        cases.push(Case::from_result(
            format!("d={d}: ||rho_d - gamma_2||_1 <= 2p(d)"),
            dist,
            AtMost,
            2.0 * p,
            1e-9,
            Paper,
        ));

        match pbit_capacity_gap(d) {
            Ok((lower, upper)) => {
                cases.push(Case::new(
                    format!("d={d}: D_max(rho^T_B'B || C_S) <= log2(1+p)"),
                    upper.bits,
                    AtMost,
                    (1.0 + p).log2(),
                    1e-8,
                    Paper,
                ));
                let h = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
                cases.push(Case::new(format!("d={d}: key rate 1 - h2(p)"), lower.bits, Equal, 1.0 - h, 1e-15, Derived));
                if d == 4 {
                    cases.push(Case::new("d=4: upper bound ~ 0.415 bits", upper.bits, Equal, 0.415, 5e-4, Paper));
                    cases.push(Case::new("d=4: key rate ~ 0.0817 bits", lower.bits, Equal, 0.0817, 5e-5, Derived));
                }
            }
            Err(e) => cases.push(Case::errored(
                format!("d={d}: D_max(rho^T_B'B || C_S) <= log2(1+p)"),
                AtMost,
                (1.0 + p).log2(),
                Paper,
                &e,
            )),
        }
    }
    // trends of the two formulas as d grows
    let ds = [4usize, 9, 16];
    for w in ds.windows(2) {
        let (p0, p1) = (pbit_p::<f64>(w[0]), pbit_p::<f64>(w[1]));
        cases.push(Case::new(format!("key rate increases {} -> {}", w[0], w[1]), 1.0 - h2(p0), AtMost, 1.0 - h2(p1), 0.0, Paper));
        cases.push(Case::new(
            format!("repeater bound decreases {} -> {}", w[0], w[1]),
            (1.0 + p1).log2(),
            AtMost,
            (1.0 + p0).log2(),
            0.0,
            Paper,
        ));
    }
    // the relaxation sits below the certificate
    {
        let value = (|| -> Result<(f64, f64)> {
            let c = pbit_transposed_choi(2)?;
            let (c_s, cert) = pbit_separable_choi::<f64>(2)?;
            let forced = ProgramOptions {
                force_ipm: true,
                ..Default::default()
            };
            Ok((bmax_ppt(&c, &forced)?.bits, bmax_upper_fixed(&c, &c_s, &cert)?.bits))
        })();
        let name = "d=2: PPT relaxation <= fixed C_S value";
        cases.push(match value {
            Ok((lo, hi)) => Case::new(name, lo, AtMost, hi, 1e-6, Derived),
            Err(e) => Case::errored(name, AtMost, f64::NAN, Derived, &e),
        });
    }
    cases
}

/// Closed-form dichotomy table.
pub(super) fn appendix() -> Vec<Case> {
    let mut cases = Vec::new();
    for (n, l) in [(1usize, 1usize), (5, 4), (20, 16)] {
        let (nf, lf) = (n as f64, l as f64);
        let t = match appendix_dichotomy(n, l) {
            Ok(t) => t,
            Err(e) => {
                cases.push(Case::errored(format!("n={n} l={l}"), Equal, f64::NAN, Paper, &e));
                continue;
            }
        };
        let tag = format!("n={n} l={l}");
        cases.push(
            Case::new(
                format!("{tag}: E_R(tau0) lower bound"),
                t.er_tau0_lower,
                Equal,
                nf * (0.5 * (4.0f64 / 3.0).log2() - 0.5),
                1e-12,
                Derived,
            )
            .with_note("the printed bound is negative at epsilon = 1/2"),
        );
        cases.push(Case::new(format!("{tag}: E_R(tau1) <= 2"), t.er_tau1_upper, Equal, 2.0, 0.0, Paper));
        cases.push(Case::new(
            format!("{tag}: E_sq(tau0) upper bound"),
            t.esq_tau0_upper,
            Equal,
            nf * ((lf + 1.0) / lf).log2(),
            1e-12,
            Derived,
        ));
        cases.push(Case::new(
            format!("{tag}: E_sq(tau1)"),
            t.esq_tau1,
            Equal,
            0.5 * (1.0 + nf + nf * lf.log2()),
            1e-12,
            Derived,
        ));
        // tau1 is the flower state of dimension 2^{n-1} l^n
        let dim = appendix_flower_dim(n, l);
        cases.push(Case::new(
            format!("{tag}: E_sq(tau1) matches the flower formula"),
            t.esq_tau1,
            Equal,
            1.0 + 0.5 * dim.log2(),
            1e-12,
            Derived,
        ));
    }
    if let Ok(t) = appendix_dichotomy(20, 16) {
        cases.push(Case::new("n=20 l=16: E_sq(tau1) = 50.5", t.esq_tau1, Equal, 50.5, 0.0, Derived));
        cases.push(Case::new(
            "n=20 l=16: E_sq(tau1) >= 10 E_sq(tau0)",
            t.esq_tau1,
            AtLeast,
            t.ratio * t.esq_tau0_upper,
            0.0,
            Paper,
        ));
    }
    cases
}

/// `min tr M` over the isotropic family `M = a omega + b (1 - omega)` with
/// `M >= omega_d` and `M^{T_B} >= 0`, by grid search in `a` and bisection in
/// `b` using numerical PSD checks.
pub fn isotropic_ppt_trace(d: usize) -> Result<f64> {
    let n = d * d;
    let omega = max_entangled::<f64>(d).into_matrix();
    let rest = &CMatrix::identity(n) - &omega;
    let feasible = |a: f64, b: f64| -> Result<bool> {
        let m = &omega.scale(a) + &rest.scale(b);
        let gap = herm_eigvals(&(&m - &omega))?[0];
        let pt = herm_eigvals(&partial_transpose(&m, &[d, d], &[1])?)?[0];
        Ok(gap >= -1e-13 && pt >= -1e-13)
    };
    let mut best = f64::INFINITY;
    for i in 0..=400 {
        let a = 1.0 + 2.0 * i as f64 / 400.0;
        let (mut lo, mut hi) = (0.0, 2.0 * a);
        if !feasible(a, hi)? {
            continue;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if feasible(a, mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        best = best.min(a + hi * (n - 1) as f64);
    }
    Ok(best)
}

/// Solver outputs against independent oracles.
pub(super) fn sdp_xval(seed: u64) -> Vec<Case> {
    let mut rng = seeded_rng(seed);
    let mut cases = Vec::new();
    let solver = SolverOptions::default();
    let forced = ProgramOptions {
        force_ipm: true,
        ..Default::default()
    };
    for i in 0..50 {
        let n = rng.random_range(2..=4);
        let g = CMatrix::from_fn(n, n, |_, _| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let h = &g + &g.dagger();
        let name = format!("trace norm {i} (n={n})");
        let oracle = trace_norm(&h).unwrap_or(f64::NAN);
        match trace_norm_sdp(&h, &solver) {
            Ok((v, sol)) => {
                cases.push(Case::new(name.clone(), v, Equal, oracle, 1e-6, Derived));
                cases.push(Case::new(
                    format!("{name}: weak duality at termination"),
                    sol.dual_value,
                    AtMost,
                    sol.primal_value,
                    1e-8,
                    Trivial,
                ));
                cases.push(Case::from_result(
                    format!("{name}: primal PSD"),
                    sol.primal_min_eigenvalue(),
                    AtLeast,
                    0.0,
                    1e-8,
                    Trivial,
                ));
            }
            Err(e) => cases.push(Case::errored(name, Equal, oracle, Derived, &e)),
        }
    }
    {
        let h = CMatrix::from_real_diag(&[1.0, -2.0, 0.5]);
        let a = trace_norm_sdp(&h, &solver);
        let b = trace_norm_sdp(&h, &solver);
        let same = match (a, b) {
            (Ok((_, a)), Ok((_, b))) => (a.log == b.log) as u8 as f64,
            _ => 0.0,
        };
        cases.push(Case::new("identical iterates on a repeated solve", same, Equal, 1.0, 0.0, Trivial));
    }
    for d in [2usize, 3] {
        let id = identity_channel::<f64>(d);
        let v = diamond_norm(id.matrix(), d, d, &forced).map(|r| r.diag_f64("value").unwrap_or(f64::NAN));
        cases.push(Case::from_result(format!("diamond norm of id_{d} = 1"), v, Equal, 1.0, 1e-6, Trivial));
    }
    {
        let t = partial_transpose(identity_channel::<f64>(2).matrix(), &[2, 2], &[1]);
        let v = t
            .and_then(|t| diamond_norm(&t, 2, 2, &forced))
            .map(|r| r.diag_f64("value").unwrap_or(f64::NAN));
        cases.push(Case::from_result("diamond norm of the qubit transpose = 2", v, Equal, 2.0, 1e-5, Derived));
    }
    {
        let a = random_state_with::<f64, _>(&[2], &mut rng);
        let b = random_state_with::<f64, _>(&[2], &mut rng);
        let v = Density::new(kron(a.matrix(), b.matrix()), vec![2, 2])
            .and_then(|rho| dmax_over_ppt(&rho, 1, &forced))
            .map(|r| r.bits);
        cases.push(Case::from_result("PPT E_max of a product state = 0", v, Equal, 0.0, 1e-6, Trivial));
    }
    match isotropic_ppt_trace(2) {
        Ok(tr) => {
            let v = dmax_over_ppt(&max_entangled(2), 1, &ProgramOptions::default()).map(|r| r.bits);
            cases.push(Case::from_result("PPT E_max of omega_2 vs isotropic oracle", v, Equal, tr.log2(), 1e-5, Derived));
        }
        Err(e) => cases.push(Case::errored("PPT E_max of omega_2 vs isotropic oracle", Equal, 1.0, Derived, &e)),
    }
    {
        let v = bmax_ppt(&identity_channel(2), &ProgramOptions::default()).map(|r| r.bits);
        cases.push(Case::from_result("PPT B_max of id_2 = 1", v, Equal, 1.0, 1e-5, Derived));
    }
    for i in 0..10 {
        let rho = random_state_with::<f64, _>(&[2, 2], &mut rng);
        let (sigma, cert) = random_separable::<f64, _>(&[2, 2], 4, &mut rng);
        let name = format!("relaxation {i}: PPT E_max <= D_max(rho || separable sigma)");
        let sides = (|| -> Result<(f64, f64)> {
            let lo = dmax_over_ppt(&rho, 1, &ProgramOptions::default())?.bits;
            Ok((lo, emax_fixed_sigma(&rho, &sigma, &cert)?.bits))
        })();
        cases.push(match sides {
            Ok((lo, hi)) => Case::new(name, lo, AtMost, hi, 1e-6, Derived),
            Err(e) => Case::errored(name, AtMost, f64::NAN, Derived, &e),
        });
    }
    for i in 0..5 {
        let c = random_channel::<f64>(2, 2, 2, rng.random());
        let name = format!("sandwich {i}: PPT B_max <= D_max(C_T || 1/4)");
        let sides = (|| -> Result<(f64, f64)> {
            let mixed = CMatrix::identity(4).scale(0.25);
            let cert = diagonal_certificate(&mixed, 2, 2)?;
            let c_s = Choi::new(Density::new(mixed, vec![2, 2])?, 2, 2)?;
            Ok((bmax_ppt(&c, &ProgramOptions::default())?.bits, bmax_upper_fixed(&c, &c_s, &cert)?.bits))
        })();
        cases.push(match sides {
            Ok((lo, hi)) => Case::new(name, lo, AtMost, hi, 1e-6, Derived),
            Err(e) => Case::errored(name, AtMost, f64::NAN, Derived, &e),
        });
    }
    cases
}
