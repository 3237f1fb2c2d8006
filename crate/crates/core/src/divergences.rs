//! Sandwiched Rényi divergences, the max-relative entropy and the
//! `sigma`-weighted norms. All values are in bits.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, herm_eigvals, power_from_eig, psd_eig, CMatrix, HermitianEig};
use crate::scalar::Real;
use crate::states::Density;

/// Threshold on `||(1 - P_sigma) rho (1 - P_sigma)||_inf` above which the
/// support condition counts as violated.
pub const SUPPORT_VIOLATION: f64 = 1e-9;

/// Agreement required between the two `D_max` characterizations, in bits.
pub const DMAX_CROSS_CHECK: f64 = 1e-8;

/// Extended nonnegative real: a finite value or `+inf`, kept as a tag.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtReal<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> ExtReal<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    /// `self <= other + slack`, with `+inf <= +inf`.
    pub fn le_with(&self, other: &Self, slack: T) -> bool {
        match (self, other) {
            (_, ExtReal::Infinite) => true,
            (ExtReal::Infinite, ExtReal::Finite(_)) => false,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => *a <= *b + slack,
        }
    }
}

impl<T: Real> Add for ExtReal<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinite,
        }
    }
}

impl<T: Real> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => write!(f, "+inf"),
        }
    }
}

/// Order parameter in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Alpha {
    One,
    Finite(f64),
    Infinity,
}

impl Alpha {
    /// `1` and `inf` map to the endpoint variants; anything below 1 is rejected.
    pub fn new(a: f64) -> Result<Self> {
        if a.is_nan() || a < 1.0 {
            return Err(Error::InvalidParameter(format!("alpha = {a} must lie in [1, inf]")));
        }
        Ok(if a == 1.0 {
            Alpha::One
        } else if a.is_infinite() {
            Alpha::Infinity
        } else {
            Alpha::Finite(a)
        })
    }

    pub fn value(&self) -> f64 {
        match *self {
            Alpha::One => 1.0,
            Alpha::Finite(a) => a,
            Alpha::Infinity => f64::INFINITY,
        }
    }
}

impl FromStr for Alpha {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(Alpha::Infinity),
            other => {
                let a: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse alpha '{s}'")))?;
                Alpha::new(a)
            }
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::One => write!(f, "1"),
            Alpha::Finite(a) => write!(f, "{a}"),
            Alpha::Infinity => write!(f, "inf"),
        }
    }
}

/// Divergence value in bits together with its order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceValue<T> {
    pub alpha: Alpha,
    pub bits: ExtReal<T>,
}

impl<T: Real> DivergenceValue<T> {
    pub fn is_finite(&self) -> bool {
        self.bits.is_finite()
    }

    pub fn finite(&self) -> Option<T> {
        self.bits.finite()
    }

    pub fn to_json(&self) -> DivergenceJson {
        DivergenceJson {
            alpha: match self.alpha {
                Alpha::Infinity => serde_json::Value::from("inf"),
                a => serde_json::Value::from(a.value()),
            },
            bits: self.finite().map(|v| v.as_f64()),
            finite: self.is_finite(),
        }
    }
}

/// `{"alpha": 2, "bits": x, "finite": true}`; `bits` is null when infinite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivergenceJson {
    pub alpha: serde_json::Value,
    pub bits: Option<f64>,
    pub finite: bool,
}

fn check_pair<T: Real>(rho: &Density<T>, sigma: &Density<T>) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "rho is {}-dimensional, sigma {}-dimensional",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// Eigenvectors of `sigma` spanning its support, as columns.
fn support_basis<T: Real>(eig: &HermitianEig<T>) -> Vec<usize> {
    let lmax = eig.max();
    let thresh = T::support_cutoff() * lmax;
    (0..eig.eigenvalues.len()).filter(|&k| eig.eigenvalues[k] > thresh).collect()
}

/// `V^dagger X V` restricted to the eigenvector columns `cols`.
fn compress<T: Real>(x: &CMatrix<T>, v: &CMatrix<T>, cols: &[usize]) -> CMatrix<T> {
    let n = x.rows();
    let sel = CMatrix::from_fn(n, cols.len(), |i, k| v[(i, cols[k])]);
    &(&sel.dagger() * x) * &sel
}

/// `||(1 - P_sigma) rho (1 - P_sigma)||_inf`.
fn off_support_weight<T: Real>(rho: &CMatrix<T>, eig: &HermitianEig<T>) -> Result<T> {
    let keep = support_basis(eig);
    let kernel: Vec<usize> = (0..eig.eigenvalues.len()).filter(|k| !keep.contains(k)).collect();
    if kernel.is_empty() {
        return Ok(T::zero());
    }
    let c = compress(rho, &eig.eigenvectors, &kernel).hermitian_part();
    let vals = herm_eigvals(&c)?;
    Ok(vals.iter().fold(T::zero(), |acc, v| acc.max(v.abs())))
}

fn support_violated<T: Real>(rho: &CMatrix<T>, sigma_eig: &HermitianEig<T>) -> Result<bool> {
    Ok(off_support_weight(rho, sigma_eig)? > T::lit(SUPPORT_VIOLATION))
}

fn clamp_bits<T: Real>(v: T) -> T {
    v.max(T::zero())
}

/// Umegaki relative entropy `tr rho (log rho - log sigma)` in bits.
pub fn relative_entropy<T: Real>(rho: &Density<T>, sigma: &Density<T>) -> Result<DivergenceValue<T>> {
    check_pair(rho, sigma)?;
    let se = psd_eig(sigma.matrix())?;
    let infinite = DivergenceValue {
        alpha: Alpha::One,
        bits: ExtReal::Infinite,
    };
    if support_violated(rho.matrix(), &se)? {
        return Ok(infinite);
    }
    let re = psd_eig(rho.matrix())?;
    let rcut = T::support_cutoff() * re.max();
    let neg_entropy: T = re
        .eigenvalues
        .iter()
        .filter(|&&l| l > rcut)
        .map(|&l| l * l.log2())
        .sum();
    let keep = support_basis(&se);
    let diag = compress(rho.matrix(), &se.eigenvectors, &keep);
    let cross: T = keep
        .iter()
        .enumerate()
        .map(|(k, &j)| diag[(k, k)].re * se.eigenvalues[j].log2())
        .sum();
    Ok(DivergenceValue {
        alpha: Alpha::One,
        bits: ExtReal::Finite(clamp_bits(neg_entropy - cross)),
    })
}

/// Sandwiched Rényi divergence for `alpha` in `(1, inf)`.
pub fn sandwiched_renyi<T: Real>(rho: &Density<T>, sigma: &Density<T>, alpha: f64) -> Result<DivergenceValue<T>> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sandwiched_renyi needs alpha in (1, inf), got {alpha}"
        )));
    }
    check_pair(rho, sigma)?;
    let se = psd_eig(sigma.matrix())?;
    let tag = Alpha::Finite(alpha);
    if support_violated(rho.matrix(), &se)? {
        return Ok(DivergenceValue {
            alpha: tag,
            bits: ExtReal::Infinite,
        });
    }
    let a = T::lit(alpha);
    let s = power_from_eig(&se, (T::one() - a) / (T::lit(2.0) * a), T::support_cutoff());
    let q = (&(&s * rho.matrix()) * &s).hermitian_part();
    let tr: T = herm_eigvals(&q)?
        .into_iter()
        .map(|l| l.max(T::zero()).powf(a))
        .sum();
    Ok(DivergenceValue {
        alpha: tag,
        bits: ExtReal::Finite(clamp_bits(tr.log2() / (a - T::one()))),
    })
}

/// Cholesky-based PSD test of a Hermitian matrix.
fn cholesky_psd<T: Real>(m: &CMatrix<T>) -> bool {
    let n = m.rows();
    let mut l = m.clone();
    for j in 0..n {
        let mut d = l[(j, j)].re;
        for k in 0..j {
            d = d - l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= T::zero() {
            return false;
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex::new(dj, T::zero());
        for i in j + 1..n {
            let mut s = l[(i, j)];
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    true
}

/// `D_max` from both characterizations:
/// `log lambda_max(sigma^{-1/2} rho sigma^{-1/2})` and a bisection for the
/// least `t = 2^lambda` with `rho <= t sigma` on the support of `sigma`.
/// Returns `(spectral, bisection)` in bits.
fn dmax_routes<T: Real>(rho: &CMatrix<T>, se: &HermitianEig<T>) -> Result<(T, T)> {
    let inv_sqrt = power_from_eig(se, T::lit(-0.5), T::support_cutoff());
    let sand = (&(&inv_sqrt * rho) * &inv_sqrt).hermitian_part();
    let lmax = *herm_eigvals(&sand)?.last().expect("nonempty");
    let spectral = clamp_bits(lmax.log2());

    let keep = support_basis(se);
    let r = compress(rho, &se.eigenvectors, &keep).hermitian_part();
    let mu: Vec<T> = keep.iter().map(|&j| se.eigenvalues[j]).collect();
    let feasible = |t: T| {
        let mut m = r.scale(-T::one());
        for (k, &u) in mu.iter().enumerate() {
            m[(k, k)] = m[(k, k)] + Complex::new(t * u, T::zero());
        }
        cholesky_psd(&m)
    };
    // bracket in t, then bisect in lambda = log2 t
    let mut lo = T::zero();
    let mut hi = T::one();
    let mut guard = 0;
    while !feasible(hi.exp2()) {
        lo = hi;
        hi = hi + hi;
        guard += 1;
        if guard > 12 {
            return Err(Error::NoConvergence("D_max bisection bracket".into()));
        }
    }
    if feasible(T::one()) {
        hi = T::zero();
    }
    for _ in 0..80 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid.exp2()) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((spectral, clamp_bits(hi)))
}

/// Max-relative entropy; both characterizations are computed and must agree.
pub fn d_max<T: Real>(rho: &Density<T>, sigma: &Density<T>) -> Result<DivergenceValue<T>> {
    check_pair(rho, sigma)?;
    d_max_operator(rho.matrix(), sigma.matrix())
}

/// [`d_max`] for a PSD operator `rho` that need not be normalized.
pub fn d_max_operator<T: Real>(rho: &CMatrix<T>, sigma: &CMatrix<T>) -> Result<DivergenceValue<T>> {
    let se = psd_eig(sigma)?;
    if support_violated(rho, &se)? {
        return Ok(DivergenceValue {
            alpha: Alpha::Infinity,
            bits: ExtReal::Infinite,
        });
    }
    let (spectral, bisect) = dmax_routes(rho, &se)?;
    // the bisection resolves lambda to the Cholesky decision boundary
    let tol = T::lit(DMAX_CROSS_CHECK).max(T::check_tol() * T::lit(10.0));
    if (spectral - bisect).abs() > tol {
        return Err(Error::CrossCheck(format!(
            "D_max spectral value {} vs bisection value {}",
            spectral, bisect
        )));
    }
    Ok(DivergenceValue {
        alpha: Alpha::Infinity,
        bits: ExtReal::Finite(spectral),
    })
}

/// `D_alpha` routed by order: relative entropy at 1, `D_max` at infinity.
pub fn divergence<T: Real>(rho: &Density<T>, sigma: &Density<T>, alpha: Alpha) -> Result<DivergenceValue<T>> {
    match alpha {
        Alpha::One => relative_entropy(rho, sigma),
        Alpha::Finite(a) => sandwiched_renyi(rho, sigma, a),
        Alpha::Infinity => d_max(rho, sigma),
    }
}

/// `||X||_{alpha, sigma} = tr[|sigma^{1/(2 alpha)} X sigma^{1/(2 alpha)}|^alpha]^{1/alpha}`.
pub fn weighted_norm<T: Real>(x: &CMatrix<T>, sigma: &Density<T>, alpha: T) -> Result<T> {
    if alpha < T::one() {
        return Err(Error::InvalidParameter(format!("weighted norm needs alpha >= 1, got {alpha}")));
    }
    if x.rows() != sigma.dim() || !x.is_square() {
        return Err(Error::Dimension("operator and weight differ in dimension".into()));
    }
    let se = psd_eig(sigma.matrix())?;
    let s = power_from_eig(&se, T::one() / (T::lit(2.0) * alpha), T::support_cutoff());
    let y = &(&s * x) * &s;
    let svals: Vec<T> = if y.is_hermitian(T::check_tol()) {
        herm_eigvals(&y.hermitian_part())?.into_iter().map(T::abs).collect()
    } else {
        herm_eigvals(&(&y.dagger() * &y))?
            .into_iter()
            .map(|l| l.max(T::zero()).sqrt())
            .collect()
    };
    let sum: T = svals.into_iter().map(|v| v.powf(alpha)).sum();
    Ok(sum.powf(T::one() / alpha))
}

/// `Gamma_sigma(X) = sigma^{1/2} X sigma^{1/2}`, or its pseudo-inverse.
pub fn gamma_map<T: Real>(sigma: &Density<T>, x: &CMatrix<T>, inverse: bool) -> Result<CMatrix<T>> {
    if x.rows() != sigma.dim() || !x.is_square() {
        return Err(Error::Dimension("operator and sigma differ in dimension".into()));
    }
    let se = herm_eig(sigma.matrix())?;
    let p = if inverse { T::lit(-0.5) } else { T::lit(0.5) };
    let s = power_from_eig(&se, p, T::support_cutoff());
    Ok(&(&s * x) * &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{max_entangled, random_state};

    fn diag(v: &[f64]) -> Density<f64> {
        Density::from_matrix(CMatrix::from_real_diag(v)).unwrap()
    }

    #[test]
    fn classical_values() {
        let r = diag(&[0.5, 0.5]);
        let s = diag(&[0.25, 0.75]);
        let d1 = relative_entropy(&r, &s).unwrap().finite().unwrap();
        let want = 0.5 * 2f64.log2() + 0.5 * (2.0f64 / 3.0).log2();
        assert!((d1 - want).abs() < 1e-12);
        let d2 = sandwiched_renyi(&r, &s, 2.0).unwrap().finite().unwrap();
        assert!((d2 - (4.0f64 / 3.0).log2()).abs() < 1e-12);
        let pure = diag(&[1.0, 0.0]);
        let d = relative_entropy(&pure, &diag(&[0.5, 0.5])).unwrap().finite().unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_divergence_is_zero() {
        let r = random_state::<f64>(&[3], 1);
        for a in [Alpha::One, Alpha::Finite(2.0), Alpha::Infinity] {
            let v = divergence(&r, &r, a).unwrap().finite().unwrap();
            assert!(v.abs() < 1e-9, "{a}: {v}");
        }
    }

    #[test]
    fn dmax_examples() {
        let w = max_entangled::<f64>(2);
        let mixed = Density::new(CMatrix::identity(4).scale(0.25), vec![2, 2]).unwrap();
        let v = d_max(&w, &mixed).unwrap().finite().unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        let z = diag(&[1.0, 0.0]);
        let o = diag(&[0.0, 1.0]);
        assert!(!d_max(&z, &o).unwrap().is_finite());
        assert!(!relative_entropy(&z, &o).unwrap().is_finite());
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!("inf".parse::<Alpha>().unwrap(), Alpha::Infinity);
        assert_eq!("1".parse::<Alpha>().unwrap(), Alpha::One);
        assert_eq!("2.5".parse::<Alpha>().unwrap(), Alpha::Finite(2.5));
        assert!("0.5".parse::<Alpha>().is_err());
        assert!(sandwiched_renyi(&diag(&[1.0]), &diag(&[1.0]), 1.0).is_err());
    }

    #[test]
    fn weighted_norm_basics() {
        let s = random_state::<f64>(&[3], 4);
        let i = CMatrix::identity(3);
        assert!((weighted_norm(&i, &s, 2.0).unwrap() - 1.0).abs() < 1e-12);
        let x = random_state::<f64>(&[3], 5).into_matrix();
        let a = weighted_norm(&x, &s, 3.0).unwrap();
        let b = weighted_norm(&x.scale(2.0), &s, 3.0).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
    }

    #[test]
    fn gamma_round_trip() {
        let s = random_state::<f64>(&[3], 6);
        let x = random_state::<f64>(&[3], 7).into_matrix();
        let back = gamma_map(&s, &gamma_map(&s, &x, true).unwrap(), false).unwrap();
        assert!(back.max_abs_diff(&x) < 1e-9);
        assert!(gamma_map(&s, &CMatrix::identity(3), false).unwrap().max_abs_diff(s.matrix()) < 1e-12);
    }
}
