//! Standard-form SDP data: `min/max <C, X>` s.t. `<A_i, X> = b_i`, `X >= 0`
//! block diagonal and real symmetric.
//!
//! Data matrices are stored sparsely as upper-triangle triplets
//! `(block, i, j, v)` with `i <= j`, meaning `A_ij = A_ji = v`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, MatrixJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

/// Symmetric block matrix in upper-triangle triplet form.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, usize, f64)>,
}

impl SparseSym {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `v` to `A_ij` (and `A_ji`).
    pub fn add(&mut self, block: usize, i: usize, j: usize, v: f64) {
        if v != 0.0 {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            self.entries.push((block, i, j, v));
        }
    }

    /// Merges duplicate positions and drops zeros.
    pub fn compact(&mut self) {
        self.entries.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        let mut out: Vec<(usize, usize, usize, f64)> = Vec::with_capacity(self.entries.len());
        for &e in &self.entries {
            match out.last_mut() {
                Some(last) if (last.0, last.1, last.2) == (e.0, e.1, e.2) => last.3 += e.3,
                _ => out.push(e),
            }
        }
        out.retain(|e| e.3 != 0.0);
        self.entries = out;
    }

    /// `<A, X>` for dense symmetric blocks.
    pub fn dot(&self, x: &[Vec<f64>], blocks: &[usize]) -> f64 {
        self.entries
            .iter()
            .map(|&(b, i, j, v)| {
                let n = blocks[b];
                if i == j {
                    v * x[b][i * n + i]
                } else {
                    v * (x[b][i * n + j] + x[b][j * n + i])
                }
            })
            .sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, i, j, v)| if i == j { v * v } else { 2.0 * v * v })
            .sum()
    }
}

/// Standard-form SDP.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    pub blocks: Vec<usize>,
    pub c: SparseSym,
    pub a: Vec<SparseSym>,
    pub b: Vec<f64>,
    pub sense: Sense,
}

impl SdpProblem {
    pub fn new(sense: Sense) -> Self {
        Self {
            blocks: Vec::new(),
            c: SparseSym::new(),
            a: Vec::new(),
            b: Vec::new(),
            sense,
        }
    }

    pub fn add_block(&mut self, n: usize) -> usize {
        self.blocks.push(n);
        self.blocks.len() - 1
    }

    pub fn add_constraint(&mut self, mut a: SparseSym, b: f64) {
        a.compact();
        self.a.push(a);
        self.b.push(b);
    }

    pub fn num_constraints(&self) -> usize {
        self.a.len()
    }

    /// Checks indices against the block structure.
    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.b.len() {
            return Err(Error::Dimension(format!(
                "{} constraint matrices for {} right-hand sides",
                self.a.len(),
                self.b.len()
            )));
        }
        for (k, m) in std::iter::once(&self.c).chain(&self.a).enumerate() {
            for &(blk, i, j, v) in &m.entries {
                if blk >= self.blocks.len() || j >= self.blocks[blk] || i > j || !v.is_finite() {
                    return Err(Error::Dimension(format!(
                        "data matrix {k} has an invalid entry ({blk}, {i}, {j}, {v})"
                    )));
                }
            }
        }
        if self.b.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &n in &self.blocks {
            off.push(acc);
            acc += n;
        }
        off
    }

    fn sparse_to_json(&self, m: &SparseSym) -> MatrixJson {
        let total: usize = self.blocks.iter().sum();
        let off = self.offsets();
        let mut dense = CMatrix::<f64>::zeros(total, total);
        for &(b, i, j, v) in &m.entries {
            let (r, c) = (off[b] + i, off[b] + j);
            dense[(r, c)].re += v;
            if r != c {
                dense[(c, r)].re += v;
            }
        }
        MatrixJson::from_matrix(&dense)
    }

    fn sparse_from_json(&self, json: &MatrixJson) -> Result<SparseSym> {
        let dense: CMatrix<f64> = json.to_matrix()?;
        let total: usize = self.blocks.iter().sum();
        if dense.rows() != total || dense.cols() != total {
            return Err(Error::Dimension(format!(
                "data matrix is {}x{}, blocks sum to {total}",
                dense.rows(),
                dense.cols()
            )));
        }
        let off = self.offsets();
        let block_of = |r: usize| off.iter().rposition(|&o| o <= r).expect("offset 0 exists");
        let mut out = SparseSym::new();
        for r in 0..total {
            for c in 0..total {
                let v = dense[(r, c)];
                if v.im.abs() > 1e-10 || (v.re - dense[(c, r)].re).abs() > 1e-10 {
                    return Err(Error::NotHermitian((v.re - dense[(c, r)].re).abs().max(v.im.abs())));
                }
                if v.re == 0.0 || c < r {
                    continue;
                }
                let (br, bc) = (block_of(r), block_of(c));
                if br != bc {
                    return Err(Error::Dimension(format!("entry ({r}, {c}) lies outside the blocks")));
                }
                out.add(br, r - off[br], c - off[br], v.re);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SdpProblemJson {
        SdpProblemJson {
            blocks: self.blocks.clone(),
            c: self.sparse_to_json(&self.c),
            a: self.a.iter().map(|m| self.sparse_to_json(m)).collect(),
            b: self.b.clone(),
            sense: self.sense,
        }
    }

    pub fn from_json(json: &SdpProblemJson) -> Result<Self> {
        let mut p = Self::new(json.sense);
        p.blocks = json.blocks.clone();
        p.c = p.sparse_from_json(&json.c)?;
        if json.a.len() != json.b.len() {
            return Err(Error::Dimension("A and b differ in length".into()));
        }
        for (a, &b) in json.a.iter().zip(&json.b) {
            let m = p.sparse_from_json(a)?;
            p.add_constraint(m, b);
        }
        p.validate()?;
        Ok(p)
    }
}

/// `{"blocks": [...], "C": matrixJSON, "A": [matrixJSON...], "b": [...], "sense": "min"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdpProblemJson {
    pub blocks: Vec<usize>,
    #[serde(rename = "C")]
    pub c: MatrixJson,
    #[serde(rename = "A")]
    pub a: Vec<MatrixJson>,
    pub b: Vec<f64>,
    pub sense: Sense,
}

/// A complex Hermitian `n x n` variable `X = H(Z)` carried by a real
/// symmetric `2n x 2n` block `Z`, with
/// `H(Z) = ((Z11 + Z22) + i (Z21 - Z12)) / 2`.
#[derive(Clone, Copy, Debug)]
pub struct HermVar {
    pub block: usize,
    pub n: usize,
}

impl HermVar {
    pub fn new(problem: &mut SdpProblem, n: usize) -> Self {
        Self {
            block: problem.add_block(2 * n),
            n,
        }
    }

    /// Adds `coef * Re X_ab` to the linear form `m`.
    pub fn re(&self, m: &mut SparseSym, a: usize, b: usize, coef: f64) {
        let n = self.n;
        if a == b {
            m.add(self.block, a, a, 0.5 * coef);
            m.add(self.block, n + a, n + a, 0.5 * coef);
        } else {
            m.add(self.block, a, b, 0.25 * coef);
            m.add(self.block, n + a, n + b, 0.25 * coef);
        }
    }

    /// Adds `coef * Im X_ab` to the linear form `m`.
    pub fn im(&self, m: &mut SparseSym, a: usize, b: usize, coef: f64) {
        if a == b {
            return;
        }
        let (a, b, coef) = if a < b { (a, b, coef) } else { (b, a, -coef) };
        let n = self.n;
        // Im X_ab = (Z_{n+a, b} - Z_{a, n+b}) / 2
        m.add(self.block, b, n + a, 0.25 * coef);
        m.add(self.block, a, n + b, -0.25 * coef);
    }

    /// Adds `Re tr(H X)` for Hermitian `H`.
    pub fn inner(&self, m: &mut SparseSym, h: &CMatrix<f64>) {
        for a in 0..self.n {
            for b in 0..self.n {
                let z = h[(b, a)];
                // Re(h_ba X_ab) = Re h_ba Re X_ab - Im h_ba Im X_ab
                if z.re != 0.0 {
                    self.re(m, a, b, z.re);
                }
                if z.im != 0.0 {
                    self.im(m, a, b, -z.im);
                }
            }
        }
    }

    pub fn trace(&self, m: &mut SparseSym, coef: f64) {
        for a in 0..self.n {
            self.re(m, a, a, coef);
        }
    }

    /// Reads `H(Z)` off a dense solution block.
    pub fn extract(&self, z: &[f64]) -> CMatrix<f64> {
        let n = self.n;
        let w = 2 * n;
        CMatrix::from_fn(n, n, |a, b| {
            let re = 0.5 * (z[a * w + b] + z[(n + a) * w + n + b]);
            let im = 0.5 * (z[(n + a) * w + b] - z[a * w + n + b]);
            num_complex::Complex::new(re, im)
        })
    }
}

/// Real parts first (`a <= b`), then imaginary parts (`a < b`): the `n^2`
/// real coordinates of an `n x n` Hermitian matrix.
pub fn hermitian_coordinates(n: usize) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in a..n {
            out.push((a, b, false));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            out.push((a, b, true));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut p = SdpProblem::new(Sense::Min);
        let b0 = p.add_block(2);
        let b1 = p.add_block(1);
        p.c.add(b0, 0, 0, 1.0);
        p.c.add(b1, 0, 0, 2.0);
        let mut a = SparseSym::new();
        a.add(b0, 0, 1, 0.5);
        a.add(b1, 0, 0, 1.0);
        p.add_constraint(a, 3.0);
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back = SdpProblem::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn hermitian_forms_match_trace() {
        use num_complex::Complex;
        // H(Z) for Z = embed(X) equals X, and <form, Z> = Re tr(H X)
        let mut p = SdpProblem::new(Sense::Min);
        let v = HermVar::new(&mut p, 2);
        let mut x = CMatrix::<f64>::zeros(2, 2);
        x[(0, 0)] = Complex::new(0.7, 0.0);
        x[(1, 1)] = Complex::new(0.3, 0.0);
        x[(0, 1)] = Complex::new(0.1, 0.2);
        x[(1, 0)] = Complex::new(0.1, -0.2);
        let mut h = CMatrix::<f64>::zeros(2, 2);
        h[(0, 1)] = Complex::new(0.4, -1.5);
        h[(1, 0)] = Complex::new(0.4, 1.5);
        h[(0, 0)] = Complex::new(2.0, 0.0);
        let z = super::super::embed_hermitian(&x).unwrap();
        let zv = z.data;
        assert!(v.extract(&zv).max_abs_diff(&x) < 1e-15);
        let mut m = SparseSym::new();
        v.inner(&mut m, &h);
        let got = m.dot(&[zv], &p.blocks);
        let want = (&h * &x).trace().re;
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }
}
