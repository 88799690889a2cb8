use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, HermitianEigen, C64};

/// Default bound on the population of the top Fock level of any mode.
pub const DEFAULT_BUDGET: f64 = 1e-8;

/// Sparse operator stored as `(row, col, value)` triplets.
#[derive(Debug, Clone)]
pub struct SparseOp {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    pub fn new(dim: usize, entries: Vec<(usize, usize, C64)>) -> Self {
        SparseOp { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn adjoint(&self) -> SparseOp {
        SparseOp {
            dim: self.dim,
            entries: self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> SparseOp {
        SparseOp {
            dim: self.dim,
            entries: self.entries.iter().map(|&(r, c, v)| (r, c, v * s)).collect(),
        }
    }

    pub fn add(&self, other: &SparseOp) -> SparseOp {
        let mut dense = self.to_dense();
        for &(r, c, v) in &other.entries {
            dense[(r, c)] += v;
        }
        SparseOp::from_dense(&dense)
    }

    pub fn from_dense(m: &CMatrix) -> SparseOp {
        let mut entries = Vec::new();
        for col in 0..m.ncols() {
            for row in 0..m.nrows() {
                let v = m[(row, col)];
                if v.norm() != 0.0 {
                    entries.push((row, col, v));
                }
            }
        }
        SparseOp {
            dim: m.nrows(),
            entries,
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// `A · M`
    pub fn apply_left(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, m.ncols());
        for &(r, k, v) in &self.entries {
            for col in 0..m.ncols() {
                out[(r, col)] += v * m[(k, col)];
            }
        }
        out
    }

    /// `M · A`
    pub fn apply_right(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(m.nrows(), self.dim);
        for &(k, col, v) in &self.entries {
            for row in 0..m.nrows() {
                out[(row, col)] += m[(row, k)] * v;
            }
        }
        out
    }

    /// `tr(A M)`
    pub fn trace_with(&self, m: &CMatrix) -> C64 {
        self.entries.iter().map(|&(r, k, v)| v * m[(k, r)]).sum()
    }
}

struct SpaceInner {
    modes: usize,
    cutoff: usize,
    dim: usize,
    budget: f64,
    annihilators: Vec<SparseOp>,
    /// `(Q₁, P₁, …, Qₙ, Pₙ)`
    quadratures: Vec<SparseOp>,
    numbers: Vec<SparseOp>,
    dense_quadratures: OnceLock<Vec<CMatrix>>,
    quadrature_eigen: OnceLock<Vec<HermitianEigen>>,
}

/// Truncated Fock space of `modes` modes with basis `|0⟩ … |cutoff−1⟩` per mode.
///
/// Basis index is `Σ_j k_j · cutoff^{n−1−j}`, i.e. mode 0 is the most significant digit, so
/// tensor products are plain Kronecker products. Operator caches are immutable and shared.
#[derive(Clone)]
pub struct FockSpace(Arc<SpaceInner>);

impl fmt::Debug for FockSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockSpace")
            .field("modes", &self.0.modes)
            .field("cutoff", &self.0.cutoff)
            .field("budget", &self.0.budget)
            .finish()
    }
}

impl PartialEq for FockSpace {
    fn eq(&self, other: &Self) -> bool {
        self.0.modes == other.0.modes && self.0.cutoff == other.0.cutoff
    }
}

impl FockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        Self::with_budget_value(modes, cutoff, DEFAULT_BUDGET)
    }

    fn with_budget_value(modes: usize, cutoff: usize, budget: f64) -> Result<Self> {
        if modes == 0 {
            return Err(Error::domain("a Fock space needs at least one mode"));
        }
        if cutoff < 2 {
            return Err(Error::domain(format!("cutoff {cutoff} < 2")));
        }
        let dim = cutoff
            .checked_pow(modes as u32)
            .filter(|&d| d <= 1 << 14)
            .ok_or_else(|| Error::domain(format!("{cutoff}^{modes} is too large for dense matrices")))?;

        let stride = |mode: usize| cutoff.pow((modes - 1 - mode) as u32);
        let mut annihilators = Vec::with_capacity(modes);
        let mut numbers = Vec::with_capacity(modes);
        for j in 0..modes {
            let s = stride(j);
            let mut a = Vec::new();
            let mut num = Vec::new();
            for idx in 0..dim {
                let k = (idx / s) % cutoff;
                if k > 0 {
                    a.push((idx - s, idx, c((k as f64).sqrt())));
                    num.push((idx, idx, c(k as f64)));
                }
            }
            annihilators.push(SparseOp::new(dim, a));
            numbers.push(SparseOp::new(dim, num));
        }
        let r2 = std::f64::consts::SQRT_2;
        let mut quadratures = Vec::with_capacity(2 * modes);
        for a in &annihilators {
            let ad = a.adjoint();
            quadratures.push(a.add(&ad).scale(c(1.0 / r2)));
            // (a − a†)/(i√2)
            quadratures.push(a.add(&ad.scale(c(-1.0))).scale(C64::new(0.0, -1.0 / r2)));
        }
        Ok(FockSpace(Arc::new(SpaceInner {
            modes,
            cutoff,
            dim,
            budget,
            annihilators,
            quadratures,
            numbers,
            dense_quadratures: OnceLock::new(),
            quadrature_eigen: OnceLock::new(),
        })))
    }

    /// Same space with a different truncation budget.
    pub fn with_budget(&self, budget: f64) -> Self {
        Self::with_budget_value(self.modes(), self.cutoff(), budget)
            .expect("parameters were already validated")
    }

    pub fn modes(&self) -> usize {
        self.0.modes
    }

    pub fn cutoff(&self) -> usize {
        self.0.cutoff
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn budget(&self) -> f64 {
        self.0.budget
    }

    pub fn stride(&self, mode: usize) -> usize {
        self.cutoff().pow((self.modes() - 1 - mode) as u32)
    }

    /// Photon number of `mode` in basis state `index`.
    #[inline]
    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.cutoff()
    }

    pub fn index(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                got: occupations.len(),
            });
        }
        let mut idx = 0;
        for &k in occupations {
            if k >= self.cutoff() {
                return Err(Error::domain(format!(
                    "occupation {k} exceeds cutoff {}",
                    self.cutoff()
                )));
            }
            idx = idx * self.cutoff() + k;
        }
        Ok(idx)
    }

    pub fn annihilator(&self, mode: usize) -> &SparseOp {
        &self.0.annihilators[mode]
    }

    pub fn number(&self, mode: usize) -> &SparseOp {
        &self.0.numbers[mode]
    }

    /// Quadrature `R_k` in the ordering `(Q₁, P₁, …)`.
    pub fn quadrature(&self, k: usize) -> &SparseOp {
        &self.0.quadratures[k]
    }

    pub fn dense_quadrature(&self, k: usize) -> &CMatrix {
        &self
            .0
            .dense_quadratures
            .get_or_init(|| self.0.quadratures.iter().map(SparseOp::to_dense).collect())[k]
    }

    pub fn quadrature_eigen(&self, k: usize) -> &HermitianEigen {
        &self.0.quadrature_eigen.get_or_init(|| {
            (0..2 * self.modes())
                .map(|j| HermitianEigen::new(self.dense_quadrature(j)))
                .collect()
        })[k]
    }

    /// Space with the same cutoff and budget and a different mode count.
    pub fn with_modes(&self, modes: usize) -> Result<Self> {
        Self::with_budget_value(modes, self.cutoff(), self.budget())
    }

    /// Space with the same mode count and budget and a different cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        Self::with_budget_value(self.modes(), cutoff, self.budget())
    }

    pub(crate) fn ensure_same(&self, other: &FockSpace) -> Result<()> {
        if self != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, I};

    #[test]
    fn canonical_commutator_defect_is_confined_to_top_level() {
        let space = FockSpace::new(1, 8).unwrap();
        let q = space.dense_quadrature(0);
        let p = space.dense_quadrature(1);
        let comm = q * p - p * q;
        for k in 0..8 {
            let expected = if k < 7 { I } else { I * (1.0 - 8.0) };
            assert!((comm[(k, k)] - expected).norm() < 1e-12, "k={k}");
        }
        let mut off = comm.clone();
        for k in 0..8 {
            off[(k, k)] = C64::new(0.0, 0.0);
        }
        assert!(max_abs(&off) < 1e-12);
    }

    #[test]
    fn quadratures_are_hermitian() {
        let space = FockSpace::new(2, 4).unwrap();
        for k in 0..4 {
            let r = space.dense_quadrature(k);
            assert!(max_abs(&(r - r.adjoint())) < 1e-15);
        }
    }

    #[test]
    fn index_roundtrip() {
        let space = FockSpace::new(2, 5).unwrap();
        let idx = space.index(&[3, 1]).unwrap();
        assert_eq!(idx, 16);
        assert_eq!(space.occupation(idx, 0), 3);
        assert_eq!(space.occupation(idx, 1), 1);
        assert!(space.index(&[5, 0]).is_err());
    }

    #[test]
    fn sparse_products_match_dense() {
        let space = FockSpace::new(1, 6).unwrap();
        let a = space.annihilator(0);
        let m = CMatrix::from_fn(6, 6, |r, c| C64::new(r as f64, c as f64 * 0.5));
        let dense = a.to_dense();
        assert!(max_abs(&(a.apply_left(&m) - &dense * &m)) < 1e-12);
        assert!(max_abs(&(a.apply_right(&m) - &m * &dense)) < 1e-12);
        assert!((a.trace_with(&m) - (&dense * &m).trace()).norm() < 1e-12);
    }
}
