use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitize, kron, CMatrix, HermitianEigen, C64};

use super::FockSpace;

/// Tolerance on trace and positivity when validating a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Levels per mode spanned by [`DensityMatrix::random_state`].
pub const RANDOM_SUPPORT_LEVELS: usize = 6;

/// Weight of the full-rank thermal admixture used by [`DensityMatrix::regularize`].
pub const REGULARIZATION_WEIGHT: f64 = 1e-3;

/// Mean photon number of that admixture.
pub const REGULARIZATION_PHOTONS: f64 = 0.5;

/// Density matrix on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    space: FockSpace,
    mat: CMatrix,
    label: String,
}

impl DensityMatrix {
    /// Validates hermiticity (after symmetrization), unit trace and positivity.
    pub fn new(space: &FockSpace, mat: CMatrix) -> Result<Self> {
        if mat.nrows() != space.dim() || mat.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: mat.nrows(),
            });
        }
        let mat = hermitize(&mat);
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::TraceDrift { drift: tr - 1.0 });
        }
        let min_eigenvalue = HermitianEigen::new(&mat).min();
        if min_eigenvalue < -STATE_TOL {
            return Err(Error::domain(format!(
                "density matrix has eigenvalue {min_eigenvalue:e}"
            )));
        }
        Ok(Self::from_parts(space.clone(), mat, "custom"))
    }

    pub(crate) fn from_parts(space: FockSpace, mat: CMatrix, label: impl Into<String>) -> Self {
        DensityMatrix {
            space,
            mat,
            label: label.into(),
        }
    }

    /// `|ψ⟩⟨ψ|` for a non-zero vector, normalized.
    pub fn from_pure(space: &FockSpace, psi: &DVector<C64>) -> Result<Self> {
        if psi.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: psi.len(),
            });
        }
        let norm = psi.norm();
        if !(norm > 0.0) {
            return Err(Error::domain("zero state vector"));
        }
        let v = psi / c(norm);
        Ok(Self::from_parts(space.clone(), &v * v.adjoint(), "pure"))
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Population of the top Fock level, per mode.
    pub fn tail_mass(&self) -> Vec<f64> {
        let top = self.space.cutoff() - 1;
        (0..self.space.modes())
            .map(|mode| {
                (0..self.space.dim())
                    .filter(|&i| self.space.occupation(i, mode) == top)
                    .map(|i| self.mat[(i, i)].re)
                    .sum()
            })
            .collect()
    }

    pub fn max_tail_mass(&self) -> f64 {
        self.tail_mass().into_iter().fold(0.0, f64::max)
    }

    /// Errors if the top-level population of any mode exceeds the space's budget.
    pub fn ensure_within_budget(&self) -> Result<()> {
        let tail = self.max_tail_mass();
        if tail > self.space.budget() {
            return Err(Error::TruncationBudgetExceeded {
                tail,
                budget: self.space.budget(),
            });
        }
        Ok(())
    }

    /// `self ⊗ other`; both factors must share a cutoff.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.space.cutoff() != other.space.cutoff() {
            return Err(Error::DimensionMismatch {
                expected: self.space.cutoff(),
                got: other.space.cutoff(),
            });
        }
        let space = self.space.with_modes(self.space.modes() + other.space.modes())?;
        let label = format!("{}*{}", self.label, other.label);
        Ok(Self::from_parts(space, kron(&self.mat, &other.mat), label))
    }

    /// `(1 − p) self + p other`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        self.space.ensure_same(&other.space)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("mixing weight {p} not in [0,1]")));
        }
        let mat = &self.mat * c(1.0 - p) + &other.mat * c(p);
        Ok(Self::from_parts(self.space.clone(), mat, self.label.clone()))
    }

    /// Zero-pads into a space with a larger cutoff.
    pub fn embed(&self, cutoff: usize) -> Result<DensityMatrix> {
        if cutoff < self.space.cutoff() {
            return Err(Error::domain(format!(
                "cannot embed cutoff {} into {cutoff}",
                self.space.cutoff()
            )));
        }
        let target = self.space.with_cutoff(cutoff)?;
        let n = self.space.modes();
        let map: Vec<usize> = (0..self.space.dim())
            .map(|i| {
                (0..n).fold(0, |acc, m| acc * cutoff + self.space.occupation(i, m))
            })
            .collect();
        let mut mat = CMatrix::zeros(target.dim(), target.dim());
        for (r, &tr) in map.iter().enumerate() {
            for (col, &tc) in map.iter().enumerate() {
                mat[(tr, tc)] = self.mat[(r, col)];
            }
        }
        Ok(Self::from_parts(target, mat, self.label.clone()))
    }

    /// Keeps the levels below `cutoff` and renormalizes; errors if the discarded
    /// population exceeds the target space's budget.
    pub fn truncate(&self, cutoff: usize) -> Result<DensityMatrix> {
        if cutoff > self.space.cutoff() {
            return self.embed(cutoff);
        }
        let target = self.space.with_cutoff(cutoff)?;
        let n = self.space.modes();
        let kept: Vec<usize> = (0..self.space.dim())
            .filter(|&i| (0..n).all(|m| self.space.occupation(i, m) < cutoff))
            .collect();
        let mut mat = CMatrix::from_fn(kept.len(), kept.len(), |r, col| {
            self.mat[(kept[r], kept[col])]
        });
        let kept_trace = mat.trace().re;
        let discarded = self.trace() - kept_trace;
        if discarded > target.budget() {
            return Err(Error::TruncationBudgetExceeded {
                tail: discarded,
                budget: target.budget(),
            });
        }
        mat /= c(kept_trace);
        Ok(Self::from_parts(target, mat, self.label.clone()))
    }

    pub fn vacuum(space: &FockSpace) -> DensityMatrix {
        let mut mat = CMatrix::zeros(space.dim(), space.dim());
        mat[(0, 0)] = c(1.0);
        Self::from_parts(space.clone(), mat, "vacuum")
    }

    /// Product of thermal states with `mean_photon` photons per mode.
    pub fn thermal(space: &FockSpace, mean_photon: f64) -> Result<DensityMatrix> {
        if !(mean_photon >= 0.0) {
            return Err(Error::domain(format!("mean photon number {mean_photon} < 0")));
        }
        let d = space.cutoff();
        let ratio = mean_photon / (mean_photon + 1.0);
        // top-level population after renormalization
        let top = (1.0 - ratio) * ratio.powi(d as i32 - 1) / (1.0 - ratio.powi(d as i32));
        if top > space.budget() {
            return Err(Error::TruncationBudgetExceeded {
                tail: top,
                budget: space.budget(),
            });
        }
        let mut pops: Vec<f64> = (0..d).map(|k| ratio.powi(k as i32)).collect();
        let z: f64 = pops.iter().sum();
        pops.iter_mut().for_each(|p| *p /= z);
        let mat = CMatrix::from_fn(space.dim(), space.dim(), |r, col| {
            if r != col {
                return c(0.0);
            }
            c((0..space.modes())
                .map(|m| pops[space.occupation(r, m)])
                .product())
        });
        Ok(Self::from_parts(space.clone(), mat, format!("thermal({mean_photon})")))
    }

    /// Product of coherent states `|α_j⟩`, with mean `(√2 Re α_j, √2 Im α_j)` in mode `j`.
    pub fn coherent(space: &FockSpace, alpha: &[C64]) -> Result<DensityMatrix> {
        let psi = product_vector(space, alpha, coherent_amplitudes)?;
        let amplitudes: Vec<String> = alpha.iter().map(|a| format!("{}{:+}i", a.re, a.im)).collect();
        Ok(Self::from_pure(space, &psi)?.with_label(format!("coherent({})", amplitudes.join(","))))
    }

    /// Basis state with the given occupation per mode.
    pub fn number_state(space: &FockSpace, occupations: &[usize]) -> Result<DensityMatrix> {
        let idx = space.index(occupations)?;
        let mut mat = CMatrix::zeros(space.dim(), space.dim());
        mat[(idx, idx)] = c(1.0);
        Ok(Self::from_parts(space.clone(), mat, format!("fock{occupations:?}")))
    }

    /// `|k⟩` in every mode.
    pub fn fock(space: &FockSpace, k: usize) -> Result<DensityMatrix> {
        Ok(Self::number_state(space, &vec![k; space.modes()])?.with_label(format!("fock({k})")))
    }

    /// Cat state `∝ |α⟩ + e^{iφ}|−α⟩` in every mode.
    pub fn cat(space: &FockSpace, alpha: C64, phase: f64) -> Result<DensityMatrix> {
        let one = |space: &FockSpace, a: C64| -> Result<DVector<C64>> {
            let plus = coherent_amplitudes(space, a)?;
            let minus = coherent_amplitudes(space, -a)?;
            let v = plus + minus * C64::from_polar(1.0, phase);
            if v.norm() < 1e-12 {
                return Err(Error::domain("cat superposition vanishes"));
            }
            Ok(v)
        };
        let psi = product_vector(space, &vec![alpha; space.modes()], one)?;
        Ok(Self::from_pure(space, &psi)?.with_label(format!("cat({alpha},{phase})")))
    }

    /// Translated thermal state: thermal with `mean_photon` per mode and mean `xi`.
    pub fn displaced_thermal(
        space: &FockSpace,
        mean_photon: f64,
        xi: &[f64],
    ) -> Result<DensityMatrix> {
        let wide = space.with_cutoff(space.cutoff() + 16)?.with_budget(1.0);
        let base = Self::thermal(&wide, mean_photon)?;
        let moved = super::translate(&base, xi)?.truncate(space.cutoff())?;
        let state = Self::from_parts(space.clone(), moved.mat, format!("displaced_thermal({mean_photon})"));
        state.ensure_within_budget()?;
        Ok(state)
    }

    /// Haar-random rank-`rank` mixed state supported on the lowest
    /// [`RANDOM_SUPPORT_LEVELS`] levels of every mode; deterministic per seed.
    pub fn random_state(space: &FockSpace, seed: u64, rank: usize) -> Result<DensityMatrix> {
        Self::random_state_with_support(space, seed, rank, RANDOM_SUPPORT_LEVELS)
    }

    /// Partial trace of a Haar-random pure state on `support ⊗ C^rank`, where the support is the
    /// lowest `levels` levels of every mode. No budget check: with `levels == cutoff` the top
    /// level is populated.
    pub fn random_state_with_support(
        space: &FockSpace,
        seed: u64,
        rank: usize,
        levels: usize,
    ) -> Result<DensityMatrix> {
        let levels = levels.min(space.cutoff());
        let support: Vec<usize> = (0..space.dim())
            .filter(|&i| (0..space.modes()).all(|m| space.occupation(i, m) < levels))
            .collect();
        if rank == 0 || rank > support.len() {
            return Err(Error::domain(format!(
                "rank {rank} not in 1..={}",
                support.len()
            )));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut g = CMatrix::zeros(space.dim(), rank);
        for col in 0..rank {
            for &row in &support {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                g[(row, col)] = C64::new(re, im);
            }
        }
        let mut mat = &g * g.adjoint();
        let tr = mat.trace();
        mat /= tr;
        Ok(Self::from_parts(space.clone(), hermitize(&mat), format!("random({seed},{rank})")))
    }

    /// Random state mixed with a thermal state so that it has full rank.
    pub fn random_full_rank(space: &FockSpace, seed: u64, rank: usize) -> Result<DensityMatrix> {
        let label = format!("random_full_rank({seed},{rank})");
        Ok(Self::random_state(space, seed, rank)?
            .regularize(REGULARIZATION_WEIGHT)?
            .with_label(label))
    }

    /// `(1 − ε) ρ + ε · thermal(0.5)`.
    pub fn regularize(&self, weight: f64) -> Result<DensityMatrix> {
        let thermal = Self::thermal(&self.space.with_budget(1.0), REGULARIZATION_PHOTONS)?;
        let thermal = Self::from_parts(self.space.clone(), thermal.mat, "thermal");
        self.mix(&thermal, weight)
    }
}

/// Fock amplitudes of `|α⟩` truncated to the cutoff and renormalized.
pub(crate) fn coherent_amplitudes(space: &FockSpace, alpha: C64) -> Result<DVector<C64>> {
    let d = space.cutoff();
    let mut v = DVector::zeros(d);
    let mut amp = C64::from_polar((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for k in 0..d {
        v[k] = amp;
        amp *= alpha / (k as f64 + 1.0).sqrt();
    }
    let top = v[d - 1].norm_sqr() / v.norm_squared();
    if top > space.budget() {
        return Err(Error::TruncationBudgetExceeded {
            tail: top,
            budget: space.budget(),
        });
    }
    Ok(v)
}

fn product_vector<T: Copy>(
    space: &FockSpace,
    params: &[T],
    factor: impl Fn(&FockSpace, T) -> Result<DVector<C64>>,
) -> Result<DVector<C64>> {
    if params.len() != space.modes() {
        return Err(Error::DimensionMismatch {
            expected: space.modes(),
            got: params.len(),
        });
    }
    let mut psi = DVector::from_element(1, c(1.0));
    for &p in params {
        psi = psi.kronecker(&factor(space, p)?);
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn thermal_populations_and_budget() {
        let space = FockSpace::new(1, 40).unwrap();
        let rho = DensityMatrix::thermal(&space, 1.0).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-14);
        assert!((rho.matrix()[(1, 1)].re / rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);
        let small = FockSpace::new(1, 8).unwrap();
        assert!(matches!(
            DensityMatrix::thermal(&small, 2.0),
            Err(Error::TruncationBudgetExceeded { .. })
        ));
        let vac = DensityMatrix::thermal(&small, 0.0).unwrap();
        assert!(max_abs(&(vac.matrix() - DensityMatrix::vacuum(&small).matrix())) < 1e-15);
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        let space = FockSpace::new(2, 6).unwrap();
        let coh = DensityMatrix::coherent(&space, &[c(0.0), c(0.0)]).unwrap();
        assert!(max_abs(&(coh.matrix() - DensityMatrix::vacuum(&space).matrix())) < 1e-15);
    }

    #[test]
    fn fock_zero_is_vacuum_and_tensor_orders_modes() {
        let space = FockSpace::new(1, 4).unwrap();
        assert!(max_abs(
            &(DensityMatrix::fock(&space, 0).unwrap().matrix() - DensityMatrix::vacuum(&space).matrix())
        ) < 1e-15);
        let one = DensityMatrix::fock(&space, 1).unwrap();
        let zero = DensityMatrix::vacuum(&space);
        let both = one.tensor(&zero).unwrap();
        let idx = both.space().index(&[1, 0]).unwrap();
        assert_eq!(both.matrix()[(idx, idx)], c(1.0));
        assert!(DensityMatrix::fock(&space, 4).is_err());
    }

    #[test]
    fn random_states_are_valid_and_deterministic() {
        let space = FockSpace::new(1, 10).unwrap();
        let a = DensityMatrix::random_state(&space, 7, 3).unwrap();
        let b = DensityMatrix::random_state(&space, 7, 3).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert!(DensityMatrix::new(&space, a.matrix().clone()).is_ok());
        let eig = HermitianEigen::new(a.matrix());
        let nonzero = eig.values.iter().filter(|&&v| v > 1e-10).count();
        assert_eq!(nonzero, 3);
        let full = DensityMatrix::random_full_rank(&space, 7, 3).unwrap();
        assert!(HermitianEigen::new(full.matrix()).min() > 1e-12);
        assert!(DensityMatrix::random_state(&space, 7, 0).is_err());
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let space = FockSpace::new(1, 3).unwrap();
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(0.5);
        assert!(DensityMatrix::new(&space, m.clone()).is_err());
        m[(1, 1)] = c(0.7);
        m[(2, 2)] = c(-0.2);
        assert!(DensityMatrix::new(&space, m).is_err());
    }

    #[test]
    fn embed_then_truncate_roundtrips() {
        let space = FockSpace::new(2, 4).unwrap();
        let rho = DensityMatrix::random_state_with_support(&space, 1, 2, 3).unwrap();
        let back = rho.embed(7).unwrap().truncate(4).unwrap();
        assert!(max_abs(&(back.matrix() - rho.matrix())) < 1e-15);
    }
}
