use crate::error::{Error, Result};
use crate::fock::{clamped_log, relative_entropy, DensityMatrix, LOG_CLAMP};
use crate::linalg::{CMatrix, HermitianEigen};

use super::{Direction, TranslationFamily};

/// Largest `Σ |H_ij|² p_i` over pairs linking a resolved eigenvalue `p_i` to a clamped one.
///
/// Clamping misstates each such term by at most `|H_ij|² p_i` times a log ratio of a few tens,
/// so this bounds the absolute error near `1e-5`. Integrated states carry noise of order the
/// integrator tolerance in their far tail, which lands in this band.
pub const RANK_LEAKAGE_TOL: f64 = 1e-7;

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 5e-3;

/// Accepted range of finite-difference steps.
pub const STEP_RANGE: (f64, f64) = (1e-4, 1e-1);

/// Eigendecomposition of `ρ` with clamped logarithms, shared by all directions.
#[derive(Debug, Clone)]
pub struct FisherEvaluator {
    state: DensityMatrix,
    eigen: HermitianEigen,
    logs: Vec<f64>,
}

impl FisherEvaluator {
    pub fn new(rho: &DensityMatrix) -> Self {
        let eigen = HermitianEigen::new(rho.matrix());
        let logs = eigen.values.iter().map(|&p| clamped_log(p)).collect();
        FisherEvaluator {
            state: rho.clone(),
            eigen,
            logs,
        }
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    /// `tr(ρ [H, [H, ln ρ]]) = Σ_ij |H_ij|² (p_i − p_j)(ln p_i − ln p_j)` in the eigenbasis of `ρ`.
    ///
    /// Errors with [`Error::RankDeficient`] when `H` couples populated eigenvectors to ones whose
    /// eigenvalue is below the logarithm clamp, where the quantity is not resolved.
    pub fn generator_value(&self, generator: &CMatrix) -> Result<f64> {
        let v = &self.eigen.vectors;
        let rotated = v.adjoint() * generator * v;
        let p = &self.eigen.values;
        let n = p.len();
        let mut total = 0.0;
        let mut leakage = 0.0;
        for i in 0..n {
            for j in 0..n {
                let w = rotated[(i, j)].norm_sqr();
                total += w * (p[i] - p[j]) * (self.logs[i] - self.logs[j]);
                if p[i] >= LOG_CLAMP && p[j] < LOG_CLAMP {
                    leakage += w * p[i];
                }
            }
        }
        if leakage > RANK_LEAKAGE_TOL {
            return Err(Error::RankDeficient { leakage });
        }
        Ok(total)
    }

    pub fn directional(&self, direction: Direction) -> Result<f64> {
        let family = TranslationFamily::new(&self.state, direction)?;
        self.generator_value(family.generator())
    }

    /// Sum over all `2n` phase-space directions.
    pub fn total(&self) -> Result<f64> {
        Direction::all(self.state.space().modes())
            .into_iter()
            .map(|d| self.directional(d))
            .sum()
    }
}

/// Fisher information of the translation family along `direction`, by the commutator formula.
pub fn fisher_directional_commutator(rho: &DensityMatrix, direction: Direction) -> Result<f64> {
    FisherEvaluator::new(rho).directional(direction)
}

/// Total phase-space Fisher information `J(ρ)`.
pub fn fisher_total(rho: &DensityMatrix) -> Result<f64> {
    FisherEvaluator::new(rho).total()
}

fn check_step(h: f64) -> Result<()> {
    if !(h >= STEP_RANGE.0 && h <= STEP_RANGE.1) {
        return Err(Error::StepTooLarge { step: h });
    }
    Ok(())
}

/// Finite-difference samples of a divergence curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondDifference {
    /// Richardson-extrapolated second derivative at 0.
    pub value: f64,
    /// Central second difference at step `h`.
    pub coarse: f64,
    /// Central second difference at step `h/2`.
    pub fine: f64,
    /// Central first difference at step `h`.
    pub slope: f64,
    /// Smallest divergence seen among the samples.
    pub min_divergence: f64,
}

/// Second derivative at `θ = 0` of `θ ↦ S(ρ(0) ‖ ρ(θ))` for an arbitrary family, from central
/// differences at `h` and `h/2` with one Richardson step. Every member is decomposed
/// independently.
pub fn second_difference<F>(family: F, h: f64) -> Result<SecondDifference>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    check_step(h)?;
    let base = family(0.0)?;
    let f = |theta: f64| -> Result<f64> { relative_entropy(&base, &family(theta)?) };
    let f0 = f(0.0)?;
    let (fp, fm) = (f(h)?, f(-h)?);
    let (fp2, fm2) = (f(0.5 * h)?, f(-0.5 * h)?);
    let coarse = (fp - 2.0 * f0 + fm) / (h * h);
    let fine = (fp2 - 2.0 * f0 + fm2) / (0.25 * h * h);
    Ok(SecondDifference {
        value: fine + (fine - coarse) / 3.0,
        coarse,
        fine,
        slope: (fp - fm) / (2.0 * h),
        min_divergence: [fp, fm, fp2, fm2].into_iter().fold(f64::INFINITY, f64::min),
    })
}

fn translated(family: &TranslationFamily, theta: f64) -> Result<DensityMatrix> {
    let member = family.at(theta);
    let tail = member.max_tail_mass();
    if tail > member.space().budget() {
        return Err(Error::StepTooLarge { step: theta });
    }
    Ok(member)
}

/// Finite-difference oracle for the directional Fisher information, with the same resolution
/// requirement as the commutator formula.
pub fn fisher_directional_fd(rho: &DensityMatrix, direction: Direction, h: f64) -> Result<f64> {
    Ok(fisher_directional_fd_detail(rho, direction, h)?.value)
}

pub fn fisher_directional_fd_detail(
    rho: &DensityMatrix,
    direction: Direction,
    h: f64,
) -> Result<SecondDifference> {
    check_step(h)?;
    let family = TranslationFamily::new(rho, direction)?;
    FisherEvaluator::new(rho).generator_value(family.generator())?;
    second_difference(|theta| translated(&family, theta), h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;

    #[test]
    fn thermal_directional_value() {
        let space = FockSpace::new(1, 40).unwrap();
        for n in [0.5, 1.0, 2.0] {
            let cutoff = if n > 1.5 { 64 } else { 40 };
            let space = FockSpace::new(1, cutoff).unwrap();
            let rho = DensityMatrix::thermal(&space, n).unwrap();
            let beta = ((n + 1.0) / n).ln();
            for d in Direction::all(1) {
                assert!((fisher_directional_commutator(&rho, d).unwrap() - beta).abs() < 1e-6);
            }
        }
        let rho = DensityMatrix::thermal(&space, 1.0).unwrap();
        let fd = fisher_directional_fd(&rho, Direction::Q(0), 1e-2).unwrap();
        assert!((fd - 2f64.ln()).abs() < 1e-4);
        assert!((fisher_total(&rho).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn maximally_mixed_state_has_no_information_in_the_interior() {
        let space = FockSpace::new(1, 12).unwrap().with_budget(1.0);
        let mat = CMatrix::identity(12, 12) / crate::linalg::c(12.0);
        let rho = DensityMatrix::new(&space, mat).unwrap();
        assert!(fisher_total(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn first_difference_vanishes_and_divergence_is_positive() {
        let space = FockSpace::new(1, 24).unwrap();
        let rho = DensityMatrix::random_full_rank(&space, 3, 2).unwrap();
        let d = fisher_directional_fd_detail(&rho, Direction::P(0), 1e-3).unwrap();
        assert!(d.slope.abs() < 1e-6, "{}", d.slope);
        let d = fisher_directional_fd_detail(&rho, Direction::P(0), DEFAULT_STEP).unwrap();
        assert!(d.min_divergence >= 0.0);
        let exact = fisher_directional_commutator(&rho, Direction::P(0)).unwrap();
        assert!((d.value - exact).abs() <= (1e-3 * exact).max(1e-6));
    }

    #[test]
    fn rank_deficient_states_are_refused() {
        let space = FockSpace::new(1, 12).unwrap();
        let one = DensityMatrix::fock(&space, 1).unwrap();
        assert!(matches!(
            fisher_total(&one),
            Err(Error::RankDeficient { .. })
        ));
        assert!(fisher_total(&one.regularize(1e-3).unwrap()).is_ok());
    }

    #[test]
    fn step_range_is_enforced() {
        let space = FockSpace::new(1, 24).unwrap();
        let rho = DensityMatrix::thermal(&space, 0.5).unwrap();
        assert!(matches!(
            fisher_directional_fd(&rho, Direction::Q(0), 0.5),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn additive_over_products() {
        // Joint spectra span the product of both ranges, so keep each factor well conditioned.
        let space = FockSpace::new(1, 6).unwrap().with_budget(1.0);
        let a = DensityMatrix::random_state(&space, 8, 6).unwrap();
        let b = DensityMatrix::random_state(&space, 9, 6).unwrap();
        let joint = a.tensor(&b).unwrap();
        let sum = fisher_total(&a).unwrap() + fisher_total(&b).unwrap();
        assert!((fisher_total(&joint).unwrap() - sum).abs() < 1e-8 * sum);
    }
}
