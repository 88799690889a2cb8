use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::fock::{beamsplitter_combine, partial_trace, DensityMatrix};
use crate::linalg::{hermitize, trace_distance, CMatrix, HermitianEigen, C64};

use super::information::{fisher_directional_fd, second_difference, DEFAULT_STEP};
use super::{fisher_total, Direction, FisherEvaluator, TranslationFamily};

/// Tolerance on Fisher-information inequalities.
pub const FISHER_TOL: f64 = 1e-6;

/// Relative tolerance on finite-difference comparisons.
pub const FD_REL_TOL: f64 = 1e-3;

/// Trace-distance tolerance for the translation covariance of the beamsplitter.
pub const TRANSLATION_TOL: f64 = 1e-5;

/// Processing applied to a one-parameter family in the data-processing check.
#[derive(Debug, Clone)]
pub enum Processing {
    Identity,
    /// Beamsplitter with a fixed ancilla in the second port.
    Beamsplitter { lambda: f64, ancilla: DensityMatrix },
    /// Fixed unitary on `state ⊗ ancilla`, then discard the ancilla.
    UnitaryMixing { unitary: CMatrix, ancilla: DensityMatrix },
    /// `(1 − w) ρ + w σ`.
    ConvexMixing { weight: f64, other: DensityMatrix },
    /// Replaces every input by a fixed state.
    Replace { state: DensityMatrix },
}

impl Processing {
    /// Unitary mixing with `exp(iG)` for a Gaussian-random Hermitian `G` of unit entry scale.
    pub fn random_unitary_mixing(ancilla: &DensityMatrix, modes: usize, seed: u64) -> Result<Self> {
        let joint = ancilla.space().with_modes(modes + ancilla.space().modes())?;
        let dim = joint.dim();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut g = CMatrix::zeros(dim, dim);
        for r in 0..dim {
            for col in 0..dim {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                g[(r, col)] = C64::new(re, im);
            }
        }
        let unitary = HermitianEigen::new(&hermitize(&g)).unitary(1.0);
        Ok(Processing::UnitaryMixing {
            unitary,
            ancilla: ancilla.clone(),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Processing::Identity => "identity",
            Processing::Beamsplitter { .. } => "beamsplitter",
            Processing::UnitaryMixing { .. } => "unitary_mixing",
            Processing::ConvexMixing { .. } => "convex_mixing",
            Processing::Replace { .. } => "replace",
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            Processing::Identity => Ok(rho.clone()),
            Processing::Beamsplitter { lambda, ancilla } => beamsplitter_combine(rho, ancilla, *lambda),
            Processing::UnitaryMixing { unitary, ancilla } => {
                let joint = rho.tensor(ancilla)?;
                if unitary.nrows() != joint.space().dim() {
                    return Err(Error::DimensionMismatch {
                        expected: joint.space().dim(),
                        got: unitary.nrows(),
                    });
                }
                let mat = hermitize(&(unitary * joint.matrix() * unitary.adjoint()));
                let mixed = DensityMatrix::from_parts(joint.space().clone(), mat, rho.label().to_string());
                partial_trace(&mixed, rho.space().modes())
            }
            Processing::ConvexMixing { weight, other } => rho.mix(other, *weight),
            Processing::Replace { state } => Ok(state.clone()),
        }
    }
}

/// Commutator formula against the finite-difference oracle along one direction.
pub fn check_fd_agreement(rho: &DensityMatrix, direction: Direction, h: f64) -> Result<CheckReport> {
    let exact = FisherEvaluator::new(rho).directional(direction)?;
    let fd = fisher_directional_fd(rho, direction, h)?;
    let deviation = (fd - exact).abs();
    Ok(CheckReport::new("fisher_fd_agreement", -deviation, (FD_REL_TOL * exact).max(1e-6))
        .input("state", rho.label())
        .input("direction", direction)
        .input("h", h)
        .diag("commutator", exact)
        .diag("finite_difference", fd))
}

/// `J` of the family `θ ↦ ρ^{(cθ)}` against `c²` times the base value, both by finite differences.
pub fn check_reparametrization(rho: &DensityMatrix, direction: Direction, c: f64) -> Result<CheckReport> {
    let family = TranslationFamily::new(rho, direction)?;
    FisherEvaluator::new(rho).generator_value(family.generator())?;
    let base = second_difference(|theta| Ok(family.at(theta)), DEFAULT_STEP)?.value;
    let sped = second_difference(|theta| Ok(family.at(c * theta)), DEFAULT_STEP)?.value;
    let expected = c * c * base;
    let deviation = (sped - expected).abs();
    Ok(CheckReport::new("reparametrization", -deviation, (FD_REL_TOL * expected).max(1e-8))
        .input("state", rho.label())
        .input("direction", direction)
        .input("speed", c)
        .diag("base", base)
        .diag("reparametrized", sped)
        .diag("expected", expected))
}

/// `J(E(ρ^{(θ)})) ≤ J(ρ^{(θ)})` at `θ = 0`, both sides by finite differences.
pub fn check_data_processing(
    rho: &DensityMatrix,
    direction: Direction,
    processing: &Processing,
) -> Result<CheckReport> {
    let family = TranslationFamily::new(rho, direction)?;
    FisherEvaluator::new(rho).generator_value(family.generator())?;
    let input = second_difference(|theta| Ok(family.at(theta)), DEFAULT_STEP)?.value;
    let output = second_difference(|theta| processing.apply(&family.at(theta)), DEFAULT_STEP)?.value;
    Ok(CheckReport::new("data_processing", input - output, FISHER_TOL)
        .input("state", rho.label())
        .input("direction", direction)
        .input("channel", processing.name())
        .diag("fisher_in", input)
        .diag("fisher_out", output))
}

fn check_weights(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("transmissivity {lambda} not in (0,1)")));
    }
    Ok(())
}

struct MixingFisher {
    x: f64,
    y: f64,
    out: f64,
}

fn mixing_fisher(x: &DensityMatrix, y: &DensityMatrix, lambda: f64) -> Result<MixingFisher> {
    check_weights(lambda)?;
    let out = beamsplitter_combine(x, y, lambda)?;
    Ok(MixingFisher {
        x: fisher_total(x)?,
        y: fisher_total(y)?,
        out: fisher_total(&out)?,
    })
}

/// `w² J(E_λ(ρ_X ⊗ ρ_Y)) ≤ w_X² J(ρ_X) + w_Y² J(ρ_Y)` with `w = √λ w_X + √(1−λ) w_Y`.
pub fn check_weighted_convexity(
    x: &DensityMatrix,
    y: &DensityMatrix,
    lambda: f64,
    w_x: f64,
    w_y: f64,
) -> Result<CheckReport> {
    let j = mixing_fisher(x, y, lambda)?;
    let w = lambda.sqrt() * w_x + (1.0 - lambda).sqrt() * w_y;
    let margin = w_x * w_x * j.x + w_y * w_y * j.y - w * w * j.out;
    Ok(CheckReport::new("weighted_convexity", margin, FISHER_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .input("lambda", lambda)
        .input("w_x", w_x)
        .input("w_y", w_y)
        .diag("fisher_x", j.x)
        .diag("fisher_y", j.y)
        .diag("fisher_out", j.out))
}

/// `J(E_λ(ρ_X ⊗ ρ_Y)) ≤ λ J(ρ_X) + (1 − λ) J(ρ_Y)`.
pub fn check_convexity(x: &DensityMatrix, y: &DensityMatrix, lambda: f64) -> Result<CheckReport> {
    let j = mixing_fisher(x, y, lambda)?;
    let margin = lambda * j.x + (1.0 - lambda) * j.y - j.out;
    Ok(CheckReport::new("fisher_convexity", margin, FISHER_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .input("lambda", lambda)
        .diag("fisher_x", j.x)
        .diag("fisher_y", j.y)
        .diag("fisher_out", j.out))
}

/// `2 / J(E_{1/2}(ρ_X ⊗ ρ_Y)) ≥ 1/J(ρ_X) + 1/J(ρ_Y)`.
pub fn check_stam(x: &DensityMatrix, y: &DensityMatrix) -> Result<CheckReport> {
    let j = mixing_fisher(x, y, 0.5)?;
    let margin = 2.0 / j.out - (1.0 / j.x + 1.0 / j.y);
    Ok(CheckReport::new("stam", margin, FISHER_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .diag("fisher_x", j.x)
        .diag("fisher_y", j.y)
        .diag("fisher_out", j.out))
}

/// `E_λ(ρ_X^{(w_X θ)} ⊗ ρ_Y^{(w_Y θ)})` against `E_λ(ρ_X ⊗ ρ_Y)^{(wθ)}`.
#[allow(clippy::too_many_arguments)]
pub fn check_translation_compatibility(
    x: &DensityMatrix,
    y: &DensityMatrix,
    lambda: f64,
    w_x: f64,
    w_y: f64,
    theta: f64,
    direction: Direction,
) -> Result<CheckReport> {
    check_weights(lambda)?;
    let w = lambda.sqrt() * w_x + (1.0 - lambda).sqrt() * w_y;
    let moved_x = TranslationFamily::new(x, direction)?.at(w_x * theta);
    let moved_y = TranslationFamily::new(y, direction)?.at(w_y * theta);
    for s in [&moved_x, &moved_y] {
        if s.max_tail_mass() > s.space().budget() {
            return Err(Error::StepTooLarge { step: theta });
        }
    }
    let lhs = beamsplitter_combine(&moved_x, &moved_y, lambda)?;
    let combined = beamsplitter_combine(x, y, lambda)?;
    let rhs = TranslationFamily::new(&combined, direction)?.at(w * theta);
    let distance = trace_distance(lhs.matrix(), rhs.matrix());
    Ok(CheckReport::new("translation_compatibility", -distance, TRANSLATION_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .input("lambda", lambda)
        .input("w_x", w_x)
        .input("w_y", w_y)
        .input("theta", theta)
        .input("direction", direction)
        .diag("trace_distance", distance))
}
