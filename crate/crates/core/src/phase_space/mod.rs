//! Exact Gaussian-state calculus on covariance matrices.
//!
//! Quadratures are ordered `R = (Q₁, P₁, …, Qₙ, Pₙ)` with `[Q, P] = i`, and covariance matrices
//! follow the anticommutator convention `γ_kl = tr(ρ {R_k − d_k, R_l − d_l})`, so the vacuum has
//! `γ = I` and physical states satisfy `γ + iJ ⪰ 0`. All entropies are in nats.

mod channels;
pub mod random;
mod spectrum;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{to_complex, HermitianEigen, RMatrix, I};

pub use channels::GaussianChannel;
pub use spectrum::{
    gaussian_entropy, gaussian_fisher, mean_photon, symplectic_eigenvalues, thermal_entropy,
    weak_submajorization_check,
};

/// Tolerance on the minimum eigenvalue of `γ + iJ`.
pub const UNCERTAINTY_TOL: f64 = 1e-10;

/// `J = ⊕ [[0, 1], [−1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    pub modes: usize,
    pub matrix: RMatrix,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let mut matrix = RMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            matrix[(2 * k, 2 * k + 1)] = 1.0;
            matrix[(2 * k + 1, 2 * k)] = -1.0;
        }
        SymplecticForm { modes, matrix }
    }
}

/// Minimum eigenvalue of the Hermitian matrix `m + iJ`.
pub(crate) fn uncertainty_min_eigenvalue(m: &RMatrix) -> f64 {
    let modes = m.nrows() / 2;
    let j = SymplecticForm::new(modes).matrix;
    let h = to_complex(m) + to_complex(&j) * I;
    HermitianEigen::new(&h).min()
}

/// First moments and covariance matrix of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: usize,
    mean: DVector<f64>,
    covariance: RMatrix,
}

impl GaussianState {
    pub fn new(mean: DVector<f64>, covariance: RMatrix) -> Result<Self> {
        Self::with_tolerance(mean, covariance, UNCERTAINTY_TOL)
    }

    /// Like [`GaussianState::new`] with a custom floor for `γ + iJ ⪰ −tol`.
    pub fn with_tolerance(mean: DVector<f64>, covariance: RMatrix, tol: f64) -> Result<Self> {
        let dim = covariance.nrows();
        if dim == 0 || dim % 2 != 0 || covariance.ncols() != dim {
            return Err(Error::domain(format!(
                "covariance must be a non-empty 2n x 2n matrix, got {}x{}",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        if mean.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: mean.len(),
            });
        }
        let covariance = (&covariance + covariance.transpose()) * 0.5;
        let min_eigenvalue = uncertainty_min_eigenvalue(&covariance);
        if min_eigenvalue < -tol {
            return Err(Error::UncertaintyViolation { min_eigenvalue });
        }
        Ok(GaussianState {
            modes: dim / 2,
            mean,
            covariance,
        })
    }

    pub fn vacuum(modes: usize) -> Self {
        GaussianState {
            modes,
            mean: DVector::zeros(2 * modes),
            covariance: RMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Product of identical thermal states with mean photon number `mean_photon` per mode.
    pub fn thermal(modes: usize, mean_photon: f64) -> Result<Self> {
        if !(mean_photon >= 0.0) {
            return Err(Error::domain(format!("mean photon number {mean_photon} < 0")));
        }
        let nu = 2.0 * mean_photon + 1.0;
        Ok(GaussianState {
            modes,
            mean: DVector::zeros(2 * modes),
            covariance: RMatrix::identity(2 * modes, 2 * modes) * nu,
        })
    }

    /// Single-mode squeezed vacuum, `γ = diag(e^{2r}, e^{−2r})`.
    pub fn squeezed_vacuum(r: f64) -> Self {
        GaussianState {
            modes: 1,
            mean: DVector::zeros(2),
            covariance: RMatrix::from_diagonal(&DVector::from_vec(vec![
                (2.0 * r).exp(),
                (-2.0 * r).exp(),
            ])),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &RMatrix {
        &self.covariance
    }

    pub fn with_mean(&self, mean: DVector<f64>) -> Result<Self> {
        if mean.len() != 2 * self.modes {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.modes,
                got: mean.len(),
            });
        }
        Ok(GaussianState {
            mean,
            ..self.clone()
        })
    }

    /// Tensor product: direct sum of moments, `self` first.
    pub fn product(&self, other: &GaussianState) -> GaussianState {
        let a = 2 * self.modes;
        let b = 2 * other.modes;
        let mut covariance = DMatrix::zeros(a + b, a + b);
        covariance.view_mut((0, 0), (a, a)).copy_from(&self.covariance);
        covariance.view_mut((a, a), (b, b)).copy_from(&other.covariance);
        let mean = DVector::from_iterator(
            a + b,
            self.mean.iter().chain(other.mean.iter()).copied(),
        );
        GaussianState {
            modes: self.modes + other.modes,
            mean,
            covariance,
        }
    }

    pub fn entropy(&self) -> Result<f64> {
        gaussian_entropy(self)
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.covariance)
    }

    /// `e^{S/n}`.
    pub fn entropy_power(&self) -> Result<f64> {
        Ok((self.entropy()? / self.modes as f64).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_form_is_antisymmetric_and_squares_to_minus_identity() {
        for n in 1..=3 {
            let j = SymplecticForm::new(n).matrix;
            assert_eq!(j.transpose(), -&j);
            assert_eq!(&j * &j, -RMatrix::identity(2 * n, 2 * n));
        }
    }

    #[test]
    fn rejects_sub_vacuum_covariance() {
        let gamma = RMatrix::identity(2, 2) * 0.5;
        assert!(matches!(
            GaussianState::new(DVector::zeros(2), gamma),
            Err(Error::UncertaintyViolation { .. })
        ));
    }

    #[test]
    fn symmetrizes_on_construction() {
        let gamma = RMatrix::from_row_slice(2, 2, &[2.0, 0.1, 0.3, 2.0]);
        let s = GaussianState::new(DVector::zeros(2), gamma).unwrap();
        assert_eq!(s.covariance()[(0, 1)], s.covariance()[(1, 0)]);
        assert!((s.covariance()[(0, 1)] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_is_pure() {
        let s = GaussianState::squeezed_vacuum(0.5);
        let nu = s.symplectic_eigenvalues().unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-12);
        assert!(s.entropy().unwrap().abs() < 1e-10);
    }
}
