use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{to_complex, HermitianEigen, RMatrix, I};

use super::{GaussianState, SymplecticForm, UNCERTAINTY_TOL};

/// Gaussian channel `(X, Y, ξ)`: `γ ↦ XγXᵀ + Y`, `d ↦ Xd + ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    modes_in: usize,
    modes_out: usize,
    x: RMatrix,
    y: RMatrix,
    xi: DVector<f64>,
}

impl GaussianChannel {
    pub fn new(x: RMatrix, y: RMatrix, xi: DVector<f64>) -> Result<Self> {
        let out = x.nrows();
        let inp = x.ncols();
        if out % 2 != 0 || inp % 2 != 0 || out == 0 || inp == 0 {
            return Err(Error::domain("channel matrices must have even dimensions"));
        }
        if y.nrows() != out || y.ncols() != out {
            return Err(Error::DimensionMismatch {
                expected: out,
                got: y.nrows(),
            });
        }
        if xi.len() != out {
            return Err(Error::DimensionMismatch {
                expected: out,
                got: xi.len(),
            });
        }
        let y = (&y + y.transpose()) * 0.5;
        let j_out = SymplecticForm::new(out / 2).matrix;
        let j_in = SymplecticForm::new(inp / 2).matrix;
        let defect = &j_out - &x * j_in * x.transpose();
        let cp = to_complex(&y) + to_complex(&defect) * I;
        let min = HermitianEigen::new(&cp).min();
        if min < -UNCERTAINTY_TOL {
            return Err(Error::domain(format!(
                "channel is not completely positive (min eigenvalue {min:e})"
            )));
        }
        Ok(GaussianChannel {
            modes_in: inp / 2,
            modes_out: out / 2,
            x,
            y,
            xi,
        })
    }

    pub fn identity(modes: usize) -> Self {
        GaussianChannel {
            modes_in: modes,
            modes_out: modes,
            x: RMatrix::identity(2 * modes, 2 * modes),
            y: RMatrix::zeros(2 * modes, 2 * modes),
            xi: DVector::zeros(2 * modes),
        }
    }

    /// Beamsplitter of transmissivity `λ` acting on `ρ_X ⊗ ρ_Y` (2n modes) and discarding the
    /// second register: `X = (√λ I | √(1−λ) I)`.
    pub fn beamsplitter(lambda: f64, modes: usize) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::domain(format!("transmissivity {lambda} not in (0,1)")));
        }
        let d = 2 * modes;
        let mut x = RMatrix::zeros(d, 2 * d);
        for k in 0..d {
            x[(k, k)] = lambda.sqrt();
            x[(k, d + k)] = (1.0 - lambda).sqrt();
        }
        Ok(GaussianChannel {
            modes_in: 2 * modes,
            modes_out: modes,
            x,
            y: RMatrix::zeros(d, d),
            xi: DVector::zeros(d),
        })
    }

    /// Diffusion semigroup element `e^{tL}`: `γ ↦ γ + tI`.
    pub fn diffusion(t: f64, modes: usize) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("diffusion time {t} < 0")));
        }
        let d = 2 * modes;
        Ok(GaussianChannel {
            modes_in: modes,
            modes_out: modes,
            x: RMatrix::identity(d, d),
            y: RMatrix::identity(d, d) * t,
            xi: DVector::zeros(d),
        })
    }

    /// Phase-space translation `d ↦ d + ξ`.
    pub fn translation(xi: DVector<f64>) -> Result<Self> {
        if xi.len() % 2 != 0 || xi.is_empty() {
            return Err(Error::domain("translation vector must have even length"));
        }
        let d = xi.len();
        Ok(GaussianChannel {
            modes_in: d / 2,
            modes_out: d / 2,
            x: RMatrix::identity(d, d),
            y: RMatrix::zeros(d, d),
            xi,
        })
    }

    pub fn modes_in(&self) -> usize {
        self.modes_in
    }

    pub fn modes_out(&self) -> usize {
        self.modes_out
    }

    pub fn x(&self) -> &RMatrix {
        &self.x
    }

    pub fn y(&self) -> &RMatrix {
        &self.y
    }

    pub fn xi(&self) -> &DVector<f64> {
        &self.xi
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.modes() != self.modes_in {
            return Err(Error::DimensionMismatch {
                expected: self.modes_in,
                got: state.modes(),
            });
        }
        let mean = &self.x * state.mean() + &self.xi;
        let covariance = &self.x * state.covariance() * self.x.transpose() + &self.y;
        GaussianState::new(mean, covariance)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GaussianChannel) -> Result<GaussianChannel> {
        if next.modes_in != self.modes_out {
            return Err(Error::DimensionMismatch {
                expected: self.modes_out,
                got: next.modes_in,
            });
        }
        Ok(GaussianChannel {
            modes_in: self.modes_in,
            modes_out: next.modes_out,
            x: &next.x * &self.x,
            y: &next.x * &self.y * next.x.transpose() + &next.y,
            xi: &next.x * &self.xi + &next.xi,
        })
    }
}
