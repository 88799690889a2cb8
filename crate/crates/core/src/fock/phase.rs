use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{C64, RMatrix};
use crate::phase_space::GaussianState;

use super::{displacement_op, DensityMatrix};

/// Floor on `γ + iJ` accepted from truncated moments.
pub const MOMENT_UNCERTAINTY_TOL: f64 = 1e-6;

/// `χ(ξ) = tr(D(ξ) ρ)`.
pub fn characteristic_fn(rho: &DensityMatrix, xi: &[f64]) -> Result<C64> {
    let d = displacement_op(rho.space(), xi)?;
    Ok((d * rho.matrix()).trace())
}

/// Husimi function `⟨ξ|ρ|ξ⟩ / (2π)^n`, where `|ξ⟩` is the coherent state with mean `ξ`.
pub fn q_function(rho: &DensityMatrix, xi: &[f64]) -> Result<f64> {
    let space = rho.space();
    if xi.len() != 2 * space.modes() {
        return Err(Error::DimensionMismatch {
            expected: 2 * space.modes(),
            got: xi.len(),
        });
    }
    let mut psi = DVector::from_element(1, C64::new(1.0, 0.0));
    for j in 0..space.modes() {
        let alpha = C64::new(xi[2 * j], xi[2 * j + 1]) / std::f64::consts::SQRT_2;
        let mut v = DVector::zeros(space.cutoff());
        let mut amp = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for k in 0..space.cutoff() {
            v[k] = amp;
            amp *= alpha / (k as f64 + 1.0).sqrt();
        }
        psi = psi.kronecker(&v);
    }
    let value = (psi.adjoint() * rho.matrix() * &psi)[(0, 0)].re;
    Ok(value / std::f64::consts::TAU.powi(space.modes() as i32))
}

/// First moments `d_k = tr(ρ R_k)` and covariance `γ_kl = tr(ρ {R_k − d_k, R_l − d_l})`.
pub fn moments(rho: &DensityMatrix) -> Result<(DVector<f64>, RMatrix)> {
    let space = rho.space();
    let dim = 2 * space.modes();
    let m = rho.matrix();
    let d = DVector::from_fn(dim, |k, _| space.quadrature(k).trace_with(m).re);
    let products: Vec<_> = (0..dim).map(|l| space.quadrature(l).apply_left(m)).collect();
    let mut gamma = RMatrix::zeros(dim, dim);
    for k in 0..dim {
        for l in k..dim {
            // tr(ρ R_k R_l) = tr(R_k (R_l ρ))
            let v = 2.0 * space.quadrature(k).trace_with(&products[l]).re - 2.0 * d[k] * d[l];
            gamma[(k, l)] = v;
            gamma[(l, k)] = v;
        }
    }
    Ok((d, gamma))
}

/// Gaussian state with the same first and second moments.
pub fn gaussify(rho: &DensityMatrix) -> Result<GaussianState> {
    let (d, gamma) = moments(rho)?;
    GaussianState::with_tolerance(d, gamma, MOMENT_UNCERTAINTY_TOL)
}
