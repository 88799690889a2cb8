use crate::error::{Error, Result};
use crate::linalg::HermitianEigen;

use super::DensityMatrix;

/// Eigenvalues below this are replaced by it inside logarithms.
pub const LOG_CLAMP: f64 = 1e-12;

/// Weight outside the support of the second argument above which the relative entropy is
/// reported as divergent.
pub const SUPPORT_TOL: f64 = 1e-6;

#[inline]
pub fn clamped_log(p: f64) -> f64 {
    p.clamp(LOG_CLAMP, 1.0).ln()
}

/// `−Σ p ln p` over the spectrum of a Hermitian matrix, with clamped logarithms.
pub(crate) fn spectral_entropy(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().map(|p| -p * clamped_log(p)).sum()
}

/// `S(ρ) = −tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    spectral_entropy(HermitianEigen::new(rho.matrix()).values.iter().copied())
}

/// `S(ρ‖σ) = tr ρ (ln ρ − ln σ)` with both logarithms clamped.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.space().ensure_same(sigma.space())?;
    let self_term = -spectral_entropy(HermitianEigen::new(rho.matrix()).values.iter().copied());
    let eig = HermitianEigen::new(sigma.matrix());
    // diagonal of V† ρ V
    let rotated = eig.vectors.adjoint() * rho.matrix() * &eig.vectors;
    let mut cross = 0.0;
    let mut outside = 0.0;
    for (k, &s) in eig.values.iter().enumerate() {
        let w = rotated[(k, k)].re;
        if s < LOG_CLAMP {
            outside += w;
        }
        cross += w * clamped_log(s);
    }
    if outside > SUPPORT_TOL {
        return Err(Error::SupportMismatch { weight: outside });
    }
    Ok(self_term - cross)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;
    use crate::phase_space::thermal_entropy;

    #[test]
    fn pure_state_has_zero_entropy() {
        let space = FockSpace::new(1, 20).unwrap();
        let coh = DensityMatrix::coherent(&space, &[crate::linalg::c(1.0)]).unwrap();
        assert!(von_neumann_entropy(&coh).abs() < 1e-9);
        let r = DensityMatrix::random_state(&space, 11, 1).unwrap();
        assert!(von_neumann_entropy(&r).abs() < 1e-9);
    }

    #[test]
    fn thermal_entropy_matches_closed_form() {
        let space = FockSpace::new(1, 40).unwrap();
        let th = DensityMatrix::thermal(&space, 1.0).unwrap();
        assert!((von_neumann_entropy(&th) - thermal_entropy(1.0).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn thermal_divergence_closed_form() {
        let space = FockSpace::new(1, 60).unwrap();
        let a = DensityMatrix::thermal(&space, 1.0).unwrap();
        let b = DensityMatrix::thermal(&space, 2.0).unwrap();
        // −g(1) + N ln((M+1)/M) + ln(M+1)
        let expected = -thermal_entropy(1.0).unwrap() + 1.5f64.ln() + 3f64.ln();
        let got = relative_entropy(&a, &b).unwrap();
        assert!((got - expected).abs() < 1e-8, "{got} vs {expected}");
        assert!((got - 0.117783).abs() < 1e-6);
        assert!(relative_entropy(&a, &a).unwrap().abs() < 1e-10);
    }

    #[test]
    fn divergent_pair_is_reported() {
        let space = FockSpace::new(1, 6).unwrap();
        let one = DensityMatrix::fock(&space, 1).unwrap();
        let vac = DensityMatrix::vacuum(&space);
        assert!(matches!(
            relative_entropy(&one, &vac),
            Err(Error::SupportMismatch { .. })
        ));
    }
}
