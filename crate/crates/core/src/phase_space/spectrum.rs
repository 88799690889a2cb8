use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, sym_map, RMatrix};

use super::{GaussianState, SymplecticForm};

const PAIRING_TOL: f64 = 1e-8;
const POSITIVITY_FLOOR: f64 = 1e-12;

/// Symplectic eigenvalues of a positive definite `2n × 2n` matrix, sorted descending.
///
/// Computed from the spectrum `{±iν_k}` of `Jγ`.
pub fn symplectic_eigenvalues(gamma: &RMatrix) -> Result<Vec<f64>> {
    let dim = gamma.nrows();
    if dim == 0 || dim % 2 != 0 || gamma.ncols() != dim {
        return Err(Error::domain(format!(
            "expected a 2n x 2n matrix, got {}x{}",
            gamma.nrows(),
            gamma.ncols()
        )));
    }
    let (values, _) = sym_eigen(gamma);
    let min_eigenvalue = values.min();
    if min_eigenvalue <= POSITIVITY_FLOOR {
        return Err(Error::NonPositiveCovariance { min_eigenvalue });
    }

    let j = SymplecticForm::new(dim / 2).matrix;
    let eigenvalues = (&j * gamma).complex_eigenvalues();
    let scale = values.max().max(1.0);

    let mut imag: Vec<f64> = eigenvalues.iter().map(|z| z.im).collect();
    imag.sort_by(|a, b| b.total_cmp(a));
    let n = dim / 2;
    let mut deviation = eigenvalues
        .iter()
        .map(|z| z.re.abs())
        .fold(0.0f64, f64::max);
    let mut nu = Vec::with_capacity(n);
    for k in 0..n {
        let pos = imag[k];
        let neg = imag[dim - 1 - k];
        deviation = deviation.max((pos + neg).abs());
        if pos < 0.0 {
            deviation = deviation.max(-pos);
        }
        nu.push(0.5 * (pos - neg));
    }
    if deviation > PAIRING_TOL * scale {
        return Err(Error::PairingFailure { deviation });
    }
    Ok(nu)
}

/// `N(ν) = (ν − 1)/2`.
pub fn mean_photon(nu: f64) -> Result<f64> {
    if !(nu >= 1.0 - 1e-9) {
        return Err(Error::domain(format!("symplectic eigenvalue {nu} < 1")));
    }
    Ok((nu - 1.0) / 2.0)
}

/// Entropy `g(N) = (N+1) ln(N+1) − N ln N` of a thermal mode with mean photon number `N`.
pub fn thermal_entropy(mean_photon: f64) -> Result<f64> {
    if !(mean_photon >= 0.0) {
        return Err(Error::domain(format!("mean photon number {mean_photon} < 0")));
    }
    if mean_photon == 0.0 {
        return Ok(0.0);
    }
    let n = mean_photon;
    Ok((n + 1.0) * n.ln_1p() - n * n.ln())
}

/// `S(ρ) = Σ_k g(N(ν_k))`; independent of the first moments.
pub fn gaussian_entropy(state: &GaussianState) -> Result<f64> {
    symplectic_eigenvalues(state.covariance())?
        .into_iter()
        .map(|nu| thermal_entropy(mean_photon(nu)?.max(0.0)))
        .sum()
}

/// Total phase-space Fisher information of a Gaussian state.
///
/// Writing the state as `exp(−½ RᵀKR)/Z`, the commutator formula summed over all quadrature
/// directions gives `tr K`. With `C = γ^{1/2} Jᵀγ J γ^{1/2}` (spectrum `ν_k²`) one has
/// `K = γ^{−1/2} ψ(C) γ^{−1/2}` where `ψ(ν²) = ν ln((ν+1)/(ν−1))`. Infinite for states with a
/// pure mode.
pub fn gaussian_fisher(state: &GaussianState) -> Result<f64> {
    let gamma = state.covariance();
    let nu = symplectic_eigenvalues(gamma)?;
    if nu.iter().any(|&v| v <= 1.0 + 1e-12) {
        return Ok(f64::INFINITY);
    }
    let j = SymplecticForm::new(state.modes()).matrix;
    let sqrt_gamma = sym_map(gamma, f64::sqrt);
    let inv_sqrt_gamma = sym_map(gamma, |x| 1.0 / x.sqrt());
    let c = &sqrt_gamma * j.transpose() * gamma * &j * &sqrt_gamma;
    let psi = sym_map(&c, |x| {
        let v = x.max(0.0).sqrt();
        v * ((v + 1.0) / (v - 1.0)).ln()
    });
    let k = &inv_sqrt_gamma * psi * &inv_sqrt_gamma;
    Ok(k.trace())
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Checks the partial-sum inequalities `Σ_{j≤k} ν↓_j(A+B) ≤ Σ_{j≤k} (ν↓_j(A) + ν↓_j(B))`.
///
/// The margin is the smallest slack over `k`; the diagnostics also carry the slack of the
/// reversed ordering on the smallest eigenvalues, which is the direction that holds in general.
pub fn weak_submajorization_check(a: &RMatrix, b: &RMatrix) -> Result<CheckReport> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let nu_a = sorted_desc(symplectic_eigenvalues(a)?);
    let nu_b = sorted_desc(symplectic_eigenvalues(b)?);
    let nu_sum = sorted_desc(symplectic_eigenvalues(&(a + b))?);
    let bound: Vec<f64> = nu_a.iter().zip(&nu_b).map(|(x, y)| x + y).collect();

    let n = nu_sum.len();
    let mut margin = f64::INFINITY;
    let mut report_diags = Vec::with_capacity(n);
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for k in 0..n {
        lhs += nu_sum[k];
        rhs += bound[k];
        let slack = rhs - lhs;
        report_diags.push(slack);
        margin = margin.min(slack);
    }

    // Σ_{j≤k} ν↑_j(A+B) ≥ Σ_{j≤k} (ν↑_j(A) + ν↑_j(B))
    let mut reverse_margin = f64::INFINITY;
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for k in (0..n).rev() {
        lhs += nu_sum[k];
        rhs += bound[k];
        reverse_margin = reverse_margin.min(lhs - rhs);
    }

    let mut report = CheckReport::new("weak_submajorization", margin, 1e-9)
        .input("modes", n)
        .diag("superadditivity_margin", reverse_margin);
    for (k, s) in report_diags.into_iter().enumerate() {
        report = report.diag(format!("partial_slack_{}", k + 1), s);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn diag(v: &[f64]) -> RMatrix {
        RMatrix::from_diagonal(&DVector::from_vec(v.to_vec()))
    }

    #[test]
    fn williamson_form_examples() {
        assert!((symplectic_eigenvalues(&diag(&[3.0, 3.0])).unwrap()[0] - 3.0).abs() < 1e-12);
        let r: f64 = 0.5;
        let nu = symplectic_eigenvalues(&diag(&[(2.0 * r).exp(), (-2.0 * r).exp()])).unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-12);
        let nu = symplectic_eigenvalues(&diag(&[2.0, 2.0, 5.0, 5.0])).unwrap();
        assert!((nu[0] - 5.0).abs() < 1e-12 && (nu[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_indefinite_matrix() {
        assert!(matches!(
            symplectic_eigenvalues(&diag(&[1.0, -1.0])),
            Err(Error::NonPositiveCovariance { .. })
        ));
    }

    #[test]
    fn mean_photon_and_g() {
        assert_eq!(mean_photon(1.0).unwrap(), 0.0);
        assert_eq!(mean_photon(3.0).unwrap(), 1.0);
        assert!((mean_photon(2.4).unwrap() - 0.7).abs() < 1e-15);
        assert!(mean_photon(0.5).is_err());
        assert_eq!(thermal_entropy(0.0).unwrap(), 0.0);
        assert!((thermal_entropy(1.0).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
        // 1.5 ln 1.5 − 0.5 ln 0.5
        assert!((thermal_entropy(0.5).unwrap() - 0.954_771_252_442_219_2).abs() < 1e-13);
        assert!(thermal_entropy(-0.1).is_err());
    }

    #[test]
    fn entropy_examples() {
        let two = GaussianState::new(DVector::zeros(4), diag(&[3.0, 3.0, 1.0, 1.0])).unwrap();
        assert!((gaussian_entropy(&two).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
        let vac = GaussianState::vacuum(1)
            .with_mean(DVector::from_vec(vec![3.0, -1.0]))
            .unwrap();
        assert!(gaussian_entropy(&vac).unwrap().abs() < 1e-12);
    }

    #[test]
    fn fisher_of_thermal_state() {
        for n in [0.5, 1.0, 2.0, 4.0] {
            let s = GaussianState::thermal(1, n).unwrap();
            let expected = 2.0 * ((n + 1.0) / n).ln();
            assert!((gaussian_fisher(&s).unwrap() - expected).abs() < 1e-10);
        }
        assert!(gaussian_fisher(&GaussianState::vacuum(1)).unwrap().is_infinite());
    }

    #[test]
    fn isotropic_pair_saturates_submajorization() {
        let r = weak_submajorization_check(&diag(&[1.0, 1.0]), &diag(&[1.0, 1.0])).unwrap();
        assert!(r.passed && r.margin.abs() < 1e-12);
    }

    #[test]
    fn squeezed_plus_identity_exceeds_the_sum_of_spectra() {
        // ν(A+B) = sqrt(det(A+B)) = 2 cosh 1 while ν(A) + ν(B) = 2.
        let e2 = 2f64.exp();
        let r = weak_submajorization_check(&diag(&[e2, 1.0 / e2]), &diag(&[1.0, 1.0])).unwrap();
        assert!((r.margin - (2.0 - 2.0 * 1f64.cosh())).abs() < 1e-10);
        assert!(!r.passed);
        assert!(r.diagnostics["superadditivity_margin"] > 0.0);
    }
}
