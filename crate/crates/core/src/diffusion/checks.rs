use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::fock::{beamsplitter_combine, gaussify, moments, von_neumann_entropy, DensityMatrix};
use crate::linalg::{max_abs_real, trace_distance, RMatrix};
use crate::phase_space::{mean_photon, thermal_entropy, GaussianChannel};

use super::{evolve_ode, evolve_ode_snapshots, evolve_random_displacement, DEFAULT_ODE_TOL};

/// Trace-distance tolerance for comparing two evolution routes.
pub const ROUTE_TOL: f64 = 1e-4;

/// Tolerance on the entropy bounds under diffusion.
pub const SCALING_TOL: f64 = 1e-5;

/// Tolerance on the decrease of the asymptotic residual.
pub const ASYMPTOTIC_TOL: f64 = 1e-6;

/// Tolerance on the moments of a diffused state.
pub const MOMENT_TOL: f64 = 1e-5;

/// Trace distance between the master-equation and random-translation evolutions.
pub fn check_route_agreement(rho: &DensityMatrix, t: f64, order: usize) -> Result<CheckReport> {
    let ode = evolve_ode(rho, t, DEFAULT_ODE_TOL)?;
    let mixture = evolve_random_displacement(rho, t, order)?;
    let distance = trace_distance(ode.matrix(), mixture.matrix());
    Ok(CheckReport::new("route_agreement", -distance, ROUTE_TOL)
        .input("state", rho.label())
        .input("t", t)
        .input("order", order)
        .diag("trace_distance", distance))
}

/// Moments of `e^{tL}ρ` against `d(0)` and `γ(0) + tI`.
pub fn check_covariance_growth(rho: &DensityMatrix, t: f64) -> Result<CheckReport> {
    let (d0, g0) = moments(rho)?;
    let (d, g) = moments(&evolve_ode(rho, t, DEFAULT_ODE_TOL)?)?;
    let expected = &g0 + RMatrix::identity(g0.nrows(), g0.ncols()) * t;
    let covariance_dev = max_abs_real(&(g - expected));
    let mean_dev = (d - d0).amax();
    Ok(CheckReport::new("covariance_growth", -covariance_dev.max(mean_dev), MOMENT_TOL)
        .input("state", rho.label())
        .input("t", t)
        .diag("covariance_deviation", covariance_dev)
        .diag("mean_deviation", mean_dev))
}

/// Compares `E_λ(e^{t_X L} ρ_X ⊗ e^{t_Y L} ρ_Y)` with `e^{tL} E_λ(ρ_X ⊗ ρ_Y)`, where
/// `t = λ t_X + (1 − λ) t_Y`.
pub fn check_beamsplitter_compatibility(
    x: &DensityMatrix,
    y: &DensityMatrix,
    lambda: f64,
    t_x: f64,
    t_y: f64,
) -> Result<CheckReport> {
    let t = lambda * t_x + (1.0 - lambda) * t_y;
    let lhs = beamsplitter_combine(
        &evolve_ode(x, t_x, DEFAULT_ODE_TOL)?,
        &evolve_ode(y, t_y, DEFAULT_ODE_TOL)?,
        lambda,
    )?;
    let rhs = evolve_ode(&beamsplitter_combine(x, y, lambda)?, t, DEFAULT_ODE_TOL)?;
    let distance = trace_distance(lhs.matrix(), rhs.matrix());
    Ok(CheckReport::new("beamsplitter_compatibility", -distance, ROUTE_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .input("lambda", lambda)
        .input("t_x", t_x)
        .input("t_y", t_y)
        .diag("trace_distance", distance))
}

/// Verifies `n g(N(t−1)) ≤ S(e^{tL} ρ) ≤ Σ_k g(N(t + ν_k))`, with `ν_k` the symplectic spectrum of
/// the moments of `ρ`.
///
/// The lower bound needs `t > 2`; for `1 ≤ t ≤ 2` only the upper bound is evaluated and the
/// report is marked non-normative.
pub fn check_scaling_bounds(rho: &DensityMatrix, t: f64) -> Result<CheckReport> {
    if !(t >= 1.0) {
        return Err(Error::domain(format!("scaling bounds need t ≥ 1, got {t}")));
    }
    let n = rho.space().modes() as f64;
    let nu = gaussify(rho)?.symplectic_eigenvalues()?;
    let upper: f64 = nu
        .iter()
        .map(|&v| thermal_entropy(mean_photon(t + v)?))
        .sum::<Result<f64>>()?;
    let entropy = von_neumann_entropy(&evolve_ode(rho, t, DEFAULT_ODE_TOL)?);
    let upper_slack = upper - entropy;
    let mut report = CheckReport::new("scaling_bounds", upper_slack, SCALING_TOL);
    if t > 2.0 {
        let lower = n * thermal_entropy(mean_photon(t - 1.0)?)?;
        let lower_slack = entropy - lower;
        report = CheckReport::new("scaling_bounds", upper_slack.min(lower_slack), SCALING_TOL)
            .diag("lower_bound", lower)
            .diag("lower_slack", lower_slack);
    } else {
        report = report.non_normative();
    }
    Ok(report
        .input("state", rho.label())
        .input("t", t)
        .diag("entropy", entropy)
        .diag("upper_bound", upper)
        .diag("upper_slack", upper_slack))
}

/// `S(e^{tL}(ρ^G)) − S(e^{tL}(ρ))`, which equals the relative entropy of the evolved state to its
/// own Gaussification.
pub fn gaussification_gap(rho: &DensityMatrix, t: f64) -> Result<f64> {
    let gaussian = gaussify(rho)?;
    let evolved = GaussianChannel::diffusion(t, gaussian.modes())?.apply(&gaussian)?;
    Ok(evolved.entropy()? - von_neumann_entropy(&evolve_ode(rho, t, DEFAULT_ODE_TOL)?))
}

/// `|S(e^{tL}ρ)/n − (1 − ln 2 + ln t)|` along `times`; passes when it decreases at every step.
///
/// Diagnostics carry the residual and the Gaussification gap at every time.
pub fn check_asymptotics(rho: &DensityMatrix, times: &[f64]) -> Result<CheckReport> {
    if times.len() < 2 || times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::domain("asymptotic check needs at least two positive times"));
    }
    let n = rho.space().modes() as f64;
    let gaussian = gaussify(rho)?;
    let snapshots = evolve_ode_snapshots(rho, times, DEFAULT_ODE_TOL)?;
    let mut residuals = Vec::with_capacity(times.len());
    let mut gaps = Vec::with_capacity(times.len());
    for (state, &t) in snapshots.iter().zip(times) {
        let entropy = von_neumann_entropy(state);
        residuals.push((entropy / n - (1.0 - 2f64.ln() + t.ln())).abs());
        let g = GaussianChannel::diffusion(t, gaussian.modes())?.apply(&gaussian)?;
        gaps.push(g.entropy()? - entropy);
    }
    let margin = residuals
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    let mut report = CheckReport::new("asymptotic_residual", margin, ASYMPTOTIC_TOL)
        .input("state", rho.label())
        .input("times", format!("{times:?}"));
    for ((t, r), g) in times.iter().zip(&residuals).zip(&gaps) {
        report = report
            .diag(format!("residual_t{t}"), *r)
            .diag(format!("gap_t{t}"), *g);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::{required_cutoff, DEFAULT_ORDER};
    use crate::fock::FockSpace;

    #[test]
    fn routes_and_moments_for_a_cat_state() {
        let space = FockSpace::new(1, required_cutoff(4.0, 1.0, 1e-8)).unwrap();
        let cat = DensityMatrix::cat(&space, crate::linalg::c(1.5), 0.0).unwrap();
        // Interference fringes of the cat need more nodes than smooth states.
        assert!(!check_route_agreement(&cat, 1.0, 15).unwrap().passed);
        let r = check_route_agreement(&cat, 1.0, DEFAULT_ORDER).unwrap();
        assert!(r.passed, "{r}");
        let r = check_covariance_growth(&cat, 1.0).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn zero_times_are_trivially_compatible() {
        let space = FockSpace::new(1, 12).unwrap();
        let x = DensityMatrix::random_full_rank(&space, 1, 2).unwrap();
        let y = DensityMatrix::fock(&space, 1).unwrap();
        let r = check_beamsplitter_compatibility(&x, &y, 0.4, 0.0, 0.0).unwrap();
        assert!(r.diagnostics["trace_distance"] < 1e-10);
    }

    #[test]
    fn single_photon_compatibility() {
        let space = FockSpace::new(1, required_cutoff(1.0, 1.0, 1e-8)).unwrap();
        let x = DensityMatrix::fock(&space, 1).unwrap();
        let y = DensityMatrix::vacuum(&space);
        let r = check_beamsplitter_compatibility(&x, &y, 0.5, 1.0, 0.0).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn vacuum_scaling_bounds() {
        let space = FockSpace::new(1, required_cutoff(0.0, 3.0, 1e-8) + 2).unwrap();
        let r = check_scaling_bounds(&DensityMatrix::vacuum(&space), 3.0).unwrap();
        assert!(r.passed, "{r}");
        assert!((r.diagnostics["lower_bound"] - thermal_entropy(0.5).unwrap()).abs() < 1e-12);
        assert!((r.diagnostics["upper_bound"] - thermal_entropy(1.5).unwrap()).abs() < 1e-12);
        assert!(r.diagnostics["upper_slack"].abs() < 1e-4);
    }

    #[test]
    fn upper_bound_only_below_two_is_non_normative() {
        let space = FockSpace::new(1, 40).unwrap();
        let r = check_scaling_bounds(&DensityMatrix::vacuum(&space), 1.5).unwrap();
        assert!(!r.normative);
        assert!(check_scaling_bounds(&DensityMatrix::vacuum(&space), 0.5).is_err());
    }

    #[test]
    fn gaussian_states_have_no_gap() {
        let space = FockSpace::new(1, 48).unwrap();
        let th = DensityMatrix::thermal(&space, 0.5).unwrap();
        assert!(gaussification_gap(&th, 1.0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn thermal_residual_decreases() {
        let space = FockSpace::new(1, required_cutoff(1.0, 5.0, 1e-8)).unwrap();
        let r = check_asymptotics(&DensityMatrix::thermal(&space, 1.0).unwrap(), &[3.0, 5.0]).unwrap();
        assert!(r.passed, "{r}");
    }
}
