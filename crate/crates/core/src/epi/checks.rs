use crate::check::CheckReport;
use crate::error::{Error, Result};

use super::Register;

/// Tolerance on the entropy and entropy-power inequalities, in nats.
pub const EPI_TOL: f64 = 1e-6;

/// Absolute floor of the de Bruijn tolerance.
pub const DEBRUIJN_ABS_TOL: f64 = 1e-5;

/// Relative de Bruijn tolerance, as a fraction of `J/4`.
pub const DEBRUIJN_REL_TOL: f64 = 1e-3;

/// Allowed increase per grid step of the entropy gap, and floor of its final value.
pub const DELTA_STEP_TOL: f64 = 1e-4;

/// Default finite-difference step of the de Bruijn check.
pub const DEBRUIJN_STEP: f64 = 1e-2;

/// Compares the entropy production rate of `e^{tL}ρ` with a quarter of its Fisher information.
///
/// The rate is a central difference at `h` and `h/2` with one Richardson step. Requires
/// `t ≥ 0.05` and `h ∈ [1e-3, 5e-2]`.
pub fn de_bruijn_residual<R: Register>(rho: &R, t: f64, h: f64) -> Result<CheckReport> {
    if !(t >= 0.05) {
        return Err(Error::domain(format!("de Bruijn base time {t} < 0.05")));
    }
    if !(1e-3..=5e-2).contains(&h) {
        return Err(Error::StepTooLarge { step: h });
    }
    let times = [t - h, t - 0.5 * h, t, t + 0.5 * h, t + h];
    let states = rho.diffuse_grid(&times)?;
    let s: Vec<f64> = states.iter().map(Register::entropy).collect::<Result<_>>()?;
    let coarse = (s[4] - s[0]) / (2.0 * h);
    let fine = (s[3] - s[1]) / h;
    let rate = (4.0 * fine - coarse) / 3.0;
    let quarter = states[2].fisher()? / 4.0;
    let residual = (rate - quarter).abs();
    let tol = (DEBRUIJN_REL_TOL * quarter).max(DEBRUIJN_ABS_TOL);
    Ok(CheckReport::new("de_bruijn", -residual, tol)
        .input("state", rho.label())
        .input("t", t)
        .input("h", h)
        .diag("entropy_rate", rate)
        .diag("entropy_rate_coarse", coarse)
        .diag("fisher_quarter", quarter)
        .diag("residual", residual)
        .diag("entropy", s[2]))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("transmissivity {lambda} not in (0,1)")));
    }
    Ok(())
}

/// `S(E_λ(ρ_X ⊗ ρ_Y)) ≥ λ S(ρ_X) + (1 − λ) S(ρ_Y)`.
pub fn qepi_prime_check<R: Register>(x: &R, y: &R, lambda: f64) -> Result<CheckReport> {
    check_lambda(lambda)?;
    let out = x.combine(y, lambda)?.entropy()?;
    let (sx, sy) = (x.entropy()?, y.entropy()?);
    let margin = out - lambda * sx - (1.0 - lambda) * sy;
    Ok(CheckReport::new("qepi_entropy", margin, EPI_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .input("lambda", lambda)
        .diag("entropy_out", out)
        .diag("entropy_x", sx)
        .diag("entropy_y", sy))
}

fn power_margin<R: Register>(x: &R, y: &R, lambda: f64, name: &str) -> Result<CheckReport> {
    check_lambda(lambda)?;
    let out = x.combine(y, lambda)?.entropy_power()?;
    let (ex, ey) = (x.entropy_power()?, y.entropy_power()?);
    let margin = out - lambda * ex - (1.0 - lambda) * ey;
    Ok(CheckReport::new(name, margin, EPI_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .input("lambda", lambda)
        .diag("power_out", out)
        .diag("power_x", ex)
        .diag("power_y", ey))
}

/// `e^{S(E(ρ_X ⊗ ρ_Y))/n} ≥ ½ e^{S(ρ_X)/n} + ½ e^{S(ρ_Y)/n}` for the 50:50 beamsplitter.
pub fn qepi_power_check<R: Register>(x: &R, y: &R) -> Result<CheckReport> {
    power_margin(x, y, 0.5, "qepi_power")
}

/// Entropy-power concavity at an arbitrary transmissivity. Unproven away from `λ = 1/2`, so the
/// report is an experiment and never normative.
pub fn power_concavity_probe<R: Register>(x: &R, y: &R, lambda: f64) -> Result<CheckReport> {
    Ok(power_margin(x, y, lambda, "power_concavity")?.non_normative())
}

/// `δ(t) = S(e^{tL}E_λ(ρ_X ⊗ ρ_Y)) − λ S(e^{tL}ρ_X) − (1 − λ) S(e^{tL}ρ_Y)` on `times`.
pub fn entropy_gap_trajectory<R: Register>(x: &R, y: &R, lambda: f64, times: &[f64]) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    if times.is_empty() || !(times[0] >= 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("time grid must be non-empty, non-negative and strictly increasing"));
    }
    let out = x.combine(y, lambda)?.diffuse_grid(times)?;
    let xs = x.diffuse_grid(times)?;
    let ys = y.diffuse_grid(times)?;
    out.iter()
        .zip(&xs)
        .zip(&ys)
        .map(|((o, a), b)| Ok(o.entropy()? - lambda * a.entropy()? - (1.0 - lambda) * b.entropy()?))
        .collect()
}

/// The entropy gap must not increase along the grid (up to [`DELTA_STEP_TOL`] per step) and must
/// end non-negative.
pub fn delta_monotonicity_trace<R: Register>(
    x: &R,
    y: &R,
    lambda: f64,
    times: &[f64],
) -> Result<CheckReport> {
    let delta = entropy_gap_trajectory(x, y, lambda, times)?;
    let worst_step = delta
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    let last = *delta.last().expect("non-empty grid");
    let mut report = CheckReport::new("delta_monotonicity", worst_step.min(last), DELTA_STEP_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .input("lambda", lambda)
        .input("times", format!("{times:?}"))
        .diag("worst_step", if worst_step.is_finite() { worst_step } else { 0.0 })
        .diag("delta_final", last);
    for (t, d) in times.iter().zip(&delta) {
        report = report.diag(format!("delta_t{t}"), *d);
    }
    Ok(report)
}
