use serde::Serialize;

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::ode::Dopri5;

use super::{Register, DELTA_STEP_TOL};

/// Tolerance of the clock integration.
pub const CLOCK_TOL: f64 = 1e-8;

/// Default clock horizon.
pub const DEFAULT_T_MAX: f64 = 2.0;

/// Diffusion clocks and entropy powers along a replay of the 50:50 entropy-power argument.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlachmanTrace {
    pub times: Vec<f64>,
    /// Clock of the first input, `F' = E_X(F)`.
    pub clock_x: Vec<f64>,
    /// Clock of the second input, `G' = E_Y(G)`.
    pub clock_y: Vec<f64>,
    /// `(F + G) / 2`, the clock of the combined state.
    pub clock_out: Vec<f64>,
    pub power_x: Vec<f64>,
    pub power_y: Vec<f64>,
    pub power_out: Vec<f64>,
    /// `(E_X + E_Y) / (2 E_Z)`.
    pub ratio: Vec<f64>,
    /// `2 J_X J_Y / (J_X + J_Y) − J_Z`, absent where a Fisher information is not resolved.
    pub stam_slack: Vec<Option<f64>>,
}

fn harmonic_bound(jx: f64, jy: f64) -> f64 {
    match (jx.is_finite(), jy.is_finite()) {
        (true, true) => 2.0 * jx * jy / (jx + jy),
        (false, true) => 2.0 * jy,
        (true, false) => 2.0 * jx,
        (false, false) => f64::INFINITY,
    }
}

/// Integrates `T' = e^{S(e^{T L} ρ)/n}` from `T(0) = 0`, refusing clocks past the state's horizon.
fn clock<R: Register>(rho: &R, times: &[f64]) -> Result<Vec<f64>> {
    let horizon = rho.horizon();
    let solver = Dopri5::with_tolerance(CLOCK_TOL);
    let values = solver.integrate(
        |_, y: &Vec<f64>| {
            let clock = y[0].max(0.0);
            if clock > horizon {
                return Err(Error::ClockOverflow { clock, horizon });
            }
            Ok(vec![rho.diffuse(clock)?.entropy_power()?])
        },
        0.0,
        vec![0.0],
        times,
    )?;
    Ok(values.into_iter().map(|v| v[0]).collect())
}

/// Replays the coupled-clock argument for the 50:50 entropy power inequality on `[0, t_max]`
/// with `steps` equal grid intervals.
///
/// Every entropy power is a fresh evolution from time zero. The ratio tends to one as the clocks
/// diverge and never decreases, so it starts at most at one, which is the entropy power
/// inequality itself. Passes when the start does not exceed one and no step decreases by more
/// than [`DELTA_STEP_TOL`].
pub fn blachman_replay<R: Register>(
    x: &R,
    y: &R,
    t_max: f64,
    steps: usize,
) -> Result<(BlachmanTrace, CheckReport)> {
    if !(t_max > 0.0) || steps == 0 {
        return Err(Error::domain("replay needs t_max > 0 and at least one step"));
    }
    let times: Vec<f64> = (0..=steps).map(|k| t_max * k as f64 / steps as f64).collect();
    let clock_x = clock(x, &times)?;
    let clock_y = clock(y, &times)?;
    let clock_out: Vec<f64> = clock_x.iter().zip(&clock_y).map(|(f, g)| 0.5 * (f + g)).collect();

    let out = x.combine(y, 0.5)?;
    let horizon = out.horizon();
    if let Some(&h) = clock_out.iter().find(|&&h| h > horizon) {
        return Err(Error::ClockOverflow { clock: h, horizon });
    }
    let xs = x.diffuse_grid(&clock_x)?;
    let ys = y.diffuse_grid(&clock_y)?;
    let zs = out.diffuse_grid(&clock_out)?;

    let mut trace = BlachmanTrace {
        times: times.clone(),
        clock_x,
        clock_y,
        clock_out,
        power_x: Vec::with_capacity(times.len()),
        power_y: Vec::with_capacity(times.len()),
        power_out: Vec::with_capacity(times.len()),
        ratio: Vec::with_capacity(times.len()),
        stam_slack: Vec::with_capacity(times.len()),
    };
    for ((a, b), z) in xs.iter().zip(&ys).zip(&zs) {
        let (ex, ey, ez) = (a.entropy_power()?, b.entropy_power()?, z.entropy_power()?);
        trace.power_x.push(ex);
        trace.power_y.push(ey);
        trace.power_out.push(ez);
        trace.ratio.push((ex + ey) / (2.0 * ez));
        let slack = match (a.fisher(), b.fisher(), z.fisher()) {
            (Ok(jx), Ok(jy), Ok(jz)) if jz.is_finite() => Some(harmonic_bound(jx, jy) - jz),
            _ => None,
        };
        trace.stam_slack.push(slack);
    }

    let start = 1.0 - trace.ratio[0];
    let worst_step = trace
        .ratio
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let mut report = CheckReport::new("blachman", start.min(worst_step), DELTA_STEP_TOL)
        .input("x", x.label())
        .input("y", y.label())
        .input("t_max", t_max)
        .input("steps", steps)
        .diag("ratio_start", trace.ratio[0])
        .diag("ratio_end", *trace.ratio.last().expect("non-empty grid"))
        .diag("clock_x_end", *trace.clock_x.last().expect("non-empty grid"))
        .diag("clock_y_end", *trace.clock_y.last().expect("non-empty grid"));
    if worst_step.is_finite() {
        report = report.diag("worst_step", worst_step);
    }
    let resolved: Vec<f64> = trace.stam_slack.iter().flatten().copied().collect();
    if !resolved.is_empty() {
        report = report
            .diag("min_stam_slack", resolved.iter().copied().fold(f64::INFINITY, f64::min))
            .diag("stam_points", resolved.len() as f64);
    }
    Ok((trace, report))
}
