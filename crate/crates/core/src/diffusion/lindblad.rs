use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, FockSpace};
use crate::linalg::{hermitize, CMatrix, C64};
use crate::ode::Dopri5;

/// Default local error target of the ODE integrator.
pub const DEFAULT_ODE_TOL: f64 = 1e-9;

/// Largest trace correction accepted when renormalizing an evolved state.
pub const MAX_TRACE_DRIFT: f64 = 1e-8;

/// Per-mode coefficient tables for the elementwise generator.
struct ModeTables {
    stride: usize,
    /// `occupation[i]` of this mode in basis state `i`
    occupation: Vec<usize>,
    /// `√k`
    root: Vec<f64>,
    /// diagonal of `a a† + a† a` on the truncated level `k`
    diag: Vec<f64>,
}

fn tables(space: &FockSpace) -> Vec<ModeTables> {
    let d = space.cutoff();
    let root: Vec<f64> = (0..=d).map(|k| (k as f64).sqrt()).collect();
    let diag: Vec<f64> = (0..d)
        .map(|k| k as f64 + if k + 1 < d { (k + 1) as f64 } else { 0.0 })
        .collect();
    (0..space.modes())
        .map(|j| ModeTables {
            stride: space.stride(j),
            occupation: (0..space.dim()).map(|i| space.occupation(i, j)).collect(),
            root: root.clone(),
            diag: diag.clone(),
        })
        .collect()
}

fn apply_generator(tables: &[ModeTables], cutoff: usize, rho: &CMatrix) -> CMatrix {
    let dim = rho.nrows();
    let mut out = CMatrix::zeros(dim, dim);
    for t in tables {
        let s = t.stride;
        for c in 0..dim {
            let kc = t.occupation[c];
            for r in 0..dim {
                let kr = t.occupation[r];
                let mut v = rho[(r, c)] * (-0.25 * (t.diag[kr] + t.diag[kc]));
                if kr + 1 < cutoff && kc + 1 < cutoff {
                    v += rho[(r + s, c + s)] * (0.5 * t.root[kr + 1] * t.root[kc + 1]);
                }
                if kr > 0 && kc > 0 {
                    v += rho[(r - s, c - s)] * (0.5 * t.root[kr] * t.root[kc]);
                }
                out[(r, c)] += v;
            }
        }
    }
    out
}

/// Diffusion generator `L(ρ) = −¼ Σ_k [R_k, [R_k, ρ]]` with truncated quadratures.
///
/// Expanded as `½ Σ_j (a_j ρ a_j† + a_j† ρ a_j) − ¼ Σ_j {a_j a_j† + a_j† a_j, ρ}`, a Lindblad
/// generator on the truncated space that preserves trace and the identity.
pub fn lindblad_rhs(rho: &DensityMatrix) -> CMatrix {
    let space = rho.space();
    apply_generator(&tables(space), space.cutoff(), rho.matrix())
}

/// Same generator applied to an arbitrary operator on `space`.
pub fn lindblad_apply(space: &FockSpace, op: &CMatrix) -> CMatrix {
    apply_generator(&tables(space), space.cutoff(), op)
}

/// Top-level population of a thermal mode with `mean_photon` photons truncated to `cutoff`
/// levels and renormalized.
fn thermal_top_population(mean_photon: f64, cutoff: usize) -> f64 {
    if mean_photon <= 0.0 {
        return 0.0;
    }
    let r = mean_photon / (mean_photon + 1.0);
    (1.0 - r) * r.powi(cutoff as i32 - 1) / (1.0 - r.powi(cutoff as i32))
}

/// Smallest cutoff for which a thermal mode with `mean_photon + t/2` photons keeps its top-level
/// population within a tenth of `budget`.
pub fn required_cutoff(mean_photon: f64, t: f64, budget: f64) -> usize {
    let n = mean_photon + 0.5 * t;
    (2..)
        .find(|&d| thermal_top_population(n, d) <= 0.1 * budget)
        .expect("geometric tail vanishes")
}

/// Refuses runs whose photon growth clearly overflows the cutoff: per mode the final photon
/// number is estimated as `⟨n⟩ + t/2` with spread `σ² = max(Var n, N(N+1))`, and the run needs
/// `N + 6σ` levels. The budget itself is enforced on every output.
fn precheck(rho: &DensityMatrix, t: f64) -> Result<()> {
    rho.ensure_within_budget()?;
    if t == 0.0 {
        return Ok(());
    }
    let space = rho.space();
    for j in 0..space.modes() {
        let number = space.number(j);
        let mean = number.trace_with(rho.matrix()).re;
        let second = number.trace_with(&number.apply_left(rho.matrix())).re;
        let grown = mean + 0.5 * t;
        let sigma = (second - mean * mean).max(grown * (grown + 1.0)).sqrt();
        let needed = grown + 6.0 * sigma;
        if needed > (space.cutoff() - 1) as f64 {
            return Err(Error::TruncationBudgetExceeded {
                tail: thermal_top_population(grown, space.cutoff()),
                budget: space.budget(),
            });
        }
    }
    Ok(())
}

pub(crate) fn finalize(space: &FockSpace, mat: &CMatrix, label: String) -> Result<DensityMatrix> {
    let mat = hermitize(mat);
    let tr = mat.trace().re;
    if (tr - 1.0).abs() > MAX_TRACE_DRIFT {
        return Err(Error::TraceDrift { drift: tr - 1.0 });
    }
    let state = DensityMatrix::from_parts(space.clone(), mat / C64::new(tr, 0.0), label);
    state.ensure_within_budget()?;
    Ok(state)
}

/// `e^{tL}(ρ)` by adaptive Dormand–Prince integration.
pub fn evolve_ode(rho: &DensityMatrix, t: f64, tol: f64) -> Result<DensityMatrix> {
    Ok(evolve_ode_snapshots(rho, &[t], tol)?.pop().expect("one snapshot per time"))
}

/// `e^{tL}(ρ)` for every `t` in `times` (non-decreasing, `≥ 0`) from a single integration.
pub fn evolve_ode_snapshots(
    rho: &DensityMatrix,
    times: &[f64],
    tol: f64,
) -> Result<Vec<DensityMatrix>> {
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("evolution times must be non-negative and sorted"));
    }
    let Some(&t_max) = times.last() else {
        return Ok(Vec::new());
    };
    precheck(rho, t_max)?;
    let space = rho.space();
    let tabs = tables(space);
    let cutoff = space.cutoff();
    let solver = Dopri5::with_tolerance(tol);
    let states = solver.integrate(
        |_, y: &CMatrix| Ok(apply_generator(&tabs, cutoff, y)),
        0.0,
        rho.matrix().clone(),
        times,
    )?;
    states
        .iter()
        .zip(times)
        .map(|(m, t)| finalize(space, m, format!("{}@t={t}", rho.label())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{moments, von_neumann_entropy};
    use crate::linalg::{max_abs, trace_distance, trace_product};
    use crate::phase_space::thermal_entropy;

    fn double_commutator_form(rho: &DensityMatrix) -> CMatrix {
        let space = rho.space();
        let mut out = CMatrix::zeros(space.dim(), space.dim());
        for k in 0..2 * space.modes() {
            let r = space.dense_quadrature(k);
            let inner = r * rho.matrix() - rho.matrix() * r;
            out -= (r * &inner - &inner * r) * C64::new(0.25, 0.0);
        }
        out
    }

    #[test]
    fn generator_matches_double_commutators() {
        let space = FockSpace::new(2, 4).unwrap().with_budget(1.0);
        let rho = DensityMatrix::random_state_with_support(&space, 2, 3, 4).unwrap();
        assert!(max_abs(&(lindblad_rhs(&rho) - double_commutator_form(&rho))) < 1e-12);
    }

    #[test]
    fn generator_is_traceless_unital_and_self_adjoint() {
        let space = FockSpace::new(1, 12).unwrap();
        let a = DensityMatrix::random_state(&space, 1, 3).unwrap();
        let b = DensityMatrix::random_state(&space, 2, 2).unwrap();
        assert!(lindblad_rhs(&a).trace().norm() < 1e-10);
        let id = CMatrix::identity(12, 12);
        assert!(max_abs(&lindblad_apply(&space, &id)) < 1e-14);
        let lhs = trace_product(a.matrix(), &lindblad_rhs(&b));
        let rhs = trace_product(&lindblad_rhs(&a), b.matrix());
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn zero_time_is_identity() {
        let space = FockSpace::new(1, 10).unwrap();
        let rho = DensityMatrix::random_state(&space, 4, 2).unwrap();
        let out = evolve_ode(&rho, 0.0, DEFAULT_ODE_TOL).unwrap();
        assert!(max_abs(&(out.matrix() - rho.matrix())) < 1e-14);
    }

    #[test]
    fn thermal_state_diffuses_to_thermal_state() {
        let space = FockSpace::new(1, required_cutoff(0.5, 1.0, 1e-8) + 4).unwrap();
        let rho = DensityMatrix::thermal(&space, 0.5).unwrap();
        let out = evolve_ode(&rho, 1.0, DEFAULT_ODE_TOL).unwrap();
        let (d, g) = moments(&out).unwrap();
        assert!(d.norm() < 1e-10);
        assert!((g - crate::linalg::RMatrix::identity(2, 2) * 3.0).abs().max() < 1e-5);
        assert!((von_neumann_entropy(&out) - thermal_entropy(1.0).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn semigroup_property() {
        let space = FockSpace::new(1, 40).unwrap();
        let rho = DensityMatrix::fock(&space, 1).unwrap();
        let half = evolve_ode(&rho, 0.5, DEFAULT_ODE_TOL).unwrap();
        let twice = evolve_ode(&half, 0.5, DEFAULT_ODE_TOL).unwrap();
        let once = evolve_ode(&rho, 1.0, DEFAULT_ODE_TOL).unwrap();
        assert!(trace_distance(twice.matrix(), once.matrix()) < 1e-6);
    }

    #[test]
    fn refuses_runs_that_outgrow_the_cutoff() {
        let space = FockSpace::new(1, 10).unwrap();
        let rho = DensityMatrix::vacuum(&space);
        assert!(matches!(
            evolve_ode(&rho, 3.0, DEFAULT_ODE_TOL),
            Err(Error::TruncationBudgetExceeded { .. })
        ));
    }

    #[test]
    fn required_cutoff_is_tight_for_thermal_states() {
        let d = required_cutoff(1.0, 0.0, 1e-7);
        let space = FockSpace::new(1, d).unwrap();
        assert!(DensityMatrix::thermal(&space, 1.0).is_ok());
        let smaller = FockSpace::new(1, d - 1).unwrap();
        assert!(DensityMatrix::thermal(&smaller, 1.0).is_err());
    }
}
