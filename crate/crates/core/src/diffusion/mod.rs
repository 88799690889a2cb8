//! The quantum diffusion semigroup `e^{tL}`, which adds `tI` to covariance matrices and damps
//! characteristic functions by `exp(−‖ξ‖² t / 4)`.
//!
//! Two independent Fock-space implementations are provided: integration of the master equation
//! and an average over random phase-space translations.

mod checks;
mod lindblad;
mod mixture;

pub use checks::{
    check_asymptotics, check_beamsplitter_compatibility, check_covariance_growth,
    check_route_agreement, check_scaling_bounds, gaussification_gap, ASYMPTOTIC_TOL, MOMENT_TOL,
    ROUTE_TOL, SCALING_TOL,
};
pub use lindblad::{
    evolve_ode, evolve_ode_snapshots, lindblad_apply, lindblad_rhs, required_cutoff,
    DEFAULT_ODE_TOL, MAX_TRACE_DRIFT,
};
pub use mixture::{evolve_random_displacement, DEFAULT_ORDER, MIN_ORDER};

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Ode { tol: f64 },
    RandomDisplacement { order: usize },
}

impl Default for Method {
    fn default() -> Self {
        Method::Ode {
            tol: DEFAULT_ODE_TOL,
        }
    }
}

/// Snapshots of `e^{tL}(ρ)` on a strictly increasing time grid.
#[derive(Debug, Clone)]
pub struct DiffusionRun {
    initial: DensityMatrix,
    times: Vec<f64>,
    method: Method,
    snapshots: Vec<DensityMatrix>,
}

impl DiffusionRun {
    pub fn new(initial: &DensityMatrix, times: &[f64], method: Method) -> Result<Self> {
        if times.is_empty()
            || !(times[0] >= 0.0)
            || times.windows(2).any(|w| !(w[1] > w[0]))
        {
            return Err(Error::domain("time grid must be non-empty, non-negative and strictly increasing"));
        }
        let snapshots = match method {
            Method::Ode { tol } => evolve_ode_snapshots(initial, times, tol)?,
            Method::RandomDisplacement { order } => times
                .iter()
                .map(|&t| evolve_random_displacement(initial, t, order))
                .collect::<Result<_>>()?,
        };
        Ok(DiffusionRun {
            initial: initial.clone(),
            times: times.to_vec(),
            method,
            snapshots,
        })
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn snapshots(&self) -> &[DensityMatrix] {
        &self.snapshots
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(&self.snapshots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{von_neumann_entropy, FockSpace};

    #[test]
    fn rejects_unsorted_grids() {
        let space = FockSpace::new(1, 8).unwrap();
        let vac = DensityMatrix::vacuum(&space);
        assert!(DiffusionRun::new(&vac, &[0.5, 0.5], Method::default()).is_err());
        assert!(DiffusionRun::new(&vac, &[-0.1, 0.5], Method::default()).is_err());
        assert!(DiffusionRun::new(&vac, &[], Method::default()).is_err());
    }

    #[test]
    fn entropy_grows_along_a_run() {
        let space = FockSpace::new(1, required_cutoff(2.0, 1.5, 1e-8)).unwrap();
        let rho = DensityMatrix::fock(&space, 2).unwrap();
        let run = DiffusionRun::new(&rho, &[0.0, 0.25, 0.5, 1.0, 1.5], Method::default()).unwrap();
        let s: Vec<f64> = run.snapshots().iter().map(von_neumann_entropy).collect();
        for w in s.windows(2) {
            assert!(w[1] - w[0] >= -1e-6);
        }
    }
}
