use crate::diffusion::{evolve_ode, evolve_ode_snapshots, required_cutoff, DEFAULT_ODE_TOL};
use crate::error::{Error, Result};
use crate::fisher::fisher_total;
use crate::fock::{beamsplitter_combine, von_neumann_entropy, DensityMatrix};
use crate::phase_space::{gaussian_fisher, GaussianChannel, GaussianState};

/// A state representation on which the entropy inequalities can be evaluated.
///
/// Implemented exactly for [`GaussianState`] and numerically for truncated [`DensityMatrix`]
/// states, so every check runs unchanged on either backend.
pub trait Register: Clone + Send + Sync + Sized {
    fn modes(&self) -> usize;

    fn label(&self) -> String;

    /// Von Neumann entropy in nats.
    fn entropy(&self) -> Result<f64>;

    /// `e^{S/n}`.
    fn entropy_power(&self) -> Result<f64> {
        Ok((self.entropy()? / self.modes() as f64).exp())
    }

    /// Beamsplitter of transmissivity `lambda` applied to `self ⊗ other`, second port discarded.
    fn combine(&self, other: &Self, lambda: f64) -> Result<Self>;

    /// `e^{tL}` applied to `self`.
    fn diffuse(&self, t: f64) -> Result<Self>;

    /// `e^{tL}` for every entry of a non-decreasing grid.
    fn diffuse_grid(&self, times: &[f64]) -> Result<Vec<Self>> {
        times.iter().map(|&t| self.diffuse(t)).collect()
    }

    /// Total phase-space Fisher information; `+∞` when a mode is pure in the exact backend.
    fn fisher(&self) -> Result<f64>;

    /// Longest diffusion time the representation can absorb.
    fn horizon(&self) -> f64;
}

impl Register for GaussianState {
    fn modes(&self) -> usize {
        GaussianState::modes(self)
    }

    fn label(&self) -> String {
        match self.symplectic_eigenvalues() {
            Ok(nu) => {
                let parts: Vec<String> = nu.iter().map(|v| format!("{v:.6}")).collect();
                format!("gaussian(nu=[{}])", parts.join(","))
            }
            Err(_) => "gaussian".to_string(),
        }
    }

    fn entropy(&self) -> Result<f64> {
        GaussianState::entropy(self)
    }

    fn combine(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.modes() != other.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                got: other.modes(),
            });
        }
        GaussianChannel::beamsplitter(lambda, self.modes())?.apply(&self.product(other))
    }

    fn diffuse(&self, t: f64) -> Result<Self> {
        GaussianChannel::diffusion(t, self.modes())?.apply(self)
    }

    fn fisher(&self) -> Result<f64> {
        gaussian_fisher(self)
    }

    fn horizon(&self) -> f64 {
        f64::INFINITY
    }
}

impl Register for DensityMatrix {
    fn modes(&self) -> usize {
        self.space().modes()
    }

    fn label(&self) -> String {
        DensityMatrix::label(self).to_string()
    }

    fn entropy(&self) -> Result<f64> {
        Ok(von_neumann_entropy(self))
    }

    fn combine(&self, other: &Self, lambda: f64) -> Result<Self> {
        beamsplitter_combine(self, other, lambda)
    }

    fn diffuse(&self, t: f64) -> Result<Self> {
        if t == 0.0 {
            return Ok(self.clone());
        }
        evolve_ode(self, t, DEFAULT_ODE_TOL)
    }

    fn diffuse_grid(&self, times: &[f64]) -> Result<Vec<Self>> {
        evolve_ode_snapshots(self, times, DEFAULT_ODE_TOL)
    }

    fn fisher(&self) -> Result<f64> {
        fisher_total(self)
    }

    /// Largest `t` for which a thermal mode with the state's largest mean photon number plus
    /// `t/2` still fits the cutoff and budget.
    fn horizon(&self) -> f64 {
        let space = self.space();
        let mean = (0..space.modes())
            .map(|j| space.number(j).trace_with(self.matrix()).re)
            .fold(0.0, f64::max);
        let cutoff = space.cutoff();
        let budget = space.budget();
        let fits = |t: f64| {
            let grown = mean + 0.5 * t;
            required_cutoff(mean, t, budget) <= cutoff
                && grown + 6.0 * (grown * (grown + 1.0)).sqrt() <= (cutoff - 1) as f64
        };
        if !fits(0.0) {
            return 0.0;
        }
        let mut hi = 1.0;
        while fits(hi) {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if fits(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;

    #[test]
    fn backends_agree_on_thermal_states() {
        let space = FockSpace::new(1, 48).unwrap();
        let f = DensityMatrix::thermal(&space, 1.0).unwrap();
        let g = GaussianState::thermal(1, 1.0).unwrap();
        assert!((Register::entropy(&f).unwrap() - Register::entropy(&g).unwrap()).abs() < 1e-8);
        assert!((f.fisher().unwrap() - g.fisher().unwrap()).abs() < 1e-6);
        let fd = f.diffuse(0.5).unwrap();
        let gd = g.diffuse(0.5).unwrap();
        assert!((Register::entropy(&fd).unwrap() - Register::entropy(&gd).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn fock_horizon_tracks_the_cutoff() {
        let small = FockSpace::new(1, 24).unwrap();
        let large = FockSpace::new(1, 64).unwrap();
        let h_small = DensityMatrix::vacuum(&small).horizon();
        let h_large = DensityMatrix::vacuum(&large).horizon();
        assert!(h_small > 0.0 && h_large > h_small);
        let rho = DensityMatrix::vacuum(&large);
        assert!(rho.diffuse(0.9 * h_large).is_ok());
        assert_eq!(GaussianState::vacuum(1).horizon(), f64::INFINITY);
    }

    #[test]
    fn gaussian_combine_rejects_mismatched_modes() {
        let a = GaussianState::vacuum(1);
        let b = GaussianState::vacuum(2);
        assert!(a.combine(&b, 0.5).is_err());
    }
}
