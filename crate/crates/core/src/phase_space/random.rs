//! Random symplectic matrices and valid Gaussian states.
//!
//! States are drawn as `γ = S D Sᵀ` with `D = diag(ν₁, ν₁, …)`, `ν_k ~ U[1, 5]` and `S` a product
//! of random phase rotations, single-mode squeezers (`|r| ≤ 1`) and two-mode beamsplitters, so
//! every draw is valid by construction.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::RMatrix;

use super::GaussianState;

pub const MAX_SQUEEZE: f64 = 1.0;

fn phase_rotation(n: usize, mode: usize, phi: f64) -> RMatrix {
    let mut s = RMatrix::identity(2 * n, 2 * n);
    let (c, sn) = (phi.cos(), phi.sin());
    let k = 2 * mode;
    s[(k, k)] = c;
    s[(k, k + 1)] = sn;
    s[(k + 1, k)] = -sn;
    s[(k + 1, k + 1)] = c;
    s
}

fn squeezer(n: usize, mode: usize, r: f64) -> RMatrix {
    let mut s = RMatrix::identity(2 * n, 2 * n);
    s[(2 * mode, 2 * mode)] = r.exp();
    s[(2 * mode + 1, 2 * mode + 1)] = (-r).exp();
    s
}

fn two_mode_mixer(n: usize, a: usize, b: usize, theta: f64) -> RMatrix {
    let mut s = RMatrix::identity(2 * n, 2 * n);
    let (c, sn) = (theta.cos(), theta.sin());
    for q in 0..2 {
        let (i, j) = (2 * a + q, 2 * b + q);
        s[(i, i)] = c;
        s[(j, j)] = c;
        s[(i, j)] = sn;
        s[(j, i)] = -sn;
    }
    s
}

/// Random symplectic matrix on `n` modes with squeeze parameters bounded by `max_squeeze`.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, max_squeeze: f64, rng: &mut R) -> RMatrix {
    let tau = std::f64::consts::TAU;
    let mut s = RMatrix::identity(2 * n, 2 * n);
    for _layer in 0..2 {
        for m in 0..n {
            s = phase_rotation(n, m, rng.gen::<f64>() * tau) * s;
            s = squeezer(n, m, rng.gen_range(-max_squeeze..=max_squeeze)) * s;
            s = phase_rotation(n, m, rng.gen::<f64>() * tau) * s;
        }
        for a in 0..n {
            for b in (a + 1)..n {
                s = two_mode_mixer(n, a, b, rng.gen::<f64>() * tau) * s;
            }
        }
    }
    s
}

/// Random valid `n`-mode Gaussian state with standard-normal first moments.
pub fn random_gaussian_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GaussianState {
    let nu: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..=5.0)).collect();
    let mut d = RMatrix::zeros(2 * n, 2 * n);
    for (k, v) in nu.iter().enumerate() {
        d[(2 * k, 2 * k)] = *v;
        d[(2 * k + 1, 2 * k + 1)] = *v;
    }
    let s = random_symplectic(n, MAX_SQUEEZE, rng);
    let gamma = &s * d * s.transpose();
    let mean = DVector::from_fn(2 * n, |_, _| rng.sample::<f64, _>(StandardNormal));
    // validity holds by construction up to rounding; symmetrization happens in `new`
    GaussianState::with_tolerance(mean, gamma, 1e-8).expect("SDSᵀ with ν ≥ 1 is a valid covariance")
}

/// Random symmetric positive definite `2n × 2n` matrix.
///
/// Alternates between a Williamson-form draw (`ν_k ~ U[0.2, 5]`, not necessarily a physical
/// covariance) and a generic `MMᵀ + 0.1 I` draw.
pub fn random_spd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMatrix {
    let dim = 2 * n;
    if rng.gen::<bool>() {
        let mut d = RMatrix::zeros(dim, dim);
        for k in 0..n {
            let v = rng.gen_range(0.2..=5.0);
            d[(2 * k, 2 * k)] = v;
            d[(2 * k + 1, 2 * k + 1)] = v;
        }
        let s = random_symplectic(n, MAX_SQUEEZE, rng);
        let m = &s * d * s.transpose();
        (&m + m.transpose()) * 0.5
    } else {
        let m = RMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let p = &m * m.transpose() + RMatrix::identity(dim, dim) * 0.1;
        (&p + p.transpose()) * 0.5
    }
}
