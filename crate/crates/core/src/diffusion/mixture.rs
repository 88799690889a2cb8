use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, FockSpace};
use crate::linalg::{CMatrix, C64};
use crate::quadrature::gaussian_expectation_rule;

use super::lindblad::finalize;

/// Smallest accepted Gauss–Hermite order.
pub const MIN_ORDER: usize = 5;

/// Order that resolves a few photons of interference structure at `t ≤ 3`.
pub const DEFAULT_ORDER: usize = 48;

/// `(I ⊗ U ⊗ I) ρ (I ⊗ U ⊗ I)†` with `U` acting on `mode`.
fn conjugate_local(space: &FockSpace, mode: usize, u: &CMatrix, rho: &CMatrix) -> CMatrix {
    if space.modes() == 1 {
        return u * rho * u.adjoint();
    }
    let dim = space.dim();
    let d = space.cutoff();
    let s = space.stride(mode);
    let occ: Vec<usize> = (0..dim).map(|i| space.occupation(i, mode)).collect();
    let mut left = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        let base = r - occ[r] * s;
        for k in 0..d {
            let w = u[(occ[r], k)];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            let src = base + k * s;
            for c in 0..dim {
                left[(r, c)] += w * rho[(src, c)];
            }
        }
    }
    let mut out = CMatrix::zeros(dim, dim);
    for c in 0..dim {
        let base = c - occ[c] * s;
        for k in 0..d {
            let w = u[(occ[c], k)].conj();
            if w.norm_sqr() == 0.0 {
                continue;
            }
            let src = base + k * s;
            for r in 0..dim {
                out[(r, c)] += left[(r, src)] * w;
            }
        }
    }
    out
}

/// `e^{tL}(ρ)` as the average of `D(ξ) ρ D(ξ)†` over `ξ ~ N(0, (t/2) I)`, discretized by a tensor
/// Gauss–Hermite rule of the given order in each quadrature.
///
/// The mixture factorizes over modes, so it is applied one mode at a time.
pub fn evolve_random_displacement(rho: &DensityMatrix, t: f64, order: usize) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("diffusion time {t} < 0")));
    }
    if order < MIN_ORDER {
        return Err(Error::domain(format!("quadrature order {order} < {MIN_ORDER}")));
    }
    rho.ensure_within_budget()?;
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let space = rho.space();
    let single = space.with_modes(1)?;
    let (nodes, weights) = gaussian_expectation_rule(order, 0.5 * t);
    // D(x, p) = e^{i(xP − pQ)} = e^{ixP} e^{−ipQ} e^{ixp/2}, from the cached quadrature
    // eigenbases instead of one exponential per node.
    let shifts_p: Vec<CMatrix> = nodes.iter().map(|&x| single.quadrature_eigen(1).unitary(x)).collect();
    let shifts_q: Vec<CMatrix> = nodes.iter().map(|&p| single.quadrature_eigen(0).unitary(-p)).collect();
    let kernels: Vec<(f64, CMatrix)> = (0..order * order)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (k / order, k % order);
            let phase = C64::from_polar(1.0, 0.5 * nodes[a] * nodes[b]);
            (weights[a] * weights[b], &shifts_p[a] * &shifts_q[b] * phase)
        })
        .collect();
    let mut mat = rho.matrix().clone();
    for mode in 0..space.modes() {
        let current = &mat;
        mat = kernels
            .par_iter()
            .map(|(w, u)| conjugate_local(space, mode, u, current) * C64::new(*w, 0.0))
            .reduce(|| CMatrix::zeros(space.dim(), space.dim()), |a, b| a + b);
    }
    finalize(space, &mat, format!("{}@t={t}", rho.label()))
}
