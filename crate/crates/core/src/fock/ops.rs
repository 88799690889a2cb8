use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, HermitianEigen, RMatrix, C64};
use crate::phase_space::SymplecticForm;

use super::{DensityMatrix, FockSpace};

fn check_len(space: &FockSpace, xi: &[f64]) -> Result<()> {
    if xi.len() != 2 * space.modes() {
        return Err(Error::DimensionMismatch {
            expected: 2 * space.modes(),
            got: xi.len(),
        });
    }
    Ok(())
}

/// Hermitian `ξ·JR = Σ_kl ξ_k J_kl R_l`.
fn symplectic_generator(space: &FockSpace, xi: &[f64]) -> CMatrix {
    let j = SymplecticForm::new(space.modes()).matrix;
    let mut g = CMatrix::zeros(space.dim(), space.dim());
    for l in 0..xi.len() {
        let w: f64 = (0..xi.len()).map(|k| xi[k] * j[(k, l)]).sum();
        if w != 0.0 {
            g += space.dense_quadrature(l) * c(w);
        }
    }
    g
}

/// Weyl operator `D(ξ) = exp(i ξ·JR)` on the truncated space.
///
/// `D(ξ) R D(ξ)† = R + ξ` away from the top levels.
pub fn displacement_op(space: &FockSpace, xi: &[f64]) -> Result<CMatrix> {
    check_len(space, xi)?;
    if xi.iter().all(|&x| x == 0.0) {
        return Ok(CMatrix::identity(space.dim(), space.dim()));
    }
    Ok(HermitianEigen::new(&symplectic_generator(space, xi)).unitary(1.0))
}

/// Moves the state by `ξ` in phase space, `ρ ↦ D(ξ)† ρ D(ξ)`, so the first moments become
/// `d + ξ`. No budget check is applied.
pub fn translate(rho: &DensityMatrix, xi: &[f64]) -> Result<DensityMatrix> {
    let d = displacement_op(rho.space(), xi)?;
    let mat = d.adjoint() * rho.matrix() * &d;
    Ok(DensityMatrix::from_parts(
        rho.space().clone(),
        crate::linalg::hermitize(&mat),
        rho.label().to_string(),
    ))
}

/// Hermitian `H` with `e^{iθH} ρ e^{−iθH}` equal to `ρ` moved by `θ` along quadrature
/// `k` (`Q_j ↦ −P_j`, `P_j ↦ Q_j`).
pub fn translation_generator(space: &FockSpace, k: usize) -> Result<CMatrix> {
    if k >= 2 * space.modes() {
        return Err(Error::domain(format!("quadrature index {k} out of range")));
    }
    Ok(if k % 2 == 0 {
        -space.dense_quadrature(k + 1)
    } else {
        space.dense_quadrature(k - 1).clone()
    })
}

fn mixing_angle(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!("transmissivity {lambda} not in (0,1)")));
    }
    Ok(lambda.sqrt().acos())
}

/// Generator `θ(a†b − ab†)` restricted to photon-number sector `total`, in the basis
/// `|m, total − m⟩` for `m` in `lo..=hi`.
fn sector_generator(theta: f64, total: usize, lo: usize, hi: usize) -> RMatrix {
    let size = hi - lo + 1;
    let mut g = RMatrix::zeros(size, size);
    for m in lo..hi {
        // ⟨m+1, N−m−1| a†b |m, N−m⟩
        let v = theta * (((m + 1) * (total - m)) as f64).sqrt();
        g[(m + 1 - lo, m - lo)] = v;
        g[(m - lo, m + 1 - lo)] = -v;
    }
    g
}

fn sector_unitary(theta: f64, total: usize, lo: usize, hi: usize) -> RMatrix {
    sector_generator(theta, total, lo, hi).exp()
}

/// Beamsplitter `U_λ = exp[θ Σ_j (a_j† b_j − a_j b_j†)]`, `cos θ = √λ`, on a `2n`-mode space
/// whose first `n` modes are `a` and last `n` are `b`. Each photon-number sector is exponentiated
/// inside the truncated space, so `U_λ` is exactly unitary.
pub fn beamsplitter_unitary(space: &FockSpace, lambda: f64) -> Result<CMatrix> {
    let theta = mixing_angle(lambda)?;
    if space.modes() % 2 != 0 {
        return Err(Error::domain("beamsplitter needs an even number of modes"));
    }
    let n = space.modes() / 2;
    let d = space.cutoff();
    let blocks: Vec<(usize, RMatrix)> = (0..=2 * (d - 1))
        .map(|total| {
            let lo = total.saturating_sub(d - 1);
            let hi = total.min(d - 1);
            (lo, sector_unitary(theta, total, lo, hi))
        })
        .collect();
    let dim = space.dim();
    let mut u = CMatrix::zeros(dim, dim);
    let occ = |idx: usize| -> Vec<usize> { (0..2 * n).map(|m| space.occupation(idx, m)).collect() };
    for col in 0..dim {
        let inp = occ(col);
        for row in 0..dim {
            let out = occ(row);
            let mut amp = 1.0;
            for j in 0..n {
                let total = inp[j] + inp[n + j];
                if out[j] + out[n + j] != total {
                    amp = 0.0;
                    break;
                }
                let (lo, ref block) = blocks[total];
                amp *= block[(out[j] - lo, inp[j] - lo)];
            }
            if amp != 0.0 {
                u[(row, col)] = c(amp);
            }
        }
    }
    Ok(u)
}

/// `tr_Y U_λ (ρ_X ⊗ ρ_Y) U_λ†` computed exactly, sector by sector.
///
/// The output lives on a space with cutoff `2D − 1`, which holds every photon-number sector the
/// inputs populate, so no truncation error is introduced here.
pub fn beamsplitter_combine(
    x: &DensityMatrix,
    y: &DensityMatrix,
    lambda: f64,
) -> Result<DensityMatrix> {
    x.space().ensure_same(y.space())?;
    let theta = mixing_angle(lambda)?;
    let space = x.space();
    let n = space.modes();
    let d = space.cutoff();
    let d_out = 2 * d - 1;
    let out_space = space.with_cutoff(d_out)?;
    let blocks: Vec<RMatrix> = (0..d_out)
        .map(|total| sector_unitary(theta, total, 0, total))
        .collect();

    let dim = space.dim();
    let occ: Vec<Vec<usize>> = (0..dim)
        .map(|i| (0..n).map(|m| space.occupation(i, m)).collect())
        .collect();
    let out_dim = out_space.dim();

    let rho_x = x.matrix();
    let rho_y = y.matrix();
    let traced: Vec<Vec<usize>> = (0..out_dim)
        .map(|i| (0..n).map(|m| out_space.occupation(i, m)).collect())
        .collect();

    let out = traced
        .par_iter()
        .map(|kept| {
            // (output index, x index, y index, amplitude) for photons `kept` left in Y
            let mut terms: Vec<(usize, usize, usize, f64)> = Vec::new();
            for p in 0..dim {
                for q in 0..dim {
                    let mut amp = 1.0;
                    let mut idx = 0;
                    for j in 0..n {
                        let total = occ[p][j] + occ[q][j];
                        if kept[j] > total {
                            amp = 0.0;
                            break;
                        }
                        let m = total - kept[j];
                        amp *= blocks[total][(m, occ[p][j])];
                        idx = idx * d_out + m;
                    }
                    if amp != 0.0 {
                        terms.push((idx, p, q, amp));
                    }
                }
            }
            let mut acc = CMatrix::zeros(out_dim, out_dim);
            for &(m, p, q, a) in &terms {
                for &(m2, p2, q2, a2) in &terms {
                    acc[(m, m2)] += rho_x[(p, p2)] * rho_y[(q, q2)] * (a * a2);
                }
            }
            acc
        })
        .reduce(|| CMatrix::zeros(out_dim, out_dim), |a, b| a + b);

    let state = DensityMatrix::from_parts(
        out_space,
        crate::linalg::hermitize(&out),
        format!("combine({lambda})"),
    );
    state.ensure_within_budget()?;
    Ok(state)
}

/// Reduced state of the first `keep` modes.
pub fn partial_trace(rho: &DensityMatrix, keep: usize) -> Result<DensityMatrix> {
    let space = rho.space();
    if keep == 0 || keep >= space.modes() {
        return Err(Error::DimensionMismatch {
            expected: space.modes(),
            got: keep,
        });
    }
    let out_space = space.with_modes(keep)?;
    let inner = space.dim() / out_space.dim();
    let m = rho.matrix();
    let out = CMatrix::from_fn(out_space.dim(), out_space.dim(), |a, b| {
        (0..inner).map(|k| m[(a * inner + k, b * inner + k)]).sum::<C64>()
    });
    Ok(DensityMatrix::from_parts(out_space, out, rho.label().to_string()))
}
