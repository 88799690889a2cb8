//! Entropy production under diffusion against a quarter of the Fisher information.

use qepi::epi::{de_bruijn_residual, DEBRUIJN_STEP};
use qepi::fock::{DensityMatrix, FockSpace};
use qepi::phase_space::GaussianState;

fn main() -> qepi::Result<()> {
    let gaussian = GaussianState::thermal(1, 1.0)?;
    let space = FockSpace::new(1, 64)?;
    let fock = DensityMatrix::thermal(&space, 1.0)?;
    let photon = DensityMatrix::fock(&FockSpace::new(1, 48)?, 1)?.regularize(1e-3)?;
    for t in [0.5, 1.0, 2.0] {
        for r in [
            de_bruijn_residual(&gaussian, t, DEBRUIJN_STEP)?,
            de_bruijn_residual(&fock, t, DEBRUIJN_STEP)?,
            de_bruijn_residual(&photon, t, DEBRUIJN_STEP)?,
        ] {
            println!("t={t} {:<28} {r}", r.inputs["state"]);
        }
    }
    Ok(())
}
