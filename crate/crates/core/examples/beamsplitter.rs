//! Mixing a single photon with thermal light at several transmissivities.

use qepi::fock::{beamsplitter_combine, von_neumann_entropy, DensityMatrix, FockSpace};

fn main() -> qepi::Result<()> {
    let space = FockSpace::new(1, 20)?;
    let one = DensityMatrix::fock(&space, 1)?;
    let th = DensityMatrix::thermal(&space, 0.5)?;
    let (sx, sy) = (von_neumann_entropy(&one), von_neumann_entropy(&th));
    for lambda in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let out = beamsplitter_combine(&one, &th, lambda)?;
        let s = von_neumann_entropy(&out);
        println!(
            "lambda={lambda:.1}  S(out)={s:.6}  gap={:.6}  cutoff={}",
            s - lambda * sx - (1.0 - lambda) * sy,
            out.space().cutoff()
        );
    }
    Ok(())
}
