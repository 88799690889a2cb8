use qepi::fock::{gaussify, moments, von_neumann_entropy, DensityMatrix, FockSpace};
use qepi::linalg::C64;

fn main() -> qepi::Result<()> {
    let space = FockSpace::new(1, 40)?;
    let states = [
        DensityMatrix::vacuum(&space),
        DensityMatrix::thermal(&space, 1.0)?,
        DensityMatrix::fock(&space, 2)?,
        DensityMatrix::coherent(&space, &[C64::new(1.0, 0.5)])?,
        DensityMatrix::cat(&space, C64::new(2.0, 0.0), 0.0)?,
        DensityMatrix::random_full_rank(&space, 3, 2)?,
    ];
    println!("{:<22} {:>10} {:>10} {:>12} {:>10}", "state", "S", "S(gauss)", "<Q>", "tail");
    for rho in &states {
        let (mean, _) = moments(rho)?;
        println!(
            "{:<22} {:>10.6} {:>10.6} {:>12.6} {:>10.2e}",
            rho.label(),
            von_neumann_entropy(rho),
            gaussify(rho)?.entropy()?,
            mean[0],
            rho.max_tail_mass()
        );
    }
    Ok(())
}
