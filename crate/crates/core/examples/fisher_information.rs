use qepi::fisher::{fisher_directional_commutator, fisher_directional_fd, fisher_total, Direction};
use qepi::fock::{DensityMatrix, FockSpace};

fn main() -> qepi::Result<()> {
    // thermal states: J along each quadrature is ln((N+1)/N)
    for n in [0.5, 1.0, 2.0] {
        let space = FockSpace::new(1, 64)?;
        let rho = DensityMatrix::thermal(&space, n)?;
        let exact = fisher_directional_commutator(&rho, Direction::Q(0))?;
        let fd = fisher_directional_fd(&rho, Direction::Q(0), 1e-2)?;
        println!("N={n}: commutator {exact:.8}, finite difference {fd:.8}, closed form {:.8}", ((n + 1.0) / n).ln());
    }
    let space = FockSpace::new(1, 24)?;
    let rho = DensityMatrix::random_full_rank(&space, 11, 2)?;
    println!("random state: total J = {:.6}", fisher_total(&rho)?);
    Ok(())
}
