use qepi::phase_space::{symplectic_eigenvalues, weak_submajorization_check, GaussianChannel, GaussianState};
use qepi::linalg::RMatrix;

fn main() -> qepi::Result<()> {
    let squeezed = GaussianState::squeezed_vacuum(0.8);
    let thermal = GaussianState::thermal(1, 1.5)?;
    let mixed = GaussianChannel::beamsplitter(0.5, 1)?.apply(&squeezed.product(&thermal))?;
    for (name, s) in [("squeezed", &squeezed), ("thermal", &thermal), ("mixed", &mixed)] {
        println!(
            "{name:>9}: nu = {:?}, S = {:.6} nats",
            s.symplectic_eigenvalues()?,
            s.entropy()?
        );
    }

    // partial sums of symplectic spectra under addition
    let e2 = 2f64.exp();
    let a = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![e2, 1.0 / e2]));
    let b = RMatrix::identity(2, 2);
    println!("nu(A+B) = {:?}", symplectic_eigenvalues(&(&a + &b))?);
    println!("{}", weak_submajorization_check(&a, &b)?);
    Ok(())
}
