use qepi::diffusion::{DiffusionRun, Method, DEFAULT_ORDER};
use qepi::fock::{moments, von_neumann_entropy, DensityMatrix, FockSpace};
use qepi::linalg::{trace_distance, C64};

fn main() -> qepi::Result<()> {
    let space = FockSpace::new(1, 48)?;
    let cat = DensityMatrix::cat(&space, C64::new(1.5, 0.0), 0.0)?;
    let times = [0.25, 0.5, 1.0, 1.5];
    let ode = DiffusionRun::new(&cat, &times, Method::default())?;
    let mixture = DiffusionRun::new(&cat, &times, Method::RandomDisplacement { order: DEFAULT_ORDER })?;
    for ((t, a), (_, b)) in ode.iter().zip(mixture.iter()) {
        let (_, gamma) = moments(a)?;
        println!(
            "t={t:<5} S={:.6}  gamma_QQ={:.6}  routes differ by {:.2e}",
            von_neumann_entropy(a),
            gamma[(0, 0)],
            trace_distance(a.matrix(), b.matrix())
        );
    }
    Ok(())
}
