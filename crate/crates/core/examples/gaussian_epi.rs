//! Entropy concavity and the entropy power inequality for random Gaussian pairs.

use qepi::epi::{qepi_power_check, qepi_prime_check};
use qepi::phase_space::random::random_gaussian_state;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> qepi::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let x = random_gaussian_state(2, &mut rng);
        let y = random_gaussian_state(2, &mut rng);
        for lambda in [0.25, 0.5, 0.75] {
            worst = worst.min(qepi_prime_check(&x, &y, lambda)?.margin);
        }
        worst = worst.min(qepi_power_check(&x, &y)?.margin);
    }
    println!("smallest margin over 200 two-mode pairs: {worst:.3e}");
    Ok(())
}
