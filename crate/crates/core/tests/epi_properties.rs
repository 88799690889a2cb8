use proptest::prelude::*;
use qepi::epi::{power_concavity_probe, qepi_power_check, qepi_prime_check};
use qepi::fock::{DensityMatrix, FockSpace};
use qepi::linalg::C64;
use qepi::phase_space::GaussianState;
use qepi::phase_space::random::random_gaussian_state;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn backends_agree_on_thermal_pairs(nx in 0.05f64..1.0, ny in 0.05f64..1.0, lambda in 0.05f64..0.95) {
        let space = FockSpace::new(1, 48).unwrap();
        let (fx, fy) = (DensityMatrix::thermal(&space, nx).unwrap(), DensityMatrix::thermal(&space, ny).unwrap());
        let (gx, gy) = (GaussianState::thermal(1, nx).unwrap(), GaussianState::thermal(1, ny).unwrap());
        let fock = qepi_prime_check(&fx, &fy, lambda).unwrap();
        let gauss = qepi_prime_check(&gx, &gy, lambda).unwrap();
        prop_assert!((fock.margin - gauss.margin).abs() <= 1e-4);
        let fock = qepi_power_check(&fx, &fy).unwrap();
        let gauss = qepi_power_check(&gx, &gy).unwrap();
        prop_assert!((fock.margin - gauss.margin).abs() <= 1e-4);
    }

    #[test]
    fn coherent_inputs_saturate(re in -1.0f64..1.0, im in -1.0f64..1.0, lambda in 0.05f64..0.95) {
        let space = FockSpace::new(1, 24).unwrap();
        let x = DensityMatrix::coherent(&space, &[C64::new(re, im)]).unwrap();
        let y = DensityMatrix::coherent(&space, &[C64::new(im, -re)]).unwrap();
        prop_assert!(qepi_prime_check(&x, &y, lambda).unwrap().margin.abs() <= 1e-6);
        prop_assert!(qepi_power_check(&x, &y).unwrap().margin.abs() <= 1e-6);
    }

    #[test]
    fn power_concavity_never_gates(seed in any::<u64>(), lambda in 0.05f64..0.95) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = random_gaussian_state(2, &mut rng);
        let y = random_gaussian_state(2, &mut rng);
        prop_assert!(!power_concavity_probe(&x, &y, lambda).unwrap().normative);
    }
}

#[test]
fn small_transmissivity_approaches_the_second_input() {
    let x = GaussianState::thermal(1, 0.3).unwrap();
    let y = GaussianState::squeezed_vacuum(0.4).product(&GaussianState::thermal(1, 1.2).unwrap());
    let x = x.product(&GaussianState::vacuum(1));
    let margins: Vec<f64> = [0.1, 0.03, 0.01]
        .iter()
        .map(|&l| qepi_prime_check(&x, &y, l).unwrap().diagnostics["entropy_out"] - y.entropy().unwrap())
        .collect();
    assert!(margins.windows(2).all(|w| w[1].abs() < w[0].abs()), "{margins:?}");
}
