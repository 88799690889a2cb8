use proptest::prelude::*;
use qepi::fock::{
    beamsplitter_combine, beamsplitter_unitary, displacement_op, gaussify, moments, q_function, relative_entropy,
    von_neumann_entropy, DensityMatrix, FockSpace,
};
use qepi::linalg::{max_abs, max_abs_real, CMatrix, C64};
use qepi::phase_space::GaussianChannel;
use qepi::quadrature::gaussian_expectation_rule;

fn unitarity_defect(u: &CMatrix) -> f64 {
    max_abs(&(u.adjoint() * u - CMatrix::identity(u.nrows(), u.ncols())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gaussian_constructors_agree_across_backends(n in 0.0f64..1.5, re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let space = FockSpace::new(1, 60).unwrap();
        let states = [
            DensityMatrix::thermal(&space, n).unwrap(),
            DensityMatrix::coherent(&space, &[C64::new(re, im)]).unwrap(),
            DensityMatrix::displaced_thermal(&space, n, &[re, im]).unwrap(),
        ];
        for rho in &states {
            let fock = von_neumann_entropy(rho);
            let gauss = gaussify(rho).unwrap().entropy().unwrap();
            prop_assert!((fock - gauss).abs() < 1e-6, "{}: {fock} vs {gauss}", rho.label());
        }
    }

    #[test]
    fn combine_matches_the_gaussian_channel(n_x in 0.0f64..1.0, n_y in 0.0f64..1.0, a in -1.0f64..1.0, lambda in 0.05f64..0.95) {
        let space = FockSpace::new(1, 40).unwrap();
        let x = DensityMatrix::displaced_thermal(&space, n_x, &[a, 0.3]).unwrap();
        let y = DensityMatrix::thermal(&space, n_y).unwrap();
        let out = beamsplitter_combine(&x, &y, lambda).unwrap();
        let expected = GaussianChannel::beamsplitter(lambda, 1)
            .unwrap()
            .apply(&gaussify(&x).unwrap().product(&gaussify(&y).unwrap()))
            .unwrap();
        let (d, gamma) = moments(&out).unwrap();
        prop_assert!(max_abs_real(&(gamma - expected.covariance())) < 1e-6);
        prop_assert!((d - expected.mean()).amax() < 1e-6);
        prop_assert!((von_neumann_entropy(&out) - expected.entropy().unwrap()).abs() < 1e-5);
    }

    #[test]
    fn weyl_and_beamsplitter_operators_are_unitary(q in -2.0f64..2.0, p in -2.0f64..2.0, lambda in 0.01f64..0.99) {
        let one = FockSpace::new(1, 20).unwrap();
        prop_assert!(unitarity_defect(&displacement_op(&one, &[q, p]).unwrap()) <= 1e-10);
        let two = FockSpace::new(2, 8).unwrap();
        prop_assert!(unitarity_defect(&beamsplitter_unitary(&two, lambda).unwrap()) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn relative_entropy_contracts_under_mixing(seed in 0u64..1_000_000, lambda in 0.05f64..0.95, n in 0.1f64..1.0) {
        let space = FockSpace::new(1, 12).unwrap().with_budget(1e-2);
        let rho = DensityMatrix::random_full_rank(&space, seed, 3).unwrap();
        let sigma = DensityMatrix::random_full_rank(&space, seed + 1, 3).unwrap();
        let env = DensityMatrix::thermal(&space, n).unwrap();
        let before = relative_entropy(&rho, &sigma).unwrap();
        let after = relative_entropy(
            &beamsplitter_combine(&rho, &env, lambda).unwrap(),
            &beamsplitter_combine(&sigma, &env, lambda).unwrap(),
        )
        .unwrap();
        prop_assert!(before - after >= -1e-7, "{before} < {after}");
    }
}

/// Moments of the Husimi density by Gauss–Hermite quadrature against a wide Gaussian.
fn q_moments(rho: &DensityMatrix) -> ([f64; 2], [[f64; 2]; 2]) {
    let variance = 4.0;
    let (nodes, weights) = gaussian_expectation_rule(60, variance);
    let density = |x: f64| (-x * x / (2.0 * variance)).exp() / (std::f64::consts::TAU * variance).sqrt();
    let mut first = [0.0; 2];
    let mut second = [[0.0; 2]; 2];
    for (i, &q) in nodes.iter().enumerate() {
        for (j, &p) in nodes.iter().enumerate() {
            let w = weights[i] * weights[j] * q_function(rho, &[q, p]).unwrap() / (density(q) * density(p));
            let v = [q, p];
            for a in 0..2 {
                first[a] += w * v[a];
                for b in 0..2 {
                    second[a][b] += w * v[a] * v[b];
                }
            }
        }
    }
    (first, second)
}

#[test]
fn husimi_density_reproduces_moments() {
    let space = FockSpace::new(1, 30).unwrap();
    let states = [
        DensityMatrix::fock(&space, 1).unwrap(),
        DensityMatrix::random_full_rank(&space, 4, 2).unwrap(),
        DensityMatrix::coherent(&space, &[C64::new(0.4, -0.2)]).unwrap(),
    ];
    for rho in &states {
        let (d, gamma) = moments(rho).unwrap();
        let (first, second) = q_moments(rho);
        for a in 0..2 {
            assert!((first[a] - d[a]).abs() < 1e-3, "{}", rho.label());
            for b in 0..2 {
                // the Husimi covariance is (γ + I)/2
                let cov = second[a][b] - first[a] * first[b];
                let expected = 0.5 * (gamma[(a, b)] + if a == b { 1.0 } else { 0.0 });
                assert!((cov - expected).abs() < 1e-3, "{}: {cov} vs {expected}", rho.label());
            }
        }
    }
}
