//! Gauss–Hermite rules (Golub–Welsch).

use crate::linalg::{sym_eigen, RMatrix};

/// Nodes and weights for `∫ f(x) e^{-x²} dx ≈ Σ w_i f(x_i)`.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let mut jacobi = RMatrix::zeros(order, order);
    for k in 1..order {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let (values, vectors) = sym_eigen(&jacobi);
    let mu0 = std::f64::consts::PI.sqrt();
    let nodes = values.iter().copied().collect();
    let weights = (0..order).map(|i| mu0 * vectors[(0, i)].powi(2)).collect();
    (nodes, weights)
}

/// Rule for expectations under `N(0, variance)`: `E f(X) ≈ Σ w_i f(x_i)` with `Σ w_i = 1`.
pub fn gaussian_expectation_rule(order: usize, variance: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_hermite(order);
    let scale = (2.0 * variance).sqrt();
    let norm = std::f64::consts::PI.sqrt();
    (
        x.into_iter().map(|v| v * scale).collect(),
        w.into_iter().map(|v| v / norm).collect(),
    )
}
