//! Dense Hermitian and real-symmetric helpers shared by both backends.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().map(|z| z.abs()).fold(0.0, f64::max)
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Entries this far below the largest one are zeroed before eigendecomposition; nalgebra's
/// QR sweeps return NaN once products of small entries underflow, which happens with entries
/// below about 1e-77.
const FLUSH_RATIO: f64 = 1e-60;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let mut h = hermitize(m);
        let floor = FLUSH_RATIO * max_abs(&h);
        h.iter_mut().filter(|z| z.norm() < floor).for_each(|z| *z = C64::new(0.0, 0.0));
        let eig = SymmetricEigen::new(h);
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
        HermitianEigen { values, vectors }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `V f(Λ) V†`.
    pub fn map<F: Fn(f64) -> C64>(&self, f: F) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for col in 0..n {
            let w = f(self.values[col]);
            for r in 0..n {
                scaled[(r, col)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    /// `exp(i θ H)` for the decomposed Hermitian `H`.
    pub fn unitary(&self, theta: f64) -> CMatrix {
        self.map(|x| C64::from_polar(1.0, theta * x))
    }
}

/// Trace distance `½‖a − b‖₁` of two Hermitian matrices.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = a - b;
    0.5 * HermitianEigen::new(&diff).values.iter().map(|v| v.abs()).sum::<f64>()
}

/// Real symmetric eigendecomposition, eigenvalues ascending.
pub fn sym_eigen(m: &RMatrix) -> (DVector<f64>, RMatrix) {
    let mut sym = (m + m.transpose()) * 0.5;
    let floor = FLUSH_RATIO * max_abs_real(&sym);
    sym.iter_mut().filter(|x| x.abs() < floor).for_each(|x| *x = 0.0);
    let eig = SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = RMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// `V f(Λ) Vᵀ` for a real symmetric matrix.
pub fn sym_map<F: Fn(f64) -> f64>(m: &RMatrix, f: F) -> RMatrix {
    let (values, vectors) = sym_eigen(m);
    let mut scaled = vectors.clone();
    for col in 0..values.len() {
        let w = f(values[col]);
        scaled.column_mut(col).scale_mut(w);
    }
    &scaled * vectors.transpose()
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(c)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_entries_do_not_poison_the_spectrum() {
        // outer product of a vector decaying to 1e-95
        let v = DVector::from_fn(60, |k, _| C64::new(0.0, -0.12f64.powi(k as i32) / (1..=k).map(|j| (j as f64).sqrt()).product::<f64>()));
        let m = &v * v.adjoint();
        let e = HermitianEigen::new(&m);
        assert!(e.values.iter().all(|x| x.is_finite()));
        assert!((e.values[59] - v.norm_squared()).abs() < 1e-12);
    }
    use approx::assert_relative_eq;

    #[test]
    fn unitary_of_pauli_x() {
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let u = HermitianEigen::new(&x).unitary(std::f64::consts::FRAC_PI_2);
        // exp(i π/2 X) = i X
        assert_relative_eq!(u[(0, 1)].im, 1.0, epsilon = 1e-12);
        assert_relative_eq!(u[(0, 0)].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_distance_of_orthogonal_projectors_is_one() {
        let a = CMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(0.0)]));
        let b = CMatrix::from_diagonal(&DVector::from_vec(vec![c(0.0), c(1.0)]));
        assert_relative_eq!(trace_distance(&a, &b), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sym_map_square_root() {
        let m = RMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let r = sym_map(&m, f64::sqrt);
        assert_relative_eq!(r[(1, 1)], 3.0, epsilon = 1e-12);
    }
}
