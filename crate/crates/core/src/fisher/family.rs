use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{translation_generator, DensityMatrix};
use crate::linalg::{hermitize, CMatrix, HermitianEigen};

/// Phase-space direction of a translation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Q(usize),
    P(usize),
}

impl Direction {
    /// Index in the quadrature ordering `(Q₁, P₁, …)`.
    pub fn quadrature_index(self) -> usize {
        match self {
            Direction::Q(j) => 2 * j,
            Direction::P(j) => 2 * j + 1,
        }
    }

    pub fn from_quadrature_index(k: usize) -> Self {
        if k % 2 == 0 {
            Direction::Q(k / 2)
        } else {
            Direction::P(k / 2)
        }
    }

    pub fn mode(self) -> usize {
        self.quadrature_index() / 2
    }

    /// All `2n` directions in quadrature order.
    pub fn all(modes: usize) -> Vec<Direction> {
        (0..2 * modes).map(Self::from_quadrature_index).collect()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Q(j) => write!(f, "Q{}", j + 1),
            Direction::P(j) => write!(f, "P{}", j + 1),
        }
    }
}

/// `θ ↦ e^{iθH} ρ e^{−iθH}`, the state moved by `θ` along `direction`.
#[derive(Debug, Clone)]
pub struct TranslationFamily {
    base: DensityMatrix,
    direction: Direction,
    generator: CMatrix,
    eigen: HermitianEigen,
}

impl TranslationFamily {
    pub fn new(base: &DensityMatrix, direction: Direction) -> Result<Self> {
        if direction.mode() >= base.space().modes() {
            return Err(Error::domain(format!(
                "direction {direction} on a {}-mode state",
                base.space().modes()
            )));
        }
        let generator = translation_generator(base.space(), direction.quadrature_index())?;
        let eigen = HermitianEigen::new(&generator);
        Ok(TranslationFamily {
            base: base.clone(),
            direction,
            generator,
            eigen,
        })
    }

    pub fn base(&self) -> &DensityMatrix {
        &self.base
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    /// Member at parameter `theta`. No budget check.
    pub fn at(&self, theta: f64) -> DensityMatrix {
        self.conjugate(&self.base, theta)
    }

    /// `e^{iθH} ρ e^{−iθH}` for an arbitrary state on the same space.
    pub fn conjugate(&self, rho: &DensityMatrix, theta: f64) -> DensityMatrix {
        if theta == 0.0 {
            return rho.clone();
        }
        let u = self.eigen.unitary(theta);
        let mat = hermitize(&(&u * rho.matrix() * u.adjoint()));
        DensityMatrix::from_parts(rho.space().clone(), mat, rho.label().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{moments, FockSpace};
    use crate::linalg::max_abs;

    #[test]
    fn direction_indexing() {
        assert_eq!(Direction::all(2), vec![
            Direction::Q(0),
            Direction::P(0),
            Direction::Q(1),
            Direction::P(1)
        ]);
        assert_eq!(Direction::P(1).quadrature_index(), 3);
        assert_eq!(Direction::P(1).to_string(), "P2");
    }

    #[test]
    fn family_is_covariant_and_moves_the_mean() {
        let space = FockSpace::new(1, 30).unwrap();
        let rho = DensityMatrix::thermal(&space, 0.5).unwrap();
        let fam = TranslationFamily::new(&rho, Direction::P(0)).unwrap();
        let g = fam.generator();
        assert!(max_abs(&(g - g.adjoint())) < 1e-12);
        let stepped = fam.conjugate(&fam.at(0.2), 0.3);
        assert!(max_abs(&(stepped.matrix() - fam.at(0.5).matrix())) < 1e-8);
        let (d, _) = moments(&fam.at(0.5)).unwrap();
        assert!((d[1] - 0.5).abs() < 1e-8 && d[0].abs() < 1e-8);
        assert!(TranslationFamily::new(&rho, Direction::Q(1)).is_err());
    }
}
