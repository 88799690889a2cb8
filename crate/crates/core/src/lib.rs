pub mod check;
pub mod diffusion;
pub mod epi;
pub mod error;
pub mod fisher;
pub mod fock;
pub mod linalg;
pub mod ode;
pub mod phase_space;
pub mod quadrature;
pub mod runner;

pub use check::CheckReport;
pub use error::{Error, Result};
