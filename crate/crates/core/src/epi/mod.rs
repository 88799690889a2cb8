//! Entropy inequalities under beamsplitter addition: the de Bruijn identity, the entropy and
//! entropy-power inequalities, the monotone entropy gap along diffusion and a replay of the
//! coupled-clock argument for the 50:50 entropy power inequality.
//!
//! Every check is generic over [`Register`], so it runs on exact Gaussian states and on
//! truncated Fock-space states alike.

mod blachman;
mod checks;
mod register;

pub use blachman::{blachman_replay, BlachmanTrace, CLOCK_TOL, DEFAULT_T_MAX};
pub use checks::{
    de_bruijn_residual, delta_monotonicity_trace, entropy_gap_trajectory, power_concavity_probe,
    qepi_power_check, qepi_prime_check, DEBRUIJN_ABS_TOL, DEBRUIJN_REL_TOL, DEBRUIJN_STEP,
    DELTA_STEP_TOL, EPI_TOL,
};
pub use register::Register;
