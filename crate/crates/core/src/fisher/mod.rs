//! Divergence-based Fisher information of phase-space translation families.
//!
//! For `ρ^{(θ)} = e^{iθH} ρ e^{−iθH}` the information is the second derivative of
//! `θ ↦ S(ρ ‖ ρ^{(θ)})` at zero, which equals `tr(ρ [H, [H, ln ρ]])`. Both the closed formula
//! and a finite-difference oracle are provided, together with the structural inequalities the
//! quantity satisfies under beamsplitter mixing.

mod checks;
mod family;
mod information;

pub use checks::{
    check_convexity, check_data_processing, check_fd_agreement, check_reparametrization, check_stam,
    check_translation_compatibility, check_weighted_convexity, Processing, FD_REL_TOL, FISHER_TOL,
    TRANSLATION_TOL,
};
pub use family::{Direction, TranslationFamily};
pub use information::{
    fisher_directional_commutator, fisher_directional_fd, fisher_directional_fd_detail,
    fisher_total, second_difference, FisherEvaluator, SecondDifference, DEFAULT_STEP,
    RANK_LEAKAGE_TOL, STEP_RANGE,
};
