//! Fractional Hermite-Hadamard, Fejér, Dragomir-Agarwal and Pachpatte checks.
//!
//! Every checker evaluates the terms of one inequality chain for one
//! `(u, α, [a, b])`, forms the slacks in the asserted direction and turns them
//! into a three-way [`Verdict`] using a margin derived from the quadrature
//! error estimates.

mod checks;
mod limits;
mod report;

use serde::{Deserialize, Serialize};

use crate::quadrature::QuadratureConfig;

pub use checks::{
    check, check_dragomir_agarwal, check_fejer, check_hermite_hadamard, check_pachpatte_first,
    check_pachpatte_second, dragomir_identity_residual, Companion, IdentityResidual,
};
pub use limits::{classical_limit_sweep, LimitRow, LimitSweep};
pub use report::{margin_for, ConstantBranch, InequalityKind, InequalityReport, Term, Verdict, MIN_MARGIN};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub quad: QuadratureConfig,
    /// Enforce the literal Hermite-Hadamard hypotheses `u > 0` and `a ≥ 0`.
    pub strict: bool,
    /// Let Pachpatte checks run on signed functions; their verdicts are then
    /// always inconclusive.
    pub lax: bool,
    /// Grid size of the shape and sign screens.
    pub screen_grid: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { quad: QuadratureConfig::default(), strict: false, lax: false, screen_grid: 1001 }
    }
}

impl CheckConfig {
    pub fn with_quad(quad: QuadratureConfig) -> Self {
        CheckConfig { quad, ..CheckConfig::default() }
    }
}
