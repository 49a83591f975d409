use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::kernel::{FracOrder, Interval};

use super::checks::{check, Companion};
use super::report::{InequalityKind, InequalityReport};
use super::CheckConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub alpha: f64,
    pub value: f64,
    pub classical: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSweep {
    pub kind: InequalityKind,
    /// Name of the tracked term: the fractional mean for the Hermite-Hadamard
    /// chains, the bound for the others.
    pub term: String,
    pub rows: Vec<LimitRow>,
    pub reports: Vec<InequalityReport>,
    pub classical: InequalityReport,
    /// Whether `abs_error` is non-increasing along the sequence (differences
    /// below rounding level are ignored).
    pub monotone: bool,
}

/// Runs `kind` along an increasing sequence of orders below 1 and at `α = 1`
/// exactly, and tracks how the fractional term approaches its classical value.
pub fn classical_limit_sweep(
    kind: InequalityKind,
    u: &FunctionSpec,
    companion: Companion<'_>,
    iv: Interval,
    alphas: &[f64],
    cfg: &CheckConfig,
) -> Result<LimitSweep> {
    if alphas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("limit sweep needs strictly increasing orders"));
    }
    if alphas.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
        return Err(Error::domain("limit sweep orders must lie in (0, 1)"));
    }
    let classical = check(kind, u, companion, FracOrder::CLASSICAL, iv, cfg)?;
    let idx = 1;
    let target = classical.terms[idx].value;
    let mut reports = Vec::with_capacity(alphas.len());
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let r = check(kind, u, companion, FracOrder::new(alpha)?, iv, cfg)?;
        let value = r.terms[idx].value;
        rows.push(LimitRow { alpha, value, classical: target, abs_error: (value - target).abs() });
        reports.push(r);
    }
    let floor = 1e-13 * target.abs().max(1.0);
    let monotone = rows.windows(2).all(|w| w[1].abs_error <= w[0].abs_error || w[1].abs_error <= floor);
    Ok(LimitSweep { kind, term: classical.terms[idx].name.clone(), rows, reports, classical, monotone })
}
