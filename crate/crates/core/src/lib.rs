//! Exponential-kernel fractional integrals and numerical verification of
//! Hermite-Hadamard, Hermite-Hadamard-Fejér, Dragomir-Agarwal and Pachpatte
//! type inequalities for convex functions.
//!
//! The left and right operators are
//!
//! ```text
//! I_a u(x) = 1/α ∫_a^x exp(-(1-α)/α (x-s)) u(s) ds
//! I_b u(x) = 1/α ∫_x^b exp(-(1-α)/α (s-x)) u(s) ds
//! ```
//!
//! and every closed-form constant in the inequalities is a function of the
//! kernel scale `A = (1-α)/α (b-a)`. The crate is organised as:
//!
//! * [`kernel`]: the `(α, [a,b], A)` triple and stable evaluation of the constants.
//! * [`quadrature`] / [`frac_integral`]: adaptive Gauss-Kronrod integration and the operators.
//! * [`functions`]: certified convex/concave test functions, symmetric weights, seeded corpora.
//! * [`inequality`]: the checkers and their reports.
//! * [`oracle`]: an independent composite-Simpson integrator used to cross-check everything else.

pub mod error;
pub mod frac_integral;
pub mod functions;
pub mod inequality;
pub mod kernel;
pub mod oracle;
pub mod quadrature;

pub use error::{Error, Result};
pub use frac_integral::{left_integral, monomial_closed_form, right_integral, FracIntegralValue, Side};
pub use functions::{FunctionSpec, RealFunction, Shape, WeightSpec};
pub use inequality::{CheckConfig, InequalityKind, InequalityReport, Verdict};
pub use kernel::{kernel_scale, Branch, FracOrder, Interval, KernelScale, StableValue};
pub use quadrature::QuadratureConfig;
