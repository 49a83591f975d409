//! The parameter triple `(α, [a,b], A)` and stable evaluation of the
//! closed-form constants that appear in the inequalities.
//!
//! Every constant is a function of the kernel scale `A = (1-α)/α (b-a)`.
//! Most of them are ratios of quantities that vanish as `A → 0`, so each one
//! has a direct closed form used for moderate and large `A`, a power-series
//! branch used below a switch threshold, and an exact branch at `α = 1`
//! returning the classical constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Switch threshold for the midpoint and Dragomir-Agarwal coefficients.
pub const SERIES_THRESHOLD: f64 = 1e-2;

/// Switch threshold for the Pachpatte numerators and the Dragomir moments.
///
/// These cancel to third (resp. first) order against O(1) terms, so the
/// direct forms are only accurate to 1e-12 once `A` is of order one.
pub const MOMENT_SERIES_THRESHOLD: f64 = 1.0;

/// Fractional order `α ∈ (0, 1]`. `α = 1` is the classical branch.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub const CLASSICAL: FracOrder = FracOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::domain(format!("fractional order must lie in (0, 1], got {alpha}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }

    /// Kernel decay rate `(1-α)/α`.
    #[inline]
    pub fn decay_rate(self) -> f64 {
        (1.0 - self.0) / self.0
    }

    /// Length scale `α/(1-α)` of the kernel boundary layer; infinite at `α = 1`.
    pub fn layer_width(self) -> f64 {
        if self.is_classical() {
            f64::INFINITY
        } else {
            self.0 / (1.0 - self.0)
        }
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        FracOrder::new(v)
    }
}

impl From<FracOrder> for f64 {
    fn from(v: FracOrder) -> f64 {
        v.0
    }
}

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Interval { a, b })
        } else {
            Err(Error::domain(format!("interval requires finite a < b, got [{a}, {b}]")))
        }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// `a + b - x`.
    #[inline]
    pub fn reflect(&self, x: f64) -> f64 {
        (self.a + self.b) - x
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// `n ≥ 2` equally spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(2);
        let h = self.len() / (n - 1) as f64;
        (0..n).map(move |i| if i == n - 1 { self.b } else { self.a + i as f64 * h })
    }
}

/// Kernel scale `A = (1-α)/α (b-a) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct KernelScale(f64);

impl KernelScale {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a >= 0.0 {
            Ok(KernelScale(a))
        } else {
            Err(Error::domain(format!("kernel scale must be finite and non-negative, got {a}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

pub fn kernel_scale(alpha: FracOrder, iv: Interval) -> KernelScale {
    if alpha.is_classical() {
        KernelScale(0.0)
    } else {
        KernelScale(alpha.decay_rate() * iv.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Closed form evaluated as written (with `expm1` for `1 - e^{-A}`).
    Direct,
    /// Truncated power series in `A`.
    Series,
    /// `A = 0`: the classical constant, returned exactly.
    Exact,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Direct => "direct",
            Branch::Series => "series",
            Branch::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableValue {
    pub value: f64,
    pub branch: Branch,
}

impl StableValue {
    fn new(value: f64, branch: Branch) -> Self {
        StableValue { value, branch }
    }
}

/// `1 - e^{-A}` without cancellation.
#[inline]
pub fn one_minus_exp_neg(a: f64) -> f64 {
    -(-a).exp_m1()
}

/// Branch-specific evaluations of the four cancellation-prone constants,
/// all as functions of `A` alone. The public operations choose between them;
/// they are exposed so that agreement across the switch can be tested.
pub mod branches {
    use super::one_minus_exp_neg;

    // Taylor coefficients of x/(1-e^{-x}) (Bernoulli numbers B_n^+ / n!).
    const EXPREL_COEFFS: [f64; 9] = [
        1.0,
        0.5,
        1.0 / 12.0,
        0.0,
        -1.0 / 720.0,
        0.0,
        1.0 / 30240.0,
        0.0,
        -1.0 / 1209600.0,
    ];

    // Taylor coefficients of tanh(x)/x in powers of x².
    const TANHC_COEFFS: [f64; 6] = [
        1.0,
        -1.0 / 3.0,
        2.0 / 15.0,
        -17.0 / 315.0,
        62.0 / 2835.0,
        -1382.0 / 155925.0,
    ];

    fn horner(coeffs: &[f64], x: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `A / (1 - e^{-A})`.
    pub fn exprel_direct(a: f64) -> f64 {
        a / one_minus_exp_neg(a)
    }

    pub fn exprel_series(a: f64) -> f64 {
        horner(&EXPREL_COEFFS, a)
    }

    /// `4 tanh(A/4) / A`, the Dragomir-Agarwal coefficient over `(b-a)/8`.
    pub fn tanhc_direct(a: f64) -> f64 {
        4.0 * (0.25 * a).tanh() / a
    }

    pub fn tanhc_series(a: f64) -> f64 {
        let x = 0.25 * a;
        horner(&TANHC_COEFFS, x * x)
    }

    /// Sums `Σ_k (-A)^k / k! · c(k)` until the terms stop contributing.
    pub(crate) fn moment_series(a: f64, c: impl Fn(f64) -> f64) -> f64 {
        let mut sum = 0.0;
        let mut power = 1.0;
        for k in 0..80 {
            let kf = k as f64;
            if k > 0 {
                power *= -a / kf;
            }
            let term = power * c(kf);
            sum += term;
            if k > 4 && term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    }

    /// `P1(A)/A³ = ∫_0^1 e^{-At} (2t² - 2t + 1) dt`.
    pub fn p1_moment_series(a: f64) -> f64 {
        moment_series(a, |k| (k * k + 3.0 * k + 4.0) / ((k + 1.0) * (k + 2.0) * (k + 3.0)))
    }

    pub fn p1_moment_direct(a: f64) -> f64 {
        p1_direct(a) / (a * a * a)
    }

    /// `P2(A)/A³ = ∫_0^1 e^{-At} t (1 - t) dt`.
    pub fn p2_moment_series(a: f64) -> f64 {
        moment_series(a, |k| 1.0 / ((k + 2.0) * (k + 3.0)))
    }

    pub fn p2_moment_direct(a: f64) -> f64 {
        p2_direct(a) / (a * a * a)
    }

    /// `A² - 2A + 4 - (A² + 2A + 4) e^{-A}`.
    pub fn p1_direct(a: f64) -> f64 {
        (a * a + 2.0 * a + 4.0) * one_minus_exp_neg(a) - 4.0 * a
    }

    /// `A - 2 + (A + 2) e^{-A}`.
    pub fn p2_direct(a: f64) -> f64 {
        2.0 * a - (a + 2.0) * one_minus_exp_neg(a)
    }

    pub fn p1_series(a: f64) -> f64 {
        a * a * a * p1_moment_series(a)
    }

    pub fn p2_series(a: f64) -> f64 {
        a * a * a * p2_moment_series(a)
    }
}

/// `(1-α) / (2(1 - e^{-A}))`, the coefficient of `I_a u(b) + I_b u(a)` in the
/// fractional Hermite-Hadamard mean.
pub fn coef_midpoint(alpha: FracOrder, iv: Interval) -> StableValue {
    let len = iv.len();
    if alpha.is_classical() {
        return StableValue::new(1.0 / (2.0 * len), Branch::Exact);
    }
    let a = kernel_scale(alpha, iv).get();
    if a < SERIES_THRESHOLD {
        // (1-α)/(2(1-e^{-A})) = α/(2(b-a)) · A/(1-e^{-A})
        let v = alpha.get() / (2.0 * len) * branches::exprel_series(a);
        StableValue::new(v, Branch::Series)
    } else {
        let v = (1.0 - alpha.get()) / (2.0 * one_minus_exp_neg(a));
        StableValue::new(v, Branch::Direct)
    }
}

/// `(b-a)/(2A) · tanh(A/4)`, the Dragomir-Agarwal bound coefficient.
pub fn coef_dragomir(alpha: FracOrder, iv: Interval) -> StableValue {
    let len = iv.len();
    if alpha.is_classical() {
        return StableValue::new(len / 8.0, Branch::Exact);
    }
    let a = kernel_scale(alpha, iv).get();
    if a < SERIES_THRESHOLD {
        StableValue::new(len / 8.0 * branches::tanhc_series(a), Branch::Series)
    } else {
        StableValue::new(len / (2.0 * a) * (0.25 * a).tanh(), Branch::Direct)
    }
}

/// Numerator `P1(A) = A² - 2A + 4 - (A² + 2A + 4) e^{-A}`; `P1 ~ 2A³/3` as `A → 0`.
pub fn pachpatte_p1(a: KernelScale) -> StableValue {
    let a = a.get();
    if a == 0.0 {
        StableValue::new(0.0, Branch::Exact)
    } else if a < MOMENT_SERIES_THRESHOLD {
        StableValue::new(branches::p1_series(a), Branch::Series)
    } else {
        StableValue::new(branches::p1_direct(a), Branch::Direct)
    }
}

/// Numerator `P2(A) = A - 2 + (A + 2) e^{-A}`; `P2 ~ A³/6` as `A → 0`.
pub fn pachpatte_p2(a: KernelScale) -> StableValue {
    let a = a.get();
    if a == 0.0 {
        StableValue::new(0.0, Branch::Exact)
    } else if a < MOMENT_SERIES_THRESHOLD {
        StableValue::new(branches::p2_series(a), Branch::Series)
    } else {
        StableValue::new(branches::p2_direct(a), Branch::Direct)
    }
}

/// The normalised constants multiplying the endpoint products in the two
/// Pachpatte bounds. All four are finite at `A = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PachpatteConstants {
    /// `P1/(2A³)` → 1/3.
    pub first_same: f64,
    /// `P2/A³` → 1/6.
    pub first_cross: f64,
    /// `P2/(A²(1-e^{-A}))` → 1/6.
    pub second_same: f64,
    /// `P1/(2A²(1-e^{-A}))` → 1/3.
    pub second_cross: f64,
    pub branch: Branch,
}

pub fn pachpatte_constants(a: KernelScale) -> PachpatteConstants {
    let a = a.get();
    if a == 0.0 {
        return PachpatteConstants {
            first_same: 1.0 / 3.0,
            first_cross: 1.0 / 6.0,
            second_same: 1.0 / 6.0,
            second_cross: 1.0 / 3.0,
            branch: Branch::Exact,
        };
    }
    let (m1, m2, branch) = if a < MOMENT_SERIES_THRESHOLD {
        (branches::p1_moment_series(a), branches::p2_moment_series(a), Branch::Series)
    } else {
        (branches::p1_moment_direct(a), branches::p2_moment_direct(a), Branch::Direct)
    };
    let exprel = if a < SERIES_THRESHOLD {
        branches::exprel_series(a)
    } else {
        branches::exprel_direct(a)
    };
    PachpatteConstants {
        first_same: 0.5 * m1,
        first_cross: m2,
        second_same: m2 * exprel,
        second_cross: 0.5 * m1 * exprel,
        branch,
    }
}

/// The four moment integrals from the Dragomir-Agarwal bound,
///
/// ```text
/// I1 = ∫_0^½ (e^{-At} - e^{-A(1-t)}) t dt
/// I2 = ∫_½^1 (e^{-A(1-t)} - e^{-At}) t dt
/// I3 = ∫_0^½ (e^{-At} - e^{-A(1-t)}) (1-t) dt
/// I4 = ∫_½^1 (e^{-A(1-t)} - e^{-At}) (1-t) dt
/// ```
///
/// By the reflection `t ↦ 1-t`, `I3 = I2` and `I4 = I1`; each is still
/// evaluated from its own closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragomirMoments {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub branch: Branch,
}

pub fn dragomir_moments(a: KernelScale) -> Result<DragomirMoments> {
    let a = a.get();
    if a == 0.0 {
        return Err(Error::domain(
            "dragomir moments are defined for A > 0; use coef_dragomir for the limit",
        ));
    }
    if a < MOMENT_SERIES_THRESHOLD {
        let half_pow = |k: f64| 0.5f64.powf(k + 1.0) / (k + 1.0);
        let i1 = branches::moment_series(a, |k| half_pow(k) - 1.0 / ((k + 1.0) * (k + 2.0)));
        let i2 = branches::moment_series(a, |k| half_pow(k) - 1.0 / (k + 2.0));
        Ok(DragomirMoments { i1, i2, i3: i2, i4: i1, branch: Branch::Series })
    } else {
        let em = one_minus_exp_neg(a);
        let eh = (-0.5 * a).exp();
        let e = (-a).exp();
        let i1 = -eh / a + em / (a * a);
        let i2 = (1.0 - eh + e) / a - em / (a * a);
        let i3 = -eh / a + (1.0 + e) / a - em / (a * a);
        let i4 = -eh / a + em / (a * a);
        Ok(DragomirMoments { i1, i2, i3, i4, branch: Branch::Direct })
    }
}

/// One row of the normalised-constant table; every column tends to 1 as `A → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedConstants {
    pub alpha: f64,
    pub kernel_scale: f64,
    /// `coef_midpoint · 2(b-a)`
    pub midpoint: f64,
    /// `coef_dragomir · 8/(b-a)`
    pub dragomir: f64,
    /// `6 P2/A³`
    pub pachpatte_p2: f64,
    /// `3 P1/(2A²(1-e^{-A}))`
    pub pachpatte_p1: f64,
    pub midpoint_branch: Branch,
    pub dragomir_branch: Branch,
    pub pachpatte_branch: Branch,
}

pub fn normalized_constants(alpha: FracOrder, iv: Interval) -> NormalizedConstants {
    let a = kernel_scale(alpha, iv);
    let mid = coef_midpoint(alpha, iv);
    let da = coef_dragomir(alpha, iv);
    let pc = pachpatte_constants(a);
    NormalizedConstants {
        alpha: alpha.get(),
        kernel_scale: a.get(),
        midpoint: mid.value * 2.0 * iv.len(),
        dragomir: da.value * 8.0 / iv.len(),
        pachpatte_p2: 6.0 * pc.first_cross,
        pachpatte_p1: 3.0 * pc.second_cross,
        midpoint_branch: mid.branch,
        dragomir_branch: da.branch,
        pachpatte_branch: pc.branch,
    }
}

/// The order that produces kernel scale `A` on `iv`: `α = (b-a)/((b-a) + A)`.
pub fn alpha_for_scale(a: KernelScale, iv: Interval) -> FracOrder {
    let len = iv.len();
    FracOrder(len / (len + a.get()))
}
