//! Test functions with convexity certificates, symmetric weights, and seeded
//! generators for reproducible corpora.

mod parse;
pub mod random;
mod weight;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Interval;

pub use random::{
    corpus, make_weight, random_concave_nonneg, random_convex, random_nonneg_convex,
    random_smooth_convex, CorpusEntry, CorpusKind, GenFamily,
};
pub use weight::{WeightProfile, WeightSpec};

/// A real function that can be sampled pointwise.
///
/// `kinks` lists points where the function (or its derivative) is not smooth;
/// integrators use them as initial panel boundaries.
pub trait RealFunction: Sync {
    fn value(&self, x: f64) -> f64;

    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<F: Fn(f64) -> f64 + Sync> RealFunction for F {
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Pointwise product of two functions.
pub struct Product<'a, U: ?Sized, V: ?Sized>(pub &'a U, pub &'a V);

impl<U: RealFunction + ?Sized, V: RealFunction + ?Sized> RealFunction for Product<'_, U, V> {
    fn value(&self, x: f64) -> f64 {
        self.0.value(x) * self.1.value(x)
    }

    fn kinks(&self) -> Vec<f64> {
        let mut k = self.0.kinks();
        k.extend(self.1.kinks());
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Convex,
    Concave,
    Unknown,
}

impl Shape {
    pub fn flipped(self) -> Shape {
        match self {
            Shape::Convex => Shape::Concave,
            Shape::Concave => Shape::Convex,
            Shape::Unknown => Shape::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Convex => "convex",
            Shape::Concave => "concave",
            Shape::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `a2 (x-c)² + a1 (x-c) + a0`
    Quadratic { a2: f64, a1: f64, a0: f64, center: f64 },
    /// `scale · |x - center|^power`
    PowerAbs { scale: f64, center: f64, power: f64 },
    /// `scale · exp(rate (x - shift))`
    Exponential { scale: f64, rate: f64, shift: f64 },
    /// Continuous piecewise-linear: value `v0` at `breaks[0]`, slope
    /// `slopes[i]` on `[breaks[i], breaks[i+1]]`; the first and last slopes
    /// extend to ±∞.
    PiecewiseLinear { breaks: Vec<f64>, slopes: Vec<f64>, v0: f64 },
    Negated(Box<FunctionSpec>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Quadratic { .. } => "quadratic",
            Family::PowerAbs { .. } => "power_abs",
            Family::Exponential { .. } => "exp",
            Family::PiecewiseLinear { .. } => "pwl",
            Family::Negated(_) => "neg",
        }
    }
}

/// An evaluable test function with a shape certificate.
///
/// The certificate is derived from the parameters when the spec is built and
/// can only be downgraded to [`Shape::Unknown`] afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    family: Family,
    offset: f64,
    shape: Shape,
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}

impl FunctionSpec {
    pub fn quadratic(a2: f64, a1: f64, a0: f64) -> Result<Self> {
        Self::quadratic_about(a2, a1, a0, 0.0)
    }

    pub fn quadratic_about(a2: f64, a1: f64, a0: f64, center: f64) -> Result<Self> {
        let a2 = finite("a2", a2)?;
        let a1 = finite("a1", a1)?;
        let a0 = finite("a0", a0)?;
        let center = finite("center", center)?;
        let shape = if a2 >= 0.0 { Shape::Convex } else { Shape::Concave };
        Ok(FunctionSpec { family: Family::Quadratic { a2, a1, a0, center }, offset: 0.0, shape })
    }

    pub fn linear(slope: f64, intercept: f64) -> Result<Self> {
        Self::quadratic(0.0, slope, intercept)
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::quadratic(0.0, 0.0, c)
    }

    pub fn power_abs(scale: f64, center: f64, power: f64) -> Result<Self> {
        let scale = finite("scale", scale)?;
        let center = finite("center", center)?;
        let power = finite("power", power)?;
        if power <= 0.0 {
            return Err(Error::domain(format!("power must be positive, got {power}")));
        }
        let shape = match (power >= 1.0, scale >= 0.0) {
            (true, true) => Shape::Convex,
            (true, false) => Shape::Concave,
            (false, _) => Shape::Unknown,
        };
        Ok(FunctionSpec { family: Family::PowerAbs { scale, center, power }, offset: 0.0, shape })
    }

    pub fn exponential(scale: f64, rate: f64, shift: f64) -> Result<Self> {
        let scale = finite("scale", scale)?;
        let rate = finite("rate", rate)?;
        let shift = finite("shift", shift)?;
        let shape = if scale >= 0.0 { Shape::Convex } else { Shape::Concave };
        Ok(FunctionSpec { family: Family::Exponential { scale, rate, shift }, offset: 0.0, shape })
    }

    /// Convex piecewise-linear function; `slopes` must be nondecreasing and
    /// `breaks` strictly increasing, with one slope per breakpoint.
    pub fn piecewise_linear(breaks: Vec<f64>, slopes: Vec<f64>, v0: f64) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != slopes.len() {
            return Err(Error::domain(format!(
                "piecewise_linear needs one slope per breakpoint, got {} breaks and {} slopes",
                breaks.len(),
                slopes.len()
            )));
        }
        for &v in breaks.iter().chain(&slopes) {
            finite("breakpoint/slope", v)?;
        }
        finite("v0", v0)?;
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("piecewise_linear breakpoints must be strictly increasing"));
        }
        if slopes.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("piecewise_linear slopes must be nondecreasing"));
        }
        Ok(FunctionSpec {
            family: Family::PiecewiseLinear { breaks, slopes, v0 },
            offset: 0.0,
            shape: Shape::Convex,
        })
    }

    pub fn negated(inner: FunctionSpec) -> Self {
        let shape = inner.shape.flipped();
        FunctionSpec { family: Family::Negated(Box::new(inner)), offset: 0.0, shape }
    }

    /// Adds a constant; shape is unchanged.
    pub fn with_offset(mut self, offset: f64) -> Result<Self> {
        self.offset = finite("offset", offset)?;
        Ok(self)
    }

    /// Drops the certificate.
    pub fn without_certificate(mut self) -> Self {
        self.shape = Shape::Unknown;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        self.family.name()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// The certificate the constructors would assign to this family.
    pub(crate) fn natural_shape(&self) -> Shape {
        match &self.family {
            Family::Quadratic { a2, .. } if *a2 < 0.0 => Shape::Concave,
            Family::PowerAbs { power, .. } if *power < 1.0 => Shape::Unknown,
            Family::PowerAbs { scale, .. } | Family::Exponential { scale, .. } if *scale < 0.0 => Shape::Concave,
            Family::Negated(inner) => inner.shape.flipped(),
            _ => Shape::Convex,
        }
    }

    pub fn has_derivative(&self) -> bool {
        match &self.family {
            Family::Quadratic { .. } | Family::Exponential { .. } => true,
            Family::PowerAbs { power, .. } => *power > 1.0,
            Family::PiecewiseLinear { .. } => false,
            Family::Negated(inner) => inner.has_derivative(),
        }
    }

    fn raw_value(&self, x: f64) -> f64 {
        let v = match &self.family {
            Family::Quadratic { a2, a1, a0, center } => {
                let t = x - center;
                (a2 * t + a1) * t + a0
            }
            Family::PowerAbs { scale, center, power } => {
                let d = (x - center).abs();
                let p = if *power == 1.0 {
                    d
                } else if *power == 2.0 {
                    d * d
                } else {
                    d.powf(*power)
                };
                scale * p
            }
            Family::Exponential { scale, rate, shift } => scale * (rate * (x - shift)).exp(),
            Family::PiecewiseLinear { breaks, slopes, v0 } => pwl_value(breaks, slopes, *v0, x),
            Family::Negated(inner) => -inner.raw_value(x),
        };
        v + self.offset
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain(format!("cannot evaluate at {x}")));
        }
        let v = self.raw_value(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(format!("{self} is not finite at {x}")))
        }
    }

    pub fn eval_derivative(&self, x: f64) -> Result<f64> {
        if !self.has_derivative() {
            return Err(Error::NoDerivative(format!("{self} has kinks")));
        }
        if !x.is_finite() {
            return Err(Error::domain(format!("cannot differentiate at {x}")));
        }
        Ok(self.raw_derivative(x))
    }

    fn raw_derivative(&self, x: f64) -> f64 {
        match &self.family {
            Family::Quadratic { a2, a1, center, .. } => 2.0 * a2 * (x - center) + a1,
            Family::PowerAbs { scale, center, power } => {
                let d = x - center;
                if d == 0.0 {
                    0.0
                } else {
                    scale * power * d.abs().powf(power - 1.0) * d.signum()
                }
            }
            Family::Exponential { scale, rate, shift } => scale * rate * (rate * (x - shift)).exp(),
            Family::PiecewiseLinear { .. } => f64::NAN,
            Family::Negated(inner) => -inner.raw_derivative(x),
        }
    }

    fn candidate_points(&self) -> Vec<f64> {
        match &self.family {
            Family::Quadratic { a2, a1, center, .. } if *a2 != 0.0 => vec![center - a1 / (2.0 * a2)],
            Family::Quadratic { .. } | Family::Exponential { .. } => Vec::new(),
            Family::PowerAbs { center, .. } => vec![*center],
            Family::PiecewiseLinear { breaks, .. } => breaks.clone(),
            Family::Negated(inner) => inner.candidate_points(),
        }
    }

    /// Minimum over a 1001-point grid of `iv` together with the family's
    /// critical points (vertex, centre, breakpoints) that fall inside it.
    pub fn min_on(&self, iv: Interval) -> f64 {
        iv.grid(1001)
            .chain(self.candidate_points().into_iter().filter(|&c| iv.contains(c)))
            .map(|x| self.raw_value(x))
            .fold(f64::INFINITY, f64::min)
    }
}

fn pwl_value(breaks: &[f64], slopes: &[f64], v0: f64, x: f64) -> f64 {
    if x <= breaks[0] {
        return v0 + slopes[0] * (x - breaks[0]);
    }
    let mut v = v0;
    for i in 0..breaks.len() {
        let end = breaks.get(i + 1).copied().unwrap_or(f64::INFINITY);
        if x <= end {
            return v + slopes[i] * (x - breaks[i]);
        }
        v += slopes[i] * (end - breaks[i]);
    }
    unreachable!("last segment is unbounded")
}

impl RealFunction for FunctionSpec {
    fn value(&self, x: f64) -> f64 {
        self.raw_value(x)
    }

    fn kinks(&self) -> Vec<f64> {
        match &self.family {
            Family::PowerAbs { center, power, .. } if power.fract() != 0.0 || *power == 1.0 => {
                vec![*center]
            }
            Family::PiecewiseLinear { breaks, .. } => breaks[1..].to_vec(),
            Family::Negated(inner) => inner.kinks(),
            _ => Vec::new(),
        }
    }
}

/// Local midpoint-convexity screen on a uniform grid: checks
/// `f((x_i + x_{i+1})/2) ≤ (f(x_i) + f(x_{i+1}))/2 + 1e-12·scale` for every
/// adjacent pair, where `scale = max(1, max |f|)` over the grid.
///
/// This is a necessary condition only; it cannot see non-convexity at scales
/// finer than the grid spacing.
pub fn check_convexity<F: RealFunction + ?Sized>(f: &F, iv: Interval, grid_n: usize) -> bool {
    let grid_n = grid_n.max(3);
    let xs: Vec<f64> = iv.grid(grid_n).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f.value(x)).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return false;
    }
    let scale = ys.iter().fold(1.0f64, |m, y| m.max(y.abs()));
    let tol = 1e-12 * scale;
    xs.windows(2).zip(ys.windows(2)).all(|(x, y)| {
        let mid = f.value(0.5 * (x[0] + x[1]));
        mid <= 0.5 * (y[0] + y[1]) + tol
    })
}

/// Screens `f` against the shape it claims.
pub fn check_shape<F: RealFunction + ?Sized>(f: &F, shape: Shape, iv: Interval, grid_n: usize) -> bool {
    match shape {
        Shape::Convex => check_convexity(f, iv, grid_n),
        Shape::Concave => check_convexity(&|x: f64| -f.value(x), iv, grid_n),
        Shape::Unknown => false,
    }
}
