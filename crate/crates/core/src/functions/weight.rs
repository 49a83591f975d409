use serde::{Deserialize, Serialize};

use super::RealFunction;
use crate::error::{Error, Result};
use crate::kernel::Interval;

/// Radial profile `g(r)` on `r ∈ [0, (b-a)/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightProfile {
    /// `c`
    Constant { c: f64 },
    /// `c0 + slope·r`
    Linear { c0: f64, slope: f64 },
    /// `c0 + c2·r²`
    Quadratic { c0: f64, c2: f64 },
    /// `base + height·exp(-(r/width)²)`
    Bump { base: f64, height: f64, width: f64 },
}

impl WeightProfile {
    pub fn name(&self) -> &'static str {
        match self {
            WeightProfile::Constant { .. } => "const",
            WeightProfile::Linear { .. } => "linear",
            WeightProfile::Quadratic { .. } => "quadratic",
            WeightProfile::Bump { .. } => "bump",
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            WeightProfile::Constant { c } => c,
            WeightProfile::Linear { c0, slope } => c0 + slope * r,
            WeightProfile::Quadratic { c0, c2 } => c0 + c2 * r * r,
            WeightProfile::Bump { base, height, width } => {
                let z = r / width;
                base + height * (-z * z).exp()
            }
        }
    }

    /// Exact minimum of the profile on `[0, half]`.
    fn min_on(&self, half: f64) -> f64 {
        match *self {
            WeightProfile::Constant { c } => c,
            WeightProfile::Linear { .. } | WeightProfile::Quadratic { .. } | WeightProfile::Bump { .. } => {
                // all three are monotone in r
                self.eval(0.0).min(self.eval(half))
            }
        }
    }

    fn params(&self) -> [f64; 3] {
        match *self {
            WeightProfile::Constant { c } => [c, 0.0, 1.0],
            WeightProfile::Linear { c0, slope } => [c0, slope, 1.0],
            WeightProfile::Quadratic { c0, c2 } => [c0, c2, 1.0],
            WeightProfile::Bump { base, height, width } => [base, height, width],
        }
    }
}

/// Nonnegative weight on `[a, b]`, symmetric about the midpoint by
/// construction: `v(x) = g(|2x - (a+b)| / 2)`.
///
/// Evaluating through `|2x - (a+b)|` makes `v(a+b-x)` and `v(x)` bit-identical
/// whenever the reflected abscissa `a+b-x` is itself exact in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    profile: WeightProfile,
    interval: Interval,
}

impl WeightSpec {
    pub fn new(profile: WeightProfile, interval: Interval) -> Result<Self> {
        if profile.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::WeightInvalid(format!("non-finite parameter in {profile:?}")));
        }
        if let WeightProfile::Bump { width, .. } = profile {
            if width <= 0.0 {
                return Err(Error::WeightInvalid(format!("bump width must be positive, got {width}")));
            }
        }
        let min = profile.min_on(0.5 * interval.len());
        if min < 0.0 {
            return Err(Error::WeightInvalid(format!(
                "weight {profile:?} is negative on [{}, {}] (min {min})",
                interval.a(),
                interval.b()
            )));
        }
        Ok(WeightSpec { profile, interval })
    }

    pub fn constant(interval: Interval) -> Self {
        WeightSpec { profile: WeightProfile::Constant { c: 1.0 }, interval }
    }

    pub fn profile(&self) -> &WeightProfile {
        &self.profile
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Same profile on another interval.
    pub fn on(&self, interval: Interval) -> Result<Self> {
        WeightSpec::new(self.profile, interval)
    }

    #[inline]
    pub fn radius(&self, x: f64) -> f64 {
        let s = self.interval.a() + self.interval.b();
        0.5 * (2.0 * x - s).abs()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.profile.eval(self.radius(x))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.profile, WeightProfile::Constant { .. })
    }

    /// Symmetry and nonnegativity screen on a `grid_n`-point grid.
    ///
    /// Symmetry is checked to within a few ulps: the reflected grid point is
    /// only exactly representable for some abscissae.
    pub fn screen(&self, grid_n: usize) -> Result<()> {
        for x in self.interval.grid(grid_n) {
            let v = self.eval(x);
            let w = self.eval(self.interval.reflect(x));
            if !(v >= 0.0) {
                return Err(Error::WeightInvalid(format!("weight is negative at {x}: {v}")));
            }
            if (v - w).abs() > 8.0 * f64::EPSILON * v.abs().max(w.abs()).max(f64::MIN_POSITIVE) {
                return Err(Error::WeightInvalid(format!("weight is not symmetric at {x}: {v} vs {w}")));
            }
        }
        Ok(())
    }
}

impl RealFunction for WeightSpec {
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }

    fn kinks(&self) -> Vec<f64> {
        match self.profile {
            WeightProfile::Linear { slope, .. } if slope != 0.0 => vec![self.interval.midpoint()],
            _ => Vec::new(),
        }
    }
}

impl std::fmt::Display for WeightProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            WeightProfile::Constant { c } => write!(f, "const c={c:?}"),
            WeightProfile::Linear { c0, slope } => write!(f, "linear c0={c0:?} slope={slope:?}"),
            WeightProfile::Quadratic { c0, c2 } => write!(f, "quadratic c0={c0:?} c2={c2:?}"),
            WeightProfile::Bump { base, height, width } => {
                write!(f, "bump base={base:?} height={height:?} width={width:?}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn constant_weight_is_one_everywhere() {
        let w = WeightSpec::constant(iv(0.0, 1.0));
        for x in iv(0.0, 1.0).grid(11) {
            assert_eq!(w.eval(x), 1.0);
            assert_eq!(w.eval(1.0 - x), w.eval(x));
        }
    }

    #[test]
    fn negative_profiles_are_rejected() {
        let p = WeightProfile::Linear { c0: 1.0, slope: -3.0 };
        assert!(matches!(WeightSpec::new(p, iv(0.0, 1.0)), Err(Error::WeightInvalid(_))));
        assert!(WeightSpec::new(p, iv(0.0, 0.5)).is_ok());
        let b = WeightProfile::Bump { base: 0.0, height: 1.0, width: 0.0 };
        assert!(WeightSpec::new(b, iv(0.0, 1.0)).is_err());
    }

    #[test]
    fn symmetry_is_exact_on_dyadic_grid() {
        let profiles = [
            WeightProfile::Linear { c0: 1.0, slope: 1.0 },
            WeightProfile::Quadratic { c0: 0.2, c2: 3.0 },
            WeightProfile::Bump { base: 0.1, height: 2.0, width: 0.3 },
        ];
        for p in profiles {
            for i in [iv(0.0, 1.0), iv(-2.0, 2.0), iv(-0.75, 3.25)] {
                let w = WeightSpec::new(p, i).unwrap();
                // spacing (b-a)/1024 is a power of two times the length
                for x in i.grid(1025) {
                    assert_eq!(w.eval(i.reflect(x)), w.eval(x), "{p} on {i:?} at {x}");
                }
                w.screen(1001).unwrap();
            }
        }
    }

    #[test]
    fn linear_profile_matches_formula() {
        let w = WeightSpec::new(WeightProfile::Linear { c0: 1.0, slope: 1.0 }, iv(0.0, 1.0)).unwrap();
        for x in [0.0, 0.1, 0.5, 0.8, 1.0] {
            assert!((w.eval(x) - (1.0 + (x - 0.5f64).abs())).abs() < 1e-15);
        }
        assert_eq!(w.kinks(), vec![0.5]);
    }
}
