//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The integration range is split at caller-supplied cut points, every panel
//! gets a 15-point Kronrod estimate with the embedded 7-point Gauss rule as
//! its error indicator, and the panel with the largest error is bisected until
//! the summed error meets `max(abs_tol, rel_tol·|value|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 1 << 12 }
    }
}

impl QuadratureConfig {
    /// Upper bound on `max_subdivisions`.
    pub const MAX_PANELS: usize = 1 << 16;

    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = QuadratureConfig { abs_tol, rel_tol, max_subdivisions };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |t: f64| t > 0.0 && t < 1.0;
        if !in_unit(self.abs_tol) || !in_unit(self.rel_tol) {
            return Err(Error::domain(format!(
                "tolerances must lie in (0, 1), got abs_tol={} rel_tol={}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 || self.max_subdivisions > Self::MAX_PANELS {
            return Err(Error::domain(format!(
                "max_subdivisions must lie in 1..={}, got {}",
                Self::MAX_PANELS,
                self.max_subdivisions
            )));
        }
        Ok(())
    }

    /// Error target for a given value.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
    pub panels: usize,
}

// Kronrod abscissae on [0, 1]; odd indices are the Gauss points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // ties broken on position so the refinement order is deterministic
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() || !fc.is_finite() {
        return Err(Error::domain(format!("integrand is not finite on [{a}, {b}]")));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over `[a, b]`, starting from panels split at `cuts`
/// (points outside `(a, b)` are ignored).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cuts: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, est_error: 0.0, panels: 0 });
    }
    if a > b {
        let r = integrate(f, b, a, cuts, cfg)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }

    let min_width = (b - a) * 1e-12;
    let mut inner: Vec<f64> = cuts.iter().copied().filter(|&c| c > a && c < b).collect();
    inner.sort_by(f64::total_cmp);
    let mut nodes = vec![a];
    for c in inner {
        if c - nodes[nodes.len() - 1] >= min_width && b - c >= min_width {
            nodes.push(c);
        }
    }
    nodes.push(b);

    let mut heap = BinaryHeap::with_capacity(cfg.max_subdivisions.min(1024));
    for w in nodes.windows(2) {
        heap.push(gk15(&f, w[0], w[1])?);
    }

    let (mut value, mut error) = totals(&heap);
    let mut since_resum = 0;
    loop {
        if error <= cfg.target(value) {
            (value, error) = totals(&heap);
            if error <= cfg.target(value) {
                break;
            }
        }
        if heap.len() >= cfg.max_subdivisions {
            return Err(Error::NonConvergent { value, est_error: error, panels: heap.len() });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return Err(Error::NonConvergent { value, est_error: error, panels: heap.len() });
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        since_resum += 1;
        if since_resum == 64 {
            (value, error) = totals(&heap);
            since_resum = 0;
        }
    }
    Ok(QuadResult { value, est_error: error, panels: heap.len() })
}

fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    // summation order fixed by position so results do not depend on heap layout
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    panels.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn polynomials_are_exact_on_one_panel() {
        let r = integrate(|x| x * x, 0.0, 1.0, &[], &cfg()).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.panels, 1);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate(f64::exp, 1.0, 0.0, &[], &cfg()).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn kink_is_resolved_with_and_without_cut() {
        let f = |x: f64| (x - 0.3).abs();
        let exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
        let cut = integrate(f, 0.0, 1.0, &[0.3], &cfg()).unwrap();
        assert!((cut.value - exact).abs() < 1e-15);
        assert_eq!(cut.panels, 2);
        let adaptive = integrate(f, 0.0, 1.0, &[], &cfg()).unwrap();
        assert!((adaptive.value - exact).abs() <= adaptive.est_error.max(1e-14));
        assert!(adaptive.est_error <= 1e-10);
    }

    #[test]
    fn peaked_exponential() {
        let k = 1e3;
        let r = integrate(|s| (-k * (1.0 - s)).exp(), 0.0, 1.0, &[], &cfg()).unwrap();
        let exact = -(-k).exp_m1() / k;
        assert!((r.value - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let tight = QuadratureConfig::new(1e-15, 1e-15, 4).unwrap();
        let err = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, &[], &tight).unwrap_err();
        assert!(matches!(err, Error::NonConvergent { .. }));
    }

    #[test]
    fn non_finite_integrand_is_a_domain_error() {
        let err = integrate(|x: f64| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, &[], &cfg()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1.0, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-10, 0).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-10, (1 << 16) + 1).is_err());
    }
}
