//! Brute-force reference integrator.
//!
//! Composite Simpson on uniform grids, doubled until two successive levels
//! agree to the target. It shares no code with [`crate::quadrature`] so that
//! the two can check each other.

use crate::error::{Error, Result};
use crate::frac_integral::Side;
use crate::functions::RealFunction;
use crate::kernel::{FracOrder, Interval};

/// Upper bound on function evaluations per integral.
pub const MAX_POINTS: usize = 1 << 22;

const START_INTERVALS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    /// Number of grid points at the finest level.
    pub grid_n: usize,
    /// `|S_n - S_{n/2}|` between the last two Simpson levels.
    pub richardson_delta: f64,
}

/// Neumaier-compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Trapezoid refinement state: `T_n` plus everything needed to halve `h`.
struct Trapezoid<'f, F: ?Sized> {
    f: &'f F,
    a: f64,
    b: f64,
    n: usize,
    value: f64,
}

impl<'f, F: RealFunction + ?Sized> Trapezoid<'f, F> {
    fn new(f: &'f F, a: f64, b: f64, n: usize) -> Self {
        let h = (b - a) / n as f64;
        let mut s = CompensatedSum::default();
        s.add(0.5 * f.value(a));
        s.add(0.5 * f.value(b));
        for i in 1..n {
            s.add(f.value(a + i as f64 * h));
        }
        Trapezoid { f, a, b, n, value: h * s.total() }
    }

    fn refine(&mut self) {
        let h = (self.b - self.a) / (2 * self.n) as f64;
        let mut s = CompensatedSum::default();
        for i in 0..self.n {
            s.add(self.f.value(self.a + (2 * i + 1) as f64 * h));
        }
        self.value = 0.5 * self.value + h * s.total();
        self.n *= 2;
    }
}

/// `∫_a^b f` to within `target` (measured by the Richardson delta).
pub fn brute_integral<F: RealFunction + ?Sized>(f: &F, a: f64, b: f64, target: f64) -> Result<OracleResult> {
    if !(target > 0.0) {
        return Err(Error::domain(format!("oracle target must be positive, got {target}")));
    }
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::domain(format!("oracle needs finite a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(OracleResult { value: 0.0, grid_n: 1, richardson_delta: 0.0 });
    }
    let mut t = Trapezoid::new(f, a, b, START_INTERVALS);
    let mut coarse_t = t.value;
    t.refine();
    let mut simpson = (4.0 * t.value - coarse_t) / 3.0;
    loop {
        coarse_t = t.value;
        t.refine();
        let next = (4.0 * t.value - coarse_t) / 3.0;
        let delta = (next - simpson).abs();
        simpson = next;
        if !simpson.is_finite() {
            return Err(Error::domain(format!("integrand is not finite on [{a}, {b}]")));
        }
        if delta < target {
            return Ok(OracleResult { value: simpson, grid_n: t.n + 1, richardson_delta: delta });
        }
        if 2 * t.n + 1 > MAX_POINTS {
            return Err(Error::NonConvergent { value: simpson, est_error: delta, panels: t.n });
        }
    }
}

/// Oracle value of `I_a u(b)` or `I_b u(a)`, splitting the range at the kinks of `u`.
pub fn brute_frac<F: RealFunction + ?Sized>(
    u: &F,
    alpha: FracOrder,
    iv: Interval,
    side: Side,
    target: f64,
) -> Result<OracleResult> {
    let (a, b) = (iv.a(), iv.b());
    let k = if alpha.is_classical() { 0.0 } else { (1.0 - alpha.get()) / alpha.get() };
    let integrand = |s: f64| {
        let dist = match side {
            Side::Left => b - s,
            Side::Right => s - a,
        };
        (-k * dist).exp() * u.value(s)
    };
    let mut nodes: Vec<f64> = u.kinks().into_iter().filter(|&c| c > a && c < b).collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes.insert(0, a);
    nodes.push(b);
    let pieces = (nodes.len() - 1) as f64;
    let mut out = OracleResult { value: 0.0, grid_n: 0, richardson_delta: 0.0 };
    for w in nodes.windows(2) {
        let r = brute_integral(&integrand, w[0], w[1], target * alpha.get() / pieces)?;
        out.value += r.value;
        out.grid_n += r.grid_n;
        out.richardson_delta += r.richardson_delta;
    }
    out.value /= alpha.get();
    out.richardson_delta /= alpha.get();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::FunctionSpec;

    #[test]
    fn constant_is_exact_at_first_level() {
        let r = brute_integral(&|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.richardson_delta, 0.0);
    }

    #[test]
    fn known_integrals() {
        let r = brute_integral(&|x: f64| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
        let r = brute_integral(&|x: f64| (-(1.0 - x)).exp() * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn frac_examples() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let h = FracOrder::new(0.5).unwrap();
        let r = brute_frac(&|s| s, h, iv, Side::Left, 1e-12).unwrap();
        assert!((r.value - 2.0 * (-1f64).exp()).abs() < 1e-11);
        let c = brute_frac(&|_| 2.0, h, iv, Side::Right, 1e-12).unwrap();
        assert!((c.value - 2.0 * -(-1f64).exp_m1() / 0.5).abs() < 1e-11);
    }

    #[test]
    fn kinks_are_split() {
        let u = FunctionSpec::power_abs(1.0, 0.3, 1.0).unwrap();
        let iv = Interval::new(0.0, 1.0).unwrap();
        let r = brute_frac(&u, FracOrder::CLASSICAL, iv, Side::Left, 1e-13).unwrap();
        assert!((r.value - 0.5 * (0.09 + 0.49)).abs() < 1e-13);
    }

    #[test]
    fn deltas_shrink_fourfold_per_doubling() {
        for n in 2..=8 {
            let f = move |x: f64| (-(1.0 - x)).exp() * x.powi(n);
            let mut t = Trapezoid::new(&f, 0.0, 1.0, START_INTERVALS);
            let mut coarse = t.value;
            t.refine();
            let mut s = (4.0 * t.value - coarse) / 3.0;
            let mut last_delta = f64::INFINITY;
            for _ in 0..6 {
                coarse = t.value;
                t.refine();
                let next = (4.0 * t.value - coarse) / 3.0;
                let delta = (next - s).abs();
                s = next;
                if delta < 1e-14 {
                    break;
                }
                assert!(delta * 4.0 <= last_delta, "n={n}: {delta} vs {last_delta}");
                last_delta = delta;
            }
        }
    }

    #[test]
    fn cap_reports_nonconvergence() {
        let r = brute_integral(&|x: f64| x.abs().sqrt(), -1.0, 1.0, 1e-300);
        assert!(matches!(r, Err(Error::NonConvergent { .. })));
    }
}
