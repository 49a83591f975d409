//! Left and right exponential-kernel fractional integrals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::RealFunction;
use crate::kernel::{kernel_scale, FracOrder, Interval};
use crate::quadrature::{integrate, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracIntegralValue {
    pub value: f64,
    pub est_error: f64,
    pub panels_used: usize,
}

/// Panel boundaries that resolve the kernel boundary layer next to `x`,
/// stepping away from it in `direction`.
fn layer_cuts(alpha: FracOrder, x: f64, direction: f64) -> impl Iterator<Item = f64> {
    let step = alpha.layer_width() * std::f64::consts::LN_10;
    (1..=4).map(move |j| x + direction * j as f64 * step).filter(|c| c.is_finite())
}

fn kernel_integral<F, K>(u: &F, alpha: FracOrder, lo: f64, hi: f64, kernel: K, cuts: Vec<f64>, cfg: &QuadratureConfig) -> Result<FracIntegralValue>
where
    F: RealFunction + ?Sized,
    K: Fn(f64) -> f64,
{
    let inv = 1.0 / alpha.get();
    // the result is scaled by 1/α afterwards, so the absolute target shrinks by α
    let scaled = QuadratureConfig { abs_tol: cfg.abs_tol * alpha.get(), ..*cfg };
    let r = integrate(|s| kernel(s) * u.value(s), lo, hi, &cuts, &scaled)?;
    Ok(FracIntegralValue { value: inv * r.value, est_error: inv * r.est_error, panels_used: r.panels })
}

/// `(1/α) ∫_a^x exp(-(1-α)/α (x-s)) u(s) ds`.
pub fn left_integral<F: RealFunction + ?Sized>(
    u: &F,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<FracIntegralValue> {
    if !(x > a) {
        return Err(Error::domain(format!("left integral needs x > a, got a={a} x={x}")));
    }
    let mut cuts = u.kinks();
    if alpha.is_classical() {
        return kernel_integral(u, alpha, a, x, |_| 1.0, cuts, cfg);
    }
    let rate = alpha.decay_rate();
    cuts.extend(layer_cuts(alpha, x, -1.0));
    kernel_integral(u, alpha, a, x, |s| (-rate * (x - s)).exp(), cuts, cfg)
}

/// `(1/α) ∫_x^b exp(-(1-α)/α (s-x)) u(s) ds`.
pub fn right_integral<F: RealFunction + ?Sized>(
    u: &F,
    alpha: FracOrder,
    x: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<FracIntegralValue> {
    if !(x < b) {
        return Err(Error::domain(format!("right integral needs x < b, got x={x} b={b}")));
    }
    let mut cuts = u.kinks();
    if alpha.is_classical() {
        return kernel_integral(u, alpha, x, b, |_| 1.0, cuts, cfg);
    }
    let rate = alpha.decay_rate();
    cuts.extend(layer_cuts(alpha, x, 1.0));
    kernel_integral(u, alpha, x, b, |s| (-rate * (s - x)).exp(), cuts, cfg)
}

/// `I_a u(b)` for [`Side::Left`], `I_b u(a)` for [`Side::Right`].
pub fn frac_integral<F: RealFunction + ?Sized>(
    u: &F,
    alpha: FracOrder,
    iv: Interval,
    side: Side,
    cfg: &QuadratureConfig,
) -> Result<FracIntegralValue> {
    match side {
        Side::Left => left_integral(u, alpha, iv.a(), iv.b(), cfg),
        Side::Right => right_integral(u, alpha, iv.a(), iv.b(), cfg),
    }
}

/// `I_a u(b) + I_b u(a)`, the combination every inequality uses.
pub fn two_sided<F: RealFunction + ?Sized>(
    u: &F,
    alpha: FracOrder,
    iv: Interval,
    cfg: &QuadratureConfig,
) -> Result<FracIntegralValue> {
    let l = frac_integral(u, alpha, iv, Side::Left, cfg)?;
    let r = frac_integral(u, alpha, iv, Side::Right, cfg)?;
    Ok(FracIntegralValue {
        value: l.value + r.value,
        est_error: l.est_error + r.est_error,
        panels_used: l.panels_used + r.panels_used,
    })
}

/// `∫_0^1 t^j e^{-At} dt` for `j = 0..=n`.
fn exp_moments(n: usize, big_a: f64) -> Vec<f64> {
    let mut m = Vec::with_capacity(n + 1);
    if big_a <= 30.0 {
        // e^{-A} Σ_i A^i j!/(i+j+1)!: positive terms, no cancellation
        let decay = (-big_a).exp();
        for j in 0..=n {
            let mut term = 1.0 / (j + 1) as f64;
            let mut sum = term;
            let mut i = 0usize;
            loop {
                i += 1;
                term *= big_a / (i + j + 1) as f64;
                sum += term;
                if term <= 1e-18 * sum && i as f64 > big_a {
                    break;
                }
            }
            m.push(decay * sum);
        }
    } else {
        // forward recurrence is stable here since j/A < 1
        let decay = (-big_a).exp();
        m.push(-(-big_a).exp_m1() / big_a);
        for j in 1..=n {
            let prev = m[j - 1];
            m.push((j as f64 * prev - decay) / big_a);
        }
    }
    m
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exact `I_a s^n (b)` or `I_b s^n (a)` by expanding `s^n` about the
/// evaluation point. Requires `α ∈ (0, 1)` and `n ≤ 8`.
pub fn monomial_closed_form(n: u32, alpha: FracOrder, a: f64, b: f64, side: Side) -> Result<f64> {
    if n > 8 {
        return Err(Error::domain(format!("monomial degree must be at most 8, got {n}")));
    }
    if alpha.is_classical() {
        return Err(Error::domain("monomial closed form needs α < 1"));
    }
    let iv = Interval::new(a, b)?;
    let n = n as usize;
    let len = iv.len();
    let m = exp_moments(n, kernel_scale(alpha, iv).get());
    // left: s = b - L t; right: s = a + L t
    let (origin, step) = match side {
        Side::Left => (b, -len),
        Side::Right => (a, len),
    };
    let sum: f64 = (0..=n)
        .map(|j| binomial(n, j) * origin.powi((n - j) as i32) * step.powi(j as i32) * m[j])
        .sum();
    Ok(len / alpha.get() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{corpus, CorpusKind, FunctionSpec};
    use proptest::prelude::*;

    const E_INV: f64 = 0.367_879_441_171_442_321_6;

    fn al(x: f64) -> FracOrder {
        FracOrder::new(x).unwrap()
    }

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn constant_function() {
        for alpha in [0.1, 0.5, 0.9] {
            let al = al(alpha);
            for (a, x) in [(0.0, 1.0), (-2.0, 3.0)] {
                let k = al.decay_rate();
                let exact = 3.0 * -(-k * (x - a)).exp_m1() / (1.0 - alpha);
                let l = left_integral(&|_| 3.0, al, a, x, &cfg()).unwrap();
                let r = right_integral(&|_| 3.0, al, a, x, &cfg()).unwrap();
                assert!(rel(l.value, exact) < 1e-13, "{alpha} {l:?} {exact}");
                assert!(rel(r.value, exact) < 1e-13);
                assert!(rel(3.0 * monomial_closed_form(0, al, a, x, Side::Left).unwrap(), exact) < 1e-14);
            }
        }
    }

    #[test]
    fn frozen_values() {
        let c = cfg();
        let h = al(0.5);
        let x = left_integral(&|s| s, h, 0.0, 1.0, &c).unwrap();
        assert!(rel(x.value, 2.0 * E_INV) < 1e-14);
        let x2 = left_integral(&|s: f64| s * s, h, 0.0, 1.0, &c).unwrap();
        assert!(rel(x2.value, 0.528_482_235_314_230_713_62) < 1e-14);
        let r2 = right_integral(&|s: f64| s * s, h, 0.0, 1.0, &c).unwrap();
        assert!(rel(r2.value, 0.321_205_588_285_576_784_04) < 1e-14);
        assert!(rel(monomial_closed_form(1, h, 0.0, 1.0, Side::Left).unwrap(), 2.0 * E_INV) < 4e-15);
        assert!(rel(monomial_closed_form(2, h, 0.0, 1.0, Side::Left).unwrap(), 0.528_482_235_314_230_713_62) < 4e-15);
        assert!(rel(monomial_closed_form(2, h, 0.0, 1.0, Side::Right).unwrap(), 0.321_205_588_285_576_784_04) < 4e-15);
    }

    #[test]
    fn classical_order_is_plain_integration() {
        let r = left_integral(&|s: f64| s * s, FracOrder::CLASSICAL, 0.0, 1.0, &cfg()).unwrap();
        assert!(rel(r.value, 1.0 / 3.0) < 1e-15);
        let r = right_integral(&f64::exp, FracOrder::CLASSICAL, -1.0, 1.0, &cfg()).unwrap();
        assert!(rel(r.value, 1f64.exp() - (-1f64).exp()) < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(left_integral(&|s| s, al(0.5), 1.0, 1.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(right_integral(&|s| s, al(0.5), 2.0, 1.0, &cfg()), Err(Error::Domain(_))));
        assert!(monomial_closed_form(9, al(0.5), 0.0, 1.0, Side::Left).is_err());
        assert!(monomial_closed_form(2, FracOrder::CLASSICAL, 0.0, 1.0, Side::Left).is_err());
    }

    #[test]
    fn quadrature_matches_monomials() {
        let c = cfg();
        for alpha in [0.1, 0.5, 0.9] {
            for (a, b) in [(0.0, 1.0), (-3.0, 2.0), (10.0, 10.5)] {
                for n in 0..=8u32 {
                    let f = move |s: f64| s.powi(n as i32);
                    for side in [Side::Left, Side::Right] {
                        let q = frac_integral(&f, al(alpha), iv(a, b), side, &c).unwrap();
                        let exact = monomial_closed_form(n, al(alpha), a, b, side).unwrap();
                        let err = (q.value - exact).abs();
                        assert!(err <= 10.0 * c.rel_tol * exact.abs().max(1.0), "n={n} α={alpha} [{a},{b}] {side:?}: {} vs {exact}", q.value);
                    }
                }
            }
        }
    }

    #[test]
    fn large_kernel_scale_is_resolved() {
        let c = cfg();
        for alpha in [1e-3, 1e-2] {
            let q = left_integral(&|s: f64| s * s, al(alpha), 0.0, 1.0, &c).unwrap();
            let exact = monomial_closed_form(2, al(alpha), 0.0, 1.0, Side::Left).unwrap();
            assert!(rel(q.value, exact) < 1e-9, "{alpha}");
        }
    }

    #[test]
    fn reflection() {
        let c = cfg();
        let i = iv(-1.0, 2.0);
        for e in corpus(CorpusKind::Convex, 40, 10, i) {
            let u = &e.spec;
            let reflected = |s: f64| u.value(i.reflect(s));
            let r = right_integral(u, al(0.3), i.a(), i.b(), &c).unwrap();
            let l = left_integral(&reflected, al(0.3), i.a(), i.b(), &c).unwrap();
            assert!((r.value - l.value).abs() <= 2.0 * (r.est_error + l.est_error) + 1e-13 * r.value.abs());
        }
    }

    #[test]
    fn positivity_on_nonnegative_corpus() {
        let i = iv(0.0, 1.0);
        for e in corpus(CorpusKind::Nonnegative, 0, 30, i) {
            for side in [Side::Left, Side::Right] {
                assert!(frac_integral(&e.spec, al(0.25), i, side, &cfg()).unwrap().value >= 0.0);
            }
        }
    }

    #[test]
    fn normalized_operator_tends_to_point_value() {
        let u = FunctionSpec::exponential(1.0, 1.0, 0.0).unwrap();
        let (a, x) = (0.0, 1.0);
        let mut last = f64::INFINITY;
        for alpha in [0.2, 0.1, 0.05, 0.02] {
            let al = al(alpha);
            let mass = -(-al.decay_rate() * (x - a)).exp_m1();
            let v = left_integral(&u, al, a, x, &cfg()).unwrap().value;
            let err = ((1.0 - alpha) * v / mass - u.value(x)).abs();
            assert!(err < last, "{alpha}: {err} !< {last}");
            last = err;
        }
        assert!(last < 0.06);
    }

    struct Shifted<'a>(&'a FunctionSpec, f64);

    impl RealFunction for Shifted<'_> {
        fn value(&self, x: f64) -> f64 {
            self.0.value(x - self.1)
        }
        fn kinks(&self) -> Vec<f64> {
            self.0.kinks().into_iter().map(|k| k + self.1).collect()
        }
    }

    proptest! {
        #[test]
        fn linearity(seed in 0u64..1000, c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, alpha in 0.05f64..1.0) {
            let i = iv(-1.0, 2.0);
            let fs = corpus(CorpusKind::Convex, seed, 2, i);
            let (u1, u2) = (&fs[0].spec, &fs[1].spec);
            let combo = |s: f64| c1 * u1.value(s) + c2 * u2.value(s);
            let c = cfg();
            let al = al(alpha);
            let lhs = left_integral(&combo, al, i.a(), i.b(), &c).unwrap();
            let r1 = left_integral(u1, al, i.a(), i.b(), &c).unwrap();
            let r2 = left_integral(u2, al, i.a(), i.b(), &c).unwrap();
            let bound = lhs.est_error + c1.abs() * r1.est_error + c2.abs() * r2.est_error;
            prop_assert!((lhs.value - c1 * r1.value - c2 * r2.value).abs() <= bound + 1e-13);
        }

        #[test]
        fn translation_covariance(seed in 0u64..1000, shift in -50.0f64..50.0, alpha in 0.05f64..1.0) {
            let i = iv(0.0, 1.5);
            let u = corpus(CorpusKind::Convex, seed, 1, i).remove(0).spec;
            let moved = Shifted(&u, shift);
            let c = QuadratureConfig::new(1e-13, 1e-13, 1 << 14).unwrap();
            let al = al(alpha);
            for side in [Side::Left, Side::Right] {
                let base = frac_integral(&u, al, i, side, &c).unwrap();
                let shifted = frac_integral(&moved, al, iv(shift, 1.5 + shift), side, &c).unwrap();
                let scale = base.value.abs().max(1.0);
                prop_assert!((base.value - shifted.value).abs() <= 1e-12 * scale, "{} vs {}", base.value, shifted.value);
            }
        }
    }
}
