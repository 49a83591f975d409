use crate::error::{Error, Result};
use crate::frac_integral::{two_sided, FracIntegralValue};
use crate::functions::{check_convexity, check_shape, FunctionSpec, Product, RealFunction, Shape, WeightSpec};
use crate::kernel::{
    coef_dragomir, coef_midpoint, kernel_scale, one_minus_exp_neg, pachpatte_constants, FracOrder, Interval,
};
use crate::quadrature::{integrate, QuadratureConfig};

use super::report::{margin_for, ConstantBranch, InequalityKind, InequalityReport, Term, Verdict};
use super::CheckConfig;

/// The second input of a check, if it takes one.
#[derive(Debug, Clone, Copy)]
pub enum Companion<'a> {
    None,
    Weight(&'a WeightSpec),
    Function(&'a FunctionSpec),
}

/// Terms of one chain together with the bookkeeping that ends up in the report.
struct Chain {
    names: &'static [&'static str],
    values: Vec<f64>,
    est_error: f64,
    panels: usize,
    branches: Vec<ConstantBranch>,
}

impl Chain {
    fn negated(mut self) -> Self {
        self.values.iter_mut().for_each(|v| *v = -*v);
        self
    }

    /// Adjacent differences `t[i+1] - t[i]`, or the reverse when `reversed`.
    fn slacks(&self, reversed: bool) -> Vec<f64> {
        self.values
            .windows(2)
            .map(|w| if reversed { w[0] - w[1] } else { w[1] - w[0] })
            .collect()
    }
}

fn branch(name: &str, b: crate::kernel::Branch) -> ConstantBranch {
    ConstantBranch { name: name.to_string(), branch: b }
}

#[allow(clippy::too_many_arguments)]
fn report(
    kind: InequalityKind,
    alpha: FracOrder,
    iv: Interval,
    chain: Chain,
    slacks: Vec<f64>,
    shape: Shape,
    u: &FunctionSpec,
    v: Option<String>,
    assert_verdict: bool,
) -> InequalityReport {
    let margin = margin_for(chain.est_error);
    let verdict = if assert_verdict { Verdict::from_slacks(&slacks, margin) } else { Verdict::Inconclusive };
    InequalityReport {
        name: kind,
        alpha,
        interval: iv,
        kernel_scale: kernel_scale(alpha, iv),
        terms: chain
            .names
            .iter()
            .zip(&chain.values)
            .map(|(n, v)| Term { name: n.to_string(), value: *v })
            .collect(),
        slacks,
        shape,
        est_error: chain.est_error,
        margin,
        verdict,
        panels_used: chain.panels,
        branches: chain.branches,
        u: u.to_string(),
        v,
    }
}

/// The certified shape of `u`, confirmed by the grid screen.
fn certified_shape(u: &FunctionSpec, iv: Interval, cfg: &CheckConfig) -> Result<Shape> {
    match u.shape() {
        Shape::Unknown => Err(Error::ShapeUnknown(format!("'{u}' carries no convexity certificate"))),
        s if check_shape(u, s, iv, cfg.screen_grid) => Ok(s),
        s => Err(Error::ShapeUnknown(format!(
            "'{u}' fails the {} screen on [{}, {}]",
            s.as_str(),
            iv.a(),
            iv.b()
        ))),
    }
}

/// `u` itself when convex, `-u` when concave.
/// Two-sided integral whose absolute tolerance holds after multiplying by `factor`.
fn scaled_two_sided<F: RealFunction + ?Sized>(
    u: &F,
    alpha: FracOrder,
    iv: Interval,
    cfg: &QuadratureConfig,
    factor: f64,
) -> Result<FracIntegralValue> {
    let quad = if factor > 1.0 { QuadratureConfig { abs_tol: cfg.abs_tol / factor, ..*cfg } } else { *cfg };
    two_sided(u, alpha, iv, &quad)
}

fn convex_view(u: &FunctionSpec, shape: Shape) -> FunctionSpec {
    match shape {
        Shape::Concave => FunctionSpec::negated(u.clone()),
        _ => u.clone(),
    }
}

fn hh_chain(u: &FunctionSpec, alpha: FracOrder, iv: Interval, cfg: &CheckConfig) -> Result<Chain> {
    let coef = coef_midpoint(alpha, iv);
    let s = scaled_two_sided(u, alpha, iv, &cfg.quad, coef.value)?;
    let ends = 0.5 * (u.eval(iv.a())? + u.eval(iv.b())?);
    Ok(Chain {
        names: &["lhs", "mid", "rhs"],
        values: vec![u.eval(iv.midpoint())?, coef.value * s.value, ends],
        est_error: coef.value * s.est_error,
        panels: s.panels_used,
        branches: vec![branch("coef_midpoint", coef.branch)],
    })
}

/// Fractional Hermite-Hadamard chain
/// `u(m) ≤ c·(I_a u(b) + I_b u(a)) ≤ (u(a) + u(b))/2`, reversed for concave `u`.
pub fn check_hermite_hadamard(
    u: &FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: &CheckConfig,
) -> Result<InequalityReport> {
    let shape = certified_shape(u, iv, cfg)?;
    if cfg.strict {
        if iv.a() < 0.0 {
            return Err(Error::Hypothesis(format!("strict mode requires a ≥ 0, got a = {}", iv.a())));
        }
        let min = u.min_on(iv);
        if !(min > 0.0) {
            return Err(Error::Hypothesis(format!("strict mode requires u > 0, but min u = {min}")));
        }
    }
    let chain = hh_chain(&convex_view(u, shape), alpha, iv, cfg)?;
    let slacks = chain.slacks(false);
    let chain = if shape == Shape::Concave { chain.negated() } else { chain };
    Ok(report(InequalityKind::HermiteHadamard, alpha, iv, chain, slacks, shape, u, None, true))
}

fn fejer_chain(
    u: &FunctionSpec,
    v: &WeightSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: &CheckConfig,
) -> Result<Chain> {
    // terms scale with the kernel mass, which is 1/coef_midpoint
    let per_mass = coef_midpoint(alpha, iv).value;
    let w = scaled_two_sided(v, alpha, iv, &cfg.quad, per_mass)?;
    let uv = scaled_two_sided(&Product(u, v), alpha, iv, &cfg.quad, per_mass)?;
    let um = u.eval(iv.midpoint())?;
    let ends = 0.5 * (u.eval(iv.a())? + u.eval(iv.b())?);
    Ok(Chain {
        names: &["lhs", "mid", "rhs"],
        values: vec![um * w.value, uv.value, ends * w.value],
        est_error: (um.abs() + ends.abs()) * w.est_error + uv.est_error,
        panels: w.panels_used + uv.panels_used,
        branches: Vec::new(),
    })
}

/// Fractional Hermite-Hadamard-Fejér chain with a symmetric weight `v`:
/// `u(m)·W ≤ I_a(uv)(b) + I_b(uv)(a) ≤ (u(a) + u(b))/2·W` where
/// `W = I_a v(b) + I_b v(a)`; reversed for concave `u`.
pub fn check_fejer(
    u: &FunctionSpec,
    v: &WeightSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: &CheckConfig,
) -> Result<InequalityReport> {
    let shape = certified_shape(u, iv, cfg)?;
    if v.interval() != iv {
        return Err(Error::WeightInvalid(format!(
            "weight is symmetric about [{}, {}], not [{}, {}]",
            v.interval().a(),
            v.interval().b(),
            iv.a(),
            iv.b()
        )));
    }
    v.screen(cfg.screen_grid)?;
    let chain = fejer_chain(&convex_view(u, shape), v, alpha, iv, cfg)?;
    let slacks = chain.slacks(false);
    let chain = if shape == Shape::Concave { chain.negated() } else { chain };
    let desc = Some(v.profile().to_string());
    Ok(report(InequalityKind::Fejer, alpha, iv, chain, slacks, shape, u, desc, true))
}

fn require_derivative(u: &FunctionSpec) -> Result<()> {
    if u.has_derivative() {
        Ok(())
    } else {
        Err(Error::NoDerivative(format!("'{u}' is not differentiable everywhere")))
    }
}

/// `|(u(a) + u(b))/2 - c·(I_a u(b) + I_b u(a))| ≤ d·(|u'(a)| + |u'(b)|)`
/// for `u` with convex `|u'|`.
pub fn check_dragomir_agarwal(
    u: &FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: &CheckConfig,
) -> Result<InequalityReport> {
    require_derivative(u)?;
    let du_abs = |x: f64| u.eval_derivative(x).map(f64::abs).unwrap_or(f64::NAN);
    if !check_convexity(&du_abs, iv, cfg.screen_grid) {
        return Err(Error::ShapeUnknown(format!(
            "|u'| of '{u}' fails the convexity screen on [{}, {}]",
            iv.a(),
            iv.b()
        )));
    }
    let coef = coef_midpoint(alpha, iv);
    let bound = coef_dragomir(alpha, iv);
    let s = scaled_two_sided(u, alpha, iv, &cfg.quad, coef.value)?;
    let ends = 0.5 * (u.eval(iv.a())? + u.eval(iv.b())?);
    let slopes = u.eval_derivative(iv.a())?.abs() + u.eval_derivative(iv.b())?.abs();
    let chain = Chain {
        names: &["deviation", "bound"],
        values: vec![(ends - coef.value * s.value).abs(), bound.value * slopes],
        est_error: coef.value * s.est_error,
        panels: s.panels_used,
        branches: vec![branch("coef_midpoint", coef.branch), branch("coef_dragomir", bound.branch)],
    };
    let slacks = chain.slacks(false);
    Ok(report(InequalityKind::DragomirAgarwal, alpha, iv, chain, slacks, Shape::Convex, u, None, true))
}

/// Both sides of the representation
/// `(u(a)+u(b))/2 - c·(I_b u(a) + I_a u(b)) = (b-a)/2 ∫_0^1 w(t) u'(ta + (1-t)b) dt`
/// with `w(t) = (e^{-At} - e^{-A(1-t)})/(1 - e^{-A})`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub est_error: f64,
    /// Verdict margin for the same error budget.
    pub margin: f64,
}

pub fn dragomir_identity_residual(
    u: &FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: &CheckConfig,
) -> Result<IdentityResidual> {
    require_derivative(u)?;
    let coef = coef_midpoint(alpha, iv);
    let s = scaled_two_sided(u, alpha, iv, &cfg.quad, coef.value)?;
    let lhs = 0.5 * (u.eval(iv.a())? + u.eval(iv.b())?) - coef.value * s.value;

    let big_a = kernel_scale(alpha, iv).get();
    let (a, b, len) = (iv.a(), iv.b(), iv.len());
    let norm = one_minus_exp_neg(big_a);
    let weight = |t: f64| {
        if big_a == 0.0 {
            1.0 - 2.0 * t
        } else {
            ((-big_a * t).exp_m1() - (-big_a * (1.0 - t)).exp_m1()) / norm
        }
    };
    let integrand = |t: f64| weight(t) * u.eval_derivative(t * a + (1.0 - t) * b).unwrap_or(f64::NAN);
    let mut cuts = Vec::new();
    if big_a > 0.0 {
        for j in 1..=4 {
            let t = j as f64 * std::f64::consts::LN_10 / big_a;
            cuts.extend([t, 1.0 - t]);
        }
    }
    let r = integrate(integrand, 0.0, 1.0, &cuts, &cfg.quad)?;
    let rhs = 0.5 * len * r.value;
    let est_error = coef.value * s.est_error + 0.5 * len * r.est_error;
    Ok(IdentityResidual { lhs, rhs, residual: (lhs - rhs).abs(), est_error, margin: margin_for(est_error) })
}

/// Shared screens of the Pachpatte checks. Returns the common shape and
/// whether the verdict may be asserted.
fn pachpatte_screen(u: &FunctionSpec, v: &FunctionSpec, iv: Interval, cfg: &CheckConfig) -> Result<(Shape, bool)> {
    let su = certified_shape(u, iv, cfg)?;
    let sv = certified_shape(v, iv, cfg)?;
    if su != sv {
        return Err(Error::ShapeUnknown(format!(
            "u is {} but v is {}; both must be convex or both concave",
            su.as_str(),
            sv.as_str()
        )));
    }
    for (name, f) in [("u", u), ("v", v)] {
        let min = f.min_on(iv);
        if min < 0.0 {
            if cfg.lax {
                return Ok((su, false));
            }
            return Err(Error::NegativeFunction(format!("{name} = '{f}' reaches {min} on [{}, {}]", iv.a(), iv.b())));
        }
    }
    Ok((su, true))
}

struct EndpointProducts {
    same: f64,
    cross: f64,
    mid: f64,
}

fn endpoint_products(u: &FunctionSpec, v: &FunctionSpec, iv: Interval) -> Result<EndpointProducts> {
    let (ua, ub, um) = (u.eval(iv.a())?, u.eval(iv.b())?, u.eval(iv.midpoint())?);
    let (va, vb, vm) = (v.eval(iv.a())?, v.eval(iv.b())?, v.eval(iv.midpoint())?);
    Ok(EndpointProducts { same: ua * va + ub * vb, cross: ua * vb + ub * va, mid: um * vm })
}

/// `α/(2(b-a))·(I_a(uv)(b) + I_b(uv)(a)) ≤ [u(a)v(a)+u(b)v(b)]·P1/(2A³) + [u(a)v(b)+u(b)v(a)]·P2/A³`
/// for nonnegative convex `u`, `v`; reversed when both are concave.
pub fn check_pachpatte_first(
    u: &FunctionSpec,
    v: &FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: &CheckConfig,
) -> Result<InequalityReport> {
    let (shape, assert_verdict) = pachpatte_screen(u, v, iv, cfg)?;
    let pc = pachpatte_constants(kernel_scale(alpha, iv));
    let scale = alpha.get() / (2.0 * iv.len());
    let s = scaled_two_sided(&Product(u, v), alpha, iv, &cfg.quad, scale)?;
    let p = endpoint_products(u, v, iv)?;
    let chain = Chain {
        names: &["mean", "bound"],
        values: vec![scale * s.value, p.same * pc.first_same + p.cross * pc.first_cross],
        est_error: scale * s.est_error,
        panels: s.panels_used,
        branches: vec![branch("pachpatte", pc.branch)],
    };
    let slacks = chain.slacks(shape == Shape::Concave);
    let desc = Some(v.to_string());
    Ok(report(InequalityKind::Pachpatte1, alpha, iv, chain, slacks, shape, u, desc, assert_verdict))
}

/// `2u(m)v(m) ≤ c·(I_a(uv)(b) + I_b(uv)(a)) + [u(a)v(a)+u(b)v(b)]·P2/(A²(1-e^{-A})) + [u(a)v(b)+u(b)v(a)]·P1/(2A²(1-e^{-A}))`
/// for nonnegative convex `u`, `v`; reversed when both are concave.
pub fn check_pachpatte_second(
    u: &FunctionSpec,
    v: &FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: &CheckConfig,
) -> Result<InequalityReport> {
    let (shape, assert_verdict) = pachpatte_screen(u, v, iv, cfg)?;
    let pc = pachpatte_constants(kernel_scale(alpha, iv));
    let coef = coef_midpoint(alpha, iv);
    let s = scaled_two_sided(&Product(u, v), alpha, iv, &cfg.quad, coef.value)?;
    let p = endpoint_products(u, v, iv)?;
    let chain = Chain {
        names: &["midpoint", "bound"],
        values: vec![
            2.0 * p.mid,
            coef.value * s.value + p.same * pc.second_same + p.cross * pc.second_cross,
        ],
        est_error: coef.value * s.est_error,
        panels: s.panels_used,
        branches: vec![branch("coef_midpoint", coef.branch), branch("pachpatte", pc.branch)],
    };
    let slacks = chain.slacks(shape == Shape::Concave);
    let desc = Some(v.to_string());
    Ok(report(InequalityKind::Pachpatte2, alpha, iv, chain, slacks, shape, u, desc, assert_verdict))
}

/// Runs the checker for `kind`.
pub fn check(
    kind: InequalityKind,
    u: &FunctionSpec,
    companion: Companion<'_>,
    alpha: FracOrder,
    iv: Interval,
    cfg: &CheckConfig,
) -> Result<InequalityReport> {
    match (kind, companion) {
        (InequalityKind::HermiteHadamard, _) => check_hermite_hadamard(u, alpha, iv, cfg),
        (InequalityKind::DragomirAgarwal, _) => check_dragomir_agarwal(u, alpha, iv, cfg),
        (InequalityKind::Fejer, Companion::Weight(v)) => check_fejer(u, v, alpha, iv, cfg),
        (InequalityKind::Pachpatte1, Companion::Function(v)) => check_pachpatte_first(u, v, alpha, iv, cfg),
        (InequalityKind::Pachpatte2, Companion::Function(v)) => check_pachpatte_second(u, v, alpha, iv, cfg),
        (InequalityKind::Fejer, _) => Err(Error::domain("the Fejér check needs a weight")),
        (_, _) => Err(Error::domain(format!("the {kind} check needs a second function"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{corpus, random_nonneg_convex, CorpusKind, GenFamily, WeightProfile};
    use crate::kernel::dragomir_moments;
    use crate::QuadratureConfig;

    fn al(x: f64) -> FracOrder {
        FracOrder::new(x).unwrap()
    }

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * y.abs().max(1.0)
    }

    fn sq() -> FunctionSpec {
        FunctionSpec::quadratic(1.0, 0.0, 0.0).unwrap()
    }

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    const ALPHAS: [f64; 8] = [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0];

    #[test]
    fn hh_constant_and_linear_are_equalities() {
        let five = FunctionSpec::constant(5.0).unwrap();
        let id = FunctionSpec::linear(1.0, 0.0).unwrap();
        for alpha in ALPHAS {
            let r = check_hermite_hadamard(&five, al(alpha), iv(0.0, 1.0), &cfg()).unwrap();
            assert!(r.term_values().iter().all(|t| (t - 5.0).abs() < 1e-13), "{:?}", r.terms);
            assert_eq!(r.verdict, Verdict::Holds);
            let r = check_hermite_hadamard(&id, al(alpha), iv(0.0, 1.0), &cfg()).unwrap();
            assert!(r.term_values().iter().all(|t| (t - 0.5).abs() < 1e-13));
            assert!(r.slacks.iter().all(|s| s.abs() < 1e-13));
        }
    }

    #[test]
    fn hh_square_frozen() {
        let r = check_hermite_hadamard(&sq(), al(0.5), iv(0.0, 1.0), &cfg()).unwrap();
        assert!(close(r.term("mid").unwrap(), 0.336_046_586_261_347_151_23, 1e-13));
        assert!(r.slacks.iter().all(|&s| s > 0.0));
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.margin <= 1e-8);
    }

    #[test]
    fn hh_rejects_uncertified_and_strict_violations() {
        let u = sq().without_certificate();
        assert!(matches!(check_hermite_hadamard(&u, al(0.5), iv(0.0, 1.0), &cfg()), Err(Error::ShapeUnknown(_))));
        let strict = CheckConfig { strict: true, ..cfg() };
        assert!(matches!(check_hermite_hadamard(&sq(), al(0.5), iv(-1.0, 1.0), &strict), Err(Error::Hypothesis(_))));
        assert!(matches!(check_hermite_hadamard(&sq(), al(0.5), iv(0.0, 1.0), &strict), Err(Error::Hypothesis(_))));
        let pos = sq().with_offset(0.1).unwrap();
        assert!(check_hermite_hadamard(&pos, al(0.5), iv(0.0, 1.0), &strict).is_ok());
    }

    #[test]
    fn concave_chain_is_reversed() {
        let u = FunctionSpec::negated(sq());
        let r = check_hermite_hadamard(&u, al(0.5), iv(0.0, 1.0), &cfg()).unwrap();
        assert_eq!(r.shape, Shape::Concave);
        let t = r.term_values();
        assert!(t[0] >= t[1] && t[1] >= t[2]);
        assert!(close(t[1], -0.336_046_586_261_347_151_23, 1e-13));
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn fejer_frozen_and_unit_weight() {
        let i = iv(0.0, 1.0);
        let v = WeightSpec::new(WeightProfile::Linear { c0: 1.0, slope: 1.0 }, i).unwrap();
        let r = check_fejer(&sq(), &v, al(0.5), i, &cfg()).unwrap();
        let expected = [0.793_362_716_496_661, 1.093_163_721_202_343, 1.586_725_432_993_322];
        for (t, e) in r.term_values().iter().zip(expected) {
            assert!(close(*t, e, 1e-12), "{t} vs {e}");
        }
        assert_eq!(r.verdict, Verdict::Holds);

        let one = WeightSpec::constant(i);
        for alpha in [0.1, 0.5, 1.0] {
            let f = check_fejer(&sq(), &one, al(alpha), i, &cfg()).unwrap();
            let h = check_hermite_hadamard(&sq(), al(alpha), i, &cfg()).unwrap();
            let w = two_sided(&|_| 1.0, al(alpha), i, &cfg().quad).unwrap().value;
            for (ft, ht) in f.term_values().iter().zip(h.term_values()) {
                assert!(close(*ft, ht * w, 1e-10));
            }
            assert_eq!(f.verdict, h.verdict);
        }
    }

    #[test]
    fn fejer_weight_screens() {
        let v = WeightSpec::constant(iv(0.0, 2.0));
        assert!(matches!(check_fejer(&sq(), &v, al(0.5), iv(0.0, 1.0), &cfg()), Err(Error::WeightInvalid(_))));
    }

    #[test]
    fn fejer_linear_u_is_tight() {
        let i = iv(-1.0, 2.0);
        let u = FunctionSpec::linear(2.0, -1.0).unwrap();
        for seed in 0..8 {
            let v = crate::functions::make_weight(seed, i);
            let r = check_fejer(&u, &v, al(0.3), i, &cfg()).unwrap();
            assert!(r.slacks.iter().all(|s| s.abs() <= r.margin), "{:?}", r.slacks);
        }
    }

    #[test]
    fn da_frozen_and_classical() {
        let i = iv(0.0, 1.0);
        let r = check_dragomir_agarwal(&sq(), al(0.5), i, &cfg()).unwrap();
        let t = r.term_values();
        assert!(close(t[0], 0.163_953_413_738_652_848_77, 1e-12));
        assert!(close(t[1], 0.244_918_662_403_709_129_28, 1e-15));
        assert_eq!(r.verdict, Verdict::Holds);
        let c = check_dragomir_agarwal(&sq(), FracOrder::CLASSICAL, i, &cfg()).unwrap();
        assert!(close(c.term_values()[0], 1.0 / 6.0, 1e-14));
        assert_eq!(c.term_values()[1], 0.25);
        let lin = FunctionSpec::linear(3.0, 1.0).unwrap();
        let r = check_dragomir_agarwal(&lin, al(0.5), i, &cfg()).unwrap();
        assert!(r.term_values()[0] < 1e-14);
    }

    #[test]
    fn da_requires_derivative_and_convex_slope() {
        let kink = FunctionSpec::power_abs(1.0, 0.5, 1.0).unwrap();
        assert!(matches!(check_dragomir_agarwal(&kink, al(0.5), iv(0.0, 1.0), &cfg()), Err(Error::NoDerivative(_))));
        // |u'| = 1.5·sqrt(x) is concave
        let u = FunctionSpec::power_abs(1.0, 0.0, 1.5).unwrap();
        assert!(matches!(check_dragomir_agarwal(&u, al(0.5), iv(0.0, 1.0), &cfg()), Err(Error::ShapeUnknown(_))));
    }

    #[test]
    fn da_bound_factorisation() {
        let i = iv(0.0, 2.0);
        for alpha in [0.05, 0.3, 0.7, 0.99] {
            let r = check_dragomir_agarwal(&sq(), al(alpha), i, &cfg()).unwrap();
            let a = kernel_scale(al(alpha), i).get();
            let m = dragomir_moments(kernel_scale(al(alpha), i)).unwrap();
            let expected = i.len() / (2.0 * one_minus_exp_neg(a)) * (m.i1 + m.i2) * (0.0 + 4.0);
            assert!(close(r.term_values()[1], expected, 1e-12));
        }
    }

    #[test]
    fn identity_frozen() {
        let r = dragomir_identity_residual(&sq(), al(0.5), iv(0.0, 1.0), &cfg()).unwrap();
        assert!(r.residual <= 1e-9);
        let e = FunctionSpec::exponential(1.0, 1.0, 0.0).unwrap();
        let r = dragomir_identity_residual(&e, al(0.25), iv(-1.0, 1.0), &cfg()).unwrap();
        assert!(close(r.lhs, 0.250_005_571_623_437_438_99, 1e-12));
        assert!(close(r.rhs, 0.250_005_571_623_437_438_99, 1e-12));
        assert!(r.residual <= 1e-9);
        let lin = FunctionSpec::linear(-2.0, 1.0).unwrap();
        let r = dragomir_identity_residual(&lin, al(0.7), iv(0.0, 3.0), &cfg()).unwrap();
        assert!(r.lhs.abs() < 1e-13 && r.rhs.abs() < 1e-13);
    }

    #[test]
    fn pachpatte_frozen() {
        let i = iv(0.0, 1.0);
        let e = FunctionSpec::exponential(1.0, 1.0, 0.0).unwrap();
        let f = check_pachpatte_first(&sq(), &e, al(0.5), i, &cfg()).unwrap();
        let s = check_pachpatte_second(&sq(), &e, al(0.5), i, &cfg()).unwrap();
        let ft = f.term_values();
        let st = s.term_values();
        assert!(close(ft[0], 0.460_466_965_077_617, 1e-12) && close(ft[1], 0.681_061_066_202_895, 1e-12));
        assert!(close(st[0], 0.824_360_635_350_064, 1e-12) && close(st[1], 1.510_166_184_576_556, 1e-12));
        assert!(f.slacks[0] > 0.0 && s.slacks[0] > 0.0);

        let u = FunctionSpec::power_abs(1.0, 0.5, 1.0).unwrap().with_offset(0.1).unwrap();
        let v = sq().with_offset(0.1).unwrap();
        let f = check_pachpatte_first(&u, &v, al(0.3), i, &cfg()).unwrap();
        let s = check_pachpatte_second(&u, &v, al(0.3), i, &cfg()).unwrap();
        assert!(close(f.term_values()[0], 0.069_070_064_619_491_4, 1e-12));
        assert!(close(f.term_values()[1], 0.139_324_324_958_063, 1e-12));
        assert!(close(s.term_values()[0], 0.07, 1e-14));
        assert!(close(s.term_values()[1], 0.538_470_078_864_558, 1e-12));
        assert_eq!(f.verdict, Verdict::Holds);
        assert_eq!(s.verdict, Verdict::Holds);
    }

    #[test]
    fn pachpatte_constants_are_exact_for_unit_functions() {
        let one = FunctionSpec::constant(1.0).unwrap();
        for alpha in ALPHAS {
            for i in [iv(0.0, 1.0), iv(-2.0, 3.0)] {
                let f = check_pachpatte_first(&one, &one, al(alpha), i, &cfg()).unwrap();
                assert!(f.slacks[0].abs() <= 1e-13, "{alpha}: {:?}", f.terms);
                let s = check_pachpatte_second(&one, &one, al(alpha), i, &cfg()).unwrap();
                assert!(s.slacks[0].abs() <= 1e-13, "{alpha}: {:?}", s.terms);
            }
        }
    }

    #[test]
    fn pachpatte_classical_identity_pair() {
        let id = FunctionSpec::linear(1.0, 0.0).unwrap();
        let f = check_pachpatte_first(&id, &id, FracOrder::CLASSICAL, iv(0.0, 1.0), &cfg()).unwrap();
        assert!(close(f.term_values()[0], 1.0 / 3.0, 1e-15));
        assert_eq!(f.term_values()[1], 1.0 / 3.0);
        let s = check_pachpatte_second(&id, &id, FracOrder::CLASSICAL, iv(0.0, 1.0), &cfg()).unwrap();
        assert_eq!(s.term_values()[0], 0.5);
        assert!(close(s.term_values()[1], 1.0 / 3.0 + 1.0 / 6.0, 1e-15));
    }

    #[test]
    fn pachpatte_screens() {
        let i = iv(-1.0, 1.0);
        let neg = FunctionSpec::linear(1.0, 0.0).unwrap();
        let e = FunctionSpec::exponential(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(check_pachpatte_first(&neg, &e, al(0.5), i, &cfg()), Err(Error::NegativeFunction(_))));
        let lax = CheckConfig { lax: true, ..cfg() };
        let r = check_pachpatte_first(&neg, &e, al(0.5), i, &lax).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let cave = FunctionSpec::negated(sq()).with_offset(5.0).unwrap();
        assert!(matches!(check_pachpatte_second(&cave, &e, al(0.5), i, &cfg()), Err(Error::ShapeUnknown(_))));
    }

    #[test]
    fn concave_pachpatte_holds() {
        let i = iv(0.0, 1.0);
        for e in corpus(CorpusKind::ConcaveNonnegative, 5, 20, i) {
            let v = crate::functions::random_concave_nonneg(e.seed + 1000, GenFamily::Quadratic, i);
            for alpha in [0.1, 0.5, 1.0] {
                let f = check_pachpatte_first(&e.spec, &v, al(alpha), i, &cfg()).unwrap();
                let s = check_pachpatte_second(&e.spec, &v, al(alpha), i, &cfg()).unwrap();
                assert_eq!(f.verdict, Verdict::Holds, "{} {:?}", e.spec, f.slacks);
                assert_eq!(s.verdict, Verdict::Holds, "{} {:?}", e.spec, s.slacks);
            }
        }
    }

    #[test]
    fn scale_equivariance() {
        let i = iv(-2.0, 3.0);
        for e in corpus(CorpusKind::Convex, 77, 10, i) {
            let base = check_hermite_hadamard(&e.spec, al(0.25), i, &cfg()).unwrap();
            for c in [1e-3, 1.0, 1e3] {
                let scaled = scale_spec(&e.spec, c);
                let r = check_hermite_hadamard(&scaled, al(0.25), i, &cfg()).unwrap();
                for (x, y) in r.term_values().iter().zip(base.term_values()) {
                    assert!((x - c * y).abs() <= 1e-9 * c * y.abs().max(1.0));
                }
                assert_eq!(r.verdict, base.verdict);
                for (x, y) in r.slacks.iter().zip(&base.slacks) {
                    assert!(x.signum() == y.signum() || x.abs() <= r.margin);
                }
            }
        }
    }

    fn scale_spec(u: &FunctionSpec, c: f64) -> FunctionSpec {
        use crate::functions::Family;
        let off = c * u.offset();
        let spec = match u.family() {
            Family::Quadratic { a2, a1, a0, center } => FunctionSpec::quadratic_about(c * a2, c * a1, c * a0, *center),
            Family::PowerAbs { scale, center, power } => FunctionSpec::power_abs(c * scale, *center, *power),
            Family::Exponential { scale, rate, shift } => FunctionSpec::exponential(c * scale, *rate, *shift),
            Family::PiecewiseLinear { breaks, slopes, v0 } => {
                FunctionSpec::piecewise_linear(breaks.clone(), slopes.iter().map(|s| c * s).collect(), c * v0)
            }
            Family::Negated(_) => unreachable!("convex corpus"),
        };
        spec.unwrap().with_offset(off).unwrap()
    }

    #[test]
    fn margins_stay_at_floor_for_default_tolerances() {
        let i = iv(0.0, 1.0);
        let u = random_nonneg_convex(3, GenFamily::Exponential, i);
        let r = check_hermite_hadamard(&u, al(0.05), i, &cfg()).unwrap();
        assert_eq!(r.margin, 1e-8);
        let loose = CheckConfig::with_quad(QuadratureConfig::new(1e-1, 1e-1, 100).unwrap());
        let r = check_hermite_hadamard(&u, al(0.05), i, &loose).unwrap();
        assert!(r.margin >= r.est_error * 10.0);
    }
}
