//! Reduced invariant suite behind `fracineq selftest`.
//!
//! Each item compares a computed quantity against an independent value at a
//! required accuracy. An item fails when the discrepancy exceeds what the error
//! estimates can explain, and is inconclusive when the configured quadrature is
//! too loose to certify the required accuracy either way.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fracineq::frac_integral::{frac_integral, two_sided};
use fracineq::functions::{corpus, make_weight, CorpusKind, GenFamily};
use fracineq::inequality::{check, dragomir_identity_residual, CheckConfig, Companion, InequalityKind, Verdict, MIN_MARGIN};
use fracineq::kernel::{
    alpha_for_scale, branches, coef_midpoint, normalized_constants, pachpatte_constants, pachpatte_p1, pachpatte_p2,
    MOMENT_SERIES_THRESHOLD, SERIES_THRESHOLD,
};
use fracineq::oracle::brute_frac;
use fracineq::{monomial_closed_form, FracOrder, Interval, KernelScale, Side};

use crate::config::RunConfig;

const ORACLE_TARGET: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Fail => "FAIL",
        }
    }
}

fn classify(discrepancy: f64, bound: f64, required: f64) -> Status {
    if !discrepancy.is_finite() || !bound.is_finite() {
        Status::Fail
    } else if discrepancy <= required && bound <= required {
        Status::Pass
    } else if discrepancy > bound + required {
        Status::Fail
    } else {
        Status::Inconclusive
    }
}

struct Item {
    name: &'static str,
    cases: usize,
    status: Status,
    worst: f64,
    first_problem: Option<String>,
}

impl Item {
    fn new(name: &'static str) -> Self {
        Item { name, cases: 0, status: Status::Pass, worst: 0.0, first_problem: None }
    }

    fn record(&mut self, status: Status, discrepancy: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        self.worst = self.worst.max(discrepancy);
        if status != Status::Pass && self.first_problem.is_none() {
            self.first_problem = Some(what());
        }
        self.status = self.status.max(status);
    }
}

fn intervals() -> [Interval; 3] {
    [Interval::new(0.0, 1.0).unwrap(), Interval::new(-2.0, 3.0).unwrap(), Interval::new(5.0, 5.01).unwrap()]
}

const ALPHAS: [f64; 4] = [0.1, 0.5, 0.9, 1.0];

fn kernel_normalization(cfg: &CheckConfig) -> Item {
    let mut item = Item::new("kernel normalization");
    for iv in intervals() {
        for a in ALPHAS {
            let alpha = FracOrder::new(a).unwrap();
            let c = coef_midpoint(alpha, iv).value;
            let (disc, bound) = match two_sided(&|_| 1.0, alpha, iv, &cfg.quad) {
                Ok(m) => ((c * m.value - 1.0).abs(), c * m.est_error),
                Err(_) => (f64::NAN, f64::NAN),
            };
            item.record(classify(disc, bound, 1e-10), disc, || format!("α={a} on {iv:?}"));
        }
    }
    item
}

fn monomials(cfg: &CheckConfig) -> Item {
    let mut item = Item::new("monomial closed forms");
    for iv in intervals() {
        for a in ALPHAS.into_iter().filter(|&a| a < 1.0) {
            let alpha = FracOrder::new(a).unwrap();
            for n in 0..=4u32 {
                for side in [Side::Left, Side::Right] {
                    let exact = monomial_closed_form(n, alpha, iv.a(), iv.b(), side).unwrap();
                    let u = move |s: f64| s.powi(n as i32);
                    let (disc, bound) = match frac_integral(&u, alpha, iv, side, &cfg.quad) {
                        Ok(q) => ((q.value - exact).abs(), q.est_error),
                        Err(_) => (f64::NAN, f64::NAN),
                    };
                    let required = 1e-10 * exact.abs().max(1.0);
                    item.record(classify(disc, bound, required), disc, || format!("s^{n} α={a} {side:?} on {iv:?}"));
                }
            }
        }
    }
    item
}

fn oracle_cross_check(cfg: &CheckConfig, cases: usize) -> Item {
    let mut item = Item::new("oracle cross-check");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E1F);
    for _ in 0..cases {
        let a0 = rng.gen_range(-3.0..3.0);
        let iv = Interval::new(a0, a0 + rng.gen_range(0.1..4.0)).unwrap();
        let big_a = 10f64.powf(rng.gen_range(-3.0..2.0));
        let alpha = alpha_for_scale(KernelScale::new(big_a).unwrap(), iv);
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let family = GenFamily::ALL[rng.gen_range(0..GenFamily::ALL.len())];
        let u = fracineq::functions::random_convex(rng.gen(), family, iv);
        let (disc, bound, scale) = match (
            frac_integral(&u, alpha, iv, side, &cfg.quad),
            brute_frac(&u, alpha, iv, side, ORACLE_TARGET),
        ) {
            (Ok(q), Ok(o)) => ((q.value - o.value).abs(), q.est_error + ORACLE_TARGET, o.value.abs()),
            _ => (f64::NAN, f64::NAN, 1.0),
        };
        let required = 1e-9 * scale.max(1.0);
        item.record(classify(disc, bound, required), disc, || format!("{u} A={big_a:.3e} {side:?} on {iv:?}"));
    }
    item
}

fn branch_agreement() -> Item {
    let mut item = Item::new("series/direct branch agreement");
    let pairs: [(&str, f64, fn(f64) -> f64, fn(f64) -> f64); 4] = [
        ("exprel", SERIES_THRESHOLD, branches::exprel_direct, branches::exprel_series),
        ("tanhc", SERIES_THRESHOLD, branches::tanhc_direct, branches::tanhc_series),
        ("P1", MOMENT_SERIES_THRESHOLD, branches::p1_direct, branches::p1_series),
        ("P2", MOMENT_SERIES_THRESHOLD, branches::p2_direct, branches::p2_series),
    ];
    for (name, threshold, direct, series) in pairs {
        for f in [0.5, 0.99, 1.01, 2.0] {
            let a = threshold * f;
            let (d, s) = (direct(a), series(a));
            let disc = (d - s).abs() / d.abs();
            item.record(classify(disc, 0.0, 1e-12), disc, || format!("{name} at A={a}"));
        }
    }
    item
}

fn positivity() -> Item {
    let mut item = Item::new("P1 and P2 positivity");
    for i in 0..=90 {
        let a = 10f64.powf(-6.0 + i as f64 / 10.0);
        let k = KernelScale::new(a).unwrap();
        let ok = pachpatte_p1(k).value > 0.0 && pachpatte_p2(k).value > 0.0;
        item.record(if ok { Status::Pass } else { Status::Fail }, 0.0, || format!("A={a}"));
    }
    item
}

fn limit_constants() -> Item {
    let mut item = Item::new("limit constants");
    let iv = Interval::new(0.0, 1.0).unwrap();
    let near = normalized_constants(alpha_for_scale(KernelScale::new(1e-8).unwrap(), iv), iv);
    let exact = normalized_constants(FracOrder::CLASSICAL, iv);
    for (v, w) in [
        (near.midpoint, exact.midpoint),
        (near.dragomir, exact.dragomir),
        (near.pachpatte_p2, exact.pachpatte_p2),
        (near.pachpatte_p1, exact.pachpatte_p1),
    ] {
        let disc = (v - 1.0).abs();
        item.record(classify(disc, 0.0, 1e-7), disc, || format!("A=1e-8 column {v}"));
        item.record(if w == 1.0 { Status::Pass } else { Status::Fail }, (w - 1.0).abs(), || format!("α=1 column {w}"));
    }
    let c = pachpatte_constants(KernelScale::new(0.0).unwrap());
    let exact = c.first_same == 1.0 / 3.0 && c.first_cross == 1.0 / 6.0;
    item.record(if exact { Status::Pass } else { Status::Fail }, 0.0, || "classical Pachpatte constants".into());
    item
}

fn report_status(verdict: Verdict, margin: f64) -> Status {
    match verdict {
        Verdict::Violated => Status::Fail,
        Verdict::Holds if margin <= MIN_MARGIN => Status::Pass,
        _ => Status::Inconclusive,
    }
}

fn inequality_sweep(kind: InequalityKind, cfg: &CheckConfig, size: usize) -> Item {
    let name = match kind {
        InequalityKind::HermiteHadamard => "Hermite-Hadamard sweep",
        InequalityKind::Fejer => "Fejér sweep",
        InequalityKind::DragomirAgarwal => "Dragomir-Agarwal sweep",
        InequalityKind::Pachpatte1 => "Pachpatte first sweep",
        InequalityKind::Pachpatte2 => "Pachpatte second sweep",
    };
    let corpus_kind = match kind {
        InequalityKind::DragomirAgarwal => CorpusKind::Smooth,
        k if k.needs_partner() => CorpusKind::Nonnegative,
        _ => CorpusKind::Convex,
    };
    let mut item = Item::new(name);
    for iv in intervals() {
        let us = corpus(corpus_kind, 100, size, iv);
        let vs = corpus(corpus_kind, 900, size, iv);
        for (u, v) in us.iter().zip(&vs) {
            let w = make_weight(u.seed, iv);
            let companion = match kind {
                InequalityKind::Fejer => Companion::Weight(&w),
                k if k.needs_partner() => Companion::Function(&v.spec),
                _ => Companion::None,
            };
            for a in ALPHAS {
                let status = match check(kind, &u.spec, companion, FracOrder::new(a).unwrap(), iv, cfg) {
                    Ok(r) => report_status(r.verdict, r.margin),
                    Err(_) => Status::Fail,
                };
                item.record(status, 0.0, || format!("{} α={a} on {iv:?}", u.spec));
            }
        }
    }
    item
}

fn identity_residual(cfg: &CheckConfig, size: usize) -> Item {
    let mut item = Item::new("Dragomir-Agarwal identity");
    for iv in intervals() {
        for e in corpus(CorpusKind::Smooth, 300, size, iv) {
            for a in ALPHAS {
                let status = match dragomir_identity_residual(&e.spec, FracOrder::new(a).unwrap(), iv, cfg) {
                    Ok(r) if r.residual > 10.0 * r.margin => Status::Fail,
                    Ok(r) if r.margin > MIN_MARGIN => Status::Inconclusive,
                    Ok(_) => Status::Pass,
                    Err(_) => Status::Fail,
                };
                item.record(status, 0.0, || format!("{} α={a} on {iv:?}", e.spec));
            }
        }
    }
    item
}

fn branch_table(forced: Option<KernelScale>) -> String {
    let grid: Vec<f64> = match forced {
        Some(a) => vec![a.get()],
        None => vec![0.0, 1e-4, 0.5, 10.0],
    };
    let iv = Interval::new(0.0, 1.0).unwrap();
    let mut out = String::new();
    for a in grid {
        let row = normalized_constants(alpha_for_scale(KernelScale::new(a).unwrap(), iv), iv);
        let _ = writeln!(
            out,
            "branches A={a:e} coef_midpoint={} coef_dragomir={} pachpatte={}",
            row.midpoint_branch.as_str(),
            row.dragomir_branch.as_str(),
            row.pachpatte_branch.as_str()
        );
    }
    out
}

/// Runs the suite and returns the manifest text and the exit code.
pub fn run(cfg: &RunConfig) -> Result<(String, i32), String> {
    let check_cfg = cfg.check_config()?;
    let size = cfg.size(6)?;
    let forced = cfg.kernel_scale()?;
    let mut items = vec![
        kernel_normalization(&check_cfg),
        monomials(&check_cfg),
        oracle_cross_check(&check_cfg, 10 * size),
        branch_agreement(),
        positivity(),
        limit_constants(),
        identity_residual(&check_cfg, size),
    ];
    items.extend(InequalityKind::ALL.iter().map(|&k| inequality_sweep(k, &check_cfg, size)));

    let mut text = branch_table(forced);
    for it in &items {
        let _ = write!(text, "{} {}: {} cases, worst discrepancy {:.2e}", it.status.label(), it.name, it.cases, it.worst);
        if let Some(p) = &it.first_problem {
            let _ = write!(text, "; first: {p}");
        }
        text.push('\n');
    }
    let worst = items.iter().map(|i| i.status).max().unwrap_or(Status::Pass);
    let code = match worst {
        Status::Pass => 0,
        Status::Inconclusive => 3,
        Status::Fail => 2,
    };
    let counts = |s: Status| items.iter().filter(|i| i.status == s).count();
    let _ = writeln!(
        text,
        "selftest: {} passed, {} inconclusive, {} failed",
        counts(Status::Pass),
        counts(Status::Inconclusive),
        counts(Status::Fail)
    );
    Ok((text, code))
}
