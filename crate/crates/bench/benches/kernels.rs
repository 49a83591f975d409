use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fracineq::frac_integral::two_sided;
use fracineq::inequality::{check_hermite_hadamard, check_pachpatte_second, CheckConfig};
use fracineq::kernel::{alpha_for_scale, coef_dragomir, coef_midpoint, pachpatte_constants};
use fracineq::oracle::brute_frac;
use fracineq::{FracOrder, FunctionSpec, Interval, KernelScale, QuadratureConfig, Side};

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn constants(c: &mut Criterion) {
    let mut g = c.benchmark_group("constants");
    for a in [1e-4, 0.5, 50.0] {
        let alpha = alpha_for_scale(KernelScale::new(a).unwrap(), unit());
        g.bench_with_input(BenchmarkId::new("all", a), &alpha, |b, &alpha| {
            b.iter(|| {
                let k = KernelScale::new(black_box(a)).unwrap();
                (coef_midpoint(alpha, unit()), coef_dragomir(alpha, unit()), pachpatte_constants(k))
            })
        });
    }
    g.finish();
}

fn frac_integrals(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let u = FunctionSpec::power_abs(1.0, 0.3, 1.5).unwrap();
    let mut g = c.benchmark_group("two_sided");
    for a in [0.1, 10.0, 1000.0] {
        let alpha = alpha_for_scale(KernelScale::new(a).unwrap(), unit());
        g.bench_with_input(BenchmarkId::new("adaptive", a), &alpha, |b, &alpha| {
            b.iter(|| two_sided(&u, alpha, unit(), &cfg).unwrap())
        });
    }
    let alpha = FracOrder::new(0.5).unwrap();
    g.bench_function("oracle/1", |b| b.iter(|| brute_frac(&u, alpha, unit(), Side::Left, 1e-10).unwrap()));
    g.finish();
}

fn checks(c: &mut Criterion) {
    let cfg = CheckConfig::default();
    let u = FunctionSpec::exponential(1.0, 2.0, 0.0).unwrap();
    let v = FunctionSpec::quadratic(1.0, 0.0, 0.5).unwrap();
    let alpha = FracOrder::new(0.25).unwrap();
    c.bench_function("check/hh", |b| b.iter(|| check_hermite_hadamard(&u, alpha, unit(), &cfg).unwrap()));
    c.bench_function("check/pachpatte2", |b| b.iter(|| check_pachpatte_second(&u, &v, alpha, unit(), &cfg).unwrap()));
}

criterion_group!(benches, constants, frac_integrals, checks);
criterion_main!(benches);
