use criterion::{criterion_group, criterion_main, Criterion};
use emergent_bench::fixture;
use emergent_core::algebra::check_self_distributivity;
use emergent_core::limits::{conical_group_check, estimate_limit};
use emergent_core::models::ModelId;
use emergent_core::{approx_sum, AbsoluteNet, CompactSample, Expr, ScaleElement};
use std::hint::black_box;

fn approximate_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("approx_sum");
    for id in [
        ModelId::RealVector,
        ModelId::HeisenbergCarnot,
        ModelId::Sphere,
    ] {
        let f = fixture(id, 0.5, 3);
        let eps = ScaleElement::positive(0.1).unwrap();
        group.bench_function(id.as_str(), |b| {
            b.iter(|| {
                approx_sum(
                    f.model.as_ref(),
                    black_box(&eps),
                    &f.base,
                    &f.sample[1],
                    &f.sample[2],
                )
            })
        });
    }
    group.finish();
}

fn self_distributivity(c: &mut Criterion) {
    let f = fixture(ModelId::HeisenbergCarnot, 1.0, 100);
    let eps = ScaleElement::positive(0.3).unwrap();
    c.bench_function("self_distributivity/heisenberg-carnot/100", |b| {
        b.iter(|| check_self_distributivity(f.model.as_ref(), &eps, black_box(&f.sample), 1e-9))
    });
}

fn limits(c: &mut Criterion) {
    let net = AbsoluteNet::default_real();
    let f = fixture(ModelId::HeisenbergCarnot, 1.0, 20);
    let (x, u, v) = f.model.reference_triple();
    c.bench_function("estimate_limit/heisenberg-carnot/sum", |b| {
        b.iter(|| {
            estimate_limit(
                f.model.as_ref(),
                Expr::Sum,
                &x,
                &u,
                &v,
                black_box(&net),
                1e-5,
            )
        })
    });
    let compact = CompactSample::around(f.model.as_ref(), &x, 1.0, 20, 42).unwrap();
    c.bench_function("conical_group_check/heisenberg-carnot/20", |b| {
        b.iter(|| conical_group_check(f.model.as_ref(), &x, black_box(&compact), &net, 1e-7))
    });
}

criterion_group!(benches, approximate_sum, self_distributivity, limits);
criterion_main!(benches);
