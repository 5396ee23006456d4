use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use propagators::evolve::{propagate, TestFunction};
use propagators::oracle::{hankel_kernel_oracle, hankel_spec, GridSpec};
use propagators::sl2rep::identity_residual;
use propagators::{IdentityId, KernelPoint, KernelSelector, PhysParams, QuadratureSpec};
use propagators_bench::bench_orders;

fn closed_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("radial_sho_kernel");
    let pt = KernelPoint::new(1.3, 0.7, 0.9);
    for order in bench_orders() {
        let p = PhysParams::new(1.0, 1.0, 1.0, order).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(order.value()), &p, |b, p| {
            b.iter(|| {
                KernelSelector::RadialSho
                    .evaluate(black_box(&pt), p)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn identities(c: &mut Criterion) {
    let p = PhysParams::default();
    c.bench_function("identity_residual/all", |b| {
        b.iter(|| {
            IdentityId::ALL
                .iter()
                .map(|&id| identity_residual(id, black_box(0.7), &p).unwrap())
                .fold(0.0, f64::max)
        })
    });
}

fn spectral_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("hankel_kernel_oracle");
    group.sample_size(10);
    let pt = KernelPoint::new(1.0, 1.5, 0.8);
    for order in bench_orders() {
        let p = PhysParams::new(1.0, 1.0, 0.0, order).unwrap();
        let spec = hankel_spec(&pt, &p, &QuadratureSpec::default());
        group.bench_with_input(BenchmarkId::from_parameter(order.value()), &p, |b, p| {
            b.iter(|| hankel_kernel_oracle(black_box(&pt), order, p, &spec).unwrap())
        });
    }
    group.finish();
}

fn propagation(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagate");
    group.sample_size(10);
    let p = PhysParams::scaled(1.5).unwrap();
    let f = TestFunction::gaussian(5.0, 0.5, 1.0).unwrap();
    for points in [500, 1000] {
        let psi = f
            .sample(GridSpec::half_line(12.0, points, 1e-3).unwrap(), &p)
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(points), &psi, |b, psi| {
            b.iter(|| propagate(psi, black_box(0.5), KernelSelector::RadialSho, &p).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    closed_forms,
    identities,
    spectral_oracle,
    propagation
);
criterion_main!(benches);
