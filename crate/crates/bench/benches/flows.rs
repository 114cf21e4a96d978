use criterion::{criterion_group, criterion_main, Criterion};
use polarflow::{build_flow, full_audit};
use polarflow_bench::{gas, two_sector_spec};

fn flows(c: &mut Criterion) {
    let g = gas();
    let spec = two_sector_spec();
    c.bench_function("build_flow two-sector", |b| {
        b.iter(|| build_flow(&g, &spec).unwrap())
    });
    let f = build_flow(&g, &spec).unwrap();
    let mut group = c.benchmark_group("audit");
    group.sample_size(20);
    group.bench_function("full_audit two-sector", |b| b.iter(|| full_audit(&f)));
    group.finish();
}

criterion_group!(benches, flows);
criterion_main!(benches);
