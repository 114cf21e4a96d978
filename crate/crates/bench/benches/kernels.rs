use criterion::{black_box, criterion_group, criterion_main, Criterion};
use polarflow::{
    integrate_pm, roe_matrix, shock_from_strength, solve_shock_angle, Branch, Orientation,
    PrimitiveState,
};
use polarflow_bench::{gas, polar, sonic_start};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn kernels(c: &mut Criterion) {
    let g = gas();
    let up = polar(1.0, 0.0, 0.7, 1.0, 0.3);
    c.bench_function("shock_from_strength", |b| {
        b.iter(|| {
            shock_from_strength(black_box(&up), black_box(0.8), Orientation::Forward, &g).unwrap()
        })
    });

    let mut rng = StdRng::seed_from_u64(7);
    let pairs: Vec<_> = (0..256)
        .map(|_| {
            let mut s = || {
                PrimitiveState::new(
                    rng.gen_range(0.1..10.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(0.1..10.0),
                )
            };
            (s(), s())
        })
        .collect();
    c.bench_function("roe_matrix", |b| {
        let mut i = 0;
        b.iter(|| {
            let (l, r) = &pairs[i % pairs.len()];
            i += 1;
            roe_matrix(black_box(l), black_box(r), 0.4, &g)
        })
    });

    let start = sonic_start(&g, 2.0, 0.0);
    c.bench_function("integrate_pm 0.3 rad", |b| {
        b.iter(|| integrate_pm(black_box(&start), 0.0, 0.3, Orientation::Forward, 20, &g).unwrap())
    });

    c.bench_function("solve_shock_angle", |b| {
        b.iter(|| solve_shock_angle(black_box(2.5), black_box(0.2), Branch::Weak, &g).unwrap())
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
