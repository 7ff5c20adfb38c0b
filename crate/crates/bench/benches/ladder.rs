use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use upq_bench::{complex_spin, generic_params};
use upq_core::{build_rep, check_casimir, check_relations, deformed_ladder, scan_integer_roots, spin_for_dimension};

fn ladder(c: &mut Criterion) {
    let params = generic_params();
    let spin = complex_spin();
    let mut group = c.benchmark_group("deformed_ladder");
    for n in [16usize, 64, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| deformed_ladder(black_box(spin), &params, n).unwrap())
        });
    }
    group.finish();
}

fn relations(c: &mut Criterion) {
    let params = generic_params();
    let rep = build_rep(&deformed_ladder(complex_spin(), &params, 200).unwrap());
    c.bench_function("check_relations/200", |b| b.iter(|| check_relations(black_box(&rep), Some(&params), 1e-10).unwrap()));
    c.bench_function("check_casimir/200", |b| b.iter(|| check_casimir(black_box(&rep), &params, 1e-10).unwrap()));
}

fn findim(c: &mut Criterion) {
    let params = generic_params();
    c.bench_function("scan_integer_roots/1000", |b| {
        b.iter(|| scan_integer_roots(black_box(complex_spin()), &params, 1000, 1e-10).unwrap())
    });
    c.bench_function("spin_for_dimension/D=20,K=5", |b| b.iter(|| spin_for_dimension(black_box(20), &params, 5).unwrap()));
}

criterion_group!(benches, ladder, relations, findim);
criterion_main!(benches);
