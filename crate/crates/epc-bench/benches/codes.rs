use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use epc_bench::{gf, plain, rng, scheme, square_inputs};
use epc_core::bilinear::BilinearConstruction;
use epc_core::matrix::BlockMatrix;
use epc_core::poly::{interpolate_matrix, lagrange_row};
use epc_core::scheme::Mode;

fn field_ops(c: &mut Criterion) {
    let gf = gf();
    let mut r = rng(1);
    let pairs: Vec<(u64, u64)> = (0..1024)
        .map(|_| (gf.sample(&mut r), gf.sample(&mut r) | 1))
        .collect();
    c.bench_function("field/mul_1024", |b| {
        b.iter(|| {
            let mut acc = 1u64;
            for &(x, y) in &pairs {
                acc = gf.add(acc, gf.mul(x, y));
            }
            black_box(acc)
        })
    });
    c.bench_function("field/inv_64", |b| {
        b.iter(|| {
            let mut acc = 0u64;
            for &(_, y) in &pairs[..64] {
                acc = gf.add(acc, gf.inv(y).unwrap());
            }
            black_box(acc)
        })
    });
}

fn lagrange(c: &mut Criterion) {
    let gf = gf();
    let mut r = rng(2);
    for k in [13usize, 29] {
        let nodes: Vec<u64> = (0..k as u64).collect();
        c.bench_with_input(BenchmarkId::new("lagrange/row", k), &k, |b, _| {
            b.iter(|| black_box(lagrange_row(gf, &nodes, 1_000_003)))
        });
        let values: Vec<(u64, epc_core::matrix::Matrix)> = nodes
            .iter()
            .map(|&x| (x, epc_core::matrix::Matrix::random(gf, 2, 2, &mut r)))
            .collect();
        c.bench_with_input(BenchmarkId::new("lagrange/interpolate_matrix", k), &k, |b, _| {
            b.iter(|| {
                let refs: Vec<(u64, &epc_core::matrix::Matrix)> =
                    values.iter().map(|(x, m)| (*x, m)).collect();
                black_box(interpolate_matrix(gf, &refs).unwrap())
            })
        });
    }
}

fn apply_constructions(c: &mut Criterion) {
    let gf = gf();
    let strassen = BilinearConstruction::strassen_222(gf);
    let naive = BilinearConstruction::naive(2, 2, 2);
    let (a, b) = square_inputs(gf, 64, 3);
    let ag = BlockMatrix::partition(&a, 2, 2).unwrap();
    let bg = BlockMatrix::partition(&b, 2, 2).unwrap();
    let mut group = c.benchmark_group("apply_64x64");
    group.bench_function("strassen_r7", |bench| {
        bench.iter(|| black_box(strassen.apply(gf, &ag, &bg).unwrap()))
    });
    group.bench_function("naive_r8", |bench| {
        bench.iter(|| black_box(naive.apply(gf, &ag, &bg).unwrap()))
    });
    group.bench_function("direct", |bench| {
        bench.iter(|| black_box(a.t_mul(gf, &b).unwrap()))
    });
    group.finish();
}

fn roundtrips(c: &mut Criterion) {
    let gf = gf();
    let mut group = c.benchmark_group("roundtrip_16x16");
    for (label, mode, workers) in [("basic_n10", Mode::Basic, 10), ("improved_n14", Mode::Improved, 14)] {
        let scheme = scheme(gf, mode, workers);
        let (a, b) = square_inputs(gf, 16, 4);
        let inputs = plain(a, b);
        group.bench_function(label, |bench| {
            bench.iter(|| {
                let mut r = rng(5);
                let encoded = scheme.encode(&inputs, &mut r).unwrap();
                let results = scheme.compute_all(&encoded).unwrap();
                black_box(scheme.decode(&encoded.master, &results).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, field_ops, lagrange, apply_constructions, roundtrips);
criterion_main!(benches);
