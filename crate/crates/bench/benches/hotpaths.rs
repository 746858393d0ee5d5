//! Hot paths: Dirac assembly and squaring, kernel elimination, partition
//! tables, and twisted convolution.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use num_complex::Complex64;

use looplab_core::twistalg::convolve;
use looplab_core::{DiracSpace, LevelData, PartitionTable, RadicalScalar, TwistedElement};

fn dirac_benches(c: &mut Criterion) {
    let space = DiracSpace::new(3, 8);
    c.bench_function("dirac_assemble_float_n3_e8", |b| {
        b.iter(|| black_box(space.dirac::<Complex64>(true)))
    });
    c.bench_function("dirac_assemble_exact_n3_e8", |b| {
        b.iter(|| black_box(space.dirac::<RadicalScalar>(true)))
    });
    let d = space.dirac::<Complex64>(true);
    c.bench_function("dirac_square_float_n3_e8", |b| b.iter(|| black_box(d.compose(&d))));
    c.bench_function("dirac_verify_square_exact_n3_e8", |b| {
        b.iter(|| space.verify_square_exact(true).unwrap())
    });
    c.bench_function("dirac_kernel_index_exact_n3_e8", |b| {
        b.iter(|| black_box(space.kernel_index_exact(true).unwrap()))
    });
}

fn partition_benches(c: &mut Criterion) {
    c.bench_function("partition_table_2000", |b| {
        b.iter(|| black_box(PartitionTable::new(2000)))
    });
}

fn convolve_benches(c: &mut Criterion) {
    let level = LevelData::new(2, 3).unwrap();
    let mut f = TwistedElement::zero(level);
    let mut g = TwistedElement::zero(level);
    for n in -20..=20i64 {
        f.set(n, 6 * n, Complex64::new(1.0 / (1 + n.abs()) as f64, 0.5));
        g.set(n, 6 * n + 3, Complex64::new(0.25, -1.0 / (2 + n.abs()) as f64));
        g.set(n, 6 * n, Complex64::new(-0.5, 0.125));
    }
    c.bench_function("convolve_41x82_terms", |b| {
        b.iter(|| black_box(convolve(&f, &g).unwrap()))
    });
}

criterion_group!(benches, dirac_benches, partition_benches, convolve_benches);
criterion_main!(benches);
