use criterion::{criterion_group, criterion_main, Criterion};
use nrd_core::instance::{self, ExactOptions, FindOptions};
use nrd_core::sat::{self, SolverConfig};
use nrd_core::{catalog, generators, substructure, tables, IndexFamily};

fn solver(c: &mut Criterion) {
    let source = catalog::conditional("R1|S1").unwrap();
    let target = catalog::conditional("Cat5@134").unwrap();
    let family = IndexFamily::parse(3, "12,23,13").unwrap();
    let enc = substructure::encode(&source, &target, &family).unwrap();
    c.bench_function("solve r1s1 -> cat5@134", |b| {
        b.iter(|| sat::solve(&enc.cnf, &SolverConfig::default()).unwrap())
    });
}

fn verify(c: &mut Criterion) {
    let heawood = generators::gen_girth6(2).unwrap().to_partite().unwrap();
    let pq = catalog::conditional("C6*|C6").unwrap();
    c.bench_function("verify_nrd heawood", |b| {
        b.iter(|| instance::verify_nrd(heawood.instance(), &pq, &FindOptions::default()).unwrap())
    });
    let cert = tables::table("or3-to-3lin").unwrap().certificate().unwrap();
    c.bench_function("verify_certificate or3 -> 3lin", |b| {
        b.iter(|| substructure::verify_certificate(&cert).unwrap())
    });
}

fn exact(c: &mut Criterion) {
    let eq = catalog::conditional("EQ").unwrap();
    c.bench_function("nrd_exact EQ n=5", |b| {
        b.iter(|| instance::nrd_exact(&eq, 5, &ExactOptions::default()).unwrap())
    });
}

criterion_group!(benches, solver, verify, exact);
criterion_main!(benches);
