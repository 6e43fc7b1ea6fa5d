//! Criterion benchmarks for `nrd-core`; the benchmarks live in `benches/`.
