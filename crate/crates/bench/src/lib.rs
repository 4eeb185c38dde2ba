//! Criterion benchmarks for isoasym-core live in `benches/`.
