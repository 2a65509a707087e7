//! Criterion benchmarks for the `symgen` library live under `benches/`.
