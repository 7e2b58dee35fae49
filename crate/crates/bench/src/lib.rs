//! Criterion benchmarks for `qconvex`; see `benches/`.
