//! Criterion benchmarks for polyconnect live in `benches/`.
