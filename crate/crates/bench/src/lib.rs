//! Criterion benchmarks for the certifier, solver and quadrature; see `benches/`.
