//! Benchmarks for `qtangle`; see `benches/`.
