//! Criterion benchmarks for `gbc-core`; see `benches/`.
