//! Criterion benchmarks for the search and congruence engines; see `benches/`.
