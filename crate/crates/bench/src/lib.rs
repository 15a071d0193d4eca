//! Benchmarks for `strata-core`; see `benches/`.
