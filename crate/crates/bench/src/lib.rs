//! Benchmarks for `densefew-core`; see `benches/`.
