//! Criterion benchmarks for `torick-core`; see `benches/localization.rs`.
