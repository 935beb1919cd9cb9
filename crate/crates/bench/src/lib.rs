//! Benchmarks for `flagstar`; see `benches/`.
