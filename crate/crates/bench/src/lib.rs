//! Benchmark-only crate; see `benches/spaces.rs`.
