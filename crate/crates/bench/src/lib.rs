//! Benchmark-only crate; see `benches/search.rs`. Run with `cargo bench`.
