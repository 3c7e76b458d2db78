//! Benchmark-only crate; see `benches/lattice.rs`.
