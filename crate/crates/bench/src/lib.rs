//! Benchmarks for attrhide live in `benches/`; run them with `cargo bench -p attrhide-bench`.
