//! Criterion benchmarks for `oufield` live in `benches/`; run them with
//! `cargo bench -p oufield-bench`.
