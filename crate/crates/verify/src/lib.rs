//! Acceptance sweeps over `descent-core`.
//!
//! Everything lives in `tests/acceptance.rs`, a harness-free binary that prints one
//! PASS or FAIL line per criterion and exits non-zero if any criterion fails. It is
//! kept in its own package so that a failing criterion does not stop `cargo test`
//! before the library's own suites have run.
