//! Acceptance suite for the workspace; the criteria live in
//! `tests/acceptance.rs` and run with `cargo test -p xxlde-validation`.
