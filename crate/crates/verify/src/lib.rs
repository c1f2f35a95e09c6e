//! Holds the acceptance suite in `tests/acceptance.rs`. Run it with
//! `cargo test -p dirl-verify --test acceptance`; pass criterion numbers after
//! `--` to run a subset.
