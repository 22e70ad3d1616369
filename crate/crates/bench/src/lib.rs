//! Fixtures shared by the pipeline benchmarks.

use std::path::PathBuf;

use pto_core::{load_environment, Environment};

/// One of the scenarios shipped in the repository's `scenarios/` directory.
pub fn scenario(name: &str) -> Environment {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.json"));
    load_environment(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
