//! Report schema and verification suites behind the `curvgauge` binary,
//! exposed as a library so integration tests can drive the same code paths
//! the CLI uses.

pub mod report;
pub mod suites;
