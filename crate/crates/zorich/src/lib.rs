//! Command-line driver and file formats for [`zorich_core`].
//!
//! The library half exposes the pieces the `zorich` binary is built from:
//! run configuration, report/CSV output, rayon-parallel drivers whose
//! results do not depend on the thread count, and the subcommands.

pub mod commands;
pub mod config;
pub mod output;
pub mod parallel;
