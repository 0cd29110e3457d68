//! Configuration, parallel trial execution and output for the Monte Carlo studies.

pub mod output;
pub mod runs;
pub mod spec;
pub mod stats;

pub use output::{Manifest, OutputDir, Table};
pub use runs::*;
pub use spec::{ExperimentKind, ExperimentSpec, OutputFormat};
