//! Obstruction constructions, Gowers norms, and the experiment runner.

pub mod config;
pub mod csv;
pub mod obstruct;
pub mod run;
pub mod uk;

pub use config::{ExperimentConfig, QSpec, Subcommand};
pub use obstruct::{construct_obstruction, Obstruction, ObstructionKind, ObstructionSpec, Verification};
pub use run::{run_experiment, Artifact, VERSION};
pub use uk::{u2_fourier, uk_norm, uk_norm_values, UkMethod};
