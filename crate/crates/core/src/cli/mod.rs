//! Experiment runner and braid utilities behind the `paramorphism` binary.

pub mod config;
mod runner;

pub use config::{ConfigInvalid, Experiment, ExperimentConfig, FlowPreset, Overrides, SCHEMA_VERSION, SEED_ENV};
pub use runner::{build_flow, run, RunOutcome, EXIT_CONFIG, EXIT_FAIL, EXIT_NUMERICAL, EXIT_PASS};
