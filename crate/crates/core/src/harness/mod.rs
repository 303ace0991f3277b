//! Experiment runner: generators, CSV ingestion, the experiment catalog and reports.

pub mod experiments;
pub mod generate;
pub mod ingest;
pub mod report;
pub mod rng;
pub mod spec;

pub use experiments::{run_experiment, ExperimentConfig, Tolerances, CATALOG};
pub use report::{CheckRecord, ExperimentReport, REPORT_SCHEMA_VERSION};
pub use spec::GeneratorSpec;
