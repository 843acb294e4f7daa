//! Seeded experiment harness for DAPLSR and the NIPALS / SIMPLS baselines.
//!
//! An [`ExperimentConfig`] names a dataset, a split, optional imbalance,
//! an oversampling plan, methods and a component sweep. [`run`] repeats the
//! protocol with seeds `base_seed + r` and aggregates means and standard
//! deviations per (method, components); [`emit`](emit::emit) writes CSV or JSON.

use std::path::PathBuf;

use daplsr::Method;

pub mod config;
pub mod emit;
pub mod runner;
pub mod synth;

pub use config::{AugmentConfig, DaplsrConfig, DatasetSource, ExperimentConfig, Format};
pub use runner::{run, run_observed, FitEvent, ResultRow, ResultTable, RunFailure, RunRecord, Stat};
pub use synth::{synth_dataset, SynthSpec};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("malformed results: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] daplsr::Error),
    #[error("{method} with {components} components, repeat {repeat}: {source}")]
    Fit {
        method: Method,
        components: usize,
        repeat: usize,
        #[source]
        source: daplsr::Error,
    },
}
