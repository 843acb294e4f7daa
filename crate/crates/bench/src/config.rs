//! Experiment configuration, read from JSON.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use daplsr::{Init, Method, NeighborMetric};
use serde::{Deserialize, Serialize};

use crate::synth::SynthSpec;
use crate::BenchError;

/// Where samples come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "snake_case")]
pub enum DatasetSource {
    /// Feature columns followed by an integer label column.
    Csv {
        path: PathBuf,
        #[serde(default)]
        has_header: bool,
    },
    /// Gaussian blobs; see [`SynthSpec`].
    Synthetic(SynthSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentConfig {
    /// Oversampling percentage per minority sample; 0 disables augmentation.
    pub percent: f64,
    pub k: usize,
    pub bins: usize,
    pub metric: NeighborMetric,
    /// Methods trained on the augmented set. The rest see the plain training split.
    pub methods: Vec<Method>,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        Self {
            percent: 100.0,
            k: 5,
            bins: daplsr::vdm::DEFAULT_BINS,
            metric: NeighborMetric::Vdm,
            methods: vec![Method::Daplsr],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DaplsrConfig {
    pub outer_iters: usize,
    pub outer_tol: f64,
    pub inner_iters: usize,
    pub init: Init,
}

impl Default for DaplsrConfig {
    fn default() -> Self {
        let d = daplsr::DaplsrOptions::default();
        Self {
            outer_iters: d.outer_iters,
            outer_tol: d.outer_tol,
            inner_iters: d.w_solver.max_iters,
            init: d.init,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    /// Per-class training counts after the split; unlisted classes stay whole.
    #[serde(default)]
    pub imbalance: Option<BTreeMap<usize, usize>>,
    #[serde(default)]
    pub augment: AugmentConfig,
    pub methods: Vec<Method>,
    pub components: Vec<usize>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub daplsr: DaplsrConfig,
}

fn default_train_fraction() -> f64 {
    0.5
}

fn default_repeats() -> usize {
    5
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::Config(msg));
        if self.methods.is_empty() {
            return bad("methods list is empty".into());
        }
        if self.components.is_empty() {
            return bad("component sweep is empty".into());
        }
        if self.components.contains(&0) {
            return bad("component counts must be at least 1".into());
        }
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if !(self.train_fraction > 0.0 && self.train_fraction <= 1.0) {
            return bad(format!("train_fraction {} outside (0, 1]", self.train_fraction));
        }
        if !(self.augment.percent >= 0.0 && self.augment.percent.is_finite()) {
            return bad(format!("augment.percent {} must be finite and ≥ 0", self.augment.percent));
        }
        if self.augment.k == 0 || self.augment.bins == 0 {
            return bad("augment.k and augment.bins must be at least 1".into());
        }
        if self.formats.is_empty() {
            return bad("no output formats".into());
        }
        if self.daplsr.outer_iters == 0 || self.daplsr.inner_iters == 0 || self.daplsr.outer_tol.is_nan() || self.daplsr.outer_tol <= 0.0 {
            return bad("daplsr iteration counts and tolerance must be positive".into());
        }
        if let DatasetSource::Synthetic(spec) = &self.dataset {
            spec.validate()?;
        }
        Ok(())
    }

    pub fn daplsr_options(&self, components: usize, seed: u64) -> daplsr::DaplsrOptions {
        let mut opts = daplsr::DaplsrOptions {
            components,
            outer_iters: self.daplsr.outer_iters,
            outer_tol: self.daplsr.outer_tol,
            init: self.daplsr.init,
            seed,
            ..daplsr::DaplsrOptions::default()
        };
        opts.w_solver.max_iters = self.daplsr.inner_iters;
        opts.c_solver.max_iters = self.daplsr.inner_iters;
        opts
    }
}
