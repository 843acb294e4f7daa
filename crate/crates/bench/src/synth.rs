//! Seeded Gaussian-blob datasets.

use daplsr::{seed, Dataset, Matrix};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// One blob per class: centers uniform in `[-1, 1]^dims`, isotropic noise with
/// standard deviation `spread`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    /// Samples per class; the class count is its length.
    pub counts: Vec<usize>,
    pub dims: usize,
    pub spread: f64,
    /// Fixed seed. When absent, each repeat draws a fresh dataset from its own seed.
    #[serde(default)]
    pub seed: Option<u64>,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.counts.is_empty() || self.counts.contains(&0) {
            return Err(BenchError::Config("every class needs at least one sample".into()));
        }
        if self.dims == 0 {
            return Err(BenchError::Config("dims must be at least 1".into()));
        }
        if !(self.spread >= 0.0 && self.spread.is_finite()) {
            return Err(BenchError::Config(format!("spread {} must be finite and ≥ 0", self.spread)));
        }
        Ok(())
    }
}

pub fn synth_dataset(spec: &SynthSpec, seed_value: u64) -> Result<Dataset, BenchError> {
    spec.validate()?;
    let mut rng = seed::rng(seed_value);
    let centers: Vec<Vec<f64>> = spec
        .counts
        .iter()
        .map(|_| (0..spec.dims).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    let noise = Normal::new(0.0, spec.spread).map_err(|e| BenchError::Config(e.to_string()))?;
    let n: usize = spec.counts.iter().sum();
    let mut data = Vec::with_capacity(n * spec.dims);
    let mut labels = Vec::with_capacity(n);
    for (class, (&count, center)) in spec.counts.iter().zip(&centers).enumerate() {
        for _ in 0..count {
            data.extend(center.iter().map(|&c| c + noise.sample(&mut rng)));
            labels.push(class);
        }
    }
    let x = Matrix::new(n, spec.dims, data)?;
    Ok(Dataset::new(x, labels, spec.counts.len())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(counts: &[usize], spread: f64) -> SynthSpec {
        SynthSpec {
            counts: counts.to_vec(),
            dims: 4,
            spread,
            seed: None,
        }
    }

    #[test]
    fn zero_spread_rows_equal_center() {
        let ds = synth_dataset(&spec(&[5, 3], 0.0), 1).unwrap();
        let x = ds.features();
        for i in 1..5 {
            assert_eq!(x.row(i), x.row(0));
        }
        assert_ne!(x.row(0), x.row(5));
        assert!(x.as_slice().iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn counts_and_determinism() {
        let s = spec(&[200, 40, 40], 0.3);
        let a = synth_dataset(&s, 9).unwrap();
        assert_eq!(a.len(), 280);
        assert_eq!(a.class_counts(), vec![200, 40, 40]);
        assert_eq!(a.features(), synth_dataset(&s, 9).unwrap().features());
        assert_ne!(a.features(), synth_dataset(&s, 10).unwrap().features());
    }

    #[test]
    fn invalid_specs() {
        assert!(synth_dataset(&spec(&[], 0.1), 0).is_err());
        assert!(synth_dataset(&spec(&[3, 0], 0.1), 0).is_err());
        assert!(synth_dataset(&spec(&[3], -1.0), 0).is_err());
    }
}
