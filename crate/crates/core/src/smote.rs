//! SMOTE oversampling with VDM (or Euclidean) neighbor selection.
//!
//! Each synthetic sample is `base + ζ · (neighbor − base)` with `ζ ∈ (0, 1)`,
//! where `neighbor` is drawn uniformly from the `k` nearest same-class samples
//! of `base`. Every synthetic row carries provenance `(base, neighbor, ζ)`.

use std::fmt::Write as _;

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataspace::LabeledDataset;
use crate::error::{shape_err, Error, Result};
use crate::scalar::Scalar;
use crate::seed;
use crate::vdm::{DistanceMatrix, VdmModel};

/// Distance used to rank neighbors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborMetric {
    #[default]
    Vdm,
    Euclidean,
}

/// Oversampling configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AugmentPlan {
    /// Neighbors considered per base sample.
    pub k: usize,
    /// Oversampling percentage per minority sample: 200 means two synthetics each.
    pub percent: f64,
    pub seed: u64,
    #[serde(default)]
    pub metric: NeighborMetric,
}

impl Default for AugmentPlan {
    fn default() -> Self {
        Self {
            k: 5,
            percent: 100.0,
            seed: 0,
            metric: NeighborMetric::Vdm,
        }
    }
}

impl AugmentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if !(self.percent >= 0.0) || !self.percent.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "oversampling percent {} must be a finite value ≥ 0",
                self.percent
            )));
        }
        Ok(())
    }
}

/// Origin of one synthetic row.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance<T> {
    /// Row index of the synthetic sample in the augmented dataset.
    pub row: usize,
    /// Row index of the base sample in the input dataset.
    pub base: usize,
    /// Row index of the chosen neighbor in the input dataset.
    pub neighbor: usize,
    pub zeta: T,
}

/// Oversampled dataset: original rows first, then synthetics.
#[derive(Clone, Debug)]
pub struct Augmented<T> {
    pub dataset: LabeledDataset<T>,
    pub provenance: Vec<Provenance<T>>,
}

impl<T: Scalar> Augmented<T> {
    /// Provenance log as CSV with header `base_idx,neighbor_idx,zeta`.
    pub fn provenance_csv(&self) -> String {
        let mut out = String::from("base_idx,neighbor_idx,zeta\n");
        for p in &self.provenance {
            let _ = writeln!(out, "{},{},{}", p.base, p.neighbor, p.zeta);
        }
        out
    }
}

/// The `k` indices flagged in `same_class` closest to `base` (excluding `base`),
/// ordered by distance then index.
pub fn k_nearest<T: Scalar>(
    d: &DistanceMatrix<T>,
    base: usize,
    k: usize,
    same_class: &[bool],
) -> Result<Vec<usize>> {
    if same_class.len() != d.size() {
        return Err(shape_err("k_nearest", d.size(), same_class.len()));
    }
    if base >= d.size() {
        return Err(Error::InvalidArgument(format!(
            "base index {base} out of range for {} samples",
            d.size()
        )));
    }
    let mut candidates: Vec<(T, usize)> = same_class
        .iter()
        .enumerate()
        .filter(|&(i, &m)| m && i != base)
        .map(|(i, _)| (d.get(base, i), i))
        .collect();
    if candidates.len() < k {
        return Err(Error::InsufficientSamples {
            class: usize::MAX,
            requested: k,
            available: candidates.len(),
        });
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    Ok(candidates.into_iter().take(k).map(|(_, i)| i).collect())
}

/// Point at fraction `zeta` along the segment from `base` to `neighbor`.
pub fn synthesize<T: Scalar>(base: &[T], neighbor: &[T], zeta: T) -> Result<Vec<T>> {
    if base.len() != neighbor.len() {
        return Err(shape_err("synthesize", base.len(), neighbor.len()));
    }
    if !(zeta >= T::zero() && zeta <= T::one()) {
        return Err(Error::InvalidArgument(format!("zeta {zeta} outside [0, 1]")));
    }
    Ok(base
        .iter()
        .zip(neighbor)
        .map(|(&b, &n)| b + zeta * (n - b))
        .collect())
}

/// Oversamples every class whose count is below the largest class count.
///
/// `vdm` is required when `plan.metric` is [`NeighborMetric::Vdm`].
pub fn oversample<T: Scalar>(
    ds: &LabeledDataset<T>,
    plan: &AugmentPlan,
    vdm: Option<&VdmModel<T>>,
) -> Result<Augmented<T>> {
    plan.validate()?;
    let mut out = Augmented {
        dataset: ds.clone(),
        provenance: Vec::new(),
    };
    if plan.percent == 0.0 || ds.is_empty() {
        return Ok(out);
    }
    let vdm = match plan.metric {
        NeighborMetric::Vdm => {
            let m = vdm.ok_or_else(|| {
                Error::InvalidArgument("VDM metric selected but no VDM model supplied".into())
            })?;
            if m.num_features() != ds.num_features() {
                return Err(shape_err("oversample", m.num_features(), ds.num_features()));
            }
            Some(m)
        }
        NeighborMetric::Euclidean => None,
    };

    let counts = ds.class_counts();
    let majority = counts.iter().copied().max().unwrap_or(0);
    let whole = (plan.percent / 100.0).floor();
    let frac = plan.percent / 100.0 - whole;
    let whole = whole as usize;

    let mut features = ds.features().clone();
    let mut labels = ds.labels().to_vec();

    for (class, &count) in counts.iter().enumerate() {
        if count == 0 || count >= majority {
            continue;
        }
        if count <= plan.k {
            return Err(Error::InsufficientSamples {
                class,
                requested: plan.k + 1,
                available: count,
            });
        }
        let members = ds.class_indices(class);
        let local = ds.features().select_rows(&members);
        let dist = match vdm {
            Some(m) => m.matrix(&local)?,
            None => DistanceMatrix::euclidean(&local),
        };
        let mask = vec![true; members.len()];
        let mut rng = seed::rng(seed::derive(plan.seed, class as u64));

        for (pos, &base) in members.iter().enumerate() {
            let neighbors = k_nearest(&dist, pos, plan.k, &mask)?;
            let mut n_new = whole;
            if frac > 0.0 && rng.random::<f64>() < frac {
                n_new += 1;
            }
            for _ in 0..n_new {
                let neighbor = members[neighbors[rng.random_range(0..plan.k)]];
                let zeta_f: f64 = rng.sample(Open01);
                let zeta = T::lit(zeta_f);
                let row = synthesize(ds.features().row(base), ds.features().row(neighbor), zeta)?;
                out.provenance.push(Provenance {
                    row: labels.len(),
                    base,
                    neighbor,
                    zeta,
                });
                features.push_row(&row);
                labels.push(class);
            }
        }
    }
    out.dataset = LabeledDataset::new(features, labels, ds.num_classes())?;
    Ok(out)
}
