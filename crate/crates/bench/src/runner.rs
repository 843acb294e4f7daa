//! Repeated split / augment / fit / score protocol.

use std::collections::BTreeMap;

use daplsr::{
    confusion, daplsr_fit_traced, evaluate, fit_vdm, induce_imbalance, load_csv, nipals_fit, oversample,
    seed, simpls_fit, AugmentPlan, Dataset, DaplsrTrace, Method, MetricsReport, Model, NeighborMetric,
};
use serde::{Deserialize, Serialize};

use crate::config::{DatasetSource, ExperimentConfig};
use crate::synth::synth_dataset;
use crate::BenchError;

/// Mean and sample standard deviation (zero for a single value).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self::default();
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

/// Scores of one fit on one repeat.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub repeat: usize,
    pub seed: u64,
    pub error_rate: f64,
    pub accuracy: f64,
    pub g_mean: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

impl RunRecord {
    fn new(repeat: usize, seed: u64, report: &MetricsReport) -> Self {
        Self {
            repeat,
            seed,
            error_rate: 1.0 - report.accuracy,
            accuracy: report.accuracy,
            g_mean: report.g_mean,
            precision: report.precision,
            recall: report.recall,
            f_measure: report.f_measure,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: Method,
    pub components: usize,
    pub error: Stat,
    pub accuracy: Stat,
    pub g_mean: Stat,
    pub precision: Stat,
    pub recall: Stat,
    pub f_measure: Stat,
    pub runs: Vec<RunRecord>,
}

impl ResultRow {
    pub fn from_runs(method: Method, components: usize, runs: Vec<RunRecord>) -> Self {
        let stat = |f: fn(&RunRecord) -> f64| Stat::of(&runs.iter().map(f).collect::<Vec<_>>());
        Self {
            method,
            components,
            error: stat(|r| r.error_rate),
            accuracy: stat(|r| r.accuracy),
            g_mean: stat(|r| r.g_mean),
            precision: stat(|r| r.precision),
            recall: stat(|r| r.recall),
            f_measure: stat(|r| r.f_measure),
            runs,
        }
    }
}

/// Aggregated results, one row per (method, components), sorted by that key.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn from_rows(mut rows: Vec<ResultRow>) -> Self {
        rows.sort_by_key(|r| (r.method, r.components));
        Self { rows }
    }

    pub fn get(&self, method: Method, components: usize) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.components == components)
    }

    fn from_cells(cells: BTreeMap<(Method, usize), Vec<RunRecord>>) -> Self {
        Self::from_rows(
            cells
                .into_iter()
                .filter(|(_, runs)| !runs.is_empty())
                .map(|((m, c), runs)| ResultRow::from_runs(m, c, runs))
                .collect(),
        )
    }
}

/// One finished fit, passed to the observer of [`run_observed`].
pub struct FitEvent<'a> {
    pub repeat: usize,
    pub method: Method,
    pub components: usize,
    pub model: &'a Model,
    /// Solver record for DAPLSR fits.
    pub trace: Option<&'a DaplsrTrace>,
    pub report: &'a MetricsReport,
}

/// A failed run with every cell completed before the failure.
#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct RunFailure {
    #[source]
    pub error: BenchError,
    pub partial: ResultTable,
}

pub fn run(config: &ExperimentConfig) -> Result<ResultTable, RunFailure> {
    run_observed(config, |_| {})
}

/// Runs the full protocol, calling `observer` after each fit.
pub fn run_observed(
    config: &ExperimentConfig,
    mut observer: impl FnMut(FitEvent<'_>),
) -> Result<ResultTable, RunFailure> {
    let mut cells: BTreeMap<(Method, usize), Vec<RunRecord>> = BTreeMap::new();
    for &m in &config.methods {
        for &c in &config.components {
            cells.entry((m, c)).or_default();
        }
    }
    match execute(config, &mut cells, &mut observer) {
        Ok(()) => Ok(ResultTable::from_cells(cells)),
        Err(error) => Err(RunFailure {
            error,
            partial: ResultTable::from_cells(cells),
        }),
    }
}

fn execute(
    config: &ExperimentConfig,
    cells: &mut BTreeMap<(Method, usize), Vec<RunRecord>>,
    observer: &mut impl FnMut(FitEvent<'_>),
) -> Result<(), BenchError> {
    config.validate()?;
    let fixed = match &config.dataset {
        DatasetSource::Csv { path, has_header } => Some(load_csv::<f64>(path, *has_header)?),
        DatasetSource::Synthetic(spec) => spec.seed.map(|s| synth_dataset(spec, s)).transpose()?,
    };
    let augment_needed = config.augment.percent > 0.0
        && config.methods.iter().any(|m| config.augment.methods.contains(m));

    for repeat in 0..config.repeats {
        let seed_r = config.base_seed.wrapping_add(repeat as u64);
        let data = match (&fixed, &config.dataset) {
            (Some(ds), _) => ds.clone(),
            (None, DatasetSource::Synthetic(spec)) => synth_dataset(spec, seed::derive(seed_r, 3))?,
            (None, DatasetSource::Csv { .. }) => unreachable!("csv data is loaded up front"),
        };
        let (mut train, test) = daplsr::stratified_split(&data, config.train_fraction, seed::derive(seed_r, 0))?;
        if let Some(counts) = &config.imbalance {
            train = induce_imbalance(&train, counts, seed::derive(seed_r, 1))?;
        }
        let augmented = if augment_needed {
            Some(augment(config, &train, seed::derive(seed_r, 2))?)
        } else {
            None
        };

        for &method in &config.methods {
            let fit_set = match &augmented {
                Some(aug) if config.augment.methods.contains(&method) => aug,
                _ => &train,
            };
            let y = fit_set.one_hot();
            for &c in &config.components {
                let context = |source| BenchError::Fit {
                    method,
                    components: c,
                    repeat,
                    source,
                };
                let (model, trace) = match method {
                    Method::Nipals => (nipals_fit(fit_set.features(), &y, c).map_err(context)?, None),
                    Method::Simpls => (simpls_fit(fit_set.features(), &y, c).map_err(context)?, None),
                    Method::Daplsr => {
                        let opts = config.daplsr_options(c, seed::derive_named(seed_r, method.name()));
                        let (m, t) = daplsr_fit_traced(fit_set.features(), &y, &opts).map_err(context)?;
                        (m, Some(t))
                    }
                };
                let predicted = model.classify(test.features()).map_err(context)?;
                let cm = confusion(test.labels(), &predicted, test.num_classes()).map_err(context)?;
                let report = evaluate(&cm).map_err(context)?;
                observer(FitEvent {
                    repeat,
                    method,
                    components: c,
                    model: &model,
                    trace: trace.as_ref(),
                    report: &report,
                });
                cells
                    .entry((method, c))
                    .or_default()
                    .push(RunRecord::new(repeat, seed_r, &report));
            }
        }
    }
    Ok(())
}

fn augment(config: &ExperimentConfig, train: &Dataset, plan_seed: u64) -> Result<Dataset, BenchError> {
    let a = &config.augment;
    let vdm = match a.metric {
        NeighborMetric::Vdm => Some(fit_vdm(train, a.bins)?),
        NeighborMetric::Euclidean => None,
    };
    let plan = AugmentPlan {
        k: a.k,
        percent: a.percent,
        seed: plan_seed,
        metric: a.metric,
    };
    Ok(oversample(train, &plan, vdm.as_ref())?.dataset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stat_values() {
        assert_eq!(Stat::of(&[]), Stat::default());
        assert_eq!(Stat::of(&[0.25]), Stat { mean: 0.25, std: 0.0 });
        let s = Stat::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rows_sorted_by_key() {
        let row = |m, c| ResultRow::from_runs(m, c, Vec::new());
        let t = ResultTable::from_rows(vec![row(Method::Daplsr, 1), row(Method::Nipals, 2), row(Method::Nipals, 1)]);
        let keys: Vec<_> = t.rows.iter().map(|r| (r.method, r.components)).collect();
        assert_eq!(keys, vec![(Method::Nipals, 1), (Method::Nipals, 2), (Method::Daplsr, 1)]);
        assert!(t.get(Method::Simpls, 1).is_none());
    }
}
