//! Confusion matrices and one-vs-rest classification metrics.

use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Error, Result};

/// q×q counts; entry `(i, j)` counts samples of true class `i` predicted as `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(classes: usize) -> Self {
        Self {
            classes,
            counts: vec![0; classes * classes],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let q = rows.len();
        let mut cm = Self::zeros(q);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != q {
                return Err(shape_err("confusion matrix row", q, row.len()));
            }
            cm.counts[i * q..(i + 1) * q].copy_from_slice(row);
        }
        Ok(cm)
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    pub fn get(&self, truth: usize, pred: usize) -> u64 {
        self.counts[truth * self.classes + pred]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes).map(|k| self.get(k, k)).sum()
    }

    pub fn row_sum(&self, k: usize) -> u64 {
        (0..self.classes).map(|j| self.get(k, j)).sum()
    }

    pub fn col_sum(&self, k: usize) -> u64 {
        (0..self.classes).map(|i| self.get(i, k)).sum()
    }

    /// `[tp, fn, fp, tn]` for class `k` against the rest.
    pub fn one_vs_rest(&self, k: usize) -> [u64; 4] {
        let tp = self.get(k, k);
        let fneg = self.row_sum(k) - tp;
        let fpos = self.col_sum(k) - tp;
        let tn = self.total() - tp - fneg - fpos;
        [tp, fneg, fpos, tn]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.classes.max(1)).map(<[u64]>::to_vec).collect()
    }
}

/// Tallies predictions against ground truth.
pub fn confusion(y_true: &[usize], y_pred: &[usize], q: usize) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(shape_err("confusion", y_true.len(), y_pred.len()));
    }
    let mut cm = ConfusionMatrix::zeros(q);
    for (index, (&t, &p)) in y_true.iter().zip(y_pred).enumerate() {
        for label in [t, p] {
            if label >= q {
                return Err(Error::LabelOutOfRange {
                    index,
                    label,
                    classes: q,
                });
            }
        }
        cm.counts[t * q + p] += 1;
    }
    Ok(cm)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    /// Unweighted mean over classes.
    #[default]
    Macro,
    /// Counts pooled over classes before dividing.
    Micro,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub sensitivity: f64,
    pub specificity: f64,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub g_mean: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub per_class: Vec<ClassMetrics>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn class_metrics([tp, fneg, fpos, tn]: [u64; 4]) -> ClassMetrics {
    let sensitivity = ratio(tp, tp + fneg);
    let precision = ratio(tp, tp + fpos);
    ClassMetrics {
        sensitivity,
        specificity: ratio(tn, tn + fpos),
        precision,
        recall: sensitivity,
        f: harmonic(precision, sensitivity),
    }
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    values.sum::<f64>() / n as f64
}

/// Macro-averaged report.
pub fn evaluate(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    evaluate_with(cm, Averaging::Macro)
}

pub fn evaluate_with(cm: &ConfusionMatrix, averaging: Averaging) -> Result<MetricsReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyMatrix);
    }
    let q = cm.num_classes();
    let counts: Vec<[u64; 4]> = (0..q).map(|k| cm.one_vs_rest(k)).collect();
    let per_class: Vec<ClassMetrics> = counts.iter().copied().map(class_metrics).collect();
    let accuracy = ratio(cm.trace(), total);
    let (sens, spec, precision, recall, f_measure) = match averaging {
        Averaging::Macro => {
            let sens = mean(per_class.iter().map(|m| m.sensitivity), q);
            let spec = mean(per_class.iter().map(|m| m.specificity), q);
            let p = mean(per_class.iter().map(|m| m.precision), q);
            let f = mean(per_class.iter().map(|m| m.f), q);
            (sens, spec, p, sens, f)
        }
        Averaging::Micro => {
            let pooled = counts.iter().fold([0u64; 4], |mut acc, c| {
                acc.iter_mut().zip(c).for_each(|(a, b)| *a += b);
                acc
            });
            let m = class_metrics(pooled);
            (m.sensitivity, m.specificity, m.precision, m.recall, m.f)
        }
    };
    Ok(MetricsReport {
        accuracy,
        g_mean: (sens * spec).sqrt(),
        precision,
        recall,
        f_measure,
        per_class,
    })
}
