//! Labeled datasets: CSV ingestion, centering, one-hot encoding, stratified
//! splitting and controlled class-imbalance induction.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;
use crate::seed;

/// Feature matrix paired with dense integer class labels `0..num_classes`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset<T> {
    features: DenseMatrix<T>,
    labels: Vec<usize>,
    num_classes: usize,
}

/// Column means removed by centering, kept to map new data into the same frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenteringStats<T> {
    pub feature_means: Vec<T>,
    pub label_means: Vec<T>,
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn new(features: DenseMatrix<T>, labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(shape_err(
                "LabeledDataset::new",
                format!("{} labels", features.rows()),
                labels.len(),
            ));
        }
        if let Some((index, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= num_classes) {
            return Err(Error::LabelOutOfRange {
                index,
                label,
                classes: num_classes,
            });
        }
        Ok(Self {
            features,
            labels,
            num_classes,
        })
    }

    pub fn features(&self) -> &DenseMatrix<T> {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.features.cols()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Row indices belonging to `class`, ascending.
    pub fn class_indices(&self, class: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == class).then_some(i))
            .collect()
    }

    /// Subset of rows in the given order.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            features: self.features.select_rows(idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            num_classes: self.num_classes,
        }
    }

    /// One-hot label matrix (n×q).
    pub fn one_hot(&self) -> DenseMatrix<T> {
        one_hot(&self.labels, self.num_classes).expect("labels validated at construction")
    }

    /// Serializes as CSV: feature columns followed by the integer label.
    pub fn to_csv_string(&self, header: bool) -> String {
        let mut out = String::new();
        if header {
            for j in 0..self.num_features() {
                let _ = write!(out, "x{j},");
            }
            out.push_str("label\n");
        }
        for (i, &label) in self.labels.iter().enumerate() {
            for v in self.features.row(i) {
                let _ = write!(out, "{v},");
            }
            let _ = writeln!(out, "{label}");
        }
        out
    }
}

/// Reads a CSV file whose last column is a nonnegative integer label.
pub fn load_csv<T: Scalar>(path: impl AsRef<Path>, has_header: bool) -> Result<LabeledDataset<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text, has_header)
}

/// Parses CSV text; reported row numbers are 1-based line numbers.
pub fn parse_csv<T: Scalar>(text: &str, has_header: bool) -> Result<LabeledDataset<T>> {
    let mut width: Option<usize> = None;
    let mut data = Vec::new();
    let mut labels = Vec::new();
    let mut skip_header = has_header;
    for (lineno, line) in text.lines().enumerate() {
        let row = lineno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if skip_header {
            skip_header = false;
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        match width {
            None => {
                if cells.len() < 2 {
                    return Err(Error::Parse {
                        row,
                        col: cells.len(),
                        msg: "need at least one feature column and a label column".into(),
                    });
                }
                width = Some(cells.len());
            }
            Some(w) if w != cells.len() => {
                return Err(Error::RaggedRow {
                    row,
                    expected: w,
                    found: cells.len(),
                })
            }
            _ => {}
        }
        let (label_cell, feature_cells) = cells.split_last().expect("at least two cells");
        for (j, cell) in feature_cells.iter().enumerate() {
            let v: T = cell.parse().map_err(|_| Error::NonNumeric {
                row,
                col: j + 1,
                value: (*cell).to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonNumeric {
                    row,
                    col: j + 1,
                    value: (*cell).to_string(),
                });
            }
            data.push(v);
        }
        let label: i64 = label_cell.parse().map_err(|_| Error::NonNumeric {
            row,
            col: cells.len(),
            value: (*label_cell).to_string(),
        })?;
        if label < 0 {
            return Err(Error::NegativeLabel { row, value: label });
        }
        labels.push(label as usize);
    }
    let width = width.ok_or(Error::NoData)?;
    let num_classes = labels.iter().max().map_or(0, |m| m + 1);
    let features = DenseMatrix::new(labels.len(), width - 1, data)?;
    LabeledDataset::new(features, labels, num_classes)
}

/// Subtracts per-column means. Returns the centered matrix and the means.
pub fn mean_center<T: Scalar>(m: &DenseMatrix<T>) -> Result<(DenseMatrix<T>, Vec<T>)> {
    if m.rows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let n = T::from_usize(m.rows()).expect("row count fits scalar");
    let mut means = vec![T::zero(); m.cols()];
    for i in 0..m.rows() {
        for (acc, &v) in means.iter_mut().zip(m.row(i)) {
            *acc += v;
        }
    }
    for v in &mut means {
        *v /= n;
    }
    Ok((center_with(m, &means), means))
}

/// Subtracts the given column means.
pub fn center_with<T: Scalar>(m: &DenseMatrix<T>, means: &[T]) -> DenseMatrix<T> {
    DenseMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] - means[j])
}

/// Indicator matrix with a single 1 per row at the label's column.
pub fn one_hot<T: Scalar>(labels: &[usize], q: usize) -> Result<DenseMatrix<T>> {
    if let Some((index, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= q) {
        return Err(Error::LabelOutOfRange {
            index,
            label,
            classes: q,
        });
    }
    Ok(DenseMatrix::from_fn(labels.len(), q, |i, j| {
        if labels[i] == j {
            T::one()
        } else {
            T::zero()
        }
    }))
}

/// Per-class random split. Each class sends `max(1, floor(fraction · count))`
/// samples to the training set; both halves keep the original row order.
pub fn stratified_split<T: Scalar>(
    ds: &LabeledDataset<T>,
    train_fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset<T>, LabeledDataset<T>)> {
    if !(train_fraction > 0.0 && train_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_fraction} outside (0, 1]"
        )));
    }
    let mut rng = seed::rng(seed);
    let mut in_train = vec![false; ds.len()];
    for class in 0..ds.num_classes() {
        let mut idx = ds.class_indices(class);
        if idx.is_empty() {
            return Err(Error::EmptyClass { class });
        }
        let take = ((train_fraction * idx.len() as f64 + 1e-9).floor() as usize).clamp(1, idx.len());
        idx.shuffle(&mut rng);
        for &i in &idx[..take] {
            in_train[i] = true;
        }
    }
    let (train, test): (Vec<usize>, Vec<usize>) = (0..ds.len()).partition(|&i| in_train[i]);
    Ok((ds.select(&train), ds.select(&test)))
}

/// Random per-class subsample with exactly the requested counts. Classes absent
/// from `per_class_counts` are kept whole; kept rows stay in original order.
pub fn induce_imbalance<T: Scalar>(
    ds: &LabeledDataset<T>,
    per_class_counts: &BTreeMap<usize, usize>,
    seed: u64,
) -> Result<LabeledDataset<T>> {
    let counts = ds.class_counts();
    for (&class, &requested) in per_class_counts {
        let available = counts.get(class).copied().ok_or(Error::LabelOutOfRange {
            index: 0,
            label: class,
            classes: ds.num_classes(),
        })?;
        if requested > available {
            return Err(Error::InsufficientSamples {
                class,
                requested,
                available,
            });
        }
    }
    let mut rng = seed::rng(seed);
    let mut keep = vec![false; ds.len()];
    for class in 0..ds.num_classes() {
        let idx = ds.class_indices(class);
        match per_class_counts.get(&class) {
            Some(&k) => {
                for pos in rand::seq::index::sample(&mut rng, idx.len(), k) {
                    keep[idx[pos]] = true;
                }
            }
            None => idx.iter().for_each(|&i| keep[i] = true),
        }
    }
    let kept: Vec<usize> = (0..ds.len()).filter(|&i| keep[i]).collect();
    Ok(ds.select(&kept))
}
