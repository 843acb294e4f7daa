//! Value Difference Metric over equal-width discretized features.
//!
//! For feature `a` and bins `u = bin(x_a)`, `v = bin(y_a)`:
//!
//! ```text
//! δ_a(u, v) = Σ_c (P(c|u) − P(c|v))²
//! ω_a(u)    = Σ_c P(c|u)²
//! vdm(x, y) = Σ_a min(ω_a(u), ω_a(v)) · δ_a(u, v)
//! ```
//!
//! The weight is taken as the smaller of the two bin weights so the distance is
//! symmetric. A bin never seen during fitting has weight 0, which removes that
//! feature from the sum.

use serde::{Deserialize, Serialize};

use crate::dataspace::LabeledDataset;
use crate::error::{shape_err, Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

/// Number of bins used when none is configured.
pub const DEFAULT_BINS: usize = 10;

/// Fitted class-conditional probability tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VdmModel<T> {
    num_features: usize,
    num_classes: usize,
    bins: usize,
    /// `bins − 1` interior cut points per feature, strictly increasing.
    bin_edges: Vec<Vec<T>>,
    /// Flat `[feature][bin][class]`.
    cond_prob: Vec<T>,
    /// Flat `[feature][bin]`.
    weight: Vec<T>,
}

/// Fits equal-width bins per feature and the class-conditional tables.
pub fn fit_vdm<T: Scalar>(ds: &LabeledDataset<T>, bins: usize) -> Result<VdmModel<T>> {
    if ds.is_empty() {
        return Err(Error::NoData);
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("bin count must be at least 1".into()));
    }
    let d = ds.num_features();
    let q = ds.num_classes();
    let x = ds.features();
    let bins_t = T::from_usize(bins).expect("bin count fits scalar");

    let mut bin_edges = Vec::with_capacity(d);
    for a in 0..d {
        let (lo, hi) = (0..x.rows()).fold((T::infinity(), T::neg_infinity()), |(lo, hi), i| {
            (lo.min(x[(i, a)]), hi.max(x[(i, a)]))
        });
        // constant feature: unit span keeps the edges strictly increasing
        let span = if hi > lo { hi - lo } else { T::one() };
        let width = span / bins_t;
        bin_edges.push(
            (1..bins)
                .map(|k| lo + width * T::from_usize(k).expect("bin index fits scalar"))
                .collect::<Vec<T>>(),
        );
    }

    let mut counts = vec![0usize; d * bins * q];
    for (i, &label) in ds.labels().iter().enumerate() {
        for (a, edges) in bin_edges.iter().enumerate() {
            let v = locate(edges, x[(i, a)]);
            counts[(a * bins + v) * q + label] += 1;
        }
    }

    let mut cond_prob = vec![T::zero(); d * bins * q];
    let mut weight = vec![T::zero(); d * bins];
    for av in 0..d * bins {
        let row = &counts[av * q..(av + 1) * q];
        let total: usize = row.iter().sum();
        if total == 0 {
            continue;
        }
        let total_t = T::from_usize(total).expect("count fits scalar");
        let mut w = T::zero();
        for (c, &n) in row.iter().enumerate() {
            let p = T::from_usize(n).expect("count fits scalar") / total_t;
            cond_prob[av * q + c] = p;
            w += p * p;
        }
        weight[av] = w;
    }

    Ok(VdmModel {
        num_features: d,
        num_classes: q,
        bins,
        bin_edges,
        cond_prob,
        weight,
    })
}

fn locate<T: Scalar>(edges: &[T], x: T) -> usize {
    edges.partition_point(|&e| e <= x)
}

impl<T: Scalar> VdmModel<T> {
    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn bin_edges(&self, feature: usize) -> &[T] {
        &self.bin_edges[feature]
    }

    /// Bin of value `x` for `feature`; out-of-range values land in the boundary bins.
    pub fn bin_of(&self, feature: usize, x: T) -> usize {
        locate(&self.bin_edges[feature], x)
    }

    /// `P(class | bin)` for `feature`. Zero for every class when the bin is unseen.
    pub fn cond_prob(&self, feature: usize, bin: usize, class: usize) -> T {
        self.cond_prob[(feature * self.bins + bin) * self.num_classes + class]
    }

    pub fn weight(&self, feature: usize, bin: usize) -> T {
        self.weight[feature * self.bins + bin]
    }

    /// Bin index of every feature of `x`.
    pub fn discretize(&self, x: &[T]) -> Vec<usize> {
        x.iter()
            .enumerate()
            .map(|(a, &v)| self.bin_of(a, v))
            .collect()
    }

    /// Per-class squared probability difference `δ` between two bins of one feature.
    pub fn delta(&self, feature: usize, u: usize, v: usize) -> T {
        let q = self.num_classes;
        let pu = &self.cond_prob[(feature * self.bins + u) * q..][..q];
        let pv = &self.cond_prob[(feature * self.bins + v) * q..][..q];
        pu.iter()
            .zip(pv)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum()
    }

    /// Contribution of one feature to the distance between values `xa` and `ya`.
    pub fn feature_term(&self, feature: usize, xa: T, ya: T) -> T {
        let u = self.bin_of(feature, xa);
        let v = self.bin_of(feature, ya);
        self.term_binned(feature, u, v)
    }

    fn term_binned(&self, feature: usize, u: usize, v: usize) -> T {
        if u == v {
            return T::zero();
        }
        let w = self.weight(feature, u).min(self.weight(feature, v));
        if w == T::zero() {
            return T::zero();
        }
        w * self.delta(feature, u, v)
    }

    fn distance_binned(&self, bx: &[usize], by: &[usize]) -> T {
        bx.iter()
            .zip(by)
            .enumerate()
            .map(|(a, (&u, &v))| self.term_binned(a, u, v))
            .sum()
    }

    /// VDM distance between two feature vectors.
    pub fn distance(&self, x: &[T], y: &[T]) -> Result<T> {
        if x.len() != self.num_features || y.len() != self.num_features {
            return Err(shape_err(
                "vdm_distance",
                format!("vectors of length {}", self.num_features),
                format!("{} and {}", x.len(), y.len()),
            ));
        }
        Ok(self.distance_binned(&self.discretize(x), &self.discretize(y)))
    }

    /// Pairwise distances between all rows of `x`.
    pub fn matrix(&self, x: &DenseMatrix<T>) -> Result<DistanceMatrix<T>> {
        if x.cols() != self.num_features {
            return Err(shape_err("vdm_matrix", self.num_features, x.cols()));
        }
        let binned: Vec<Vec<usize>> = (0..x.rows()).map(|i| self.discretize(x.row(i))).collect();
        Ok(DistanceMatrix::from_fn(x.rows(), |i, j| {
            self.distance_binned(&binned[i], &binned[j])
        }))
    }
}

/// Free-function form of [`VdmModel::distance`].
pub fn vdm_distance<T: Scalar>(model: &VdmModel<T>, x: &[T], y: &[T]) -> Result<T> {
    model.distance(x, y)
}

/// Free-function form of [`VdmModel::matrix`].
pub fn vdm_matrix<T: Scalar>(model: &VdmModel<T>, x: &DenseMatrix<T>) -> Result<DistanceMatrix<T>> {
    model.matrix(x)
}

/// Symmetric pairwise distance matrix with zero diagonal, stored as the
/// strict upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    upper: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Evaluates `f(i, j)` once for every `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(f(i, j));
            }
        }
        Self { n, upper }
    }

    /// Euclidean distances between rows.
    pub fn euclidean(x: &DenseMatrix<T>) -> Self {
        Self::from_fn(x.rows(), |i, j| {
            x.row(i)
                .iter()
                .zip(x.row(j))
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<T>()
                .sqrt()
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i < self.n && j < self.n, "DistanceMatrix index out of range");
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => T::zero(),
            std::cmp::Ordering::Less => self.upper[self.offset(i, j)],
            std::cmp::Ordering::Greater => self.upper[self.offset(j, i)],
        }
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        // rows 0..i contribute (n-1) + (n-2) + ... + (n-i) entries
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }
}
