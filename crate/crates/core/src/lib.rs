//! Data-augmented partial least squares regression.
//!
//! Minority classes are oversampled with SMOTE over Value Difference Metric
//! neighborhoods, then PLS projections are fitted by alternating Riemannian
//! conjugate-gradient ascent on a generalized Stiefel manifold (X side) and an
//! oblique manifold (Y side). NIPALS and SIMPLS are included as baselines.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common `f64` case.
//!
//! ```
//! use daplsr::{fit_vdm, oversample, parse_csv, AugmentPlan, DaplsrOptions};
//!
//! let csv = "0.0,0.1,0\n0.2,0.0,0\n0.1,0.3,0\n0.3,0.2,0\n0.0,0.0,0\n\
//!            1.0,1.1,1\n1.2,0.9,1\n0.9,1.0,1\n";
//! let ds: daplsr::Dataset = parse_csv(csv, false).unwrap();
//! let vdm = fit_vdm(&ds, 4).unwrap();
//! let plan = AugmentPlan { k: 2, percent: 100.0, ..AugmentPlan::default() };
//! let aug = oversample(&ds, &plan, Some(&vdm)).unwrap();
//! assert_eq!(aug.dataset.class_counts(), vec![5, 6]);
//!
//! let y = aug.dataset.one_hot();
//! let model = daplsr::daplsr_fit(aug.dataset.features(), &y, &DaplsrOptions::with_components(1)).unwrap();
//! assert_eq!(model.classify(ds.features()).unwrap(), ds.labels());
//! ```

// negated comparisons route NaN into the rejection branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataspace;
pub mod error;
pub mod linalg;
pub mod manifold;
pub mod metrics;
pub mod pls;
pub mod scalar;
pub mod seed;
pub mod smote;
pub mod solver;
pub mod vdm;

pub use dataspace::{
    center_with, induce_imbalance, load_csv, mean_center, one_hot, parse_csv, stratified_split,
    CenteringStats, LabeledDataset,
};
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use manifold::{GeneralizedStiefel, Manifold, Oblique};
pub use metrics::{confusion, evaluate, evaluate_with, Averaging, ClassMetrics, ConfusionMatrix, MetricsReport};
pub use pls::{
    classify, daplsr_fit, daplsr_fit_from, daplsr_fit_traced, fit, nipals_fit, predict, simpls_fit,
    DaplsrOptions, DaplsrTrace, FitDiagnostics, Init, Method, PlsModel,
};
pub use scalar::Scalar;
pub use smote::{oversample, AugmentPlan, Augmented, NeighborMetric, Provenance};
pub use solver::{maximize, Objective, SolveTrace, SolverParams, Termination, TraceEntry};
pub use vdm::{fit_vdm, vdm_distance, vdm_matrix, DistanceMatrix, VdmModel};

pub type Matrix = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;
pub type Dataset = LabeledDataset<f64>;
pub type Dataset32 = LabeledDataset<f32>;
pub type Model = PlsModel<f64>;
pub type Model32 = PlsModel<f32>;
pub type Vdm = VdmModel<f64>;
