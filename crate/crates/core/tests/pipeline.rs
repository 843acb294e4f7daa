use std::collections::BTreeMap;
use std::fmt::Write as _;

use daplsr::{
    confusion, evaluate, fit, fit_vdm, induce_imbalance, maximize, oversample, parse_csv, seed, stratified_split,
    AugmentPlan, Dataset, Dataset32, GeneralizedStiefel, Manifold, Matrix, Method, Objective, SolverParams,
};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn blob_csv(counts: &[usize], dims: usize, s: u64) -> String {
    let mut rng = seed::rng(s);
    let mut out = String::new();
    for (class, &n) in counts.iter().enumerate() {
        for _ in 0..n {
            for a in 0..dims {
                let center = if a % counts.len() == class { 2.0 } else { 0.0 };
                let z: f64 = StandardNormal.sample(&mut rng);
                let _ = write!(out, "{},", center + 0.6 * z);
            }
            let _ = writeln!(out, "{class}");
        }
    }
    out
}

fn pipeline(ds: &Dataset, s: u64) -> Vec<(Method, f64, f64)> {
    let (train, test) = stratified_split(ds, 0.5, seed::derive(s, 0)).unwrap();
    let train = induce_imbalance(&train, &BTreeMap::from([(1, 12), (2, 12)]), seed::derive(s, 1)).unwrap();
    let vdm = fit_vdm(&train, 8).unwrap();
    let plan = AugmentPlan {
        k: 5,
        percent: 300.0,
        seed: seed::derive(s, 2),
        ..AugmentPlan::default()
    };
    let aug = oversample(&train, &plan, Some(&vdm)).unwrap();
    assert_eq!(aug.dataset.class_counts(), vec![60, 48, 48]);

    [Method::Nipals, Method::Simpls, Method::Daplsr]
        .into_iter()
        .map(|m| {
            let source = if m == Method::Daplsr { &aug.dataset } else { &train };
            let model = fit(m, source.features(), &source.one_hot(), 2, s).unwrap();
            let pred = model.classify(test.features()).unwrap();
            let report = evaluate(&confusion(test.labels(), &pred, 3).unwrap()).unwrap();
            (m, report.accuracy, report.g_mean)
        })
        .collect()
}

#[test]
fn csv_to_metrics_end_to_end() {
    let ds: Dataset = parse_csv(&blob_csv(&[120, 60, 60], 6, 1), false).unwrap();
    assert_eq!(ds.class_counts(), vec![120, 60, 60]);
    let first = pipeline(&ds, 5);
    for &(m, acc, g) in &first {
        assert!(acc > 0.8 && g > 0.8, "{m}: accuracy {acc}, g-mean {g}");
    }
    assert_eq!(first, pipeline(&ds, 5));
}

#[test]
fn single_precision_pipeline_runs() {
    let ds: Dataset32 = parse_csv(&blob_csv(&[40, 20, 20], 4, 2), false).unwrap();
    let (train, test) = stratified_split(&ds, 0.5, 3).unwrap();
    let vdm = fit_vdm(&train, 5).unwrap();
    let aug = oversample(&train, &AugmentPlan::default(), Some(&vdm)).unwrap();
    let model = fit(Method::Daplsr, aug.dataset.features(), &aug.dataset.one_hot(), 2, 0).unwrap();
    let pred = model.classify(test.features()).unwrap();
    assert_eq!(pred.len(), test.len());
    assert!(evaluate(&confusion(test.labels(), &pred, 3).unwrap()).unwrap().accuracy > 0.7);
}

struct Quadratic(Matrix);

impl Objective<f64> for Quadratic {
    fn value(&self, x: &Matrix) -> f64 {
        x.frobenius_dot(&self.0.dot(x))
    }
    fn euclidean_grad(&self, x: &Matrix) -> Matrix {
        self.0.dot(x).scale(2.0)
    }
}

#[test]
fn generalized_eigenvector_against_dense_solver() {
    // max xᵀAx subject to xᵀBx = 1 is the top eigenpair of L⁻¹AL⁻ᵀ
    let mut rng = seed::rng(9);
    for _ in 0..5 {
        let g = Matrix::from_fn(5, 5, |_, _| StandardNormal.sample(&mut rng));
        let a = g.add(&g.transpose());
        let h = Matrix::from_fn(8, 5, |_, _| rng.random_range(-1.0..1.0));
        let b = h.t_dot(&h).add(&Matrix::identity(5));
        let na_b = DMatrix::from_row_slice(5, 5, b.as_slice());
        let l = na_b.cholesky().unwrap().l();
        let li = l.clone().try_inverse().unwrap();
        let m = &li * DMatrix::from_row_slice(5, 5, a.as_slice()) * li.transpose();
        let top = m.symmetric_eigenvalues().max();

        let gs = GeneralizedStiefel::new(b, 1).unwrap();
        let x0: Matrix = gs.random_point(rng.random()).unwrap();
        let params = SolverParams {
            max_iters: 1000,
            ..SolverParams::default()
        };
        let (x, trace) = maximize(&Quadratic(a), &gs, &x0, &params).unwrap();
        assert!(gs.is_feasible(&x));
        assert!(trace.is_monotone(1e-12));
        assert!((trace.final_objective() - top).abs() < 1e-8 * top.abs().max(1.0));
    }
}
