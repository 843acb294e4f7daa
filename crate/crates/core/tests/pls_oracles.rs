use daplsr::linalg::DenseMatrix;
use daplsr::{daplsr_fit, daplsr_fit_traced, mean_center, nipals_fit, seed, simpls_fit, DaplsrOptions, Init, Matrix};
use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(rows: usize, cols: usize, s: u64) -> Matrix {
    let mut rng = seed::rng(s);
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
}

fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn from_na(m: &DMatrix<f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn cross(x: &Matrix, y: &Matrix) -> DMatrix<f64> {
    let (xc, _) = mean_center(x).unwrap();
    let (yc, _) = mean_center(y).unwrap();
    to_na(&xc.t_dot(&yc))
}

#[test]
fn simpls_first_weight_is_top_left_singular_vector() {
    for s in 0..10 {
        let x = gaussian(12, 6, s);
        let y = gaussian(12, 3, 100 + s);
        let svd = cross(&x, &y).svd(true, false);
        let u = svd.u.unwrap();
        let top = (0..svd.singular_values.len())
            .max_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
            .unwrap();
        let model = simpls_fit(&x, &y, 1).unwrap();
        let w = model.w.col(0);
        let cos: f64 = w.iter().enumerate().map(|(i, v)| v * u[(i, top)]).sum();
        assert!(cos.abs() > 1.0 - 1e-10, "seed {s}: cos {cos}");
        assert!((model.diagnostics.component_objectives[0] - svd.singular_values[top]).abs() < 1e-10);
    }
}

#[test]
fn simpls_gains_against_full_svd() {
    let x = gaussian(6, 4, 7);
    let y = gaussian(6, 4, 8);
    let mut sv: Vec<f64> = cross(&x, &y).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let model = simpls_fit(&x, &y, 4).unwrap();
    let gains = &model.diagnostics.component_objectives;
    assert!((gains[0] - sv[0]).abs() < 1e-10);
    for (k, g) in gains.iter().enumerate() {
        // deflating k directions cannot push the top singular value below σ_{k+1} or above σ_1
        assert!(*g >= sv[k] - 1e-10 && *g <= sv[0] + 1e-10, "component {k}");
    }
    assert!(gains.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn nipals_matches_least_squares_when_rank_is_exhausted() {
    // full-rank X with all components: PLS prediction equals ordinary least squares
    let x = gaussian(20, 4, 21);
    let y = gaussian(20, 2, 22);
    let model = nipals_fit(&x, &y, 4).unwrap();
    let (xc, _) = mean_center(&x).unwrap();
    let (yc, ym) = mean_center(&y).unwrap();
    let a = to_na(&xc);
    let beta = (a.transpose() * &a).lu().solve(&(a.transpose() * to_na(&yc))).unwrap();
    let mut ols = from_na(&(a * beta));
    for i in 0..ols.rows() {
        for j in 0..2 {
            ols[(i, j)] += ym[j];
        }
    }
    assert!(model.predict(&x).unwrap().max_abs_diff(&ols) < 1e-9);
}

#[test]
fn simpls_and_nipals_share_predictions() {
    // with a single response both algorithms span the same Krylov space
    let x = gaussian(25, 5, 31);
    let y = gaussian(25, 1, 32);
    for c in 1..=3 {
        let a = nipals_fit(&x, &y, c).unwrap().predict(&x).unwrap();
        let b = simpls_fit(&x, &y, c).unwrap().predict(&x).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-9, "c = {c}");
    }
}

/// Rotates centered X so that `XᵀX = I`.
fn whitened(x: &Matrix) -> Matrix {
    let (xc, _) = mean_center(x).unwrap();
    let svd = to_na(&xc).svd(true, false);
    from_na(&svd.u.unwrap())
}

#[test]
fn daplsr_reaches_simpls_optimum_on_whitened_data() {
    for s in 0..5 {
        let x = whitened(&gaussian(30, 5, 40 + s));
        let y = gaussian(30, 3, 50 + s);
        let simpls = simpls_fit(&x, &y, 1).unwrap();
        let opts = DaplsrOptions {
            components: 1,
            init: Init::Random,
            seed: s,
            ..DaplsrOptions::default()
        };
        let dap = daplsr_fit(&x, &y, &opts).unwrap();
        let target = simpls.diagnostics.component_objectives[0];
        assert!(dap.objective >= (1.0 - 1e-6) * target, "seed {s}: {} vs {target}", dap.objective);
    }
}

#[test]
fn daplsr_single_component_reaches_whitened_top_singular_value() {
    // with c = 1 the optimum of tr(wᵀSc) over wᵀBw = 1, ‖c‖ = 1 is σ₁(L⁻¹S), B = LLᵀ
    let x = gaussian(40, 4, 60);
    let y = gaussian(40, 2, 61);
    let (xc, _) = mean_center(&x).unwrap();
    let (yc, _) = mean_center(&y).unwrap();
    let mut b = to_na(&xc.t_dot(&xc));
    let ridge = 1e-8 * b.trace() / 4.0;
    for i in 0..4 {
        b[(i, i)] += ridge;
    }
    let l = b.cholesky().unwrap().l();
    let m = l.solve_lower_triangular(&to_na(&xc.t_dot(&yc))).unwrap();
    let sigma1 = m.singular_values().max();

    let (model, trace) = daplsr_fit_traced(&x, &y, &DaplsrOptions::with_components(1)).unwrap();
    assert!(trace.is_monotone(1e-12));
    assert!((model.objective - sigma1).abs() < 1e-6 * sigma1);
}

#[test]
fn models_in_single_precision_track_double() {
    let x = gaussian(30, 4, 70);
    let y = gaussian(30, 2, 71);
    let x32: DenseMatrix<f32> = DenseMatrix::from_fn(30, 4, |i, j| x[(i, j)] as f32);
    let y32: DenseMatrix<f32> = DenseMatrix::from_fn(30, 2, |i, j| y[(i, j)] as f32);
    let a = simpls_fit(&x, &y, 2).unwrap().predict(&x).unwrap();
    let b = simpls_fit(&x32, &y32, 2).unwrap().predict(&x32).unwrap();
    for i in 0..30 {
        for j in 0..2 {
            assert!((a[(i, j)] - b[(i, j)] as f64).abs() < 1e-3);
        }
    }
}
