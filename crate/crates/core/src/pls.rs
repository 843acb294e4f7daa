//! PLS regression solvers: NIPALS and SIMPLS baselines, and DAPLSR, which
//! finds the projection pair `(W, C)` maximizing `tr(WᵀXᵀYC)` subject to
//! `WᵀBW = I` (`B = XᵀX + λI`) and unit-norm columns of `C`, by alternating
//! Riemannian conjugate-gradient ascent over the two manifolds.
//!
//! Every fitted model satisfies `T = X_centered · W`, `P = XᵀT(TᵀT)⁻¹`,
//! `Q = YᵀT(TᵀT)⁻¹` and predicts `Ŷ = X_centered · W · Qᵀ + ȳ`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataspace::{center_with, mean_center, CenteringStats};
use crate::error::{shape_err, Error, Result};
use crate::linalg::{
    canonical_sign, norm, power_iteration, solve_square, symmetric_eigen, Cholesky, DenseMatrix,
};
use crate::manifold::{GeneralizedStiefel, Manifold, Oblique};
use crate::scalar::Scalar;
use crate::seed;
use crate::solver::{maximize, Objective, SolveTrace, SolverParams};

/// Which solver produced a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Nipals,
    Simpls,
    Daplsr,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Nipals => "nipals",
            Self::Simpls => "simpls",
            Self::Daplsr => "daplsr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nipals" => Ok(Self::Nipals),
            "simpls" => Ok(Self::Simpls),
            "daplsr" => Ok(Self::Daplsr),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// Solver bookkeeping stored with a model.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub requested_components: usize,
    /// Per-component objective gain (sequential methods) or the final
    /// per-column terms `w_kᵀ S c_k` (DAPLSR).
    pub component_objectives: Vec<f64>,
    pub outer_iterations: usize,
    pub inner_steps: usize,
    pub converged: bool,
    /// Ridge added to `XᵀX` (DAPLSR only).
    pub ridge: f64,
}

/// Fitted PLS regression model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlsModel<T> {
    pub method: Method,
    /// d×c projection of centered X onto scores.
    pub w: DenseMatrix<T>,
    /// q×c projection of centered Y.
    pub c: DenseMatrix<T>,
    /// n×c training scores.
    pub t: DenseMatrix<T>,
    /// d×c X-loadings.
    pub p: DenseMatrix<T>,
    /// q×c Y-loadings.
    pub q: DenseMatrix<T>,
    pub centering: CenteringStats<T>,
    /// `tr(WᵀXᵀYC)` on the centered training data.
    pub objective: T,
    pub diagnostics: FitDiagnostics,
}

impl<T: Scalar> PlsModel<T> {
    pub fn num_components(&self) -> usize {
        self.w.cols()
    }

    pub fn num_features(&self) -> usize {
        self.w.rows()
    }

    pub fn num_targets(&self) -> usize {
        self.q.rows()
    }

    /// Regression coefficients `R = W Qᵀ` (d×q) acting on centered inputs.
    pub fn coefficients(&self) -> DenseMatrix<T> {
        self.w.dot(&self.q.transpose())
    }

    /// Y-scores `U = Y_centered · C`.
    pub fn y_scores(&self, y: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        if y.cols() != self.num_targets() {
            return Err(shape_err("y_scores", self.num_targets(), y.cols()));
        }
        Ok(center_with(y, &self.centering.label_means).dot(&self.c))
    }

    pub fn predict(&self, x: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        predict(self, x)
    }

    pub fn classify(&self, x: &DenseMatrix<T>) -> Result<Vec<usize>> {
        classify(self, x)
    }

    pub fn to_json(&self) -> Result<String>
    where
        T: Serialize,
    {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        let model: Self = serde_json::from_str(s)?;
        model.check_consistent()?;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()>
    where
        T: Serialize,
    {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    fn check_consistent(&self) -> Result<()> {
        let (d, k) = self.w.shape();
        let q = self.q.rows();
        let ok = self.p.shape() == (d, k)
            && self.q.cols() == k
            && self.c.shape() == (q, k)
            && self.t.cols() == k
            && self.centering.feature_means.len() == d
            && self.centering.label_means.len() == q;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument("inconsistent model dimensions".into()))
        }
    }
}

fn check_xy<T: Scalar>(x: &DenseMatrix<T>, y: &DenseMatrix<T>) -> Result<()> {
    if x.rows() != y.rows() {
        return Err(shape_err("pls fit", format!("{} Y rows", x.rows()), y.rows()));
    }
    if x.rows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(())
}

fn center_pair<T: Scalar>(
    x: &DenseMatrix<T>,
    y: &DenseMatrix<T>,
) -> Result<(DenseMatrix<T>, DenseMatrix<T>, CenteringStats<T>)> {
    check_xy(x, y)?;
    let (xc, feature_means) = mean_center(x)?;
    let (yc, label_means) = mean_center(y)?;
    if !(xc.frobenius_norm() > T::zero()) {
        return Err(Error::ZeroVariance);
    }
    Ok((
        xc,
        yc,
        CenteringStats {
            feature_means,
            label_means,
        },
    ))
}

/// Numerical rank of a symmetric positive semi-definite matrix.
fn psd_rank<T: Scalar>(m: &DenseMatrix<T>) -> usize {
    match symmetric_eigen(m) {
        Ok((vals, _)) => {
            let top = vals.first().copied().unwrap_or(T::zero());
            vals.iter().filter(|&&v| v > T::tol(1e-10) * top).count()
        }
        Err(_) => 0,
    }
}

/// Scores and loadings from a projection `W`.
fn assemble<T: Scalar>(
    method: Method,
    xc: &DenseMatrix<T>,
    yc: &DenseMatrix<T>,
    w: DenseMatrix<T>,
    c: DenseMatrix<T>,
    centering: CenteringStats<T>,
    diagnostics: FitDiagnostics,
) -> Result<PlsModel<T>> {
    let t = xc.dot(&w);
    let tt = t.t_dot(&t);
    let k = w.cols();
    let (p, q) = if k == 0 {
        (DenseMatrix::zeros(xc.cols(), 0), DenseMatrix::zeros(yc.cols(), 0))
    } else {
        let chol = Cholesky::new(&tt).map_err(|_| Error::SingularScores {
            usable: psd_rank(&tt),
        })?;
        let tt_inv = chol.inverse();
        (xc.t_dot(&t).dot(&tt_inv), yc.t_dot(&t).dot(&tt_inv))
    };
    let objective = w.frobenius_dot(&xc.t_dot(yc).dot(&c));
    let model = PlsModel {
        method,
        w,
        c,
        t,
        p,
        q,
        centering,
        objective,
        diagnostics,
    };
    if !(model.w.is_finite() && model.p.is_finite() && model.q.is_finite() && model.t.is_finite()) {
        return Err(Error::NonFinite("model assembly"));
    }
    Ok(model)
}

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 10_000;
/// Components whose cross-covariance falls below this fraction of the first
/// one are treated as rank exhaustion.
const RANK_CUTOFF: f64 = 1e-10;

/// NIPALS with X-deflation. Extraction stops early once the deflated
/// cross-covariance vanishes; `diagnostics.requested_components` keeps the request.
pub fn nipals_fit<T: Scalar>(x: &DenseMatrix<T>, y: &DenseMatrix<T>, components: usize) -> Result<PlsModel<T>> {
    let (xc, yc, centering) = center_pair(x, y)?;
    let d = xc.cols();
    let mut xk = xc.clone();
    let mut yk = yc.clone();
    let mut raw_w: Vec<Vec<T>> = Vec::new();
    let mut loadings: Vec<Vec<T>> = Vec::new();
    let mut y_dirs: Vec<Vec<T>> = Vec::new();
    let mut gains = Vec::new();
    let mut first = None;

    for _ in 0..components {
        let s = xk.t_dot(&yk);
        let s_norm = s.frobenius_norm();
        let first_norm = *first.get_or_insert(s_norm);
        if !(s_norm > T::tol(RANK_CUTOFF) * first_norm) || s_norm == T::zero() {
            break;
        }
        // start from the column of S with the largest norm
        let norms = s.column_norms();
        let best = (0..norms.len()).fold(0, |b, j| if norms[j] > norms[b] { j } else { b });
        let res = power_iteration(
            |v| s.dot(&DenseMatrix::from_column(&s.t_mul_vec(v))).into_vec(),
            s.col(best),
            T::tol(POWER_TOL),
            POWER_MAX_ITERS,
        );
        let mut w = res.vector;
        canonical_sign(&mut w);
        let t = xk.mul_vec(&w);
        let tt: T = t.iter().map(|&v| v * v).sum();
        if !(tt > T::zero()) {
            break;
        }
        let p: Vec<T> = xk.t_mul_vec(&t).into_iter().map(|v| v / tt).collect();
        let qv: Vec<T> = yk.t_mul_vec(&t).into_iter().map(|v| v / tt).collect();
        for i in 0..xk.rows() {
            for (j, &pj) in p.iter().enumerate() {
                xk[(i, j)] -= t[i] * pj;
            }
            for (j, &qj) in qv.iter().enumerate() {
                yk[(i, j)] -= t[i] * qj;
            }
        }
        gains.push(res.value.sqrt().as_f64());
        let qn = norm(&qv);
        y_dirs.push(if qn > T::zero() {
            qv.iter().map(|&v| v / qn).collect()
        } else {
            qv
        });
        raw_w.push(w);
        loadings.push(p);
    }

    let k = raw_w.len();
    let w = if k == 0 {
        DenseMatrix::zeros(d, 0)
    } else {
        // rotations W (PᵀW)⁻¹ map undeflated X directly onto the scores
        let wr = DenseMatrix::from_columns(d, &raw_w);
        let pm = DenseMatrix::from_columns(d, &loadings);
        wr.dot(&solve_square(&pm.t_dot(&wr), &DenseMatrix::identity(k))?)
    };
    let c = DenseMatrix::from_columns(yc.cols(), &y_dirs);
    let diagnostics = FitDiagnostics {
        requested_components: components,
        component_objectives: gains,
        outer_iterations: k,
        converged: true,
        ..FitDiagnostics::default()
    };
    assemble(Method::Nipals, &xc, &yc, w, c, centering, diagnostics)
}

/// Unit weight vectors `W` (d×k), Y-weights `C` (q×k) and per-component gains
/// from SIMPLS on centered data.
fn simpls_core<T: Scalar>(
    xc: &DenseMatrix<T>,
    yc: &DenseMatrix<T>,
    components: usize,
) -> Result<(DenseMatrix<T>, DenseMatrix<T>, Vec<T>)> {
    let d = xc.cols();
    let q = yc.cols();
    let mut s = xc.t_dot(yc);
    let mut basis: Vec<Vec<T>> = Vec::new();
    let mut ws = Vec::new();
    let mut cs = Vec::new();
    let mut gains: Vec<T> = Vec::new();

    for _ in 0..components {
        let (_, vecs) = symmetric_eigen(&s.t_dot(&s))?;
        let mut cvec = vecs.col(0);
        let mut r = s.mul_vec(&cvec);
        let sigma = norm(&r);
        let first = gains.first().copied().unwrap_or(sigma);
        if !(sigma > T::tol(RANK_CUTOFF) * first) || sigma == T::zero() {
            break;
        }
        r.iter_mut().for_each(|v| *v /= sigma);
        let before = r.clone();
        canonical_sign(&mut r);
        if r != before {
            cvec.iter_mut().for_each(|v| *v = -*v);
        }

        let t = xc.mul_vec(&r);
        let mut v = xc.t_mul_vec(&t);
        for _pass in 0..2 {
            for b in &basis {
                let proj = crate::linalg::dot(b, &v);
                v.iter_mut().zip(b).for_each(|(vi, &bi)| *vi -= proj * bi);
            }
        }
        let vn = norm(&v);
        if !(vn > T::zero()) {
            break;
        }
        v.iter_mut().for_each(|x| *x /= vn);
        // S ← S − v (vᵀ S)
        let vs = s.t_mul_vec(&v);
        for i in 0..d {
            for j in 0..q {
                s[(i, j)] -= v[i] * vs[j];
            }
        }
        basis.push(v);
        ws.push(r);
        cs.push(cvec);
        gains.push(sigma);
    }
    Ok((
        DenseMatrix::from_columns(d, &ws),
        DenseMatrix::from_columns(q, &cs),
        gains,
    ))
}

/// SIMPLS: each weight vector is the leading left singular vector of the
/// cross-product `XᵀY` deflated against the previous X-loadings.
pub fn simpls_fit<T: Scalar>(x: &DenseMatrix<T>, y: &DenseMatrix<T>, components: usize) -> Result<PlsModel<T>> {
    let (xc, yc, centering) = center_pair(x, y)?;
    let (w, c, gains) = simpls_core(&xc, &yc, components)?;
    let diagnostics = FitDiagnostics {
        requested_components: components,
        outer_iterations: gains.len(),
        component_objectives: gains.iter().map(|g| g.as_f64()).collect(),
        converged: true,
        ..FitDiagnostics::default()
    };
    assemble(Method::Simpls, &xc, &yc, w, c, centering, diagnostics)
}

/// Starting point for the DAPLSR alternation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// SIMPLS weights, B-orthonormalized; Y-weights column-normalized.
    #[default]
    Simpls,
    /// Seeded random feasible points.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DaplsrOptions {
    pub components: usize,
    pub outer_iters: usize,
    /// Relative objective change below which the alternation stops.
    pub outer_tol: f64,
    pub w_solver: SolverParams,
    pub c_solver: SolverParams,
    pub init: Init,
    pub seed: u64,
}

impl Default for DaplsrOptions {
    fn default() -> Self {
        Self {
            components: 1,
            outer_iters: 30,
            outer_tol: 1e-8,
            w_solver: SolverParams::default(),
            c_solver: SolverParams::default(),
            init: Init::Simpls,
            seed: 0,
        }
    }
}

impl DaplsrOptions {
    pub fn with_components(components: usize) -> Self {
        Self {
            components,
            ..Self::default()
        }
    }

    fn validate(&self, n: usize, d: usize) -> Result<()> {
        if self.components == 0 || self.components > n.min(d) {
            return Err(Error::InvalidArgument(format!(
                "component count {} must lie in 1..={}",
                self.components,
                n.min(d)
            )));
        }
        if self.outer_iters == 0 || !(self.outer_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "outer iteration count and tolerance must be positive".into(),
            ));
        }
        self.w_solver.validate()?;
        self.c_solver.validate()
    }
}

/// Inner solver traces of one outer round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub w: SolveTrace,
    pub c: SolveTrace,
}

/// Full record of a DAPLSR fit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DaplsrTrace {
    pub initial_objective: f64,
    pub rounds: Vec<RoundTrace>,
    pub converged: bool,
}

impl DaplsrTrace {
    /// Objective after every accepted inner step, in execution order.
    pub fn objective_sequence(&self) -> Vec<f64> {
        let mut out = vec![self.initial_objective];
        for r in &self.rounds {
            for tr in [&r.w, &r.c] {
                out.extend(tr.entries.iter().skip(1).map(|e| e.objective));
            }
        }
        out
    }

    pub fn is_monotone(&self, slack: f64) -> bool {
        self.objective_sequence()
            .windows(2)
            .all(|w| w[1] >= w[0] - slack)
    }

    pub fn accepted_steps(&self) -> usize {
        self.rounds
            .iter()
            .map(|r| r.w.accepted_steps() + r.c.accepted_steps())
            .sum()
    }
}

/// `W ↦ tr(Wᵀ G)` with `G = S C` fixed.
struct Linear<'a, T>(&'a DenseMatrix<T>);

impl<T: Scalar> Objective<T> for Linear<'_, T> {
    fn value(&self, x: &DenseMatrix<T>) -> T {
        x.frobenius_dot(self.0)
    }

    fn euclidean_grad(&self, _x: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.0.clone()
    }
}

/// Prepared DAPLSR problem on centered data.
struct Problem<T> {
    xc: DenseMatrix<T>,
    yc: DenseMatrix<T>,
    centering: CenteringStats<T>,
    cross: DenseMatrix<T>,
    stiefel: GeneralizedStiefel<T>,
    oblique: Oblique,
    ridge: T,
}

impl<T: Scalar> Problem<T> {
    fn new(xs: &DenseMatrix<T>, ys: &DenseMatrix<T>, options: &DaplsrOptions) -> Result<Self> {
        let (xc, yc, centering) = center_pair(xs, ys)?;
        options.validate(xc.rows(), xc.cols())?;
        let stiefel = GeneralizedStiefel::from_data(&xc, options.components)?;
        let oblique = Oblique::new(yc.cols(), options.components)?;
        let ridge = crate::manifold::ridge_for(xc.t_dot(&xc).trace(), xc.cols());
        let cross = xc.t_dot(&yc);
        Ok(Self {
            xc,
            yc,
            centering,
            cross,
            stiefel,
            oblique,
            ridge,
        })
    }

    fn objective(&self, w: &DenseMatrix<T>, c: &DenseMatrix<T>) -> T {
        w.frobenius_dot(&self.cross.dot(c))
    }

    fn initial_point(&self, options: &DaplsrOptions) -> Result<(DenseMatrix<T>, DenseMatrix<T>)> {
        let k = options.components;
        let random = || -> Result<(DenseMatrix<T>, DenseMatrix<T>)> {
            Ok((
                self.stiefel.random_point(seed::derive(options.seed, 1))?,
                self.oblique.random_point(seed::derive(options.seed, 2))?,
            ))
        };
        if options.init == Init::Random {
            return random();
        }
        let (ws, cs, _) = simpls_core(&self.xc, &self.yc, k)?;
        // pad with random columns when SIMPLS exhausts the cross-covariance rank
        let w_fill: DenseMatrix<T> = self.stiefel.random_point(seed::derive(options.seed, 3))?;
        let c_fill: DenseMatrix<T> = self.oblique.random_point(seed::derive(options.seed, 4))?;
        let w0 = DenseMatrix::from_fn(ws.rows(), k, |i, j| {
            if j < ws.cols() {
                ws[(i, j)]
            } else {
                w_fill[(i, j)]
            }
        });
        let c0 = DenseMatrix::from_fn(cs.rows(), k, |i, j| {
            if j < cs.cols() {
                cs[(i, j)]
            } else {
                c_fill[(i, j)]
            }
        });
        match (
            self.stiefel.b_orthonormalize(&w0),
            self.oblique.normalize_columns(&c0),
        ) {
            (Ok(w), Ok(c)) => Ok((w, c)),
            _ => random(),
        }
    }

    fn solve(
        &self,
        mut w: DenseMatrix<T>,
        mut c: DenseMatrix<T>,
        options: &DaplsrOptions,
    ) -> Result<(DenseMatrix<T>, DenseMatrix<T>, DaplsrTrace)> {
        self.stiefel.check_feasible(&w)?;
        self.oblique.check_feasible(&c)?;
        let mut f = self.objective(&w, &c);
        if !f.is_finite() {
            return Err(Error::NonFinite("objective"));
        }
        let mut trace = DaplsrTrace {
            initial_objective: f.as_f64(),
            ..DaplsrTrace::default()
        };
        let tol = T::lit(options.outer_tol);
        for _round in 0..options.outer_iters {
            let sc = self.cross.dot(&c);
            let (w_new, w_trace) = maximize(&Linear(&sc), &self.stiefel, &w, &options.w_solver)?;
            w = w_new;
            let stw = self.cross.t_dot(&w);
            let (c_new, c_trace) = maximize(&Linear(&stw), &self.oblique, &c, &options.c_solver)?;
            c = c_new;
            let f_new = self.objective(&w, &c);
            trace.rounds.push(RoundTrace {
                w: w_trace,
                c: c_trace,
            });
            let change = (f_new - f).abs();
            f = f_new;
            if change <= tol * f.abs().max(T::min_positive_value()) {
                trace.converged = true;
                break;
            }
        }
        Ok((w, c, trace))
    }

    fn into_model(self, w: DenseMatrix<T>, c: DenseMatrix<T>, trace: &DaplsrTrace, options: &DaplsrOptions) -> Result<PlsModel<T>> {
        let sc = self.cross.dot(&c);
        let terms = (0..w.cols())
            .map(|k| {
                (0..w.rows())
                    .map(|i| w[(i, k)] * sc[(i, k)])
                    .sum::<T>()
                    .as_f64()
            })
            .collect();
        let diagnostics = FitDiagnostics {
            requested_components: options.components,
            component_objectives: terms,
            outer_iterations: trace.rounds.len(),
            inner_steps: trace.accepted_steps(),
            converged: trace.converged,
            ridge: self.ridge.as_f64(),
        };
        assemble(Method::Daplsr, &self.xc, &self.yc, w, c, self.centering, diagnostics)
    }
}

/// DAPLSR fit on (typically augmented) data.
pub fn daplsr_fit<T: Scalar>(xs: &DenseMatrix<T>, ys: &DenseMatrix<T>, options: &DaplsrOptions) -> Result<PlsModel<T>> {
    daplsr_fit_traced(xs, ys, options).map(|(m, _)| m)
}

/// DAPLSR fit that also returns every inner solver trace.
pub fn daplsr_fit_traced<T: Scalar>(
    xs: &DenseMatrix<T>,
    ys: &DenseMatrix<T>,
    options: &DaplsrOptions,
) -> Result<(PlsModel<T>, DaplsrTrace)> {
    let problem = Problem::new(xs, ys, options)?;
    let (w0, c0) = problem.initial_point(options)?;
    let (w, c, trace) = problem.solve(w0, c0, options)?;
    let model = problem.into_model(w, c, &trace, options)?;
    Ok((model, trace))
}

/// DAPLSR fit from an explicit feasible starting pair `(w0, c0)`, where
/// feasibility refers to `B = XᵀX + λI` of the centered `xs`.
pub fn daplsr_fit_from<T: Scalar>(
    xs: &DenseMatrix<T>,
    ys: &DenseMatrix<T>,
    options: &DaplsrOptions,
    w0: &DenseMatrix<T>,
    c0: &DenseMatrix<T>,
) -> Result<(PlsModel<T>, DaplsrTrace)> {
    let problem = Problem::new(xs, ys, options)?;
    let (w, c, trace) = problem.solve(w0.clone(), c0.clone(), options)?;
    let model = problem.into_model(w, c, &trace, options)?;
    Ok((model, trace))
}

/// `Ŷ = (X − x̄) W Qᵀ + ȳ`.
pub fn predict<T: Scalar>(model: &PlsModel<T>, x: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if x.cols() != model.num_features() {
        return Err(shape_err("predict", model.num_features(), x.cols()));
    }
    let xc = center_with(x, &model.centering.feature_means);
    let mut yhat = xc.dot(&model.w).dot(&model.q.transpose());
    let means = &model.centering.label_means;
    for i in 0..yhat.rows() {
        for (v, &m) in yhat.row_mut(i).iter_mut().zip(means) {
            *v += m;
        }
    }
    Ok(yhat)
}

/// Row-wise argmax of `m`, ties resolved to the lowest column.
pub fn argmax_rows<T: Scalar>(m: &DenseMatrix<T>) -> Vec<usize> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            (1..row.len()).fold(0, |best, j| if row[j] > row[best] { j } else { best })
        })
        .collect()
}

/// Class ids by argmax over predicted label columns.
pub fn classify<T: Scalar>(model: &PlsModel<T>, x: &DenseMatrix<T>) -> Result<Vec<usize>> {
    Ok(argmax_rows(&predict(model, x)?))
}

/// Fits `method` with `components` components using default solver settings.
pub fn fit<T: Scalar>(
    method: Method,
    x: &DenseMatrix<T>,
    y: &DenseMatrix<T>,
    components: usize,
    seed: u64,
) -> Result<PlsModel<T>> {
    match method {
        Method::Nipals => nipals_fit(x, y, components),
        Method::Simpls => simpls_fit(x, y, components),
        Method::Daplsr => daplsr_fit(
            x,
            y,
            &DaplsrOptions {
                components,
                seed,
                ..DaplsrOptions::default()
            },
        ),
    }
}
