//! Riemannian conjugate-gradient ascent with Armijo backtracking.
//!
//! Direction update is Fletcher–Reeves with projection transport; whenever the
//! transported direction is not an ascent direction the iteration restarts
//! from the gradient. The solver stops on whichever comes first: gradient
//! norm ≤ `grad_tol`, accepted step ≤ `step_tol`, or `max_iters` steps.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::manifold::Manifold;
use crate::scalar::Scalar;

/// Smooth objective to maximize over a matrix manifold.
pub trait Objective<T: Scalar> {
    fn value(&self, x: &DenseMatrix<T>) -> T;
    fn euclidean_grad(&self, x: &DenseMatrix<T>) -> DenseMatrix<T>;
}

/// Solver controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub step_tol: f64,
    /// Sufficient-increase coefficient of the Armijo test.
    pub armijo_c: f64,
    /// Step shrink factor per backtrack.
    pub backtrack: f64,
    pub alpha0: f64,
    pub max_backtracks: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            max_iters: 200,
            grad_tol: 1e-6,
            step_tol: 1e-10,
            armijo_c: 1e-4,
            backtrack: 0.5,
            alpha0: 1.0,
            max_backtracks: 50,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iters > 0
            && self.grad_tol > 0.0
            && self.step_tol > 0.0
            && self.armijo_c > 0.0
            && self.armijo_c < 1.0
            && self.backtrack > 0.0
            && self.backtrack < 1.0
            && self.alpha0 > 0.0
            && self.max_backtracks > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid solver parameters {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GradientTolerance,
    StepTolerance,
    MaxIterations,
    LineSearchFailure,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GradientTolerance => "gradient tolerance",
            Self::StepTolerance => "step tolerance",
            Self::MaxIterations => "max iterations",
            Self::LineSearchFailure => "line-search failure",
        })
    }
}

/// One row of the trace. Row 0 describes the starting point (`alpha = 0`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iter: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub alpha: f64,
    /// The search direction used to reach this point was the plain gradient.
    pub restarted: bool,
    /// Right-hand side of the Armijo test the accepted step satisfied.
    pub armijo_target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub entries: Vec<TraceEntry>,
    pub termination: Termination,
}

impl SolveTrace {
    pub fn accepted_steps(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    pub fn final_objective(&self) -> f64 {
        self.entries.last().map_or(f64::NAN, |e| e.objective)
    }

    /// Objective never drops by more than `slack` between consecutive entries.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[1].objective >= w[0].objective - slack)
    }

    /// CSV with header `iter,objective,grad_norm,alpha`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,objective,grad_norm,alpha\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{:e},{:e},{:e}", e.iter, e.objective, e.grad_norm, e.alpha);
        }
        out
    }
}

/// Fletcher–Reeves coefficient `⟨g_new, g_new⟩ / ⟨g_old, g_old⟩`, 0 when the
/// denominator is below 1e-300.
pub fn beta<T: Scalar>(new_sq_norm: T, old_sq_norm: T) -> T {
    if !(old_sq_norm >= T::lit(1e-300)) || old_sq_norm == T::zero() {
        return T::zero();
    }
    new_sq_norm / old_sq_norm
}

/// Maximizes `objective` over `manifold` starting from the feasible point `x0`.
pub fn maximize<T, M, F>(
    objective: &F,
    manifold: &M,
    x0: &DenseMatrix<T>,
    params: &SolverParams,
) -> Result<(DenseMatrix<T>, SolveTrace)>
where
    T: Scalar,
    M: Manifold<T> + ?Sized,
    F: Objective<T> + ?Sized,
{
    params.validate()?;
    manifold.check_feasible(x0)?;

    let grad_tol = T::lit(params.grad_tol);
    let step_tol = T::lit(params.step_tol);
    let rho = T::lit(params.armijo_c);
    let shrink = T::lit(params.backtrack);
    let alpha0 = T::lit(params.alpha0);

    let eval = |x: &DenseMatrix<T>| -> Result<T> {
        let v = objective.value(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("objective"))
        }
    };
    let gradient = |x: &DenseMatrix<T>| -> Result<DenseMatrix<T>> {
        let g = manifold.riemannian_grad(x, &objective.euclidean_grad(x))?;
        if g.is_finite() {
            Ok(g)
        } else {
            Err(Error::NonFinite("gradient"))
        }
    };

    let mut x = x0.clone();
    let mut f = eval(&x)?;
    let mut g = gradient(&x)?;
    let mut g_sq = manifold.inner(&x, &g, &g)?;
    let mut entries = vec![TraceEntry {
        iter: 0,
        objective: f.as_f64(),
        grad_norm: g_sq.max(T::zero()).sqrt().as_f64(),
        alpha: 0.0,
        restarted: true,
        armijo_target: f.as_f64(),
    }];
    if g_sq.max(T::zero()).sqrt() <= grad_tol {
        return Ok((
            x,
            SolveTrace {
                entries,
                termination: Termination::GradientTolerance,
            },
        ));
    }

    let mut dir = g.clone();
    let mut termination = Termination::MaxIterations;
    for iter in 1..=params.max_iters {
        let mut slope = manifold.inner(&x, &g, &dir)?;
        let mut restarted = dir == g;
        if !(slope > T::zero()) {
            dir = g.clone();
            slope = g_sq;
            restarted = true;
        }

        let mut alpha = alpha0;
        let mut accepted = None;
        for _ in 0..=params.max_backtracks {
            let candidate = manifold.retract(&x, &dir.scale(alpha));
            if let Ok(cand) = candidate {
                let fc = eval(&cand)?;
                let target = f + rho * alpha * slope;
                if fc >= target {
                    accepted = Some((cand, fc, target));
                    break;
                }
            }
            alpha *= shrink;
        }
        let Some((x_new, f_new, target)) = accepted else {
            termination = Termination::LineSearchFailure;
            break;
        };

        let g_new = gradient(&x_new)?;
        let g_new_sq = manifold.inner(&x_new, &g_new, &g_new)?;
        let g_norm = g_new_sq.max(T::zero()).sqrt();
        entries.push(TraceEntry {
            iter,
            objective: f_new.as_f64(),
            grad_norm: g_norm.as_f64(),
            alpha: alpha.as_f64(),
            restarted,
            armijo_target: target.as_f64(),
        });

        let transported = manifold.transport(&x, &x_new, &dir)?;
        let b = beta(g_new_sq, g_sq);
        dir = g_new.axpy(b, &transported);
        x = x_new;
        f = f_new;
        g = g_new;
        g_sq = g_new_sq;

        if g_norm <= grad_tol {
            termination = Termination::GradientTolerance;
            break;
        }
        if alpha <= step_tol {
            termination = Termination::StepTolerance;
            break;
        }
    }

    Ok((x, SolveTrace { entries, termination }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{GeneralizedStiefel, Oblique};

    /// f(W) = tr(WᵀAW).
    struct Rayleigh(DenseMatrix<f64>);

    impl Objective<f64> for Rayleigh {
        fn value(&self, x: &DenseMatrix<f64>) -> f64 {
            x.frobenius_dot(&self.0.dot(x))
        }
        fn euclidean_grad(&self, x: &DenseMatrix<f64>) -> DenseMatrix<f64> {
            self.0.dot(x).scale(2.0)
        }
    }

    fn diag(v: &[f64]) -> DenseMatrix<f64> {
        DenseMatrix::from_fn(v.len(), v.len(), |i, j| if i == j { v[i] } else { 0.0 })
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(2.5, 2.5), 1.0);
        assert_eq!(beta(0.0, 3.0), 0.0);
        assert_eq!(beta(1.0, 1e-301), 0.0);
        assert_eq!(beta(1.0, 0.0), 0.0);
    }

    #[test]
    fn stationary_start_stops_immediately() {
        let sphere = GeneralizedStiefel::new(DenseMatrix::identity(3), 1).unwrap();
        let x0 = DenseMatrix::from_column(&[1.0, 0.0, 0.0]);
        let (x, trace) = maximize(&Rayleigh(diag(&[3.0, 2.0, 1.0])), &sphere, &x0, &SolverParams::default()).unwrap();
        assert_eq!(x, x0);
        assert_eq!(trace.accepted_steps(), 0);
        assert_eq!(trace.termination, Termination::GradientTolerance);
        assert_eq!(trace.termination.to_string(), "gradient tolerance");
    }

    #[test]
    fn finds_top_eigenvector_of_diagonal() {
        let sphere = GeneralizedStiefel::new(DenseMatrix::identity(3), 1).unwrap();
        let x0 = DenseMatrix::from_column(&[0.2, 0.5, 0.8]);
        let x0 = Manifold::<f64>::retract(&sphere, &x0, &DenseMatrix::zeros(3, 1)).unwrap();
        let (x, trace) = maximize(&Rayleigh(diag(&[1.0, 4.0, 2.0])), &sphere, &x0, &SolverParams::default()).unwrap();
        assert!(x[(1, 0)].abs() > 1.0 - 1e-10);
        assert!(trace.is_monotone(0.0));
        assert!(trace.entries.windows(2).all(|w| w[1].objective >= w[1].armijo_target));
    }

    #[test]
    fn oblique_columns_align_independently() {
        struct Linear(DenseMatrix<f64>);
        impl Objective<f64> for Linear {
            fn value(&self, x: &DenseMatrix<f64>) -> f64 {
                x.frobenius_dot(&self.0)
            }
            fn euclidean_grad(&self, _: &DenseMatrix<f64>) -> DenseMatrix<f64> {
                self.0.clone()
            }
        }
        let target = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![4.0, -2.0]]).unwrap();
        let ob = Oblique::new(2, 2).unwrap();
        let c0 = ob.random_point(3).unwrap();
        let params = SolverParams {
            grad_tol: 1e-12,
            ..SolverParams::default()
        };
        let (c, trace) = maximize(&Linear(target), &ob, &c0, &params).unwrap();
        assert!((c[(0, 0)] - 0.6).abs() < 1e-8 && (c[(1, 0)] - 0.8).abs() < 1e-8);
        assert!((c[(1, 1)] + 1.0).abs() < 1e-8);
        assert!((trace.final_objective() - 7.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_infeasible_start_and_bad_params() {
        let sphere = GeneralizedStiefel::new(DenseMatrix::identity(2), 1).unwrap();
        let obj = Rayleigh(diag(&[1.0, 2.0]));
        let bad = DenseMatrix::from_column(&[2.0, 0.0]);
        assert!(matches!(
            maximize(&obj, &sphere, &bad, &SolverParams::default()),
            Err(Error::Infeasible { .. })
        ));
        let x0 = DenseMatrix::from_column(&[1.0, 0.0]);
        let params = SolverParams {
            backtrack: 1.5,
            ..SolverParams::default()
        };
        assert!(maximize(&obj, &sphere, &x0, &params).is_err());
    }

    #[test]
    fn non_finite_objective_is_an_error() {
        struct Nan;
        impl Objective<f64> for Nan {
            fn value(&self, _: &DenseMatrix<f64>) -> f64 {
                f64::NAN
            }
            fn euclidean_grad(&self, x: &DenseMatrix<f64>) -> DenseMatrix<f64> {
                x.clone()
            }
        }
        let sphere = GeneralizedStiefel::new(DenseMatrix::identity(2), 1).unwrap();
        let x0 = DenseMatrix::from_column(&[1.0, 0.0]);
        assert!(matches!(
            maximize(&Nan, &sphere, &x0, &SolverParams::default()),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn trace_csv_and_determinism() {
        let sphere = GeneralizedStiefel::new(DenseMatrix::identity(4), 2).unwrap();
        let a = DenseMatrix::from_fn(4, 4, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let x0 = sphere.random_point(1).unwrap();
        let run = || maximize(&Rayleigh(a.clone()), &sphere, &x0, &SolverParams::default()).unwrap();
        let (x1, t1) = run();
        let (x2, t2) = run();
        assert_eq!(x1, x2);
        assert_eq!(t1, t2);
        let csv = t1.to_csv();
        assert!(csv.starts_with("iter,objective,grad_norm,alpha\n"));
        assert_eq!(csv.lines().count(), t1.entries.len() + 1);
    }
}
