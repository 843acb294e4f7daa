//! Constraint manifolds for the PLS projection matrices.
//!
//! * [`GeneralizedStiefel`]: `{W ∈ ℝ^{d×c} : WᵀBW = I}` for symmetric
//!   positive-definite `B`, with the metric `⟨a, b⟩ = tr(aᵀBb)`.
//! * [`Oblique`]: `{C ∈ ℝ^{q×c} : diag(CᵀC) = 1}` with the Euclidean metric.
//!
//! Tangent projection for the generalized Stiefel manifold is
//! `P_W(Z) = Z − W symm(WᵀBZ)`, which is self-adjoint in the B-metric. The
//! Riemannian gradient of a function with Euclidean gradient `G` is then
//! `P_W(B⁻¹G)`. Retraction is B-orthonormal QR (Gram–Schmidt in the B inner
//! product, two passes). Vector transport is tangent projection at the target.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{shape_err, Error, Result};
use crate::linalg::{Cholesky, DenseMatrix};
use crate::scalar::Scalar;
use crate::seed;

/// Operations a Riemannian solver needs from a matrix manifold.
pub trait Manifold<T: Scalar> {
    /// Shape of points and tangent vectors.
    fn ambient_shape(&self) -> (usize, usize);

    /// Size of the constraint violation at `x`.
    fn constraint_residual(&self, x: &DenseMatrix<T>) -> T;

    /// Largest residual for which a point counts as feasible.
    fn feasibility_tol(&self) -> T;

    /// Size of the normal component of `xi` at `x` (0 for tangent vectors).
    fn tangent_residual(&self, x: &DenseMatrix<T>, xi: &DenseMatrix<T>) -> T;

    fn project(&self, x: &DenseMatrix<T>, z: &DenseMatrix<T>) -> Result<DenseMatrix<T>>;

    fn riemannian_grad(&self, x: &DenseMatrix<T>, egrad: &DenseMatrix<T>) -> Result<DenseMatrix<T>>;

    fn retract(&self, x: &DenseMatrix<T>, xi: &DenseMatrix<T>) -> Result<DenseMatrix<T>>;

    fn inner(&self, x: &DenseMatrix<T>, a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<T>;

    fn random_point(&self, seed: u64) -> Result<DenseMatrix<T>>;

    /// Projection transport: the tangent projection of `xi` at `to`.
    fn transport(
        &self,
        from: &DenseMatrix<T>,
        to: &DenseMatrix<T>,
        xi: &DenseMatrix<T>,
    ) -> Result<DenseMatrix<T>> {
        self.check_shape("transport", from)?;
        self.project(to, xi)
    }

    fn check_shape(&self, op: &'static str, m: &DenseMatrix<T>) -> Result<()> {
        let want = self.ambient_shape();
        if m.shape() != want {
            return Err(shape_err(
                op,
                format!("{}x{}", want.0, want.1),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        Ok(())
    }

    fn is_feasible(&self, x: &DenseMatrix<T>) -> bool {
        x.shape() == self.ambient_shape() && self.constraint_residual(x) <= self.feasibility_tol()
    }

    fn check_feasible(&self, x: &DenseMatrix<T>) -> Result<()> {
        self.check_shape("check_feasible", x)?;
        let r = self.constraint_residual(x);
        if !(r <= self.feasibility_tol()) {
            return Err(Error::Infeasible { residual: r.as_f64() });
        }
        Ok(())
    }

    fn norm(&self, x: &DenseMatrix<T>, a: &DenseMatrix<T>) -> Result<T> {
        Ok(self.inner(x, a, a)?.max(T::zero()).sqrt())
    }
}

const MAX_RANDOM_ATTEMPTS: u64 = 8;

fn gaussian<T: Scalar>(rows: usize, cols: usize, seed: u64) -> DenseMatrix<T> {
    let mut rng = seed::rng(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| {
        let v: f64 = StandardNormal.sample(&mut rng);
        T::lit(v)
    })
}

/// `{W : WᵀBW = I}` for a symmetric positive-definite `B`.
#[derive(Clone, Debug)]
pub struct GeneralizedStiefel<T> {
    b: DenseMatrix<T>,
    chol: Cholesky<T>,
    cols: usize,
}

impl<T: Scalar> GeneralizedStiefel<T> {
    pub fn new(b: DenseMatrix<T>, cols: usize) -> Result<Self> {
        let d = b.rows();
        if b.cols() != d {
            return Err(shape_err("GeneralizedStiefel::new", "square B", format!("{d}x{}", b.cols())));
        }
        if cols == 0 || cols > d {
            return Err(Error::InvalidArgument(format!(
                "component count {cols} must lie in 1..={d}"
            )));
        }
        let asym = b.sub(&b.transpose()).frobenius_norm();
        if asym > T::tol(1e-10) * b.frobenius_norm().max(T::one()) {
            return Err(Error::InvalidArgument(format!(
                "B is not symmetric (‖B − Bᵀ‖ = {asym})"
            )));
        }
        let chol = Cholesky::new(&b)?;
        Ok(Self { b, chol, cols })
    }

    /// Manifold for the score constraint `(XW)ᵀ(XW) = I`, using
    /// `B = XᵀX + λI` with `λ = 1e-8 · tr(XᵀX)/d` so that `B` stays positive
    /// definite when `n < d`.
    pub fn from_data(x: &DenseMatrix<T>, cols: usize) -> Result<Self> {
        let mut b = x.t_dot(x);
        let d = b.rows();
        let tr = b.trace();
        if d == 0 || !(tr > T::zero()) {
            return Err(Error::ZeroVariance);
        }
        let lambda = ridge_for(tr, d);
        for i in 0..d {
            b[(i, i)] += lambda;
        }
        Self::new(b, cols)
    }

    pub fn metric(&self) -> &DenseMatrix<T> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.b.rows()
    }

    pub fn components(&self) -> usize {
        self.cols
    }

    /// `B⁻¹ G`.
    pub fn precondition(&self, g: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.chol.solve(g)
    }

    /// B-orthonormal factor `Q` of `M = Q R` (R upper triangular, positive diagonal).
    pub fn b_orthonormalize(&self, m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        self.check_shape("b_orthonormalize", m)?;
        let d = self.dim();
        let mut q_cols: Vec<Vec<T>> = Vec::with_capacity(self.cols);
        let mut bq_cols: Vec<Vec<T>> = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let orig = m.col(j);
            let orig_norm = b_norm(&self.b, &orig);
            let mut v = orig;
            for _pass in 0..2 {
                for (q, bq) in q_cols.iter().zip(&bq_cols) {
                    let r = crate::linalg::dot(bq, &v);
                    for (vi, &qi) in v.iter_mut().zip(q) {
                        *vi -= r * qi;
                    }
                }
            }
            let bv = self.b.mul_vec(&v);
            let nrm = crate::linalg::dot(&v, &bv).max(T::zero()).sqrt();
            if !(nrm > T::lit(1e-14) * orig_norm) || !nrm.is_finite() || nrm == T::zero() {
                return Err(Error::RankDeficient { column: j });
            }
            q_cols.push(v.iter().map(|&x| x / nrm).collect());
            bq_cols.push(bv.iter().map(|&x| x / nrm).collect());
        }
        Ok(DenseMatrix::from_columns(d, &q_cols))
    }
}

pub(crate) fn ridge_for<T: Scalar>(trace: T, d: usize) -> T {
    T::lit(1e-8) * trace / T::from_usize(d).expect("dimension fits scalar")
}

fn b_norm<T: Scalar>(b: &DenseMatrix<T>, v: &[T]) -> T {
    crate::linalg::dot(v, &b.mul_vec(v)).max(T::zero()).sqrt()
}

impl<T: Scalar> Manifold<T> for GeneralizedStiefel<T> {
    fn ambient_shape(&self) -> (usize, usize) {
        (self.dim(), self.cols)
    }

    /// `‖WᵀBW − I‖_F`.
    fn constraint_residual(&self, w: &DenseMatrix<T>) -> T {
        w.t_dot(&self.b.dot(w))
            .sub(&DenseMatrix::identity(self.cols))
            .frobenius_norm()
    }

    fn feasibility_tol(&self) -> T {
        T::tol(1e-8)
    }

    /// `‖symm(WᵀBξ)‖_F`.
    fn tangent_residual(&self, w: &DenseMatrix<T>, xi: &DenseMatrix<T>) -> T {
        w.t_dot(&self.b.dot(xi)).symmetric_part().frobenius_norm()
    }

    fn project(&self, w: &DenseMatrix<T>, z: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        self.check_shape("gs_project", w)?;
        self.check_shape("gs_project", z)?;
        let s = w.t_dot(&self.b.dot(z)).symmetric_part();
        Ok(z.sub(&w.dot(&s)))
    }

    fn riemannian_grad(&self, w: &DenseMatrix<T>, egrad: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        self.check_shape("gs_riemannian_grad", egrad)?;
        self.project(w, &self.precondition(egrad))
    }

    fn retract(&self, w: &DenseMatrix<T>, xi: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        self.check_shape("gs_retract", w)?;
        self.check_shape("gs_retract", xi)?;
        self.b_orthonormalize(&w.add(xi))
    }

    fn inner(&self, w: &DenseMatrix<T>, a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<T> {
        self.check_shape("gs_inner", w)?;
        self.check_shape("gs_inner", a)?;
        self.check_shape("gs_inner", b)?;
        Ok(a.frobenius_dot(&self.b.dot(b)))
    }

    fn random_point(&self, seed: u64) -> Result<DenseMatrix<T>> {
        let mut last = Error::RankDeficient { column: 0 };
        for attempt in 0..MAX_RANDOM_ATTEMPTS {
            let g = gaussian(self.dim(), self.cols, seed::derive(seed, attempt));
            match self.b_orthonormalize(&g) {
                Ok(w) => return Ok(w),
                Err(e) => last = e,
            }
        }
        Err(last)
    }
}

/// `{C : every column has unit Euclidean norm}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oblique {
    rows: usize,
    cols: usize,
}

impl Oblique {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "oblique manifold needs positive dimensions, got {rows}x{cols}"
            )));
        }
        Ok(Self { rows, cols })
    }

    /// Scales every column to unit norm.
    pub fn normalize_columns<T: Scalar>(&self, m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        let norms = m.column_norms();
        if let Some(column) = norms.iter().position(|&n| !(n >= T::lit(1e-14)) || !n.is_finite()) {
            return Err(Error::RankDeficient { column });
        }
        Ok(DenseMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] / norms[j]))
    }
}

impl<T: Scalar> Manifold<T> for Oblique {
    fn ambient_shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// `max_j |‖c_j‖ − 1|`.
    fn constraint_residual(&self, c: &DenseMatrix<T>) -> T {
        c.column_norms()
            .into_iter()
            .fold(T::zero(), |m, n| m.max((n - T::one()).abs()))
    }

    fn feasibility_tol(&self) -> T {
        T::tol(1e-12)
    }

    /// `max_j |c_jᵀ ξ_j|`.
    fn tangent_residual(&self, c: &DenseMatrix<T>, xi: &DenseMatrix<T>) -> T {
        column_dots(c, xi)
            .into_iter()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    fn project(&self, c: &DenseMatrix<T>, z: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        self.check_shape("ob_project", c)?;
        self.check_shape("ob_project", z)?;
        let d = column_dots(c, z);
        Ok(DenseMatrix::from_fn(self.rows, self.cols, |i, j| {
            z[(i, j)] - c[(i, j)] * d[j]
        }))
    }

    fn riemannian_grad(&self, c: &DenseMatrix<T>, egrad: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        self.project(c, egrad)
    }

    fn retract(&self, c: &DenseMatrix<T>, xi: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        self.check_shape("ob_retract", c)?;
        self.check_shape("ob_retract", xi)?;
        self.normalize_columns(&c.add(xi))
    }

    fn inner(&self, c: &DenseMatrix<T>, a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<T> {
        self.check_shape("ob_inner", c)?;
        self.check_shape("ob_inner", a)?;
        self.check_shape("ob_inner", b)?;
        Ok(a.frobenius_dot(b))
    }

    fn random_point(&self, seed: u64) -> Result<DenseMatrix<T>> {
        let mut last = Error::RankDeficient { column: 0 };
        for attempt in 0..MAX_RANDOM_ATTEMPTS {
            let g = gaussian(self.rows, self.cols, seed::derive(seed, attempt));
            match self.normalize_columns(&g) {
                Ok(c) => return Ok(c),
                Err(e) => last = e,
            }
        }
        Err(last)
    }
}

/// `diag(AᵀB)` as a vector.
fn column_dots<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Vec<T> {
    let mut out = vec![T::zero(); a.cols()];
    for i in 0..a.rows() {
        for ((o, &x), &y) in out.iter_mut().zip(a.row(i)).zip(b.row(i)) {
            *o += x * y;
        }
    }
    out
}
