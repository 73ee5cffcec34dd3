//! A small dense interior-point solver for the denominator program:
//! minimize `||R a||_2` over complex coefficient vectors `a` subject to one
//! complex interpolation equality and a family of modulus constraints
//! `|w_i^T a| <= r_i`.
//!
//! The equality is eliminated through an orthonormal null-space
//! parameterization, which leaves a convex quadratically-constrained
//! quadratic program in `2n` real variables. A log-barrier Newton iteration
//! follows the central path, and the final multipliers furnish an explicit
//! dual lower bound, so the duality gap we report is computed, not assumed.

use crate::{c64, Complex64, Error, Result};
use nalgebra::{DMatrix, DVector};

/// Outcome of one cone solve.
#[derive(Debug, Clone)]
pub struct SocpOutcome {
    /// Primal objective `||R a||` at the returned point.
    pub value: f64,
    /// Dual lower bound on the constrained minimum (same units as `value`).
    pub dual_bound: f64,
    /// `value - dual_bound`, nonnegative up to roundoff.
    pub gap: f64,
    /// Relative stationarity residual of the KKT system at the solution.
    pub kkt_residual: f64,
    pub newton_iterations: usize,
}

/// The problem data after eliminating the interpolation equality:
/// minimize `||T y + t0||^2` s.t. `||G_i y + h_i|| <= r_i` with `y` real of
/// dimension `2n`.
pub(crate) struct ReducedProgram {
    /// Real form of the objective map.
    pub t_mat: DMatrix<f64>,
    pub t0: DVector<f64>,
    /// One (2 x 2n) block and offset per cone.
    pub cones: Vec<(DMatrix<f64>, [f64; 2], f64)>,
}

/// Expands a complex matrix to its real representation acting on
/// `[Re y; Im y]` stacked pairwise (re_0, im_0, re_1, im_1, ...).
pub(crate) fn realify_matrix(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    let mut out = DMatrix::<f64>::zeros(2 * rows, 2 * cols);
    for i in 0..rows {
        for j in 0..cols {
            let v = m[(i, j)];
            out[(2 * i, 2 * j)] = v.re;
            out[(2 * i, 2 * j + 1)] = -v.im;
            out[(2 * i + 1, 2 * j)] = v.im;
            out[(2 * i + 1, 2 * j + 1)] = v.re;
        }
    }
    out
}

pub(crate) fn realify_vector(v: &DVector<Complex64>) -> DVector<f64> {
    let n = v.len();
    let mut out = DVector::<f64>::zeros(2 * n);
    for i in 0..n {
        out[2 * i] = v[i].re;
        out[2 * i + 1] = v[i].im;
    }
    out
}

pub(crate) fn complexify_vector(v: &DVector<f64>) -> DVector<Complex64> {
    let n = v.len() / 2;
    DVector::from_iterator(n, (0..n).map(|i| c64(v[2 * i], v[2 * i + 1])))
}

impl ReducedProgram {
    fn dim(&self) -> usize {
        self.t_mat.ncols()
    }

    fn objective(&self, y: &DVector<f64>) -> f64 {
        (&self.t_mat * y + &self.t0).norm_squared()
    }

    fn slack(&self, i: usize, y: &DVector<f64>) -> f64 {
        let (g, h, r) = &self.cones[i];
        let v = g * y;
        let a = v[0] + h[0];
        let b = v[1] + h[1];
        r * r - (a * a + b * b)
    }

    fn feasible(&self, y: &DVector<f64>) -> bool {
        (0..self.cones.len()).all(|i| self.slack(i, y) > 0.0)
    }
}

/// Barrier path following from a strictly feasible start. Returns the final
/// point and outcome data.
pub(crate) fn solve(
    program: &ReducedProgram,
    start: DVector<f64>,
    gap_tol: f64,
    max_newton: usize,
) -> Result<(DVector<f64>, SocpOutcome)> {
    let dim = program.dim();
    let m = program.cones.len().max(1) as f64;
    let mut y = start;
    if dim == 0 {
        // nothing to optimize: the equality pinned every degree of freedom,
        // so the cones may sit exactly on their boundary
        for i in 0..program.cones.len() {
            let (_, _, r) = &program.cones[i];
            if program.slack(i, &y) < -1e-10 * (r * r).max(1e-300) {
                return Err(Error::SolverStall(
                    "pinned problem violates a cone constraint".into(),
                ));
            }
        }
        let value = program.objective(&y).sqrt();
        return Ok((
            y,
            SocpOutcome {
                value,
                dual_bound: value,
                gap: 0.0,
                kkt_residual: 0.0,
                newton_iterations: 0,
            },
        ));
    }
    if !program.feasible(&y) {
        return Err(Error::SolverStall(
            "interior start violates a cone constraint".into(),
        ));
    }

    let scale = program.objective(&y).max(1e-300);
    let mut t = (m / scale).max(1e-6);
    let mut newton_total = 0usize;
    let mut outcome = None;
    for _stage in 0..80 {
        // center at the current t
        let mut stage_iters = 0usize;
        loop {
            let (grad, hess) = barrier_derivatives(program, &y, t);
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&grad),
                None => match hess.lu().solve(&grad) {
                    Some(s) => s,
                    None => {
                        return Err(Error::SolverStall("singular Newton system".into()));
                    }
                },
            };
            let decrement = grad.dot(&step);
            if !decrement.is_finite() {
                return Err(Error::SolverStall("non-finite Newton decrement".into()));
            }
            if decrement <= 1e-12 {
                break;
            }
            // backtrack into the interior
            let mut alpha = 1.0f64;
            let phi0 = barrier_value(program, &y, t);
            let mut moved = false;
            for _ in 0..60 {
                let cand = &y - &step * alpha;
                if program.feasible(&cand) {
                    let phi = barrier_value(program, &cand, t);
                    if phi <= phi0 - 0.25 * alpha * decrement {
                        y = cand;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            stage_iters += 1;
            newton_total += 1;
            if !moved || stage_iters > 60 || newton_total > max_newton {
                break;
            }
        }

        // certified gap at the current center
        let (value_sqr, dual_sqr, kkt) = dual_bound(program, &y, t);
        let value = value_sqr.sqrt();
        let dual = dual_sqr.max(0.0).sqrt();
        let gap = (value - dual).max(0.0);
        outcome = Some(SocpOutcome {
            value,
            dual_bound: dual,
            gap,
            kkt_residual: kkt,
            newton_iterations: newton_total,
        });
        if gap <= gap_tol * value.max(scale.sqrt() * 1e-12) || m / t < 1e-18 * scale {
            let out = outcome.unwrap();
            return Ok((y, out));
        }
        if newton_total > max_newton {
            let out = outcome.unwrap();
            return Err(Error::SolverStall(format!(
                "gap {:.3e} after {} Newton steps",
                out.gap, newton_total
            )));
        }
        t *= 10.0;
    }
    let out = outcome.ok_or_else(|| Error::SolverStall("no centering progress".into()))?;
    Err(Error::SolverStall(format!(
        "gap {:.3e} after all stages",
        out.gap
    )))
}

fn barrier_value(p: &ReducedProgram, y: &DVector<f64>, t: f64) -> f64 {
    let mut phi = t * p.objective(y);
    for i in 0..p.cones.len() {
        let s = p.slack(i, y);
        if s <= 0.0 {
            return f64::INFINITY;
        }
        phi -= s.ln();
    }
    phi
}

fn barrier_derivatives(
    p: &ReducedProgram,
    y: &DVector<f64>,
    t: f64,
) -> (DVector<f64>, DMatrix<f64>) {
    let resid = &p.t_mat * y + &p.t0;
    let mut grad = p.t_mat.transpose() * &resid * (2.0 * t);
    let mut hess = p.t_mat.transpose() * &p.t_mat * (2.0 * t);
    for (g, h, r) in &p.cones {
        let v = g * y;
        let a = v[0] + h[0];
        let b = v[1] + h[1];
        let s = r * r - (a * a + b * b);
        let vg = g.transpose() * DVector::from_column_slice(&[a, b]);
        grad += &vg * (2.0 / s);
        hess += g.transpose() * g * (2.0 / s) + &vg * vg.transpose() * (4.0 / (s * s));
    }
    (grad, hess)
}

/// Explicit dual bound from the barrier multipliers `lambda_i = 1/(t s_i)`:
/// the Lagrangian is a convex quadratic in `y` whose unconstrained minimum
/// lower-bounds the constrained optimum. Returns
/// `(primal value^2, dual value^2 proxy, kkt residual)`.
fn dual_bound(p: &ReducedProgram, y: &DVector<f64>, t: f64) -> (f64, f64, f64) {
    let primal = p.objective(y);
    let mut lam = Vec::with_capacity(p.cones.len());
    for i in 0..p.cones.len() {
        lam.push(1.0 / (t * p.slack(i, y)));
    }
    // L(y) = ||T y + t0||^2 + sum lam_i (||G_i y + h_i||^2 - r_i^2)
    //      = y^T A y + 2 b^T y + c, minimized at y* = -A^{-1} b with value
    //        c - b^T A^{-1} b
    let mut a = p.t_mat.transpose() * &p.t_mat;
    let mut b = p.t_mat.transpose() * &p.t0;
    let mut c = p.t0.norm_squared();
    for ((g, h, r), &l) in p.cones.iter().zip(&lam) {
        a += g.transpose() * g * l;
        let hv = DVector::from_column_slice(h);
        b += g.transpose() * &hv * l;
        c += l * (hv.norm_squared() - r * r);
    }
    let dual = match a.cholesky() {
        Some(ch) => {
            let ystar = ch.solve(&b);
            c - b.dot(&ystar)
        }
        None => 0.0,
    };
    // kkt stationarity: grad(obj) + sum lam grad(g)
    let resid = &p.t_mat * y + &p.t0;
    let mut station = p.t_mat.transpose() * &resid * 2.0;
    for ((g, h, _r), &l) in p.cones.iter().zip(&lam) {
        let v = g * y;
        let a0 = v[0] + h[0];
        let b0 = v[1] + h[1];
        station += g.transpose() * DVector::from_column_slice(&[a0, b0]) * (2.0 * l);
    }
    let kkt = station.norm() / (1.0 + primal);
    (primal, dual, kkt)
}
