//! The linearized-error lower bound: for a weight polynomial with no zeros
//! on the circle, minimizing the weighted, denominator-cleared residual over
//! a convex set of degree-`n` denominators bounds the true approximation
//! error from below. The minimization splits over an interpolation node on
//! the circle; each node value is a small second-order-cone program, solved
//! with iterative refinement of the sampled modulus constraints, and the
//! node minimum is located by a grid plus golden-section search.

mod socp;

pub use socp::SocpOutcome;

use crate::fourier::AntiAnalytic;
use crate::polynomial::{fejer_riesz, roots, Polynomial, TrigPolynomial};
use crate::{c64, Complex64, Error, Result};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Initial number of evenly spaced modulus-constraint points.
pub const DEFAULT_CONSTRAINT_GRID: usize = 50;

/// Dense grid on which constraint violations are checked between rounds.
pub const DEFAULT_CHECK_GRID: usize = 4096;

/// Default tolerance on the certified constraint violation.
pub const DEFAULT_VIOL_TOL: f64 = 1e-7;

/// Default relative duality-gap tolerance for each cone solve.
pub const DEFAULT_GAP_TOL: f64 = 1e-9;

/// Default number of interpolation nodes scanned for the minimum.
pub const DEFAULT_XI_GRID: usize = 64;

/// Solver knobs for the bound.
#[derive(Debug, Clone)]
pub struct LinearizedOptions {
    pub constraint_grid: usize,
    pub check_grid: usize,
    pub viol_tol: f64,
    pub gap_tol: f64,
    pub xi_grid: usize,
    pub max_newton: usize,
}

impl Default for LinearizedOptions {
    fn default() -> Self {
        LinearizedOptions {
            constraint_grid: DEFAULT_CONSTRAINT_GRID,
            check_grid: DEFAULT_CHECK_GRID,
            viol_tol: DEFAULT_VIOL_TOL,
            gap_tol: DEFAULT_GAP_TOL,
            xi_grid: DEFAULT_XI_GRID,
            max_newton: 4000,
        }
    }
}

// ---------------------------------------------------------------------------
// Problem assembly
// ---------------------------------------------------------------------------

/// Precomputed data for one `(f, pi, n)` triple: the weight with its roots
/// reflected outside the closed disk, and the triangular reduction of the
/// action matrix whose column `j` holds the anti-analytic part of
/// `f z^{j-1}/pi`.
#[derive(Debug, Clone)]
pub struct LinearizedProblem {
    pi: Polynomial,
    n: usize,
    action: DMatrix<Complex64>,
    reduced: DMatrix<Complex64>,
}

impl LinearizedProblem {
    pub fn weight(&self) -> &Polynomial {
        &self.pi
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn action_matrix(&self) -> &DMatrix<Complex64> {
        &self.action
    }

    pub fn reduced_matrix(&self) -> &DMatrix<Complex64> {
        &self.reduced
    }
}

/// Taylor coefficients of `1/pi` when `pi` has no zeros in the closed disk.
fn inverse_weight_series(pi: &Polynomial, floor: f64) -> Vec<Complex64> {
    let c0 = pi.coeff(0);
    let mut inv = vec![1.0 / c0];
    let scale = (1.0 / c0).norm();
    loop {
        let k = inv.len();
        let mut acc = Complex64::default();
        for j in 1..=k.min(pi.nominal_degree()) {
            acc += pi.coeff(j) * inv[k - j];
        }
        let next = -acc / c0;
        inv.push(next);
        if k > 8 && next.norm() < floor * scale {
            break;
        }
        if k > 1 << 22 {
            break;
        }
    }
    inv
}

/// Builds the problem: reflects the disk roots of the weight (its circle
/// modulus is unchanged), assembles the action matrix, and reduces it by a
/// QR factorization so that `||M a|| = ||R a||` for every coefficient
/// vector.
pub fn build_problem(f: &AntiAnalytic, pi: &Polynomial, n: usize) -> Result<LinearizedProblem> {
    if pi.exact_degree(1e-13).is_none_or(|d| d > n) {
        return Err(Error::invalid(
            "weight degree must be at most n, and nonzero",
        ));
    }
    // reflect roots inside the disk; reject roots on the circle
    let rs = roots(pi)?;
    let mut reflected = Polynomial::constant(pi.coeff(pi.exact_degree(1e-13).unwrap_or(0)));
    for &(r, m) in rs.roots() {
        if (r.norm() - 1.0).abs() <= 1e-9 {
            return Err(Error::RootOnCircle { modulus: r.norm() });
        }
        for _ in 0..m {
            if r.norm() < 1.0 {
                // (z - r) -> (1 - conj(r) z)
                reflected = reflected.mul(&Polynomial::new(vec![c64(1.0, 0.0), -r.conj()]));
            } else {
                reflected = reflected.mul(&Polynomial::new(vec![-r, c64(1.0, 0.0)]));
            }
        }
    }
    let pi = reflected;

    let inv = inverse_weight_series(&pi, 1e-17);
    let big_n = f.len();
    let mut action = DMatrix::<Complex64>::zeros(big_n.max(1), n + 1);
    for j in 0..=n {
        for i in 1..=big_n {
            // coefficient of z^{-i} in f z^j / pi: sum_m inv_m a_{i+m+j}
            let mut acc = Complex64::default();
            for (m, &cm) in inv.iter().enumerate() {
                let idx = i + m + j;
                if idx > big_n {
                    break;
                }
                acc += cm * f.coeff(idx);
            }
            action[(i - 1, j)] = acc;
        }
    }
    let qr = action.clone().qr();
    let r = qr.r();
    let reduced = DMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i < r.nrows() && j < r.ncols() {
            r[(i, j)]
        } else {
            Complex64::default()
        }
    });
    Ok(LinearizedProblem {
        pi,
        n,
        action,
        reduced,
    })
}

// ---------------------------------------------------------------------------
// Constraint sets
// ---------------------------------------------------------------------------

/// The interpolation node and the modulus-constraint points on the circle.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    pub xi: Complex64,
    pub points: Vec<Complex64>,
}

impl ConstraintSet {
    pub fn uniform(xi: Complex64, count: usize) -> Self {
        let points = (0..count)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / count as f64))
            .collect();
        ConstraintSet { xi, points }
    }

    /// Appends points, skipping near-duplicates.
    pub fn extend(&mut self, extra: impl IntoIterator<Item = Complex64>) {
        for p in extra {
            if self.points.iter().all(|q| (q - p).norm() > 1e-12) {
                self.points.push(p);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// One cone solve
// ---------------------------------------------------------------------------

fn power_row(xi: Complex64, n: usize) -> DVector<Complex64> {
    DVector::from_iterator(n + 1, (0..=n).map(|k| xi.powu(k as u32)))
}

/// Strictly interior starting denominator: the spectral factor of
/// `|pi|^2 - eps^2 |z - xi|^2`, normalized to interpolate `pi` at `xi`.
fn interior_start(pi: &Polynomial, xi: Complex64, n: usize) -> Result<Polynomial> {
    let grid = 512usize;
    let mut min_pi = f64::INFINITY;
    for j in 0..grid {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64);
        min_pi = min_pi.min(pi.eval(z).norm());
    }
    if !min_pi.is_finite() || min_pi <= 0.0 {
        return Err(Error::RootOnCircle { modulus: 1.0 });
    }
    let eps = 0.25 * min_pi;
    let pi_sq = TrigPolynomial::from_modulus_squared(pi);
    // |z - xi|^2 = 2 - conj(xi) z - xi conj(z) on the circle
    let mut dist_coeffs = vec![c64(2.0, 0.0), -xi.conj()];
    dist_coeffs.resize(pi_sq.degree().max(1) + 1, Complex64::default());
    let dist = TrigPolynomial::new(dist_coeffs);
    let t = pi_sq.sub(&dist.scale(eps * eps));
    let q_eps = fejer_riesz(&t)?;
    let scale = pi.eval(xi) / q_eps.eval(xi);
    let mut coeffs: Vec<Complex64> = (0..=n).map(|k| q_eps.coeff(k) * scale).collect();
    if coeffs.len() < n + 1 {
        coeffs.resize(n + 1, Complex64::default());
    }
    Ok(Polynomial::new(coeffs))
}

/// Minimizes `||R a||` over denominators interpolating the weight at the
/// node and obeying the sampled modulus constraints. Returns the minimizer
/// and the solver outcome with its certified duality gap.
pub fn socp_min(
    problem: &LinearizedProblem,
    constraints: &ConstraintSet,
    opts: &LinearizedOptions,
) -> Result<(Polynomial, SocpOutcome)> {
    let n = problem.n;
    let xi = constraints.xi;
    let w = power_row(xi, n);
    let pi_xi = problem.pi.eval(xi);

    // a = a_p + B y with B spanning the null space of the interpolation row
    let wnorm2 = w.norm_squared();
    let a_p = w.map(|v| v.conj()) * (pi_xi / wnorm2);
    let mut seed = DMatrix::<Complex64>::identity(n + 1, n + 1);
    for i in 0..=n {
        seed[(i, 0)] = w[i].conj();
    }
    let qr = seed.qr();
    let qfull = qr.q();
    let basis = qfull.columns(1, n).into_owned();

    // objective data
    let t_mat_c = &problem.reduced * &basis;
    let t0_c = &problem.reduced * &a_p;
    let t_mat = socp::realify_matrix(&t_mat_c);
    let t0 = socp::realify_vector(&t0_c);

    // cones: |w_i^T (a_p + B y)| <= |pi(z_i)|, skipping points at xi where
    // the interpolation equality already pins the modulus
    let mut cones = Vec::new();
    for &zpt in &constraints.points {
        if (zpt - xi).norm() < 1e-12 {
            continue;
        }
        let wi = power_row(zpt, n);
        let mut gi_c = DMatrix::<Complex64>::zeros(1, n);
        for j in 0..n {
            gi_c[(0, j)] = (0..=n).map(|k| wi[k] * basis[(k, j)]).sum();
        }
        let hi_c: Complex64 = wi.iter().zip(a_p.iter()).map(|(a, b)| a * b).sum();
        let gi = socp::realify_matrix(&gi_c);
        let ri = problem.pi.eval(zpt).norm();
        cones.push((gi, [hi_c.re, hi_c.im], ri));
    }
    let program = socp::ReducedProgram { t_mat, t0, cones };

    // strictly interior start
    let q0 = interior_start(&problem.pi, xi, n)?;
    let a0 = DVector::from_iterator(n + 1, (0..=n).map(|k| q0.coeff(k)));
    let y0_c = basis.adjoint() * (&a0 - &a_p);
    let y0 = socp::realify_vector(&y0_c);

    let (y, outcome) = socp::solve(&program, y0, opts.gap_tol, opts.max_newton)?;
    let yc = socp::complexify_vector(&y);
    let a = a_p + basis * yc;
    let q = Polynomial::new(a.iter().copied().collect());
    Ok((q, outcome))
}

// ---------------------------------------------------------------------------
// psi and the bound
// ---------------------------------------------------------------------------

/// Value of the node function at `xi`, with the modulus constraints enforced
/// on all of the circle up to the certified violation.
#[derive(Debug, Clone)]
pub struct PsiValue {
    /// Primal estimate of the constrained minimum.
    pub estimate: f64,
    /// Dual lower bound from the final solve (estimate minus gap).
    pub bound: f64,
    /// Certified max of `|q/pi| - 1` over the dense check grid.
    pub violation: f64,
    pub rounds: usize,
    pub q: Polynomial,
    pub outcome: SocpOutcome,
}

/// Local maxima of `|q/pi|` on the dense grid that exceed 1.
fn violation_peaks(q: &Polynomial, pi: &Polynomial, grid: usize) -> (f64, Vec<Complex64>) {
    let mut ratios = Vec::with_capacity(grid);
    for j in 0..grid {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64);
        ratios.push((q.eval(z) / pi.eval(z)).norm());
    }
    let mut worst = 0.0f64;
    let mut peaks = Vec::new();
    for j in 0..grid {
        let prev = ratios[(j + grid - 1) % grid];
        let next = ratios[(j + 1) % grid];
        let cur = ratios[j];
        worst = worst.max(cur - 1.0);
        if cur > 1.0 + 1e-13 && cur >= prev && cur >= next {
            peaks.push(Complex64::from_polar(
                1.0,
                2.0 * PI * j as f64 / grid as f64,
            ));
        }
    }
    (worst, peaks)
}

/// Evaluates the node function by refining the sampled constraints until the
/// certified violation drops below tolerance.
pub fn psi(
    problem: &LinearizedProblem,
    xi: Complex64,
    opts: &LinearizedOptions,
) -> Result<PsiValue> {
    let mut constraints = ConstraintSet::uniform(xi, opts.constraint_grid);
    let mut last: Option<(Polynomial, SocpOutcome)> = None;
    let mut violation = f64::INFINITY;
    let mut prev_violation = f64::INFINITY;
    let mut rounds = 0usize;
    for round in 0..12 {
        rounds = round + 1;
        let (q, outcome) = socp_min(problem, &constraints, opts)?;
        let (worst, peaks) = violation_peaks(&q, &problem.pi, opts.check_grid);
        violation = worst.max(0.0);
        last = Some((q, outcome));
        if violation <= opts.viol_tol {
            break;
        }
        if round >= 9 && violation >= prev_violation {
            return Err(Error::RefinementStall { violation, rounds });
        }
        prev_violation = violation;
        constraints.extend(peaks);
    }
    let (q, outcome) = last.expect("at least one solve ran");
    if violation > opts.viol_tol {
        return Err(Error::RefinementStall { violation, rounds });
    }
    Ok(PsiValue {
        estimate: outcome.value,
        bound: outcome.dual_bound,
        violation,
        rounds,
        q,
        outcome,
    })
}

/// Result of the node-minimization.
#[derive(Debug, Clone)]
pub struct LinearizedBound {
    /// Min of the node estimates over the search (grid + refinement).
    pub estimate: f64,
    /// Estimate minus the final solver gap: the reported lower bound,
    /// floating-point and grid-limited, not certified.
    pub bound: f64,
    pub xi: Complex64,
    pub violation: f64,
    /// Node count actually evaluated.
    pub evaluations: usize,
}

/// Minimizes the node function over the circle: uniform grid, then
/// golden-section refinement around the best node down to 1e-4 radians.
pub fn linearized_bound(
    problem: &LinearizedProblem,
    opts: &LinearizedOptions,
) -> Result<LinearizedBound> {
    let grid = opts.xi_grid.max(8);
    let angles: Vec<f64> = (0..grid)
        .map(|j| 2.0 * PI * j as f64 / grid as f64)
        .collect();
    let values: Vec<Result<PsiValue>> = angles
        .par_iter()
        .map(|&th| psi(problem, Complex64::from_polar(1.0, th), opts))
        .collect();
    let mut best_idx = None;
    let mut evaluations = 0usize;
    for (i, v) in values.iter().enumerate() {
        if let Ok(pv) = v {
            evaluations += 1;
            if best_idx.is_none_or(|b: usize| {
                pv.estimate < values[b].as_ref().unwrap().estimate
            }) {
                best_idx = Some(i);
            }
        }
    }
    let best_idx = match best_idx {
        Some(b) => b,
        None => {
            return Err(values
                .into_iter()
                .find_map(|v| v.err())
                .unwrap_or_else(|| Error::SolverStall("empty node grid".into())))
        }
    };
    let mut best = values[best_idx].as_ref().unwrap().clone();
    let mut best_angle = angles[best_idx];

    // golden-section on the bracket around the best grid node
    let spacing = 2.0 * PI / grid as f64;
    let mut lo = best_angle - spacing;
    let mut hi = best_angle + spacing;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = psi(problem, Complex64::from_polar(1.0, x1), opts);
    let mut f2 = psi(problem, Complex64::from_polar(1.0, x2), opts);
    evaluations += 2;
    while hi - lo > 1e-4 {
        let v1 = f1.as_ref().map(|p| p.estimate).unwrap_or(f64::INFINITY);
        let v2 = f2.as_ref().map(|p| p.estimate).unwrap_or(f64::INFINITY);
        if v1 <= v2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = psi(problem, Complex64::from_polar(1.0, x1), opts);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = psi(problem, Complex64::from_polar(1.0, x2), opts);
        }
        evaluations += 1;
    }
    for (ang, cand) in [(x1, f1), (x2, f2)] {
        if let Ok(pv) = cand {
            if pv.estimate < best.estimate {
                best = pv;
                best_angle = ang;
            }
        }
    }
    Ok(LinearizedBound {
        estimate: best.estimate,
        bound: best.bound.min(best.estimate),
        xi: Complex64::from_polar(1.0, best_angle),
        violation: best.violation,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::Symbol;
    use crate::polynomial::RationalFn;

    fn c(re: f64, im: f64) -> Complex64 {
        c64(re, im)
    }

    fn quick_opts() -> LinearizedOptions {
        LinearizedOptions {
            constraint_grid: 50,
            check_grid: 1024,
            viol_tol: 1e-7,
            gap_tol: 1e-9,
            xi_grid: 16,
            max_newton: 4000,
        }
    }

    #[test]
    fn build_problem_monomial() {
        // pi = 1, f = 1/z, n = 0: single action column P_-(1/z) = (1)
        let f = AntiAnalytic::new(vec![c(1.0, 0.0)], 0.0);
        let p = build_problem(&f, &Polynomial::one(), 0).unwrap();
        assert_eq!(p.action_matrix().nrows(), 1);
        assert!((p.action_matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((p.reduced_matrix()[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn build_problem_reflects_inside_roots() {
        // root 0.5 becomes the factor (1 - 0.5 z); modulus unchanged on T
        let f = AntiAnalytic::new(vec![c(1.0, 0.0), c(0.5, 0.0)], 0.0);
        let pi = Polynomial::from_real(&[-0.5, 1.0]); // z - 0.5
        let p = build_problem(&f, &pi, 2).unwrap();
        for j in 0..128 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 128.0);
            assert!((p.weight().eval(z).norm() - pi.eval(z).norm()).abs() < 1e-12);
        }
        // reflected weight has no roots in the closed disk
        for &(r, _) in roots(p.weight()).unwrap().roots() {
            assert!(r.norm() > 1.0 + 1e-9);
        }
    }

    #[test]
    fn reduction_preserves_norms() {
        let f = AntiAnalytic::new(
            (1..=60)
                .map(|k| c(0.8f64.powi(k) * (k as f64).sin(), 0.8f64.powi(k) * 0.3))
                .collect(),
            0.0,
        );
        let p = build_problem(&f, &Polynomial::one(), 4).unwrap();
        let mut state = 1u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) as f64) / (u32::MAX as f64) - 0.5
        };
        for _ in 0..100 {
            let a = DVector::from_iterator(5, (0..5).map(|_| c(rnd(), rnd())));
            let ma = (p.action_matrix() * &a).norm();
            let ra = (p.reduced_matrix() * &a).norm();
            assert!((ma - ra).abs() <= 1e-10 * ma.max(1e-12), "{ma} vs {ra}");
        }
    }

    #[test]
    fn psi_constant_symbol() {
        // f = c/z, n = 0, pi = 1: the only feasible constant is 1, value |c|
        let f = AntiAnalytic::new(vec![c(0.0, -1.7)], 0.0);
        let p = build_problem(&f, &Polynomial::one(), 0).unwrap();
        for &theta in &[0.0, 1.0, 2.5] {
            let v = psi(&p, Complex64::from_polar(1.0, theta), &quick_opts()).unwrap();
            assert!((v.estimate - 1.7).abs() < 1e-9, "estimate {}", v.estimate);
            assert!(v.violation <= 1e-7);
        }
    }

    #[test]
    fn psi_vanishes_for_rational_symbol_at_peak_node() {
        // f rational of degree 2; at the node maximizing |q_true| the true
        // denominator is feasible and the value is ~0
        let poles = [c(0.4, 0.2), c(-0.3, -0.5)];
        let numer = Polynomial::new(vec![c(1.0, 0.0), c(0.2, 0.3)]);
        let rf = RationalFn::from_poles(&poles, numer).unwrap();
        let q_true = rf.denom().clone();
        let sym = Symbol::Rational(rf);
        let coeffs = sym.coefficients(45).unwrap();
        let p = build_problem(&coeffs, &Polynomial::one(), 2).unwrap();
        // locate the argmax of |q_true| on the circle
        let mut best = (0.0f64, 0.0f64);
        for j in 0..8192 {
            let th = 2.0 * PI * j as f64 / 8192.0;
            let v = q_true.eval(Complex64::from_polar(1.0, th)).norm();
            if v > best.1 {
                best = (th, v);
            }
        }
        let v = psi(&p, Complex64::from_polar(1.0, best.0), &quick_opts()).unwrap();
        let scale = coeffs.l2_norm();
        assert!(v.estimate <= 1e-6 * scale, "psi = {} at peak", v.estimate);
    }

    #[test]
    fn objective_nondecreasing_under_refinement() {
        // tightening the constraint set can only raise the minimum
        let f = AntiAnalytic::new(
            (1..=40)
                .map(|k| c(0.85f64.powi(k), 0.1 * 0.85f64.powi(k)))
                .collect(),
            0.0,
        );
        let p = build_problem(&f, &Polynomial::one(), 3).unwrap();
        let xi = c(1.0, 0.0);
        let opts = quick_opts();
        let mut constraints = ConstraintSet::uniform(xi, 12);
        let mut prev = 0.0f64;
        for _ in 0..5 {
            let (q, out) = socp_min(&p, &constraints, &opts).unwrap();
            assert!(
                out.value >= prev - 1e-9 * out.value.max(1.0),
                "objective dropped"
            );
            prev = out.value;
            let (_, peaks) = violation_peaks(&q, p.weight(), 1024);
            if peaks.is_empty() {
                break;
            }
            constraints.extend(peaks);
        }
    }

    #[test]
    fn socp_agrees_with_projection_oracle() {
        // independent check: sequential projection / subgradient descent on
        // the same sampled program, run far past the IPM's accuracy
        let f = AntiAnalytic::new(
            (1..=50)
                .map(|k| c(0.9f64.powi(k) / k as f64, 0.0))
                .collect(),
            0.0,
        );
        let n = 3usize;
        let p = build_problem(&f, &Polynomial::one(), n).unwrap();
        let xi = c(0.0, 1.0);
        let constraints = ConstraintSet::uniform(xi, 50);
        let (_, out) = socp_min(&p, &constraints, &quick_opts()).unwrap();

        // oracle: minimize ||R a|| by projected subgradient over the same
        // feasible set, parameterized the same way
        let w = power_row(xi, n);
        let a_p = w.map(|v| v.conj()) * (p.weight().eval(xi) / w.norm_squared());
        let mut seed = DMatrix::<Complex64>::identity(n + 1, n + 1);
        for i in 0..=n {
            seed[(i, 0)] = w[i].conj();
        }
        let basis = seed.qr().q().columns(1, n).into_owned();
        let rows: Vec<(DVector<Complex64>, Complex64, f64)> = constraints
            .points
            .iter()
            .filter(|zp| (*zp - xi).norm() > 1e-12)
            .map(|&zp| {
                let wi = power_row(zp, n);
                let gi = (wi.transpose() * &basis).transpose();
                let hi: Complex64 = wi.iter().zip(a_p.iter()).map(|(a, b)| a * b).sum();
                (gi, hi, p.weight().eval(zp).norm())
            })
            .collect();
        let rb = p.reduced_matrix() * &basis;
        let r0 = p.reduced_matrix() * &a_p;
        let mut y = DVector::<Complex64>::zeros(n);
        let mut best = f64::INFINITY;
        for iter in 0..60000 {
            // gradient step on the smooth objective
            let resid = &rb * &y + &r0;
            let grad = rb.adjoint() * &resid;
            let step = 0.5 / (1.0 + iter as f64 / 400.0);
            y -= grad * c64(step, 0.0);
            // repeated projection onto violated modulus constraints
            for _ in 0..4 {
                let mut worst: Option<(usize, f64)> = None;
                for (i, (gi, hi, ri)) in rows.iter().enumerate() {
                    let v: Complex64 = gi.dot(&y) + hi;
                    let excess = v.norm() - ri;
                    if excess > 1e-14 && worst.is_none_or(|(_, w)| excess > w) {
                        worst = Some((i, excess));
                    }
                }
                match worst {
                    Some((i, _)) => {
                        let (gi, hi, ri) = &rows[i];
                        let v: Complex64 = gi.dot(&y) + hi;
                        // least-norm correction along g_i
                        let target = v / v.norm() * *ri;
                        let delta = target - v;
                        let gnorm2 = gi.norm_squared();
                        y += gi.map(|g| g.conj()) * (delta / gnorm2);
                    }
                    None => break,
                }
            }
            let resid = (&rb * &y + &r0).norm();
            let feasible = rows
                .iter()
                .all(|(gi, hi, ri)| (gi.dot(&y) + hi).norm() <= ri * (1.0 + 1e-10));
            if feasible {
                best = best.min(resid);
            }
        }
        assert!(
            (out.value - best).abs() <= 5e-3 * best.max(1e-12),
            "ipm {} vs subgradient {}",
            out.value,
            best
        );
        // the dual bound really is a lower bound
        assert!(out.dual_bound <= best * (1.0 + 1e-9));
    }
}
