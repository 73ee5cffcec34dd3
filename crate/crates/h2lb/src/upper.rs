//! Heuristic upper bound on the best rational approximation error: minimize
//! the projection residual over pole configurations with a multi-start
//! quasi-Newton search, then recover the optimal numerator.
//!
//! For a fixed denominator `q` with roots in the disk, the best numerator is
//! explicit and the error equals the norm of the anti-analytic part of
//! `f q/q~`. The search runs over unconstrained coordinates mapped smoothly
//! onto disk points, so the only remaining difficulty is non-convexity:
//! restarts (plus a warm start at the AAK approximant poles) fight that, and
//! the result is an upper bound which need not be the global optimum.

use crate::funcspec::Symbol;
use crate::polynomial::Polynomial;
use crate::{c64, Complex64, Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

/// A finite Blaschke product: unimodular constant times the normalized
/// factors attached to a zero list in the open disk.
#[derive(Debug, Clone)]
pub struct BlaschkeProduct {
    constant: Complex64,
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    /// Product with the standard normalization `-conj(z)/|z| (z-w)/(1-conj(w)z)`
    /// per zero (plain `z` factors for zeros at the origin).
    pub fn new(zeros: &[Complex64]) -> Result<Self> {
        for z in zeros {
            if z.norm() >= 1.0 {
                return Err(Error::OutsideDisk { modulus: z.norm() });
            }
        }
        Ok(BlaschkeProduct {
            constant: c64(1.0, 0.0),
            zeros: zeros.to_vec(),
        })
    }

    pub fn with_constant(mut self, c: Complex64) -> Self {
        self.constant = c / c.norm();
        self
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = self.constant;
        for &w in &self.zeros {
            let factor = if w.norm() < 1e-15 {
                z
            } else {
                (-w.conj() / w.norm()) * (z - w) / (1.0 - w.conj() * z)
            };
            acc *= factor;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Criterion
// ---------------------------------------------------------------------------

/// The approximation error attached to a pole configuration: the l2 norm of
/// the anti-analytic part of `f b` for the Blaschke product `b` with the
/// given zeros. Equals `||f - p/q||_2` for the optimal numerator `p`.
///
/// Computed exactly: the rational route pairs residues with kernel values;
/// the series route convolves the coefficients with the Taylor expansion of
/// `b`, which terminates because the symbol is truncated.
pub fn criterion(f: &Symbol, zeros: &[Complex64]) -> Result<f64> {
    for z in zeros {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: z.norm() });
        }
    }
    match f {
        Symbol::Rational(rf) => {
            let b = BlaschkeProduct::new(zeros)?;
            let res = rf
                .residues()
                .ok_or_else(|| Error::invalid("criterion needs simple poles"))?;
            // P_-(f b) = sum_l c_l b(lambda_l)/(z - lambda_l)
            let d: Vec<(Complex64, Complex64)> =
                res.iter().map(|&(p, c)| (p, c * b.eval(p))).collect();
            let mut acc = Complex64::default();
            for &(pl, dl) in &d {
                for &(pm, dm) in &d {
                    acc += dl * dm.conj() / (1.0 - pl * pm.conj());
                }
            }
            Ok(acc.re.max(0.0).sqrt())
        }
        Symbol::Series(s) => {
            let n = s.len();
            if n == 0 {
                return Ok(0.0);
            }
            let b = blaschke_taylor(zeros, n);
            // (f b)_{-m} = sum_{j=0}^{n-m} a_{m+j} b_j
            let mut total = 0.0f64;
            for m in 1..=n {
                let mut acc = Complex64::default();
                for j in 0..=(n - m) {
                    acc += s.coeff(m + j) * b[j];
                }
                total += acc.norm_sqr();
            }
            Ok(total.sqrt())
        }
    }
}

/// Taylor coefficients of the plain product `prod (z-w)/(1-conj(w)z)` to the
/// requested length.
pub fn blaschke_taylor(zeros: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut s = vec![Complex64::default(); len];
    if len == 0 {
        return s;
    }
    s[0] = c64(1.0, 0.0);
    for &w in zeros {
        // multiply by (z - w)
        let mut t = vec![Complex64::default(); len];
        for k in 0..len {
            let mut acc = -w * s[k];
            if k > 0 {
                acc += s[k - 1];
            }
            t[k] = acc;
        }
        // divide by (1 - conj(w) z): u_k = t_k + conj(w) u_{k-1}
        let mut prev = Complex64::default();
        for k in 0..len {
            let u = t[k] + w.conj() * prev;
            s[k] = u;
            prev = u;
        }
    }
    s
}

/// Fast criterion used inside the optimizer: squared error from the
/// projection of `f` onto the span of the Cauchy kernels at the zeros,
/// through the (Tikhonov-damped) kernel Gram matrix.
fn criterion_sqr_projection(f: &Symbol, norm_sqr: f64, zeros: &[Complex64]) -> f64 {
    let n = zeros.len();
    if n == 0 {
        return norm_sqr;
    }
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = 1.0 / (1.0 - zeros[j] * zeros[i].conj());
        }
    }
    let trace: f64 = (0..n).map(|i| g[(i, i)].re).sum();
    let damp = 1e-14 * trace / n as f64;
    for i in 0..n {
        g[(i, i)] += damp;
    }
    let beta = nalgebra::DVector::from_iterator(n, zeros.iter().map(|&z| f.kernel_inner(z)));
    let x = match g.clone().cholesky() {
        Some(ch) => ch.solve(&beta),
        None => match g.lu().solve(&beta) {
            Some(x) => x,
            None => return norm_sqr,
        },
    };
    let projected: Complex64 = x
        .iter()
        .zip(beta.iter())
        .map(|(xi, bi)| xi * bi.conj())
        .sum();
    // an overshooting projection means the Gram solve lost accuracy (zeros
    // collided or drifted to the boundary); fall back on the exact route
    if !projected.re.is_finite() || projected.re > norm_sqr * (1.0 + 1e-9) {
        if let Ok(exact) = criterion(f, zeros) {
            return exact * exact;
        }
        return norm_sqr;
    }
    (norm_sqr - projected.re).max(0.0)
}

/// Optimal numerator for a fixed denominator: `p = q~ P_+(f q/q~)`, a
/// polynomial of degree below `deg q`.
pub fn recover_numerator(f: &Symbol, q: &Polynomial) -> Result<Polynomial> {
    let rs = crate::polynomial::roots(q)?;
    let zeros = rs.flat();
    for z in &zeros {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: z.norm() });
        }
    }
    let n = q.nominal_degree();
    let q_tilde = crate::polynomial::reciprocal(q, n);
    match f {
        Symbol::Rational(rf) if rf.has_simple_poles() => {
            // p = sum_l c_l (q - b(lambda_l) q~)/(z - lambda_l) with b = q/q~;
            // each term is a polynomial because its numerator vanishes at
            // lambda_l
            let mut p = Polynomial::zero();
            for (lam, c) in rf.residues().unwrap() {
                let bval = q.eval(lam) / q_tilde.eval(lam);
                let term = q.sub(&q_tilde.scale(bval));
                p = p.add(&term.deflate(lam).scale(c));
            }
            Ok(Polynomial::new((0..n.max(1)).map(|k| p.coeff(k)).collect()))
        }
        _ => {
            let s = match f {
                Symbol::Series(s) => s.clone(),
                Symbol::Rational(rf) => {
                    crate::fourier::truncate_to_bits(|z| rf.eval(z), crate::fourier::DEFAULT_BITS)?
                }
            };
            let len = s.len() + n + 1;
            let bt = blaschke_taylor_ratio(q, &q_tilde, len);
            // analytic part (f b)_k = sum_{m>=1} b_{k+m} a_m, exact since a
            // terminates; then p_t = sum_{u+v=t} qtilde_u (fb)_v for t < n
            let mut fb = vec![Complex64::default(); n];
            for (k, slot) in fb.iter_mut().enumerate() {
                let mut acc = Complex64::default();
                for m in 1..=s.len() {
                    if k + m < bt.len() {
                        acc += bt[k + m] * s.coeff(m);
                    }
                }
                *slot = acc;
            }
            let mut p = vec![Complex64::default(); n.max(1)];
            for (t, slot) in p.iter_mut().enumerate().take(n) {
                let mut acc = Complex64::default();
                for u in 0..=t {
                    acc += q_tilde.coeff(u) * fb[t - u];
                }
                *slot = acc;
            }
            Ok(Polynomial::new(p))
        }
    }
}

/// Taylor coefficients of `q/q~` (the unnormalized Blaschke ratio).
fn blaschke_taylor_ratio(q: &Polynomial, q_tilde: &Polynomial, len: usize) -> Vec<Complex64> {
    // q~ has no zeros in the closed disk (q's roots are inside), so the
    // reciprocal series converges geometrically
    let mut inv = vec![Complex64::default(); len];
    let c0 = q_tilde.coeff(0);
    inv[0] = 1.0 / c0;
    for k in 1..len {
        let mut acc = Complex64::default();
        for j in 1..=k.min(q_tilde.nominal_degree()) {
            acc += q_tilde.coeff(j) * inv[k - j];
        }
        inv[k] = -acc / c0;
    }
    let mut out = vec![Complex64::default(); len];
    for k in 0..len {
        let mut acc = Complex64::default();
        for j in 0..=k.min(q.nominal_degree()) {
            acc += q.coeff(j) * inv[k - j];
        }
        out[k] = acc;
    }
    out
}

// ---------------------------------------------------------------------------
// Multi-start solver
// ---------------------------------------------------------------------------

/// Options for [`solve_rab`].
#[derive(Debug, Clone)]
pub struct RabConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Extra initial pole configuration (typically the AAK approximant
    /// poles).
    pub warm_start: Option<Vec<Complex64>>,
}

impl Default for RabConfig {
    fn default() -> Self {
        RabConfig {
            restarts: 16,
            seed: 0,
            warm_start: None,
        }
    }
}

/// Result of the pole-placement search.
#[derive(Debug, Clone)]
pub struct RabSolution {
    pub denominator: Polynomial,
    pub numerator: Polynomial,
    /// `||f - p/q||_2`, recomputed by the exact criterion at the optimum.
    pub error: f64,
    pub poles: Vec<Complex64>,
    pub restarts_used: usize,
    pub residual_gradient_norm: f64,
    pub seed: u64,
}

/// Smooth surjection from the plane onto the open disk, one zero per pair of
/// unconstrained coordinates.
fn disk_map(u: &[f64]) -> Vec<Complex64> {
    u.chunks(2)
        .map(|c| {
            let v = c64(c[0], c[1]);
            let r = v.norm();
            if r < 1e-12 {
                v
            } else {
                // keep a strict margin so downstream disk checks never see
                // a modulus that rounds to 1
                v * (r.tanh().min(1.0 - 1e-9) / r)
            }
        })
        .collect()
}

fn disk_unmap(zeros: &[Complex64]) -> Vec<f64> {
    let mut u = Vec::with_capacity(zeros.len() * 2);
    for &z in zeros {
        let r = z.norm().min(1.0 - 1e-12);
        let s = if r < 1e-12 { z } else { z * (r.atanh() / r) };
        u.push(s.re);
        u.push(s.im);
    }
    u
}

struct Objective<'a> {
    f: &'a Symbol,
    norm_sqr: f64,
}

impl Objective<'_> {
    /// Scale-free squared criterion. Rational symbols use the exact
    /// partial-fraction route, which keeps resolving the criterion all the
    /// way down when the zeros approach the true poles; series symbols use
    /// the kernel projection, whose cancellation floor sits near
    /// `eps * ||f||^2`.
    fn value(&self, u: &[f64]) -> f64 {
        let zeros = disk_map(u);
        let sqr = match self.f {
            Symbol::Rational(_) => match criterion(self.f, &zeros) {
                Ok(d) => d * d,
                Err(_) => self.norm_sqr,
            },
            Symbol::Series(_) => criterion_sqr_projection(self.f, self.norm_sqr, &zeros),
        };
        sqr / self.norm_sqr
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; u.len()];
        let mut probe = u.to_vec();
        for i in 0..u.len() {
            let h = 1e-6 * (1.0 + u[i].abs());
            probe[i] = u[i] + h;
            let fp = self.value(&probe);
            probe[i] = u[i] - h;
            let fm = self.value(&probe);
            probe[i] = u[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        g
    }
}

/// BFGS with Armijo backtracking; returns (point, value, gradient norm).
fn bfgs(obj: &Objective, start: Vec<f64>, max_iter: usize) -> (Vec<f64>, f64, f64) {
    let dim = start.len();
    let mut x = start;
    let mut fx = obj.value(&x);
    let mut g = obj.gradient(&x);
    let mut h_inv = DMatrix::<f64>::identity(dim, dim);
    for _ in 0..max_iter {
        let gnorm: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= 1e-12 {
            break;
        }
        let gv = nalgebra::DVector::from_column_slice(&g);
        let dir = -(&h_inv * &gv);
        let slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if slope >= 0.0 {
            h_inv = DMatrix::identity(dim, dim);
            continue;
        }
        // backtracking
        let mut step = 1.0f64;
        let mut accepted = false;
        let mut x_new = x.clone();
        let mut f_new = fx;
        for _ in 0..40 {
            for i in 0..dim {
                x_new[i] = x[i] + step * dir[i];
            }
            f_new = obj.value(&x_new);
            if f_new <= fx + 1e-4 * step * slope {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        let g_new = obj.gradient(&x_new);
        // BFGS update
        let s = nalgebra::DVector::from_iterator(dim, x_new.iter().zip(&x).map(|(a, b)| a - b));
        let y = nalgebra::DVector::from_iterator(dim, g_new.iter().zip(&g).map(|(a, b)| a - b));
        let sy: f64 = s.dot(&y);
        if sy > 1e-14 * s.norm() * y.norm() {
            let rho = 1.0 / sy;
            let hy = &h_inv * &y;
            let yhy: f64 = y.dot(&hy);
            // Sherman-Morrison form of the inverse update
            let t1 = (&s * s.transpose()) * (rho * (1.0 + rho * yhy));
            let t2 = (&hy * s.transpose()) * rho;
            let t3 = (&s * hy.transpose()) * rho;
            h_inv = h_inv + t1 - t2 - t3;
        }
        let delta = (fx - f_new).abs();
        x = x_new;
        fx = f_new;
        g = g_new;
        if delta <= 1e-18 * fx.max(1e-30) {
            break;
        }
    }
    let gnorm: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    (x, fx, gnorm)
}

/// Minimizes the criterion over `n` poles with `restarts` random starts plus
/// the warm start, recovers the numerator, and independently recomputes the
/// error at the winner. Deterministic for a fixed seed: ties break by start
/// index.
pub fn solve_rab(f: &Symbol, n: usize, cfg: &RabConfig) -> Result<RabSolution> {
    if n == 0 {
        return Err(Error::invalid("solve_rab needs degree n >= 1"));
    }
    let norm_sqr = f.norm_sqr();
    let obj = Objective { f, norm_sqr };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(warm) = &cfg.warm_start {
        let mut zeros: Vec<Complex64> = warm.iter().take(n).copied().collect();
        while zeros.len() < n {
            zeros.push(Complex64::default());
        }
        starts.push(disk_unmap(&zeros));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        let zeros: Vec<Complex64> = (0..n)
            .map(|_| {
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = 0.95 * rng.gen_range(0.0f64..1.0).sqrt();
                Complex64::from_polar(r, theta)
            })
            .collect();
        starts.push(disk_unmap(&zeros));
    }

    let outcomes: Vec<(usize, Vec<f64>, f64, f64)> = starts
        .par_iter()
        .enumerate()
        .map(|(idx, s)| {
            let (x, fx, gn) = bfgs(&obj, s.clone(), 300);
            (idx, x, fx, gn)
        })
        .collect();
    let best = outcomes
        .iter()
        .min_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)))
        .ok_or(Error::Diverged { best: f64::NAN })?;
    if !best.2.is_finite() {
        return Err(Error::Diverged { best: best.2 });
    }

    let mut zeros = disk_map(&best.1);
    crate::hankel::sort_disk_points(&mut zeros);
    let denominator = Polynomial::from_roots(&zeros);
    let numerator = recover_numerator(f, &denominator)?;
    let error = criterion(f, &zeros)?;
    Ok(RabSolution {
        denominator,
        numerator,
        error,
        poles: zeros,
        restarts_used: starts.len(),
        residual_gradient_norm: best.3,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::AntiAnalytic;
    use crate::polynomial::RationalFn;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        c64(re, im)
    }

    #[test]
    fn blaschke_unimodular_on_circle() {
        let b = BlaschkeProduct::new(&[c(0.5, 0.2), c(0.0, 0.0), c(-0.3, -0.6)]).unwrap();
        for j in 0..64 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 64.0);
            assert!((b.eval(z).norm() - 1.0).abs() < 1e-12);
        }
        assert!(BlaschkeProduct::new(&[c(1.0, 0.1)]).is_err());
    }

    #[test]
    fn criterion_monomial_cases() {
        // f = 1/z, one zero at the origin: b = z, P_-(f z) = P_-(1) = 0
        let f = Symbol::Series(AntiAnalytic::new(vec![c(1.0, 0.0)], 0.0));
        assert!(criterion(&f, &[c(0.0, 0.0)]).unwrap() < 1e-14);
        // no zeros allowed: the error is the full norm
        assert!((criterion(&f, &[]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn criterion_rational_vs_series_route() {
        let poles = [c(0.6, 0.0), c(-0.2, 0.4)];
        let numer = Polynomial::new(vec![c(1.0, 0.5), c(-0.3, 0.2)]);
        let rf = RationalFn::from_poles(&poles, numer).unwrap();
        let rat = Symbol::Rational(rf.clone());
        let ser = Symbol::Series(rat.coefficients(45).unwrap());
        for zeros in [vec![c(0.3, 0.3)], vec![c(0.5, 0.0), c(-0.1, -0.2)], vec![]] {
            let a = criterion(&rat, &zeros).unwrap();
            let b = criterion(&ser, &zeros).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn projection_matches_criterion() {
        let poles = [c(0.35, 0.1), c(-0.5, 0.2), c(0.0, -0.45)];
        let numer = Polynomial::new(vec![c(0.4, 0.0), c(0.2, -0.7), c(-0.1, 0.3)]);
        let f = Symbol::Rational(RationalFn::from_poles(&poles, numer).unwrap());
        let nsq = f.norm_sqr();
        for zeros in [vec![c(0.2, -0.3)], vec![c(0.6, 0.1), c(-0.25, -0.5)]] {
            let exact = criterion(&f, &zeros).unwrap();
            let proj = criterion_sqr_projection(&f, nsq, &zeros).sqrt();
            assert!(
                (exact - proj).abs() <= 1e-7 * exact.max(1e-6),
                "{exact} vs {proj}"
            );
        }
    }

    #[test]
    fn recover_numerator_examples() {
        // f = 1/z, q = z -> p = 1
        let f = Symbol::Series(AntiAnalytic::new(vec![c(1.0, 0.0)], 0.0));
        let p = recover_numerator(&f, &Polynomial::from_real(&[0.0, 1.0])).unwrap();
        assert!((p.coeff(0) - c(1.0, 0.0)).norm() < 1e-12);

        // f = 2/z + 3/z^2, q = z^2 -> p = 3 + 2z
        let f = Symbol::Series(AntiAnalytic::new(vec![c(2.0, 0.0), c(3.0, 0.0)], 0.0));
        let p = recover_numerator(&f, &Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        assert!((p.coeff(0) - c(3.0, 0.0)).norm() < 1e-12);
        assert!((p.coeff(1) - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn recovered_numerator_is_locally_optimal() {
        let poles = [c(0.3, 0.2), c(-0.4, -0.1), c(0.1, 0.5)];
        let numer = Polynomial::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(0.5, -0.5)]);
        let f_rat = RationalFn::from_poles(&poles, numer).unwrap();
        let f = Symbol::Rational(f_rat);
        let q = Polynomial::from_roots(&[c(0.2, 0.0), c(-0.1, 0.3)]);
        let p = recover_numerator(&f, &q).unwrap();
        let err = |pp: &Polynomial| -> f64 {
            // quadrature of ||f - pp/q|| on a fine grid
            let m = 8192usize;
            let mut acc = 0.0;
            for j in 0..m {
                let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
                acc += (f.eval(z) - pp.eval(z) / q.eval(z)).norm_sqr();
            }
            (acc / m as f64).sqrt()
        };
        let base = err(&p);
        // matches the criterion value for these poles
        let crit = criterion(&f, &[c(0.2, 0.0), c(-0.1, 0.3)]).unwrap();
        assert!((base - crit).abs() < 1e-8 * base.max(1e-12));
        // random numerator perturbations never do better
        let mut state = 42u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) as f64) / (u32::MAX as f64) - 0.5
        };
        for _ in 0..40 {
            let dp = Polynomial::new(vec![c(rnd(), rnd()) * 1e-3, c(rnd(), rnd()) * 1e-3]);
            assert!(err(&p.add(&dp)) >= base - 1e-12);
        }
    }

    #[test]
    fn solve_rab_exact_recovery() {
        // f in R_{3,4}: the solver must drive the error to ~0
        let poles = [c(0.5, 0.1), c(-0.3, 0.4), c(0.2, -0.5), c(-0.6, -0.2)];
        let numer = Polynomial::new(vec![c(1.0, 0.0), c(0.3, -0.4), c(-0.2, 0.1), c(0.05, 0.6)]);
        let f = Symbol::Rational(RationalFn::from_poles(&poles, numer).unwrap());
        let cfg = RabConfig {
            restarts: 16,
            seed: 1234,
            warm_start: None,
        };
        let sol = solve_rab(&f, 4, &cfg).unwrap();
        let scale = f.norm_sqr().sqrt();
        assert!(
            sol.error < 1e-8 * scale,
            "error {} vs scale {scale}",
            sol.error
        );
        for p in &sol.poles {
            let d = poles
                .iter()
                .map(|t| (t - p).norm())
                .fold(f64::MAX, f64::min);
            assert!(d < 1e-4, "pole {p} off by {d}");
        }
    }

    #[test]
    fn solve_rab_single_pole_matches_grid_oracle() {
        // independent oracle: dense pole grid with the closed-form projection
        let poles = [c(0.55, 0.3), c(-0.35, -0.45)];
        let numer = Polynomial::new(vec![c(0.8, -0.1), c(0.2, 0.4)]);
        let f = Symbol::Rational(RationalFn::from_poles(&poles, numer).unwrap());
        let norm_sqr = f.norm_sqr();
        let step = 0.01;
        let mut best = f64::MAX;
        let mut i = -99i32;
        while i < 100 {
            let mut j = -99i32;
            while j < 100 {
                let zeta = c(i as f64 * step, j as f64 * step);
                if zeta.norm() < 0.995 {
                    // d^2 = ||f||^2 - |<f, k_zeta>|^2 (1 - |zeta|^2)
                    let beta = f.kernel_inner(zeta);
                    let d2 = norm_sqr - beta.norm_sqr() * (1.0 - zeta.norm_sqr());
                    best = best.min(d2.max(0.0).sqrt());
                }
                j += 1;
            }
            i += 1;
        }
        let sol = solve_rab(
            &f,
            1,
            &RabConfig {
                restarts: 8,
                seed: 7,
                warm_start: None,
            },
        )
        .unwrap();
        // the optimizer must not be worse than the grid beyond grid resolution
        assert!(
            sol.error <= best + step,
            "solver {} vs grid {}",
            sol.error,
            best
        );
        assert!(
            best <= sol.error + step,
            "grid beat solver by more than resolution"
        );
    }

    #[test]
    fn scaling_equivariance() {
        let poles = [c(0.45, -0.2), c(-0.15, 0.5)];
        let numer = Polynomial::new(vec![c(0.6, 0.2), c(-0.3, 0.1)]);
        let f = Symbol::Rational(RationalFn::from_poles(&poles, numer).unwrap());
        // n below the true degree keeps the optimal error positive
        let cfg = RabConfig {
            restarts: 6,
            seed: 99,
            warm_start: None,
        };
        let sol1 = solve_rab(&f, 1, &cfg).unwrap();
        let sol2 = solve_rab(&f.scale(c(3.0, 0.0)), 1, &cfg).unwrap();
        assert!((sol2.error / sol1.error - 3.0).abs() < 1e-6);
        for (a, b) in sol1.poles.iter().zip(&sol2.poles) {
            assert!((a - b).norm() < 1e-5);
        }
    }
}
