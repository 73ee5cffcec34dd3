//! Complex polynomial algebra: Euclidean division, Bezout identities,
//! reciprocal polynomials, companion-matrix root extraction, and spectral
//! factorization of nonnegative trigonometric polynomials.

use crate::{c64, Complex64, Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Default distance from the unit circle below which a root is classified as
/// lying on it.
pub const CIRCLE_TOL: f64 = 1e-9;

/// Reflection-pairing tolerance used by the spectral factorizer.
const PAIR_TOL: f64 = 1e-7;

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

/// A complex polynomial stored by ascending coefficients. Trailing zeros are
/// kept as given: the length of the vector fixes the nominal degree, which
/// matters for the reciprocal operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a polynomial needs at least one coefficient"
        );
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Polynomial::constant(c64(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Polynomial::constant(Complex64::default())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Polynomial::one();
        for &r in roots {
            p = p.mul(&Polynomial::new(vec![-r, c64(1.0, 0.0)]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Nominal degree: number of stored coefficients minus one.
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact degree: index of the last coefficient above `tol` times the
    /// largest coefficient magnitude. `None` for the (numerically) zero
    /// polynomial.
    pub fn exact_degree(&self, tol: f64) -> Option<usize> {
        let scale = self.max_coeff();
        if scale == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > tol * scale)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.exact_degree(tol).is_none()
    }

    /// Drops trailing coefficients below `tol` relative to the largest one.
    pub fn trimmed(&self, tol: f64) -> Polynomial {
        match self.exact_degree(tol) {
            Some(d) => Polynomial::new(self.coeffs[..=d].to_vec()),
            None => Polynomial::zero(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i + 1) as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, c: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![Complex64::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Polynomial {
        let mut out = vec![Complex64::default(); k];
        out.extend_from_slice(&self.coeffs);
        Polynomial::new(out)
    }

    /// Synthetic division by `(z - a)`: returns the quotient, assuming `a`
    /// is (numerically) a root.
    pub fn deflate(&self, a: Complex64) -> Polynomial {
        let d = self.coeffs.len() - 1;
        if d == 0 {
            return Polynomial::zero();
        }
        let mut q = vec![Complex64::default(); d];
        let mut carry = Complex64::default();
        for k in (0..d).rev() {
            carry = self.coeffs[k + 1] + carry * a;
            q[k] = carry;
        }
        Polynomial::new(q)
    }
}

// ---------------------------------------------------------------------------
// Division, Bezout, reciprocal
// ---------------------------------------------------------------------------

/// Euclidean division: `p = q * quotient + remainder` with
/// `deg remainder < deg q`.
pub fn euclid_divide(p: &Polynomial, q: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    let q = q.trimmed(1e-14);
    let dq = match q.exact_degree(0.0) {
        Some(d) => d,
        None => return Err(Error::ZeroDivisor),
    };
    let mut rem = p.coeffs.to_vec();
    if rem.len() <= dq {
        return Ok((Polynomial::zero(), p.clone()));
    }
    let lead = q.coeff(dq);
    let mut quot = vec![Complex64::default(); rem.len() - dq];
    for k in (dq..rem.len()).rev() {
        let factor = rem[k] / lead;
        quot[k - dq] = factor;
        for j in 0..=dq {
            rem[k - dq + j] -= factor * q.coeff(j);
        }
        rem[k] = Complex64::default();
    }
    rem.truncate(dq.max(1));
    Ok((Polynomial::new(quot), Polynomial::new(rem)))
}

/// Relative resultant of `u` and `v`: |res(u, v)| divided by
/// `||u||^deg(v) ||v||^deg(u)`, which is at most 1. Zero iff the polynomials
/// share a root.
pub fn relative_resultant(u: &Polynomial, v: &Polynomial) -> f64 {
    let u = u.trimmed(1e-14);
    let v = v.trimmed(1e-14);
    let (m, n) = (u.nominal_degree(), v.nominal_degree());
    if m == 0 || n == 0 {
        // a nonzero constant is coprime with everything
        return if u.max_coeff() == 0.0 || v.max_coeff() == 0.0 {
            0.0
        } else {
            1.0
        };
    }
    let size = m + n;
    let mut s = DMatrix::<Complex64>::zeros(size, size);
    for row in 0..n {
        for k in 0..=m {
            s[(row, row + k)] = u.coeff(m - k);
        }
    }
    for row in 0..m {
        for k in 0..=n {
            s[(n + row, row + k)] = v.coeff(n - k);
        }
    }
    let det = s.lu().determinant().norm();
    det / (u.norm().powi(n as i32) * v.norm().powi(m as i32))
}

/// Extended Euclid: returns `(a, b)` with `a u + b v = 1`,
/// `deg a < deg v`, `deg b < deg u`. Fails when the inputs share a root.
pub fn bezout(u: &Polynomial, v: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    let ut = u.trimmed(1e-14);
    let vt = v.trimmed(1e-14);
    if ut.is_zero(0.0) || vt.is_zero(0.0) {
        return Err(Error::ZeroDivisor);
    }
    let resultant = relative_resultant(&ut, &vt);
    if resultant < 1e-25 {
        return Err(Error::NotCoprime { resultant });
    }
    // r0 = u, r1 = v; track cofactors of u and v for each remainder
    let mut r0 = ut.clone();
    let mut r1 = vt.clone();
    let mut a0 = Polynomial::one();
    let mut a1 = Polynomial::zero();
    let mut b0 = Polynomial::zero();
    let mut b1 = Polynomial::one();
    loop {
        // a remainder far below the scale of the one it came from means the
        // division was exact up to roundoff
        if r1.max_coeff() <= 1e-12 * r0.max_coeff() {
            break;
        }
        let (q, r) = euclid_divide(&r0, &r1)?;
        let a2 = a0.sub(&q.mul(&a1));
        let b2 = b0.sub(&q.mul(&b1));
        r0 = r1;
        r1 = r.trimmed(1e-14);
        a0 = a1;
        a1 = a2;
        b0 = b1;
        b1 = b2;
    }
    // r0 is the gcd; it must be a nonzero constant
    let d = r0.exact_degree(1e-10).unwrap_or(0);
    if d > 0 {
        return Err(Error::NotCoprime {
            resultant: relative_resultant(u, v),
        });
    }
    let g = r0.coeff(0);
    let a = a0.scale(1.0 / g);
    let b = b0.scale(1.0 / g);
    // residual check guards against ill-conditioned divisions
    let residual = a.mul(&ut).add(&b.mul(&vt)).sub(&Polynomial::one());
    let scale = (ut.norm() * a.norm() + vt.norm() * b.norm()).max(1.0);
    if residual.norm() > 1e-8 * scale {
        return Err(Error::NotCoprime {
            resultant: relative_resultant(u, v),
        });
    }
    Ok((a, b))
}

/// The degree-`n` reciprocal `z^n conj(q(1/conj(z)))`: coefficient `c_k`
/// moves to `conj(c_{n-k})`. Shares its modulus with `q` on the circle.
pub fn reciprocal(q: &Polynomial, n: usize) -> Polynomial {
    assert!(
        q.nominal_degree() <= n,
        "reciprocal needs deg(q) <= n (got {} > {n})",
        q.nominal_degree()
    );
    Polynomial::new((0..=n).map(|k| q.coeff(n - k).conj()).collect())
}

// ---------------------------------------------------------------------------
// Roots
// ---------------------------------------------------------------------------

/// Where a root sits relative to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirclePosition {
    Inside,
    OnCircle,
    Outside,
}

/// Roots of a polynomial with multiplicities and circle classification.
#[derive(Debug, Clone)]
pub struct RootSet {
    roots: Vec<(Complex64, usize)>,
    deficiency: usize,
    circle_tol: f64,
}

impl RootSet {
    pub fn roots(&self) -> &[(Complex64, usize)] {
        &self.roots
    }

    /// All roots flattened, multiplicities by repetition.
    pub fn flat(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for &(r, m) in &self.roots {
            out.extend(std::iter::repeat_n(r, m));
        }
        out
    }

    /// Degree lost to trailing zero coefficients.
    pub fn deficiency(&self) -> usize {
        self.deficiency
    }

    pub fn classify(&self, root: Complex64) -> CirclePosition {
        let r = root.norm();
        if (r - 1.0).abs() <= self.circle_tol {
            CirclePosition::OnCircle
        } else if r < 1.0 {
            CirclePosition::Inside
        } else {
            CirclePosition::Outside
        }
    }

    pub fn inside(&self) -> Vec<Complex64> {
        self.flat()
            .into_iter()
            .filter(|&r| self.classify(r) == CirclePosition::Inside)
            .collect()
    }

    pub fn multiplicity_sum(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m).sum()
    }
}

fn horner_with_derivative(p: &Polynomial, z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::default();
    let mut dv = Complex64::default();
    for &c in p.coeffs.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Parlett-Reinsch style balancing on the entry moduli, power-of-two scaling.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let mut done = false;
    let mut rounds = 0;
    while !done && rounds < 100 {
        done = true;
        rounds += 1;
        for i in 0..n {
            let mut c: f64 = (0..n).filter(|&j| j != i).map(|j| m[(j, i)].norm()).sum();
            let mut r: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].norm()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0f64;
            let s = c + r;
            while c < r / radix {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while c > r * radix {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if c + r < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

fn companion_eigenvalues(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = monic.len() - 1;
    let mut comp = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = c64(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -monic[i];
    }
    balance(&mut comp);
    let schur = nalgebra::linalg::Schur::try_new(comp, 1e-14, 200_000)
        .ok_or_else(|| Error::Eigen("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Eigen("Schur produced no eigenvalues".into()))?;
    Ok(ev.iter().copied().collect())
}

/// Roots via the balanced companion matrix, refined by a few Newton steps,
/// then clustered into multiplicity groups.
pub fn roots(p: &Polynomial) -> Result<RootSet> {
    roots_with_tol(p, CIRCLE_TOL)
}

pub fn roots_with_tol(p: &Polynomial, circle_tol: f64) -> Result<RootSet> {
    let nominal = p.nominal_degree();
    let trimmed = p.trimmed(1e-14);
    let d = trimmed
        .exact_degree(0.0)
        .ok_or_else(|| Error::invalid("cannot take roots of the zero polynomial"))?;
    let deficiency = nominal - d;
    if d == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            deficiency,
            circle_tol,
        });
    }
    // rescale z -> s z so the extreme coefficients have equal magnitude
    let lead = trimmed.coeff(d);
    let lowest = trimmed
        .coeffs()
        .iter()
        .position(|c| c.norm() > 0.0)
        .unwrap_or(0);
    let s = if lowest < d && trimmed.coeff(lowest).norm() > 0.0 {
        (trimmed.coeff(lowest).norm() / lead.norm()).powf(1.0 / (d - lowest) as f64)
    } else {
        1.0
    };
    let s = if s.is_finite() && s > 1e-6 && s < 1e6 {
        s
    } else {
        1.0
    };
    let monic: Vec<Complex64> = (0..=d)
        .map(|k| trimmed.coeff(k) / lead * s.powi(k as i32 - d as i32))
        .collect();
    let raw = companion_eigenvalues(&monic)?;
    let mut refined = Vec::with_capacity(d);
    for ev in raw {
        let mut z = ev * s;
        let (mut pv, _) = horner_with_derivative(&trimmed, z);
        for _ in 0..6 {
            let (v, dv) = horner_with_derivative(&trimmed, z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            let cand = z - step;
            let (cv, _) = horner_with_derivative(&trimmed, cand);
            if cv.norm() <= pv.norm() {
                z = cand;
                pv = cv;
            } else {
                break;
            }
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
        refined.push(z);
    }
    // cluster into multiplicity groups
    let scale = refined.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = 1e-6 * scale;
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for z in refined {
        if let Some(g) = groups.iter_mut().find(|(c, _)| (*c - z).norm() <= tol) {
            let m = g.1 as f64;
            g.0 = (g.0 * m + z) / (m + 1.0);
            g.1 += 1;
        } else {
            groups.push((z, 1));
        }
    }
    Ok(RootSet {
        roots: groups,
        deficiency,
        circle_tol,
    })
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// A rational function `numer/denom` that is analytic outside the closed
/// disk and vanishes at infinity: `deg numer < deg denom`, denominator monic
/// with all roots in the open disk.
#[derive(Debug, Clone)]
pub struct RationalFn {
    numer: Polynomial,
    denom: Polynomial,
    poles: RootSet,
}

impl RationalFn {
    pub fn new(numer: Polynomial, denom: Polynomial) -> Result<Self> {
        let denom = denom.trimmed(1e-14);
        let d = denom
            .exact_degree(0.0)
            .ok_or_else(|| Error::invalid("zero denominator"))?;
        if d == 0 {
            return Err(Error::invalid("denominator must have positive degree"));
        }
        let lead = denom.coeff(d);
        let denom = denom.scale(1.0 / lead);
        let numer = numer.scale(1.0 / lead);
        if numer.exact_degree(1e-13).is_some_and(|dn| dn >= d) {
            return Err(Error::invalid(
                "numerator degree must be below denominator degree",
            ));
        }
        let numer = Polynomial::new((0..d).map(|k| numer.coeff(k)).collect());
        let poles = roots(&denom)?;
        for &(r, _) in poles.roots() {
            if r.norm() >= 1.0 {
                return Err(Error::OutsideDisk { modulus: r.norm() });
            }
        }
        Ok(RationalFn {
            numer,
            denom,
            poles,
        })
    }

    /// Builds the function from its poles (simple) and a numerator.
    pub fn from_poles(poles: &[Complex64], numer: Polynomial) -> Result<Self> {
        RationalFn::new(numer, Polynomial::from_roots(poles))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.numer
    }

    pub fn denom(&self) -> &Polynomial {
        &self.denom
    }

    pub fn poles(&self) -> &RootSet {
        &self.poles
    }

    pub fn degree(&self) -> usize {
        self.denom.nominal_degree()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numer.eval(z) / self.denom.eval(z)
    }

    pub fn scale(&self, c: Complex64) -> RationalFn {
        RationalFn {
            numer: self.numer.scale(c),
            denom: self.denom.clone(),
            poles: self.poles.clone(),
        }
    }

    /// True when all poles are simple and pairwise well separated.
    pub fn has_simple_poles(&self) -> bool {
        self.poles.roots().iter().all(|&(_, m)| m == 1)
    }

    /// Pole/residue pairs, available when the poles are simple.
    pub fn residues(&self) -> Option<Vec<(Complex64, Complex64)>> {
        if !self.has_simple_poles() {
            return None;
        }
        let dq = self.denom.derivative();
        Some(
            self.poles
                .roots()
                .iter()
                .map(|&(p, _)| (p, self.numer.eval(p) / dq.eval(p)))
                .collect(),
        )
    }

    /// Coefficients `a_1..a_n` of the expansion `sum a_k z^{-k}`, by the
    /// exact linear recurrence `q f = p`.
    pub fn anti_coefficients(&self, n: usize) -> Vec<Complex64> {
        let d = self.denom.nominal_degree();
        let mut a = vec![Complex64::default(); n];
        // z^t coefficients of q f for t = d-1 .. 0 give a triangular system;
        // z^{-s} coefficients continue it as a recurrence
        for t in 0..n {
            // equation index t corresponds to the coefficient of z^{d-1-t}
            let rhs = if t < d {
                self.numer.coeff(d - 1 - t)
            } else {
                Complex64::default()
            };
            let mut acc = rhs;
            // q_m a_k with m + (d-1-t) ... collect known a_k, k < t+1
            for k in 0..t {
                // contribution q_{d-1-t+k+1} a_{k+1}
                let m = d as i64 - 1 - t as i64 + k as i64 + 1;
                if (0..=d as i64).contains(&m) {
                    acc -= self.denom.coeff(m as usize) * a[k];
                }
            }
            // leading term q_d a_{t+1}
            a[t] = acc; // denom is monic
        }
        a
    }

    /// Squared l2 norm on the circle, exact via residues when poles are
    /// simple.
    pub fn l2_norm_sqr(&self) -> f64 {
        if let Some(res) = self.residues() {
            let mut acc = Complex64::default();
            for &(pl, cl) in &res {
                for &(pm, cm) in &res {
                    acc += cl * cm.conj() / (1.0 - pl * pm.conj());
                }
            }
            acc.re.max(0.0)
        } else {
            // fall back on the coefficient tail; poles are strictly inside,
            // so the series decays geometrically
            let rho = self
                .poles
                .roots()
                .iter()
                .map(|&(p, _)| p.norm())
                .fold(0.0, f64::max);
            let mut n = 256usize;
            loop {
                let coeffs = self.anti_coefficients(n);
                let norm2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
                let tail = coeffs[n - 1].norm_sqr() * rho * rho / (1.0 - rho * rho).max(1e-12);
                if tail <= 1e-24 * norm2.max(f64::MIN_POSITIVE) || n >= 1 << 22 {
                    return norm2;
                }
                n *= 2;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Trigonometric polynomials and spectral factorization
// ---------------------------------------------------------------------------

/// A real-valued trigonometric polynomial `sum_{|k| <= n} t_k e^{ik theta}`
/// with `t_{-k} = conj(t_k)`, stored by its nonnegative coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    coeffs: Vec<Complex64>, // coeffs[k] = t_k, k >= 0; t_0 must be real
}

impl TrigPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty());
        assert!(
            coeffs[0].im.abs() <= 1e-12 * coeffs[0].norm().max(1.0),
            "t_0 must be real"
        );
        let mut coeffs = coeffs;
        coeffs[0] = c64(coeffs[0].re, 0.0);
        TrigPolynomial { coeffs }
    }

    /// `|p|^2` on the circle as a trigonometric polynomial.
    pub fn from_modulus_squared(p: &Polynomial) -> Self {
        let d = p.nominal_degree();
        let coeffs = (0..=d)
            .map(|k| {
                (0..=d - k)
                    .map(|j| p.coeff(j + k) * p.coeff(j).conj())
                    .sum::<Complex64>()
            })
            .collect();
        TrigPolynomial::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k.unsigned_abs() as usize;
        let c = self.coeffs.get(idx).copied().unwrap_or_default();
        if k >= 0 {
            c
        } else {
            c.conj()
        }
    }

    pub fn sub(&self, other: &TrigPolynomial) -> TrigPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        TrigPolynomial::new(
            (0..n as i64)
                .map(|k| self.coeff(k) - other.coeff(k))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> TrigPolynomial {
        TrigPolynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Real value at `e^{i theta}`.
    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.coeffs[0].re;
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            let w = Complex64::from_polar(1.0, k as f64 * theta);
            acc += 2.0 * (c * w).re;
        }
        acc
    }

    /// Mean over the circle, i.e. `t_0`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }
}

/// Spectral factorization: for `T >= 0` on the circle, returns the unique
/// `q` with no root in the open disk, `q(0) > 0`, and `|q|^2 = T` there.
///
/// Root-based: the `2n` roots of `z^n T(z)` come in reflection pairs across
/// the circle; the factor keeps one representative per pair (on-circle roots
/// have even multiplicity and are halved), and the constant is fixed from
/// the mean of `T`.
pub fn fejer_riesz(t: &TrigPolynomial) -> Result<Polynomial> {
    // effective degree
    let scale = t.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::invalid("cannot factor the zero polynomial"));
    }
    let m = t
        .coeffs
        .iter()
        .rposition(|c| c.norm() > 1e-13 * scale)
        .unwrap_or(0);

    // nonnegativity check on a dense grid, relative slack 1e-10
    let grid = (8 * (m + 1)).next_power_of_two().max(256);
    let mut min_val = f64::INFINITY;
    let mut max_val = 0.0f64;
    for j in 0..grid {
        let v = t.eval(2.0 * PI * j as f64 / grid as f64);
        min_val = min_val.min(v);
        max_val = max_val.max(v.abs());
    }
    if min_val < -1e-10 * max_val.max(1e-300) {
        return Err(Error::NotNonnegative { min: min_val });
    }

    if m == 0 {
        let c = t.mean();
        if c <= 0.0 {
            return Err(Error::NotNonnegative { min: c });
        }
        return Ok(Polynomial::constant(c64(c.sqrt(), 0.0)));
    }

    // roots of the lift z^m T(z)
    let lift = Polynomial::new((-(m as i64)..=m as i64).map(|k| t.coeff(k)).collect());
    let all_roots = roots(&lift)?.flat();
    if all_roots.len() != 2 * m {
        return Err(Error::UnpairedRoots);
    }

    // pair each root of modulus < 1 with the unmatched root closest to its
    // reflection; keep the outside-or-on-circle representative
    let mut used = vec![false; all_roots.len()];
    let mut reps: Vec<Complex64> = Vec::with_capacity(m);
    let mut inside_idx: Vec<usize> = (0..all_roots.len())
        .filter(|&i| all_roots[i].norm() < 1.0)
        .collect();
    // innermost first: their reflections are farthest out and least ambiguous
    inside_idx.sort_by(|&a, &b| all_roots[a].norm().total_cmp(&all_roots[b].norm()));
    for &i in &inside_idx {
        if used[i] {
            continue;
        }
        let lam = all_roots[i];
        let reflected = 1.0 / lam.conj();
        let mut best: Option<(usize, f64)> = None;
        for (j, &mu) in all_roots.iter().enumerate() {
            if used[j] || j == i {
                continue;
            }
            let d = (mu - reflected).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let (j, dist) = best.ok_or(Error::UnpairedRoots)?;
        let mu = all_roots[j];
        // wide acceptance for genuine circle roots, which split as z0 (1 +- delta)
        let near_circle = (lam.norm() - 1.0).abs() < 1e-4 && (mu.norm() - 1.0).abs() < 1e-4;
        if dist > PAIR_TOL * reflected.norm().max(1.0) && !near_circle {
            return Err(Error::UnpairedRoots);
        }
        used[i] = true;
        used[j] = true;
        if near_circle {
            // even-multiplicity circle root: snap the pair to the circle
            let dir = lam / lam.norm() + mu / mu.norm();
            reps.push(dir / dir.norm());
        } else if mu.norm() >= 1.0 {
            reps.push(mu);
        } else {
            reps.push(reflected);
        }
    }
    // leftover: roots with modulus >= 1 whose partners were inside have been
    // consumed; anything still unmatched breaks the pairing invariant
    let leftovers: Vec<Complex64> = (0..all_roots.len())
        .filter(|&i| !used[i])
        .map(|i| all_roots[i])
        .collect();
    for pair in leftovers.chunks(2) {
        // a pair of on/outside roots can only both remain if they are a
        // circle double root that drifted outward; snap it
        if pair.len() == 2
            && (pair[0].norm() - 1.0).abs() < 1e-4
            && (pair[1].norm() - 1.0).abs() < 1e-4
        {
            let dir = pair[0] / pair[0].norm() + pair[1] / pair[1].norm();
            reps.push(dir / dir.norm());
        } else {
            return Err(Error::UnpairedRoots);
        }
    }
    if reps.len() != m {
        return Err(Error::UnpairedRoots);
    }

    let h = Polynomial::from_roots(&reps);
    // mean of |q|^2 equals t_0
    let gamma = (t.mean().max(0.0)).sqrt() / h.norm();
    let mut q = h.scale(c64(gamma, 0.0));
    let q0 = q.coeff(0);
    if q0.norm() > 0.0 {
        q = q.scale(q0.conj() / q0.norm());
    }

    // roundtrip guard
    let check = TrigPolynomial::from_modulus_squared(&q);
    let mut worst = 0.0f64;
    for j in 0..grid {
        let th = 2.0 * PI * j as f64 / grid as f64;
        worst = worst.max((check.eval(th) - t.eval(th)).abs());
    }
    if worst > 1e-6 * max_val.max(1e-300) {
        return Err(Error::UnpairedRoots);
    }
    Ok(q)
}
