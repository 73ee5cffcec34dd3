//! Hankel operators with anti-analytic symbols: finite sections, Gramians in
//! the Malmquist-Walsh basis of a rational symbol, singular spectra, best
//! uniform meromorphic approximants, and operator (Nehari) norms.
//!
//! Two routes lead to the same spectrum. The Fourier route builds the `N x N`
//! section of the operator in the monomial basis from truncated coefficients;
//! that section is exact for the truncated symbol, whose Hankel operator has
//! rank at most `N`. The rational route expresses the operator on the
//! orthogonal complement of its kernel using the Malmquist-Walsh basis
//! attached to the poles, a Bezout identity for the denominator and its
//! reciprocal, and Euclidean division; the resulting Gramian is
//! `deg(q) x deg(q)` no matter how slowly the coefficients decay.

use crate::fourier::{fft, AntiAnalytic};
use crate::polynomial::{bezout, reciprocal, roots, Polynomial, RationalFn};
use crate::{c64, Complex64, Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Relative spacing under which consecutive singular values are treated as a
/// multiplicity group.
pub const MULT_TOL: f64 = 1e-6;

/// Dense eigendecomposition is used below this dimension; larger sections go
/// through block subspace iteration first.
const DENSE_LIMIT: usize = 700;

// ---------------------------------------------------------------------------
// Hankel sections
// ---------------------------------------------------------------------------

/// The `N x N` finite section with entries `a_{i+j+1}` (0-based `i, j`).
#[derive(Debug, Clone)]
pub struct HankelMatrix {
    coeffs: Vec<Complex64>, // a_1..a_N; entries beyond the stored range are 0
}

impl HankelMatrix {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs.get(i + j).copied().unwrap_or_default()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// `y = H x` by FFT correlation.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        debug_assert_eq!(x.len(), n);
        let len = (3 * n).next_power_of_two();
        let mut fa = vec![Complex64::default(); len];
        for (t, &a) in self.coeffs.iter().enumerate() {
            fa[t + 1] = a; // A[t] = a_t
        }
        let mut fx = vec![Complex64::default(); len];
        for (j, &v) in x.iter().enumerate() {
            fx[n - 1 - j] = v; // reversed
        }
        fft(&mut fa, false);
        fft(&mut fx, false);
        for (a, b) in fa.iter_mut().zip(&fx) {
            *a *= b;
        }
        fft(&mut fa, true);
        // y_i = conv[i + n]
        (0..n).map(|i| fa[i + n]).collect()
    }

    /// `y = conj(H) x`.
    fn apply_conj(&self, x: &[Complex64]) -> Vec<Complex64> {
        let conj_x: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();
        self.apply(&conj_x).iter().map(|v| v.conj()).collect()
    }
}

/// Finite Hankel section of the symbol; acting on monomial coordinates of a
/// polynomial `v` of degree `< N` it reproduces the coefficients of the
/// anti-analytic part of `f v` exactly.
pub fn hankel_matrix(f: &AntiAnalytic) -> HankelMatrix {
    assert!(!f.is_empty(), "symbol needs at least one coefficient");
    HankelMatrix {
        coeffs: f.coeffs().to_vec(),
    }
}

// ---------------------------------------------------------------------------
// Malmquist-Walsh basis
// ---------------------------------------------------------------------------

/// Orthonormal basis of `P_{N-1}/q~` attached to an ordered list of points in
/// the open disk: `e_j = u_j / q~`.
#[derive(Debug, Clone)]
pub struct MalmquistWalsh {
    zeros: Vec<Complex64>,
    q_tilde: Polynomial,
    numerators: Vec<Polynomial>,
}

impl MalmquistWalsh {
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.q_tilde
    }

    pub fn numerator(&self, j: usize) -> &Polynomial {
        &self.numerators[j]
    }

    pub fn eval(&self, j: usize, z: Complex64) -> Complex64 {
        self.numerators[j].eval(z) / self.q_tilde.eval(z)
    }
}

/// Sorts points in the disk by nondecreasing modulus, ties by argument.
pub fn sort_disk_points(zeros: &mut [Complex64]) {
    zeros.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.arg().total_cmp(&b.arg()))
    });
}

/// Builds the basis numerators `u_j` with
/// `e_j = (1-|z_j|^2)^{1/2}/(1 - conj(z_j) z) * prod_{k<j} (z-z_k)/(1-conj(z_k) z)`
/// put over the common denominator `q~ = prod_k (1 - conj(z_k) z)`.
pub fn malmquist_walsh(zeros: &[Complex64]) -> Result<MalmquistWalsh> {
    for z in zeros {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: z.norm() });
        }
    }
    let n = zeros.len();
    let mut q_tilde = Polynomial::one();
    for &z in zeros {
        q_tilde = q_tilde.mul(&Polynomial::new(vec![c64(1.0, 0.0), -z.conj()]));
    }
    // prefix[j] = prod_{k<j} (z - z_k), suffix[j] = prod_{k>j} (1 - conj(z_k) z)
    let mut numerators = Vec::with_capacity(n);
    let mut prefix = Polynomial::one();
    for j in 0..n {
        let mut suffix = Polynomial::one();
        for &z in &zeros[j + 1..] {
            suffix = suffix.mul(&Polynomial::new(vec![c64(1.0, 0.0), -z.conj()]));
        }
        let scale = (1.0 - zeros[j].norm_sqr()).sqrt();
        numerators.push(prefix.mul(&suffix).scale(c64(scale, 0.0)));
        prefix = prefix.mul(&Polynomial::new(vec![-zeros[j], c64(1.0, 0.0)]));
    }
    Ok(MalmquistWalsh {
        zeros: zeros.to_vec(),
        q_tilde,
        numerators,
    })
}

// ---------------------------------------------------------------------------
// Gramian of a rational symbol
// ---------------------------------------------------------------------------

/// The Hermitian matrix `<Gamma e_i, Gamma e_j>` of a rational symbol in its
/// Malmquist-Walsh basis, together with that basis.
#[derive(Debug, Clone)]
pub struct Gramian {
    matrix: DMatrix<Complex64>,
    basis: MalmquistWalsh,
}

impl Gramian {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn basis(&self) -> &MalmquistWalsh {
        &self.basis
    }
}

/// Builds the Gramian of `Gamma_{p/q}` on the complement of its kernel.
///
/// `Gamma(u/q~) = R_q(p u a)/q` with the Bezout pair `a q~ + b q = 1`, and
/// inner products of `u/q, v/q` reduce to `<Q_q(z^N u a), v>` between
/// polynomial coefficient vectors.
pub fn gramian_rational(p: &Polynomial, q: &Polynomial) -> Result<Gramian> {
    let f = RationalFn::new(p.clone(), q.clone())?;
    let n = f.degree();
    // coprimality: no numerator root within 1e-8 of a pole
    if let Ok(numer_roots) = roots(f.numer()) {
        for r in numer_roots.flat() {
            for &(pole, _) in f.poles().roots() {
                if (r - pole).norm() <= 1e-8 * (1.0 + pole.norm()) {
                    return Err(Error::NotCoprime {
                        resultant: crate::polynomial::relative_resultant(f.numer(), f.denom()),
                    });
                }
            }
        }
    }
    let mut zeros = f.poles().flat();
    sort_disk_points(&mut zeros);
    let basis = malmquist_walsh(&zeros)?;
    let q_monic = f.denom().clone();
    let q_tilde = reciprocal(&q_monic, n);
    let (a, _b) = bezout(&q_tilde, &q_monic)?;

    // images g_j = R_q(p u_j a)
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        let (_, r) = euclid(&f.numer().mul(basis.numerator(j)).mul(&a), &q_monic)?;
        images.push(r);
    }
    // t_j = Q_q(z^N g_j a)
    let mut quotients = Vec::with_capacity(n);
    for g in &images {
        let (t, _) = euclid(&g.shift(n).mul(&a), &q_monic)?;
        quotients.push(t);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // <Gamma e_j, Gamma e_i> = <Q_q(z^N g_j a), g_i>
            let mut acc = Complex64::default();
            for k in 0..n {
                acc += quotients[j].coeff(k) * images[i].coeff(k).conj();
            }
            m[(i, j)] = acc;
        }
    }
    // symmetrize away roundoff
    let m = (m.clone() + m.adjoint()) * c64(0.5, 0.0);
    Ok(Gramian { matrix: m, basis })
}

fn euclid(p: &Polynomial, q: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    crate::polynomial::euclid_divide(p, q)
}

// ---------------------------------------------------------------------------
// Singular spectra
// ---------------------------------------------------------------------------

/// Basis in which singular-vector coordinates are expressed.
#[derive(Debug, Clone)]
pub enum SpectrumBasis {
    /// Monomial coordinates: `v = sum_k w_k z^k`, denominator 1.
    Monomial,
    /// Malmquist-Walsh coordinates over the attached denominator.
    Malmquist(MalmquistWalsh),
}

/// Ordered singular values with orthonormal singular vectors in the
/// construction basis.
#[derive(Debug, Clone)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    vectors: DMatrix<Complex64>, // column k = coordinates of v_k
    basis: SpectrumBasis,
    residual: f64,
}

impl SingularSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    pub fn basis(&self) -> &SpectrumBasis {
        &self.basis
    }

    /// Worst residual `||G v - s^2 v||` over the checked leading pairs,
    /// relative to `s_0^2`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Numerator polynomial of `v_k` over [`Self::denominator`].
    pub fn vector_numerator(&self, k: usize) -> Polynomial {
        let col = self.vectors.column(k);
        match &self.basis {
            SpectrumBasis::Monomial => Polynomial::new(col.iter().copied().collect()),
            SpectrumBasis::Malmquist(mw) => {
                let mut acc = Polynomial::zero();
                for (j, w) in col.iter().enumerate() {
                    acc = acc.add(&mw.numerator(j).scale(*w));
                }
                acc
            }
        }
    }

    pub fn denominator(&self) -> Polynomial {
        match &self.basis {
            SpectrumBasis::Monomial => Polynomial::one(),
            SpectrumBasis::Malmquist(mw) => mw.denominator().clone(),
        }
    }

    /// Max modulus of `v_k` over an even circle grid.
    pub fn sup_norm(&self, k: usize, samples: usize) -> f64 {
        let num = self.vector_numerator(k);
        let den = self.denominator();
        let mut best = 0.0f64;
        for j in 0..samples {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / samples as f64);
            best = best.max((num.eval(z) / den.eval(z)).norm());
        }
        best
    }

    /// Number of singular values above `rel` times the largest.
    pub fn rank(&self, rel: f64) -> usize {
        if self.values.is_empty() {
            return 0;
        }
        let cut = rel * self.values[0];
        self.values.iter().take_while(|&&s| s > cut).count()
    }

    /// Partition of indices into groups of relatively equal values.
    pub fn multiplicity_groups(&self, tol: f64) -> Vec<std::ops::Range<usize>> {
        let mut groups = Vec::new();
        let mut start = 0usize;
        for k in 1..=self.values.len() {
            let split = k == self.values.len() || {
                let prev = self.values[k - 1];
                let cur = self.values[k];
                (prev - cur).abs() > tol * prev.max(1e-300)
            };
            if split {
                groups.push(start..k);
                start = k;
            }
        }
        groups
    }
}

/// Sorted singular values and right singular vectors of a general complex
/// matrix. For a Hermitian positive-semidefinite input the values are the
/// eigenvalues and the vectors are eigenvectors.
fn sorted_svd(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = m.ncols();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let svd = nalgebra::SVD::try_new(m.clone(), false, true, 1e-14, 0)
        .ok_or_else(|| Error::Eigen("SVD did not converge".into()))?;
    let vt = svd
        .v_t
        .ok_or_else(|| Error::Eigen("SVD produced no right factor".into()))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values: Vec<f64> = idx
        .iter()
        .map(|&i| svd.singular_values[i].max(0.0))
        .collect();
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        vectors.set_column(k, &vt.row(i).adjoint());
    }
    Ok((values, vectors))
}

fn spectrum_from_gramian(
    gram: &DMatrix<Complex64>,
    basis: SpectrumBasis,
) -> Result<SingularSpectrum> {
    let (lambda, vectors) = sorted_svd(gram)?;
    let values: Vec<f64> = lambda.iter().map(|l| l.sqrt()).collect();
    let top = lambda.first().copied().unwrap_or(0.0).max(1e-300);
    let checked = lambda.len().min(40);
    let mut residual = 0.0f64;
    for k in 0..checked {
        let v = vectors.column(k);
        let r = gram * v - v * c64(lambda[k], 0.0);
        residual = residual.max(r.norm() / top);
    }
    if residual > 1e-9 {
        return Err(Error::Eigen(format!(
            "eigen residual {residual:.3e} exceeds 1e-9"
        )));
    }
    Ok(SingularSpectrum {
        values,
        vectors,
        basis,
        residual,
    })
}

/// Full spectrum of a rational-symbol Gramian (Malmquist-Walsh route).
pub fn singular_spectrum(gram: &Gramian) -> Result<SingularSpectrum> {
    spectrum_from_gramian(&gram.matrix, SpectrumBasis::Malmquist(gram.basis.clone()))
}

/// Full spectrum of a Hankel section (Fourier route): SVD of the section,
/// singular vectors in monomial coordinates.
pub fn singular_spectrum_hankel(h: &HankelMatrix) -> Result<SingularSpectrum> {
    let dense = h.to_dense();
    let (values, vectors) = sorted_svd(&dense)?;
    // residual of Gamma*Gamma v = s^2 v through the fast products
    let top = values.first().copied().unwrap_or(0.0).powi(2).max(1e-300);
    let mut residual = 0.0f64;
    for k in 0..values.len().min(40) {
        let v: Vec<Complex64> = vectors.column(k).iter().copied().collect();
        let gv = h.apply_conj(&h.apply(&v));
        let s2 = values[k] * values[k];
        let r2: f64 = gv
            .iter()
            .zip(&v)
            .map(|(g, x)| (g - x * s2).norm_sqr())
            .sum();
        residual = residual.max(r2.sqrt() / top);
    }
    if residual > 1e-9 {
        return Err(Error::Eigen(format!(
            "spectrum residual {residual:.3e} exceeds 1e-9"
        )));
    }
    Ok(SingularSpectrum {
        values,
        vectors,
        basis: SpectrumBasis::Monomial,
        residual,
    })
}

/// Leading `k` singular pairs of a Hankel section. Uses block subspace
/// iteration with FFT-based products for large sections, falling back to the
/// dense route when iteration stalls.
pub fn top_spectrum_hankel(h: &HankelMatrix, k: usize) -> Result<SingularSpectrum> {
    let n = h.dim();
    let k = k.min(n);
    if n <= DENSE_LIMIT {
        return singular_spectrum_hankel(h);
    }
    if let Some(spec) = subspace_iteration(h, k) {
        return Ok(spec);
    }
    singular_spectrum_hankel(h)
}

/// Largest singular value of a Hankel section: Lanczos with full
/// reorthogonalization on `H* H`, which handles the slowly decaying spectra
/// where plain power iteration crawls. Falls back to the dense route only
/// for small sections or on stall.
pub fn top_singular_value_hankel(h: &HankelMatrix) -> Result<f64> {
    let n = h.dim();
    if n <= 128 {
        let spec = singular_spectrum_hankel(h)?;
        return Ok(spec.value(0));
    }
    let apply = |x: &[Complex64]| h.apply_conj(&h.apply(x));
    if let Some(lambda) = lanczos_top(apply, n, 1e-11, 420) {
        return Ok(lambda.max(0.0).sqrt());
    }
    let spec = singular_spectrum_hankel(h)?;
    Ok(spec.value(0))
}

/// Lanczos iteration for the top eigenvalue of a Hermitian PSD operator,
/// with full reorthogonalization. Returns the top Ritz value once its
/// residual certificate drops below `tol` relative.
fn lanczos_top(
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Option<f64> {
    let mut state = 0x243F6A8885A308D3u64;
    let mut rnd = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) as f64) / (u32::MAX as f64) - 0.5
    };
    let mut q: Vec<Vec<Complex64>> = Vec::new();
    let mut v: Vec<Complex64> = (0..n).map(|_| c64(rnd(), rnd())).collect();
    normalize(&mut v);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let max_iter = max_iter.min(n);
    for iter in 0..max_iter {
        q.push(v.clone());
        let mut w = apply(&v);
        let a: f64 = w.iter().zip(&v).map(|(wi, vi)| (wi * vi.conj()).re).sum();
        alpha.push(a);
        // full reorthogonalization, two passes
        for _ in 0..2 {
            for qi in &q {
                let proj: Complex64 = w.iter().zip(qi).map(|(wi, x)| wi * x.conj()).sum();
                for (wi, x) in w.iter_mut().zip(qi) {
                    *wi -= proj * x;
                }
            }
        }
        let b: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        // Ritz check every few steps once the subspace has some size
        if iter >= 4 && (iter % 4 == 0 || b < 1e-14) {
            if let Some((theta, last)) = top_ritz(&alpha, &beta) {
                let residual = b * last.abs();
                if residual <= tol * theta.max(1e-300) {
                    return Some(theta);
                }
            }
        }
        if b < 1e-14 {
            // invariant subspace found
            return top_ritz(&alpha, &beta).map(|(theta, _)| theta);
        }
        beta.push(b);
        for x in w.iter_mut() {
            *x /= b;
        }
        v = w;
    }
    None
}

/// Top eigenvalue of the Lanczos tridiagonal and the last component of its
/// eigenvector (for the residual certificate).
fn top_ritz(alpha: &[f64], beta: &[f64]) -> Option<(f64, f64)> {
    let k = alpha.len();
    if k == 0 {
        return None;
    }
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let se = nalgebra::SymmetricEigen::new(t);
    let mut best = 0usize;
    for i in 1..k {
        if se.eigenvalues[i] > se.eigenvalues[best] {
            best = i;
        }
    }
    Some((se.eigenvalues[best], se.eigenvectors[(k - 1, best)]))
}

fn normalize(v: &mut [Complex64]) {
    let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

fn orthonormalize(x: &mut DMatrix<Complex64>) {
    let (n, b) = (x.nrows(), x.ncols());
    for j in 0..b {
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex64 = (0..n).map(|r| x[(r, j)] * x[(r, i)].conj()).sum();
                for r in 0..n {
                    let xi = x[(r, i)];
                    x[(r, j)] -= proj * xi;
                }
            }
        }
        let norm: f64 = (0..n).map(|r| x[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for r in 0..n {
                x[(r, j)] /= norm;
            }
        }
    }
}

fn subspace_iteration(h: &HankelMatrix, k: usize) -> Option<SingularSpectrum> {
    let n = h.dim();
    // a generous block converges in a handful of sweeps whenever the symbol
    // has modest numerical rank (every rational symbol does)
    let b = (k + 16).min(n);
    // deterministic quasi-random start
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut rnd = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) as f64) / (u32::MAX as f64) - 0.5
    };
    let mut x = DMatrix::<Complex64>::from_fn(n, b, |_, _| c64(rnd(), rnd()));
    orthonormalize(&mut x);
    let gram_apply = |x: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        let mut y = DMatrix::<Complex64>::zeros(n, b);
        for j in 0..b {
            let col: Vec<Complex64> = x.column(j).iter().copied().collect();
            let hx = h.apply(&col);
            let ghx = h.apply_conj(&hx);
            for i in 0..n {
                y[(i, j)] = ghx[i];
            }
        }
        y
    };
    for _iter in 0..300 {
        let y = gram_apply(&x);
        // Rayleigh-Ritz on the current block
        let small = x.adjoint() * &y;
        let small = (small.clone() + small.adjoint()) * c64(0.5, 0.0);
        let (lam, u) = sorted_svd(&small).ok()?;
        let xr = &x * &u;
        let yr = &y * &u;
        let top = lam.first().copied().unwrap_or(0.0).max(1e-300);
        let mut converged = true;
        for j in 0..k {
            let r = yr.column(j) - xr.column(j) * c64(lam[j], 0.0);
            if r.norm() > 1e-10 * top {
                converged = false;
                break;
            }
        }
        if converged {
            let values: Vec<f64> = lam.iter().take(k).map(|l| l.max(0.0).sqrt()).collect();
            let mut vectors = DMatrix::<Complex64>::zeros(n, k);
            for j in 0..k {
                vectors.set_column(j, &xr.column(j));
            }
            return Some(SingularSpectrum {
                values,
                vectors,
                basis: SpectrumBasis::Monomial,
                residual: 1e-10,
            });
        }
        x = y;
        orthonormalize(&mut x);
    }
    None
}

// ---------------------------------------------------------------------------
// Nehari norm
// ---------------------------------------------------------------------------

/// Operator norm of the Hankel operator with the given rational symbol
/// (largest singular value), i.e. the distance from the conjugate symbol to
/// bounded analytic functions.
pub fn nehari_norm(symbol: &RationalFn) -> Result<f64> {
    // a pure power denominator makes the Malmquist-Walsh basis monomial and
    // the Gramian a plain Hankel product; go through the section directly
    let d = symbol.degree();
    let is_power = (0..d).all(|k| symbol.denom().coeff(k).norm() == 0.0);
    if is_power {
        let coeffs: Vec<Complex64> = (0..d).map(|k| symbol.numer().coeff(d - 1 - k)).collect();
        let f = AntiAnalytic::new(coeffs, 0.0);
        if f.l2_norm() == 0.0 {
            return Ok(0.0);
        }
        let h = hankel_matrix(&f);
        return top_singular_value_hankel(&h);
    }
    let gram = gramian_rational(symbol.numer(), symbol.denom())?;
    let spec = singular_spectrum(&gram)?;
    Ok(spec.value(0))
}

/// Nehari norm of `v q~ / q` where `v` is the `k`-th singular vector of a
/// spectrum attached to the denominator `q` (the quotient-norm data of the
/// lower bounds). For the monomial basis, `q = z^N`.
pub fn quotient_norm(spec: &SingularSpectrum, k: usize) -> Result<f64> {
    let v = spec.vector_numerator(k);
    match spec.basis() {
        SpectrumBasis::Monomial => {
            let n = spec.vectors().nrows();
            // symbol v/z^N: anti-analytic coefficients are v reversed
            let coeffs: Vec<Complex64> = (0..n).map(|i| v.coeff(n - 1 - i)).collect();
            let f = AntiAnalytic::new(coeffs, 0.0);
            if f.l2_norm() == 0.0 {
                return Ok(0.0);
            }
            let h = hankel_matrix(&f);
            top_singular_value_hankel(&h)
        }
        SpectrumBasis::Malmquist(mw) => {
            // the symbol is v q~/q = V/q; cancel the poles the numerator
            // kills before handing the fraction to the Gramian machinery
            let mut v = v;
            let mut kept: Vec<Complex64> = Vec::new();
            for &z in mw.zeros() {
                let scale = v.norm().max(1e-300);
                if v.eval(z).norm() <= 1e-9 * scale {
                    v = v.deflate(z);
                } else {
                    kept.push(z);
                }
            }
            if kept.is_empty() {
                // fully cancelled: the symbol is analytic, the operator zero
                return Ok(0.0);
            }
            let q = Polynomial::from_roots(&kept);
            let (_, r) = euclid(&v, &q)?;
            if r.norm() <= 1e-14 * v.norm().max(1e-300) {
                return Ok(0.0);
            }
            let sym = RationalFn::new(r, q)?;
            nehari_norm(&sym)
        }
    }
}

// ---------------------------------------------------------------------------
// AAK approximant
// ---------------------------------------------------------------------------

/// Best uniform approximant with at most `n` poles, assembled from a
/// singular vector: `g_n = P_+(f v_n)/v_n`, poles at the disk zeros of `v_n`.
#[derive(Debug, Clone)]
pub struct MeromorphicApproximant {
    /// The level `s_n`: modulus of `f - g_n` a.e. on the circle.
    pub level: f64,
    /// Poles of `g_n` (disk zeros of the singular vector).
    pub poles: Vec<Complex64>,
    /// More disk zeros than `n` signals a degenerate / multiple singular
    /// value; reported, never repaired silently.
    pub degenerate: bool,
    /// Max deviation of `|f - g_n|` from `s_n` over the sample grid,
    /// relative to `s_n`.
    pub ripple: f64,
    /// Analytic part of `g_n` as circle coefficients.
    pub analytic: crate::fourier::FourierSeries,
    /// Anti-analytic part of `g_n` in pole/residue form; empty when the
    /// level is degenerate (residues are then ill-defined).
    pub anti: Vec<(Complex64, Complex64)>,
}

/// Builds the degree-`n` AAK approximant data from a spectrum of `f`.
///
/// The error function is evaluated as `Gamma_f(v_n)/v_n` on a circle grid;
/// its modulus should be constant at `s_n`.
pub fn aak_approximant(
    f: &AntiAnalytic,
    spec: &SingularSpectrum,
    n: usize,
) -> Result<MeromorphicApproximant> {
    if n >= spec.len() {
        return Err(Error::invalid(format!(
            "degree {n} needs at least {} singular pairs, spectrum has {}",
            n + 1,
            spec.len()
        )));
    }
    let level = spec.value(n);
    let num = spec.vector_numerator(n).trimmed(1e-13);
    let den = spec.denominator();

    // poles: disk zeros of the singular vector
    let mut poles = roots(&num)?.inside();
    sort_disk_points(&mut poles);
    let degenerate = poles.len() > n;

    // error function on a circle grid: Gamma_f(v_n)/v_n with
    // Gamma_f(v_n) = P_-(f * num)/den computed by exact convolution
    let grid = (4 * (f.len() + num.nominal_degree() + 2))
        .next_power_of_two()
        .min(1 << 14);
    let fv_neg = anti_part_of_product(f, &num);
    let mut ripple = 0.0f64;
    let mut g_samples = vec![Complex64::default(); grid];
    let mut fv_samples = vec![Complex64::default(); grid];
    for (j, (g_slot, fv_slot)) in g_samples.iter_mut().zip(fv_samples.iter_mut()).enumerate() {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64);
        let fz = eval_anti(f.coeffs(), z);
        let vz = num.eval(z) / den.eval(z);
        *fv_slot = fz * vz;
        if vz.norm() < 1e-13 {
            *g_slot = fz;
            continue;
        }
        let gz = eval_anti(&fv_neg, z) / den.eval(z);
        let e = gz / vz;
        *g_slot = fz - e;
        if level > 0.0 {
            ripple = ripple.max((e.norm() - level).abs() / level);
        }
    }

    // split g_n: analytic circle coefficients from its samples, residues of
    // the anti-analytic part from the Taylor coefficients of P_+(f v)
    fft(&mut g_samples, false);
    let scale = 1.0 / grid as f64;
    let order = f.len().min(grid / 2 - 1);
    let analytic_coeffs: Vec<Complex64> = (0..=order).map(|k| g_samples[k] * scale).collect();
    let analytic = crate::fourier::FourierSeries::from_parts(&[], &analytic_coeffs);
    let mut anti = Vec::new();
    if !degenerate {
        fft(&mut fv_samples, false);
        let taylor: Vec<Complex64> = (0..grid / 2).map(|k| fv_samples[k] * scale).collect();
        let num_d = num.derivative();
        let den_d = den.derivative();
        for &pole in &poles {
            let mut pfv = Complex64::default();
            for &t in taylor.iter().rev() {
                pfv = pfv * pole + t;
            }
            // v = num/den, v' = (num' den - num den')/den^2
            let dv = (num_d.eval(pole) * den.eval(pole) - num.eval(pole) * den_d.eval(pole))
                / den.eval(pole).powu(2);
            if dv.norm() > 0.0 {
                anti.push((pole, pfv / dv));
            }
        }
    }
    Ok(MeromorphicApproximant {
        level,
        poles,
        degenerate,
        ripple,
        analytic,
        anti,
    })
}

/// Negative-index coefficients of `f * v` for a polynomial `v`:
/// `(f v)_{-m} = sum_j a_{m+j} v_j`.
fn anti_part_of_product(f: &AntiAnalytic, v: &Polynomial) -> Vec<Complex64> {
    let n = f.len();
    (1..=n)
        .map(|m| {
            let mut acc = Complex64::default();
            for (j, &vj) in v.coeffs().iter().enumerate() {
                if m + j <= n {
                    acc += f.coeff(m + j) * vj;
                } else {
                    break;
                }
            }
            acc
        })
        .collect()
}

fn eval_anti(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let w = 1.0 / z;
    let mut acc = Complex64::default();
    for &a in coeffs.iter().rev() {
        acc = (acc + a) * w;
    }
    acc
}
