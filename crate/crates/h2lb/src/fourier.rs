//! Functions on the unit circle as truncated Fourier series: the analytic /
//! anti-analytic decomposition, the check involution, coefficient extraction
//! from point samples, and circle sampling.
//!
//! A [`FourierSeries`] stores coefficients densely over `[-order, order]`.
//! An [`AntiAnalytic`] holds only the strictly negative part `a_1..a_N`
//! (`a_k` multiplies `z^{-k}`), which is the datum every bound pipeline
//! consumes, together with a bound on the l2 mass of whatever was discarded
//! to produce it.

use crate::{c64, Complex64, Error, Result};
use std::f64::consts::PI;

/// Hard ceiling for sample doubling in [`truncate_to_bits`].
pub const MAX_SAMPLES: usize = 1 << 20;

/// Default accuracy target for coefficient extraction, in bits.
pub const DEFAULT_BITS: u32 = 40;

/// Default circle sample count for sup-norm estimation.
pub const DEFAULT_SUP_SAMPLES: usize = 8000;

// ---------------------------------------------------------------------------
// FFT
// ---------------------------------------------------------------------------

/// In-place radix-2 FFT. `inverse` applies the conjugate transform and the
/// 1/M scaling, so `fft(fft(x, false), true) == x`.
pub fn fft(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * PI / len as f64;
        let wlen = Complex64::from_polar(1.0, ang);
        let mut i = 0;
        while i < n {
            let mut w = c64(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[i + k];
                let v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wlen;
            }
            i += len;
        }
        len <<= 1;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for x in buf.iter_mut() {
            *x *= scale;
        }
    }
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// A truncated Fourier series `sum_{|k| <= order} a_k e^{ik theta}`,
/// stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    coeffs: Vec<Complex64>, // index i holds the coefficient of e^{i(i-order)theta}
    order: usize,
}

impl FourierSeries {
    pub fn zero(order: usize) -> Self {
        FourierSeries {
            coeffs: vec![Complex64::default(); 2 * order + 1],
            order,
        }
    }

    /// Builds a series from `neg[k-1] = a_{-k}` and `nonneg[k] = a_k`.
    pub fn from_parts(neg: &[Complex64], nonneg: &[Complex64]) -> Self {
        let order = neg.len().max(nonneg.len().saturating_sub(1)).max(1);
        let mut s = FourierSeries::zero(order);
        for (k, &a) in neg.iter().enumerate() {
            s.set(-(k as i64) - 1, a);
        }
        for (k, &a) in nonneg.iter().enumerate() {
            s.set(k as i64, a);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `e^{ik theta}`; zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.order as i64;
        if k < -n || k > n {
            Complex64::default()
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    pub fn set(&mut self, k: i64, value: Complex64) {
        let n = self.order as i64;
        assert!(k >= -n && k <= n, "index {k} outside [-{n}, {n}]");
        self.coeffs[(k + n) as usize] = value;
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Pointwise evaluation on the circle (`|z| = 1` is assumed, so
    /// `z^{-1} = conj(z)`).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = self.order as i64;
        // Horner for the analytic part, Horner in conj(z) for the rest.
        let mut pos = Complex64::default();
        for k in (0..=n).rev() {
            pos = pos * z + self.coeff(k);
        }
        let zb = z.conj();
        let mut negv = Complex64::default();
        for k in (1..=n).rev() {
            negv = (negv + self.coeff(-k)) * zb;
        }
        pos + negv
    }

    /// Samples the series at the `m`-th roots of unity.
    pub fn sample(&self, m: usize) -> CircleSamples {
        assert!(m.is_power_of_two(), "sample count must be a power of two");
        assert!(
            m >= 2 * self.order + 2,
            "need m >= 2*order+2 for an alias-free grid"
        );
        // Place index k at bin k mod m and invert.
        let mut buf = vec![Complex64::default(); m];
        let n = self.order as i64;
        for k in -n..=n {
            let bin = k.rem_euclid(m as i64) as usize;
            buf[bin] += self.coeff(k);
        }
        fft(&mut buf, true);
        for x in buf.iter_mut() {
            *x *= m as f64;
        }
        CircleSamples { values: buf }
    }

    /// Inner product `<self, other>` on the circle (conjugate-linear in
    /// `other`).
    pub fn inner(&self, other: &FourierSeries) -> Complex64 {
        let n = self.order.max(other.order) as i64;
        let mut acc = Complex64::default();
        for k in -n..=n {
            acc += self.coeff(k) * other.coeff(k).conj();
        }
        acc
    }
}

/// A function analytic outside the closed disk and vanishing at infinity,
/// stored as `coeffs[k-1] = a_k`, the coefficient of `z^{-k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiAnalytic {
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl AntiAnalytic {
    pub fn new(coeffs: Vec<Complex64>, tail_bound: f64) -> Self {
        AntiAnalytic { coeffs, tail_bound }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a_k` for `k >= 1`.
    pub fn coeff(&self, k: usize) -> Complex64 {
        debug_assert!(k >= 1);
        self.coeffs.get(k - 1).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// l2 mass of the coefficients that were discarded during extraction.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = 1.0 / z;
        let mut acc = Complex64::default();
        for &a in self.coeffs.iter().rev() {
            acc = (acc + a) * w;
        }
        acc
    }

    pub fn scale(&self, c: Complex64) -> AntiAnalytic {
        AntiAnalytic {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
            tail_bound: self.tail_bound * c.norm(),
        }
    }

    pub fn to_series(&self) -> FourierSeries {
        FourierSeries::from_parts(&self.coeffs, &[])
    }
}

/// Values of a function at the `m`-th roots of unity, `m` a power of two.
#[derive(Debug, Clone)]
pub struct CircleSamples {
    values: Vec<Complex64>,
}

impl CircleSamples {
    pub fn from_fn(m: usize, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        assert!(m.is_power_of_two());
        let values = (0..m)
            .map(|j| f(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)))
            .collect();
        CircleSamples { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Aliased Fourier coefficients: bin `m` receives `sum_{k = m mod M} a_k`.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.values.clone();
        fft(&mut buf, false);
        let scale = 1.0 / buf.len() as f64;
        for x in buf.iter_mut() {
            *x *= scale;
        }
        buf
    }

    /// Recovers a series of the given order; requires `len >= 2*order+2`.
    pub fn to_series(&self, order: usize) -> FourierSeries {
        let m = self.values.len();
        assert!(m >= 2 * order + 2);
        let spec = self.spectrum();
        let mut s = FourierSeries::zero(order);
        for k in 0..=order as i64 {
            s.set(k, spec[k as usize]);
        }
        for k in 1..=order as i64 {
            s.set(-k, spec[m - k as usize]);
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Extracts the coefficients `a_1..a_N` of an anti-analytic function from
/// point samples, doubling the grid until the relative l2 energy of the
/// discarded half of the spectrum drops below `2^-bits`.
///
/// The caller guarantees the sampler is analytic outside the closed disk and
/// vanishes at infinity.
pub fn truncate_to_bits(
    sampler: impl Fn(Complex64) -> Complex64,
    bits: u32,
) -> Result<AntiAnalytic> {
    truncate_to_bits_capped(sampler, bits, MAX_SAMPLES)
}

/// Same as [`truncate_to_bits`] with an explicit sample ceiling.
pub fn truncate_to_bits_capped(
    sampler: impl Fn(Complex64) -> Complex64,
    bits: u32,
    max_samples: usize,
) -> Result<AntiAnalytic> {
    assert!(bits >= 8, "bits must be at least 8");
    let target = 2f64.powi(-(bits as i32));
    let mut m = 128usize;
    loop {
        let samples = CircleSamples::from_fn(m, &sampler);
        let spec = samples.spectrum();
        // a_k sits at bin m - k; the tail half k in (m/2, m] occupies bins
        // [0, m/2).
        let total: f64 = spec.iter().map(|c| c.norm_sqr()).sum();
        let tail: f64 = spec[..m / 2].iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            return Ok(AntiAnalytic::new(Vec::new(), 0.0));
        }
        let norm = total.sqrt();
        if tail.sqrt() <= 0.5 * target * norm {
            // keep the alias-free half a_1..a_{m/2}, dropping only trailing
            // machine noise
            let mut coeffs: Vec<Complex64> = (1..=m / 2).map(|k| spec[m - k]).collect();
            let mut discarded = tail;
            let floor = 1e-15 * norm;
            while coeffs.len() > 1 {
                let last = coeffs.last().unwrap();
                if last.norm() > floor {
                    break;
                }
                discarded += last.norm_sqr();
                coeffs.pop();
            }
            return Ok(AntiAnalytic::new(coeffs, discarded.sqrt()));
        }
        if m >= max_samples {
            return Err(Error::NoDecay {
                tail: tail.sqrt() / norm,
                samples: m,
            });
        }
        m *= 2;
    }
}

/// Splits a series into its analytic part (indices >= 0) and anti-analytic
/// part (indices < 0). The squared norms of the parts sum to the input's.
pub fn riesz_project(s: &FourierSeries) -> (FourierSeries, AntiAnalytic) {
    let n = s.order();
    let mut analytic = FourierSeries::zero(n);
    for k in 0..=n as i64 {
        analytic.set(k, s.coeff(k));
    }
    let neg: Vec<Complex64> = (1..=n as i64).map(|k| s.coeff(-k)).collect();
    (analytic, AntiAnalytic::new(neg, 0.0))
}

/// The involution `f(z) -> z^{-1} conj(f(1/conj(z)))`: coefficient `a_k`
/// moves to `conj(a_k)` at index `-k-1`. Preserves the l2 norm and swaps the
/// analytic and anti-analytic halves.
pub fn check_transform(s: &FourierSeries) -> FourierSeries {
    let n = s.order();
    let mut out = FourierSeries::zero(n + 1);
    for k in -(n as i64)..=n as i64 {
        out.set(-k - 1, s.coeff(k).conj());
    }
    out
}

/// Reduces the degree-`n` analytic approximation datum to its anti-analytic
/// equivalent `conj(f(1/conj(z))) - conj(f(0))`, i.e. `a_k = conj(c_k)` for
/// `k >= 1`. The approximation errors of the two problems coincide.
pub fn reduce_analytic(f: &FourierSeries) -> Result<AntiAnalytic> {
    let n = f.order() as i64;
    let neg_mass: f64 = (1..=n).map(|k| f.coeff(-k).norm_sqr()).sum();
    if neg_mass > 1e-24 * f.l2_norm().powi(2).max(f64::MIN_POSITIVE) {
        return Err(Error::invalid(
            "reduce_analytic expects a purely analytic series",
        ));
    }
    let coeffs: Vec<Complex64> = (1..=n).map(|k| f.coeff(k).conj()).collect();
    Ok(AntiAnalytic::new(coeffs, 0.0))
}

/// Max modulus of the series over `samples` evenly spaced circle points.
/// Never exceeds the true sup norm.
pub fn sup_norm_sample(s: &FourierSeries, samples: usize) -> f64 {
    assert!(
        samples >= 2 * s.order().max(1),
        "need at least 2*order sample points"
    );
    let mut best = 0.0f64;
    for j in 0..samples {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / samples as f64);
        best = best.max(s.eval(z).norm());
    }
    best
}
