//! Function specifications: the JSON input format, the builtin example
//! functions, and the [`Symbol`] type every pipeline consumes.

use crate::fourier::{truncate_to_bits, AntiAnalytic};
use crate::polynomial::{reciprocal, Polynomial, RationalFn};
use crate::{c64, Complex64, Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Deserialize;

/// A function analytic outside the closed disk, vanishing at infinity,
/// in one of the two representations the pipelines understand.
#[derive(Debug, Clone)]
pub enum Symbol {
    /// Truncated coefficient sequence.
    Series(AntiAnalytic),
    /// Exact rational data with simple poles in the open disk.
    Rational(RationalFn),
}

impl Symbol {
    /// Wraps a rational function. Falls back to a coefficient sequence when
    /// the partial-fraction shortcuts would be unreliable: multiple poles,
    /// or residues so large relative to the function that their cancellation
    /// eats the working precision (clustered poles do this long before the
    /// coefficient recurrences lose anything).
    pub fn from_rational(f: RationalFn, bits: u32) -> Result<Symbol> {
        if f.has_simple_poles() {
            let residues = f.residues().expect("simple poles have residues");
            let cancel: f64 = residues
                .iter()
                .map(|(p, c)| c.norm() / (1.0 - p.norm()))
                .sum();
            let probe = f.anti_coefficients(64);
            let probe_norm = probe.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if cancel <= 1e4 * probe_norm.max(f64::MIN_POSITIVE) {
                return Ok(Symbol::Rational(f));
            }
        }
        Ok(Symbol::Series(rational_series(&f, bits)?))
    }

    /// Coefficients `a_1..a_N`, extracting them at the requested accuracy
    /// when the symbol is rational.
    pub fn coefficients(&self, bits: u32) -> Result<AntiAnalytic> {
        match self {
            Symbol::Series(s) => Ok(s.clone()),
            Symbol::Rational(f) => rational_series(f, bits),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Symbol::Series(s) => s.eval(z),
            Symbol::Rational(f) => f.eval(z),
        }
    }

    /// Squared l2 norm on the circle.
    pub fn norm_sqr(&self) -> f64 {
        match self {
            Symbol::Series(s) => s.l2_norm().powi(2),
            Symbol::Rational(f) => f.l2_norm_sqr(),
        }
    }

    /// Inner product with the Cauchy kernel `1/(z - zeta)`, `|zeta| < 1`.
    pub fn kernel_inner(&self, zeta: Complex64) -> Complex64 {
        let w = zeta.conj();
        match self {
            Symbol::Series(s) => {
                // sum a_k w^{k-1}
                let mut acc = Complex64::default();
                for &a in s.coeffs().iter().rev() {
                    acc = acc * w + a;
                }
                acc
            }
            Symbol::Rational(f) => {
                let res = f.residues().expect("rational symbols keep simple poles");
                res.iter().map(|&(p, c)| c / (1.0 - p * w)).sum()
            }
        }
    }

    pub fn scale(&self, c: Complex64) -> Symbol {
        match self {
            Symbol::Series(s) => Symbol::Series(s.scale(c)),
            Symbol::Rational(f) => Symbol::Rational(f.scale(c)),
        }
    }
}

/// Exact coefficient extraction for a rational symbol: the linear recurrence
/// is stable (its modes are the poles, all inside the disk), and the
/// geometric tail fixes the length for the requested bit target.
fn rational_series(f: &RationalFn, bits: u32) -> Result<AntiAnalytic> {
    let rho = f
        .poles()
        .roots()
        .iter()
        .map(|&(p, _)| p.norm())
        .fold(0.0f64, f64::max)
        .min(1.0 - 1e-12);
    let target = 2f64.powi(-(bits as i32));
    let mut n = 64usize;
    loop {
        let coeffs = f.anti_coefficients(n);
        let norm2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let tail2 = coeffs[n - 1].norm_sqr() * rho * rho / (1.0 - rho * rho).max(1e-12);
        if tail2 <= (target * target) * norm2 * 0.25 {
            return Ok(AntiAnalytic::new(coeffs, tail2.sqrt()));
        }
        if n >= crate::fourier::MAX_SAMPLES {
            return Err(Error::NoDecay {
                tail: (tail2 / norm2.max(f64::MIN_POSITIVE)).sqrt(),
                samples: n,
            });
        }
        n *= 2;
    }
}

// ---------------------------------------------------------------------------
// JSON function specs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionSpec {
    Fourier {
        /// `a_1..a_N` as `[re, im]` pairs.
        coeffs: Vec<[f64; 2]>,
    },
    Rational {
        /// Ascending numerator coefficients as `[re, im]` pairs.
        p: Vec<[f64; 2]>,
        /// Ascending denominator coefficients.
        q: Vec<[f64; 2]>,
    },
    Blaschke {
        zeros: Vec<[f64; 2]>,
    },
    Builtin {
        id: u8,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        params: BuiltinParams,
    },
}

/// Optional knobs for the builtin generators.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct BuiltinParams {
    /// Pole count for the random rational generators (2..=5).
    pub poles: Option<usize>,
    /// Relative coefficient noise for generator 6.
    pub noise: Option<f64>,
}

/// A resolved function ready for the pipelines.
#[derive(Debug, Clone)]
pub struct ResolvedFunction {
    pub symbol: Symbol,
    /// Zeros of the input Blaschke product, when that is what the user gave
    /// us (enables the zero-based lower bounds).
    pub blaschke_zeros: Option<Vec<Complex64>>,
    pub label: String,
}

pub fn parse_spec(json: &str) -> Result<FunctionSpec> {
    Ok(serde_json::from_str(json)?)
}

fn to_c64(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|p| c64(p[0], p[1])).collect()
}

pub fn resolve(spec: &FunctionSpec, bits: u32) -> Result<ResolvedFunction> {
    match spec {
        FunctionSpec::Fourier { coeffs } => Ok(ResolvedFunction {
            symbol: Symbol::Series(AntiAnalytic::new(to_c64(coeffs), 0.0)),
            blaschke_zeros: None,
            label: format!("fourier[{}]", coeffs.len()),
        }),
        FunctionSpec::Rational { p, q } => {
            let f = RationalFn::new(Polynomial::new(to_c64(p)), Polynomial::new(to_c64(q)))?;
            let label = format!("rational[deg {}]", f.degree());
            Ok(ResolvedFunction {
                symbol: Symbol::from_rational(f, bits)?,
                blaschke_zeros: None,
                label,
            })
        }
        FunctionSpec::Blaschke { zeros } => {
            let zeros = to_c64(zeros);
            let label = format!("blaschke[deg {}]", zeros.len());
            Ok(ResolvedFunction {
                symbol: blaschke_reduction(&zeros, bits)?,
                blaschke_zeros: Some(zeros),
                label,
            })
        }
        FunctionSpec::Builtin { id, seed, params } => builtin_with(*id, *seed, params, bits),
    }
}

/// The equivalent anti-analytic datum of a Blaschke product `b = q/q~`:
/// `conj(b) - conj(b(0))` is rational with poles at the zeros of `b`, and
/// approximating `b` from degree-`n` rationals in the analytic class is the
/// same problem as approximating this datum with `n` poles.
pub fn blaschke_reduction(zeros: &[Complex64], bits: u32) -> Result<Symbol> {
    for z in zeros {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: z.norm() });
        }
    }
    let q = Polynomial::from_roots(zeros);
    let n = zeros.len();
    let q_tilde = reciprocal(&q, n);
    // b(0) = q(0)/q~(0); q is monic so q~(0) = 1
    let b0 = q.coeff(0);
    let shifted = q_tilde.sub(&q.scale(b0.conj()));
    let (_, r) = crate::polynomial::euclid_divide(&shifted, &q)?;
    Symbol::from_rational(RationalFn::new(r, q)?, bits)
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

/// Resolves one of the built-in example functions. Ids 2..=6 are random
/// generators and require a seed.
pub fn builtin(id: u8, seed: Option<u64>, bits: u32) -> Result<ResolvedFunction> {
    builtin_with(id, seed, &BuiltinParams::default(), bits)
}

/// [`builtin`] with generator overrides.
pub fn builtin_with(
    id: u8,
    seed: Option<u64>,
    params: &BuiltinParams,
    bits: u32,
) -> Result<ResolvedFunction> {
    match id {
        1 => {
            let f = truncate_to_bits(|z| ((10.0 * z - 9.0) / (10.0 * z + 9.0)).ln(), bits)?;
            Ok(ResolvedFunction {
                symbol: Symbol::Series(f),
                blaschke_zeros: None,
                label: "example-1".into(),
            })
        }
        7 => {
            let f = truncate_to_bits(|z| (-c64(0.0, 1.0) / (z - c64(0.0, 0.9))).exp() - 1.0, bits)?;
            Ok(ResolvedFunction {
                symbol: Symbol::Series(f),
                blaschke_zeros: None,
                label: "example-7".into(),
            })
        }
        2..=6 => {
            let seed = seed.ok_or_else(|| {
                Error::Spec(format!(
                    "builtin {id} is a random generator and needs a seed"
                ))
            })?;
            let mut rng = ChaCha20Rng::seed_from_u64(seed ^ ((id as u64) << 56));
            let symbol = match id {
                2 => random_rational(&mut rng, params.poles.unwrap_or(5), PoleRegion::Disk)?,
                3 => random_rational(&mut rng, params.poles.unwrap_or(20), PoleRegion::Disk)?,
                4 => random_rational(
                    &mut rng,
                    params.poles.unwrap_or(20),
                    PoleRegion::SmallDisk(0.2),
                )?,
                5 => random_rational(
                    &mut rng,
                    params.poles.unwrap_or(20),
                    PoleRegion::Annulus(0.9, 0.95),
                )?,
                6 => noisy_degree4(&mut rng, params.noise.unwrap_or(0.01), bits)?,
                _ => unreachable!(),
            };
            Ok(ResolvedFunction {
                symbol,
                blaschke_zeros: None,
                label: format!("example-{id}(seed {seed})"),
            })
        }
        other => Err(Error::Spec(format!("unknown builtin id {other}"))),
    }
}

/// Pole sampling regions for the random generators.
#[derive(Debug, Clone, Copy)]
pub enum PoleRegion {
    Disk,
    SmallDisk(f64),
    Annulus(f64, f64),
}

fn sample_pole(rng: &mut ChaCha20Rng, region: PoleRegion) -> Complex64 {
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = match region {
        // capped just inside the circle so 40-bit truncations stay in the
        // same length range the original experiments report
        PoleRegion::Disk => rng.gen_range(0.0f64..1.0).sqrt().min(0.98),
        PoleRegion::SmallDisk(rad) => rad * rng.gen_range(0.0f64..1.0).sqrt(),
        PoleRegion::Annulus(a, b) => (a * a + rng.gen_range(0.0f64..1.0) * (b * b - a * a)).sqrt(),
    };
    Complex64::from_polar(r, theta)
}

/// Random rational symbol with the given pole count, uniform poles in the
/// region, standard complex Gaussian numerator.
pub fn random_rational(rng: &mut ChaCha20Rng, degree: usize, region: PoleRegion) -> Result<Symbol> {
    let mut poles: Vec<Complex64> = Vec::with_capacity(degree);
    while poles.len() < degree {
        let p = sample_pole(rng, region);
        // keep the poles simple and apart so partial fractions stay exact
        if poles.iter().all(|&o| (o - p).norm() > 1e-3) && p.norm() < 0.999 {
            poles.push(p);
        }
    }
    let numer = Polynomial::new((0..degree).map(|_| gaussian(rng)).collect::<Vec<_>>());
    Symbol::from_rational(RationalFn::from_poles(&poles, numer)?, 40)
}

fn gaussian(rng: &mut ChaCha20Rng) -> Complex64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u1.ln()).sqrt();
    c64(r * u2.cos(), r * u2.sin())
}

/// A degree-4 rational perturbed by small relative noise on each coefficient
/// of its truncated expansion; close to rational but not rational.
fn noisy_degree4(rng: &mut ChaCha20Rng, noise: f64, bits: u32) -> Result<Symbol> {
    let base = random_rational(rng, 4, PoleRegion::Disk)?;
    let coeffs = base.coefficients(bits)?;
    let noisy: Vec<Complex64> = coeffs
        .coeffs()
        .iter()
        .map(|&a| {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(0.0f64..noise);
            a * (1.0 + Complex64::from_polar(r, theta))
        })
        .collect();
    Ok(Symbol::Series(AntiAnalytic::new(
        noisy,
        coeffs.tail_bound(),
    )))
}

/// Random Blaschke zeros for property tests: uniform in a disk of the given
/// radius.
pub fn random_blaschke_zeros(rng: &mut ChaCha20Rng, degree: usize, radius: f64) -> Vec<Complex64> {
    (0..degree)
        .map(|_| {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = radius * rng.gen_range(0.0f64..1.0).sqrt();
            Complex64::from_polar(r, theta)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{gramian_rational, singular_spectrum};

    #[test]
    fn parse_and_resolve_fourier() {
        let spec = parse_spec(r#"{"kind":"fourier","coeffs":[[1.0,0.0],[0.5,-0.5]]}"#).unwrap();
        let f = resolve(&spec, 40).unwrap();
        match f.symbol {
            Symbol::Series(s) => {
                assert_eq!(s.len(), 2);
                assert_eq!(s.coeff(2), c64(0.5, -0.5));
            }
            _ => panic!("expected a series"),
        }
    }

    #[test]
    fn parse_and_resolve_rational() {
        let spec = parse_spec(r#"{"kind":"rational","p":[[1.0,0.0]],"q":[[-0.5,0.0],[1.0,0.0]]}"#)
            .unwrap();
        let f = resolve(&spec, 40).unwrap();
        assert!((f.symbol.eval(c64(2.0, 0.0)) - c64(1.0 / 1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn builtin_needs_seed() {
        assert!(builtin(3, None, 40).is_err());
        assert!(builtin(3, Some(7), 40).is_ok());
        assert!(builtin(9, Some(7), 40).is_err());
    }

    #[test]
    fn rational_coefficients_match_eval() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let sym = random_rational(&mut rng, 5, PoleRegion::Disk).unwrap();
        let coeffs = sym.coefficients(40).unwrap();
        let z = c64(1.1, 0.3);
        let direct = sym.eval(z);
        let from_coeffs = coeffs.eval(z);
        assert!(
            (direct - from_coeffs).norm() < 1e-9 * direct.norm().max(1.0),
            "{direct} vs {from_coeffs}"
        );
    }

    #[test]
    fn kernel_inner_agreement() {
        // series route and rational route compute the same pairing
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let sym = random_rational(&mut rng, 4, PoleRegion::SmallDisk(0.6)).unwrap();
        let series = Symbol::Series(sym.coefficients(40).unwrap());
        for &zeta in &[c64(0.3, 0.4), c64(-0.7, 0.1), c64(0.0, 0.0)] {
            let a = sym.kernel_inner(zeta);
            let b = series.kernel_inner(zeta);
            assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
        }
        assert!((sym.norm_sqr() - series.norm_sqr()).abs() < 1e-9 * sym.norm_sqr());
    }

    #[test]
    fn blaschke_reduction_gives_unit_singular_values() {
        let zeros = [c64(0.5, 0.2), c64(-0.3, 0.3), c64(0.1, -0.6)];
        let sym = blaschke_reduction(&zeros, 40).unwrap();
        match sym {
            Symbol::Rational(f) => {
                let gram = gramian_rational(f.numer(), f.denom()).unwrap();
                let spec = singular_spectrum(&gram).unwrap();
                for k in 0..3 {
                    assert!(
                        (spec.value(k) - 1.0).abs() < 1e-8,
                        "s_{k} = {}",
                        spec.value(k)
                    );
                }
            }
            _ => panic!("expected rational reduction"),
        }
    }

    #[test]
    fn builtin_one_matches_closed_form() {
        let f = builtin(1, None, 30).unwrap();
        if let Symbol::Series(s) = &f.symbol {
            assert!((s.coeff(1) - c64(-2.0 * 0.9, 0.0)).norm() < 1e-8);
            assert!(s.coeff(2).norm() < 1e-8);
            assert!((s.coeff(3) - c64(-2.0 * 0.9f64.powi(3) / 3.0, 0.0)).norm() < 1e-8);
        } else {
            panic!("expected series");
        }
    }
}
