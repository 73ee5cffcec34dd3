//! The lower bounds and the per-degree report: the sup-norm bound, its
//! quotient-norm sharpening, the zero-based bounds for Blaschke products,
//! and the report object that runs the whole pipeline and combines every
//! bound with its provenance.

use crate::funcspec::{ResolvedFunction, Symbol};
use crate::hankel::{
    aak_approximant, gramian_rational, hankel_matrix, quotient_norm, singular_spectrum,
    top_spectrum_hankel, SingularSpectrum, MULT_TOL,
};
use crate::linearized::{build_problem, linearized_bound, LinearizedOptions};
use crate::polynomial::{reciprocal, Polynomial};
use crate::upper::{solve_rab, RabConfig, RabSolution};
use crate::{Complex64, Error, Result};
use serde::Serialize;

/// `min_j (s_j / ||v_j||_inf) / sqrt(n+1)`: a lower bound on the distance to
/// rationals with `n` poles. Degenerate data (a vanishing sup norm) yields 0.
pub fn bound_mn(values: &[f64], sup_norms: &[f64], n: usize) -> f64 {
    ratio_bound(values, sup_norms, n)
}

/// Same with the distances to the kernel in the sup norm (Nehari norms of
/// the reduced symbols); never smaller than [`bound_mn`]. A vanishing
/// quotient norm means the function itself is rational of low degree, and
/// the bound is 0.
pub fn bound_qn(values: &[f64], quotient_norms: &[f64], n: usize) -> f64 {
    ratio_bound(values, quotient_norms, n)
}

fn ratio_bound(values: &[f64], norms: &[f64], n: usize) -> f64 {
    if values.len() <= n || norms.len() <= n {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for j in 0..=n {
        if norms[j] <= 0.0 {
            return 0.0;
        }
        best = best.min(values[j] / norms[j]);
    }
    best / ((n + 1) as f64).sqrt()
}

/// The two zero-based lower bounds for a Blaschke product with the given
/// zeros, sorted by nondecreasing modulus:
/// `sqrt(1-|z_{n+1}|^2)/sqrt(n+1)` and the harmonic-style bound
/// `1/sum_{j=1}^{n+1} (1-|z_j|^2)^{-1/2}` over the first `n+1` zeros.
pub fn blaschke_bounds(zeros: &[Complex64], n: usize) -> Result<(f64, f64)> {
    if zeros.len() < n + 1 {
        return Err(Error::invalid(format!(
            "need at least {} zeros for degree {n}",
            n + 1
        )));
    }
    for w in zeros.windows(2) {
        if w[0].norm() > w[1].norm() + 1e-15 {
            return Err(Error::invalid(
                "zeros must be sorted by nondecreasing modulus",
            ));
        }
    }
    for z in zeros {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: z.norm() });
        }
    }
    let b1 = (1.0 - zeros[n].norm_sqr()).sqrt() / ((n + 1) as f64).sqrt();
    let denom: f64 = zeros[..=n]
        .iter()
        .map(|z| 1.0 / (1.0 - z.norm_sqr()).sqrt())
        .sum();
    Ok((b1, 1.0 / denom))
}

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

/// Weight choice for the linearized bound.
#[derive(Debug, Clone)]
pub enum PiChoice {
    One,
    /// Reciprocal of the denominator found by the upper-bound search.
    UpperDenominator,
    Custom(Polynomial),
}

/// Pipeline options; the defaults mirror the protocol the builtin examples
/// were computed with (40-bit truncation, 8000-point sup-norm sampling,
/// 50-point initial constraint grid).
#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub bits: u32,
    pub samples: usize,
    pub linearized_pi: Option<PiChoice>,
    pub with_upper: bool,
    pub restarts: usize,
    pub seed: u64,
    pub linearized: LinearizedOptions,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            bits: crate::fourier::DEFAULT_BITS,
            samples: crate::fourier::DEFAULT_SUP_SAMPLES,
            linearized_pi: Some(PiChoice::One),
            with_upper: true,
            restarts: 16,
            seed: 0,
            linearized: LinearizedOptions::default(),
        }
    }
}

/// One spectrum entry as exported in reports.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEntry {
    pub k: usize,
    pub s: f64,
    pub sup_norm: f64,
    pub quotient_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearizedReport {
    pub pi: String,
    pub value: f64,
    pub estimate: f64,
    pub violation: f64,
    pub xi: [f64; 2],
    pub evaluations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct UpperReport {
    pub value: f64,
    pub poles: Vec<[f64; 2]>,
    pub numerator: Vec<[f64; 2]>,
    pub denominator: Vec<[f64; 2]>,
    pub restarts: usize,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AakReport {
    pub level: f64,
    pub poles: Vec<[f64; 2]>,
    pub ripple: f64,
    pub degenerate: bool,
}

/// Provenance attached to every report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportMeta {
    pub label: String,
    pub bits: u32,
    pub truncation_len: usize,
    pub tail_bound: f64,
    /// How the truncation accuracy was measured.
    pub tail_measure: &'static str,
    pub samples: usize,
    pub seed: u64,
    pub spectrum_basis: String,
    pub spectrum: Vec<SpectrumEntry>,
    pub multiplicity_groups: Vec<[usize; 2]>,
    pub aak: Option<AakReport>,
    pub certified: String,
}

/// Per-degree record of every bound, serialized with the documented field
/// names.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub bound_thm51: f64,
    pub bound_cor52: f64,
    pub bound_thm61: Option<LinearizedReport>,
    pub blaschke: Option<[f64; 2]>,
    pub upper: Option<f64>,
    pub warnings: Vec<String>,
    pub meta: ReportMeta,
    #[serde(skip)]
    pub upper_detail: Option<UpperReport>,
}

impl BoundReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn csv_header() -> &'static str {
        "n,bound_thm51,bound_cor52,bound_thm61,blaschke_1,blaschke_2,upper"
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::from(""), |x| format!("{x:.9e}"));
        format!(
            "{},{:.9e},{:.9e},{},{},{},{}",
            self.n,
            self.bound_thm51,
            self.bound_cor52,
            opt(self.bound_thm61.as_ref().map(|l| l.value)),
            opt(self.blaschke.map(|b| b[0])),
            opt(self.blaschke.map(|b| b[1])),
            opt(self.upper),
        )
    }
}

/// Runs truncation, spectrum, norms, bounds, and (optionally) the upper
/// bound and the linearized bound for one degree. Invariant violations
/// (a lower bound exceeding the upper bound beyond slack) are recorded as
/// warnings, never clipped.
pub fn assemble_report(
    f: &ResolvedFunction,
    n: usize,
    opts: &ReportOptions,
) -> Result<BoundReport> {
    let mut warnings = Vec::new();
    let coeffs = f
        .symbol
        .coefficients(opts.bits)
        .map_err(|e| e.with_context("coefficient extraction"))?;

    // spectrum with enough pairs for j <= n; the Malmquist-Walsh route keeps
    // the matrices small for rational symbols, but its Bezout identity
    // degrades as the degree grows (the resultant of q and its reciprocal
    // underflows), so high-degree symbols go through their truncated section
    // like everything else
    let (spectrum, basis_name): (Option<SingularSpectrum>, &str) = match &f.symbol {
        Symbol::Rational(rf) if rf.degree() > n && rf.degree() <= 12 => {
            let gram = gramian_rational(rf.numer(), rf.denom())
                .map_err(|e| e.with_context("rational gramian"))?;
            (Some(singular_spectrum(&gram)?), "malmquist-walsh")
        }
        Symbol::Rational(rf) if rf.degree() <= n => (None, "rational-reachable"),
        _ => {
            if coeffs.len() > n {
                let h = hankel_matrix(&coeffs);
                let spec = top_spectrum_hankel(&h, (n + 1).max(8).min(coeffs.len()))?;
                // two-size consistency guard: the leading values must be
                // stable against halving the section
                if coeffs.len() / 2 > n {
                    let keep = coeffs.len() / 2;
                    let half =
                        crate::fourier::AntiAnalytic::new(coeffs.coeffs()[..keep].to_vec(), 0.0);
                    let spec_half =
                        top_spectrum_hankel(&hankel_matrix(&half), (n + 1).min(half.len()))?;
                    // halving perturbs the section by at most the mass it
                    // drops; only a larger deviation signals trouble
                    let dropped: f64 = coeffs.coeffs()[keep..]
                        .iter()
                        .map(|c| c.norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    let tol = (1e-6 * spec.value(0)).max(4.0 * dropped).max(1e-300);
                    for j in 0..=n.min(spec_half.len() - 1) {
                        let a = spec.value(j);
                        let b = spec_half.value(j);
                        if (a - b).abs() > tol {
                            warnings.push(format!(
                                "singular value {j} not converged in truncation: \
                                 {a:.6e} vs {b:.6e} at half length"
                            ));
                        }
                    }
                }
                (Some(spec), "fourier")
            } else {
                (None, "series-reachable")
            }
        }
    };

    let mut spectrum_entries = Vec::new();
    let mut sup_norms = Vec::new();
    let mut quotient_norms = Vec::new();
    let mut groups = Vec::new();
    let mut aak_report = None;
    let (thm51, cor52) = if let Some(spec) = &spectrum {
        for j in 0..=n.min(spec.len() - 1) {
            let sup = spec.sup_norm(j, opts.samples);
            let quot = quotient_norm(spec, j)
                .map_err(|e| e.with_context(format!("quotient norm of vector {j}")))?;
            if quot > sup * (1.0 + 1e-8) {
                warnings.push(format!(
                    "quotient norm {quot:.6e} exceeds sup norm {sup:.6e} at j={j}"
                ));
            }
            sup_norms.push(sup);
            quotient_norms.push(quot);
            spectrum_entries.push(SpectrumEntry {
                k: j,
                s: spec.value(j),
                sup_norm: sup,
                quotient_norm: quot,
            });
        }
        groups = spec
            .multiplicity_groups(MULT_TOL)
            .into_iter()
            .map(|r| [r.start, r.end])
            .collect();
        // pole extraction roots a polynomial of the section's size in the
        // monomial basis; skip it for very long sections
        let extractable = match spec.basis() {
            crate::hankel::SpectrumBasis::Malmquist(_) => true,
            crate::hankel::SpectrumBasis::Monomial => coeffs.len() <= 600,
        };
        if spec.len() > n && !extractable {
            warnings.push(format!(
                "aak pole extraction skipped (section of {} too large)",
                coeffs.len()
            ));
        }
        if spec.len() > n && extractable {
            match aak_approximant(&coeffs, spec, n) {
                Ok(aak) => {
                    if aak.degenerate {
                        warnings.push(format!(
                            "singular vector {n} has {} disk zeros (degenerate level)",
                            aak.poles.len()
                        ));
                    }
                    aak_report = Some(AakReport {
                        level: aak.level,
                        poles: aak.poles.iter().map(|p| [p.re, p.im]).collect(),
                        ripple: aak.ripple,
                        degenerate: aak.degenerate,
                    });
                }
                Err(e) => warnings.push(format!("aak approximant unavailable: {e}")),
            }
        }
        (
            bound_mn(spec.values(), &sup_norms, n),
            bound_qn(spec.values(), &quotient_norms, n),
        )
    } else {
        // the function is rational with at most n poles: it is reachable
        (0.0, 0.0)
    };
    if thm51 > cor52 * (1.0 + 1e-9) + 1e-30 {
        warnings.push(format!(
            "sup-norm bound {thm51:.6e} exceeds quotient bound {cor52:.6e}"
        ));
    }

    // zero-based bounds when the input was a Blaschke product
    let blaschke = match &f.blaschke_zeros {
        Some(zeros) if zeros.len() > n => {
            let mut sorted = zeros.clone();
            crate::hankel::sort_disk_points(&mut sorted);
            Some(blaschke_bounds(&sorted, n)?)
        }
        _ => None,
    };

    // upper bound with the AAK poles as warm start
    let mut upper_detail = None;
    let mut upper_value = None;
    if opts.with_upper && n >= 1 {
        let warm = aak_report
            .as_ref()
            .map(|a| a.poles.iter().map(|p| Complex64::new(p[0], p[1])).collect());
        let cfg = RabConfig {
            restarts: opts.restarts,
            seed: opts.seed,
            warm_start: warm,
        };
        match solve_rab(&f.symbol, n, &cfg) {
            Ok(sol) => {
                upper_value = Some(sol.error);
                upper_detail = Some(upper_report(&sol));
            }
            Err(e) => warnings.push(format!("upper bound search failed: {e}")),
        }
    }

    // linearized bound
    let mut linearized = None;
    if let Some(choice) = &opts.linearized_pi {
        let (pi, pi_name) = match choice {
            PiChoice::One => (Some(Polynomial::one()), "1".to_string()),
            PiChoice::Custom(p) => (Some(p.clone()), "file".to_string()),
            PiChoice::UpperDenominator => match &upper_detail {
                Some(up) => {
                    let q = Polynomial::new(
                        up.denominator
                            .iter()
                            .map(|c| Complex64::new(c[0], c[1]))
                            .collect(),
                    );
                    (Some(reciprocal(&q, n)), "upper-denominator".to_string())
                }
                None => {
                    warnings.push(
                        "linearized weight needs the upper-bound denominator, which is missing"
                            .into(),
                    );
                    (None, String::new())
                }
            },
        };
        if let Some(pi) = pi {
            match build_problem(&coeffs, &pi, n)
                .and_then(|p| linearized_bound(&p, &opts.linearized))
            {
                Ok(lb) => {
                    linearized = Some(LinearizedReport {
                        pi: pi_name,
                        value: lb.bound,
                        estimate: lb.estimate,
                        violation: lb.violation,
                        xi: [lb.xi.re, lb.xi.im],
                        evaluations: lb.evaluations,
                    });
                }
                Err(e) => warnings.push(format!("linearized bound failed: {e}")),
            }
        }
    }

    // chain checks: every lower bound at most the upper bound
    if let Some(up) = upper_value {
        let slack = 1e-9 * up.max(1.0e-300) + 1e-12 * coeffs.l2_norm();
        for (name, low) in [
            ("thm51", Some(thm51)),
            ("cor52", Some(cor52)),
            ("thm61", linearized.as_ref().map(|l| l.value)),
            ("blaschke-1", blaschke.map(|b| b.0)),
            ("blaschke-2", blaschke.map(|b| b.1)),
        ] {
            if let Some(low) = low {
                if low > up + slack {
                    warnings.push(format!(
                        "lower bound {name} = {low:.6e} exceeds upper bound {up:.6e}"
                    ));
                }
            }
        }
    }

    Ok(BoundReport {
        n,
        bound_thm51: thm51,
        bound_cor52: cor52,
        bound_thm61: linearized,
        blaschke: blaschke.map(|(a, b)| [a, b]),
        upper: upper_value,
        warnings,
        meta: ReportMeta {
            label: f.label.clone(),
            bits: opts.bits,
            truncation_len: coeffs.len(),
            tail_bound: coeffs.tail_bound(),
            tail_measure: "relative l2 energy of the discarded spectrum half",
            samples: opts.samples,
            seed: opts.seed,
            spectrum_basis: basis_name.to_string(),
            spectrum: spectrum_entries,
            multiplicity_groups: groups,
            aak: aak_report,
            certified: "floating-point, non-certified".into(),
        },
        upper_detail,
    })
}

fn upper_report(sol: &RabSolution) -> UpperReport {
    UpperReport {
        value: sol.error,
        poles: sol.poles.iter().map(|p| [p.re, p.im]).collect(),
        numerator: sol
            .numerator
            .coeffs()
            .iter()
            .map(|c| [c.re, c.im])
            .collect(),
        denominator: sol
            .denominator
            .coeffs()
            .iter()
            .map(|c| [c.re, c.im])
            .collect(),
        restarts: sol.restarts_used,
        gradient_norm: sol.residual_gradient_norm,
    }
}
