//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the numbers it checked. Reference values come from the published table
//! the builtin examples reproduce.

use h2lb::bounds::{assemble_report, blaschke_bounds, PiChoice, ReportOptions};
use h2lb::funcspec::{
    blaschke_reduction, builtin, random_blaschke_zeros, random_rational, PoleRegion, Symbol,
};
use h2lb::hankel::{gramian_rational, hankel_matrix, singular_spectrum, singular_spectrum_hankel};
use h2lb::polynomial::{fejer_riesz, roots, Polynomial, TrigPolynomial};
use h2lb::upper::{criterion, solve_rab, RabConfig};
use h2lb::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

/// Criterion 1: reproduce the table row of the deterministic logarithmic
/// example at degree 4 within the stated tolerances.
#[test]
fn criterion_1_example_one_table_row() {
    let start = std::time::Instant::now();
    let f = builtin(1, None, 40).unwrap();
    let opts = ReportOptions {
        seed: 7,
        with_upper: false,
        ..Default::default()
    };
    let report = assemble_report(&f, 4, &opts).unwrap();

    let thm51 = report.bound_thm51;
    let cor52 = report.bound_cor52;
    assert!(
        rel_err(thm51, 2.884744e-3) < 5e-3,
        "sup-norm bound {thm51:.6e} vs 2.884744e-3"
    );
    assert!(
        rel_err(cor52, 2.887532e-3) < 5e-3,
        "quotient bound {cor52:.6e} vs 2.887532e-3"
    );
    let lin = report
        .bound_thm61
        .as_ref()
        .expect("linearized bound present");
    assert!(
        rel_err(lin.estimate, 4.04e-3) < 0.10,
        "linearized estimate {:.6e} vs 4.04e-3",
        lin.estimate
    );
    let elapsed = start.elapsed();
    println!(
        "PASS criterion 1: thm51 {thm51:.6e} (ref 2.884744e-3), cor52 {cor52:.6e} \
         (ref 2.887532e-3), linearized {:.6e} (ref 4.04e-3), {elapsed:?}",
        lin.estimate
    );
    assert!(
        elapsed.as_secs() < 60,
        "criterion 1 exceeded 60 s: {elapsed:?}"
    );
}

/// Criterion 2, deterministic parts: the singular-value bounds of the
/// essential-singularity example and the linearized bound with the
/// upper-bound denominator as weight.
#[test]
fn criterion_2_example_seven_table_row() {
    let f = builtin(7, None, 40).unwrap();
    let opts = ReportOptions {
        seed: 7,
        linearized_pi: Some(PiChoice::UpperDenominator),
        ..Default::default()
    };
    let report = assemble_report(&f, 4, &opts).unwrap();
    let thm51 = report.bound_thm51;
    let cor52 = report.bound_cor52;
    assert!(
        rel_err(thm51, 1.780707e-4) < 5e-3,
        "sup-norm bound {thm51:.6e} vs 1.780707e-4"
    );
    assert!(
        rel_err(cor52, 1.782276e-4) < 5e-3,
        "quotient bound {cor52:.6e} vs 1.782276e-4"
    );
    let lin = report
        .bound_thm61
        .as_ref()
        .expect("linearized bound present");
    assert!(
        rel_err(lin.estimate, 6.3409e-4) < 0.15,
        "linearized (upper weight) {:.6e} vs 6.3409e-4",
        lin.estimate
    );
    println!(
        "PASS criterion 2 (deterministic parts): thm51 {thm51:.6e} (ref 1.780707e-4), \
         cor52 {cor52:.6e} (ref 1.782276e-4), linearized/upper-weight {:.6e} (ref 6.3409e-4)",
        lin.estimate
    );
}

/// Criterion 2, unit-weight cell: asserted faithfully against the published
/// value 0.7977e-4.
///
/// This test is EXPECTED TO FAIL. The computed minimum over the node circle
/// is 7.9774e-7 at the node -i: the SAME four mantissa digits as the
/// published cell, two orders of magnitude smaller. The minimizer at -i is
/// certified feasible (its modulus stays at or below the weight over 2e5
/// circle points, the interpolation equality holds to machine precision),
/// and a solver-free convolution of the truncated coefficients reproduces
/// the objective to ten digits, so the published exponent cannot be met by
/// this minimization no matter how the node search is configured.
#[test]
fn criterion_2_linearized_pi_one_published_cell() {
    let f = builtin(7, None, 40).unwrap();
    let opts = ReportOptions {
        seed: 7,
        with_upper: false,
        linearized_pi: Some(PiChoice::One),
        ..Default::default()
    };
    let report = assemble_report(&f, 4, &opts).unwrap();
    let lin = report
        .bound_thm61
        .as_ref()
        .expect("linearized bound present");
    let mantissa_ratio = lin.estimate * 1e2 / 0.7977e-4;
    println!(
        "criterion 2 (unit weight): computed min {:.6e} at xi = {:?}; published cell 0.7977e-4; \
         mantissa agreement after removing the factor 100: ratio {:.6}",
        lin.estimate, lin.xi, mantissa_ratio
    );
    assert!(
        (mantissa_ratio - 1.0).abs() < 0.01,
        "mantissa agreement lost: {mantissa_ratio}"
    );
    assert!(
        rel_err(lin.estimate, 0.7977e-4) < 0.10,
        "linearized unit-weight estimate {:.6e} vs published 0.7977e-4: the published \
         exponent appears to be off by 1e2 (see the mantissa agreement above)",
        lin.estimate
    );
    println!("PASS criterion 2 (unit weight)");
}

/// Criterion 3: the pole search must be competitive with the reference
/// upper-bound column on both deterministic examples.
#[test]
fn criterion_3_upper_bound_competitiveness() {
    let cfg = RabConfig {
        restarts: 16,
        seed: 42,
        warm_start: None,
    };
    let f1 = builtin(1, None, 40).unwrap();
    let sol1 = solve_rab(&f1.symbol, 4, &cfg).unwrap();
    assert!(
        sol1.error <= 11.5e-3 * 1.1,
        "example 1 upper bound {:.6e} vs 11.5e-3 * 1.1",
        sol1.error
    );
    let f7 = builtin(7, None, 40).unwrap();
    let sol7 = solve_rab(&f7.symbol, 4, &cfg).unwrap();
    assert!(
        sol7.error <= 6.3742e-4 * 1.1,
        "example 7 upper bound {:.6e} vs 6.3742e-4 * 1.1",
        sol7.error
    );
    println!(
        "PASS criterion 3: upper bounds {:.6e} (ref 11.5e-3) and {:.6e} (ref 6.3742e-4)",
        sol1.error, sol7.error
    );
}

/// Criterion 4: on seeded random instances of each generator, the full
/// bound chain holds and the linearized bound stays strictly below the
/// upper bound whenever the instance is genuinely non-rational at the
/// target degree.
#[test]
fn criterion_4_random_instances_chain_and_strictness() {
    let n = 4usize;
    let mut checked = 0usize;
    let mut strict_checked = 0usize;
    for gen_id in 2u8..=6 {
        for seed in 1u64..=4 {
            let f = builtin(gen_id, Some(seed), 40).unwrap();
            let mut opts = ReportOptions {
                restarts: 6,
                seed: 1000 + seed,
                linearized_pi: Some(PiChoice::One),
                ..Default::default()
            };
            opts.linearized.xi_grid = 32;
            let report = assemble_report(&f, n, &opts)
                .unwrap_or_else(|e| panic!("generator {gen_id} seed {seed}: {e}"));
            let upper = report.upper.expect("upper bound present");
            let slack = 1e-9 * upper.max(1e-300);
            assert!(
                report.bound_thm51 <= report.bound_cor52 * (1.0 + 1e-9) + 1e-30,
                "gen {gen_id} seed {seed}: thm51 {:.6e} > cor52 {:.6e}",
                report.bound_thm51,
                report.bound_cor52
            );
            assert!(
                report.bound_cor52 <= upper + slack,
                "gen {gen_id} seed {seed}: cor52 {:.6e} > upper {:.6e}",
                report.bound_cor52,
                upper
            );
            let lin = report.bound_thm61.as_ref().expect("linearized present");
            assert!(
                lin.value <= upper + slack,
                "gen {gen_id} seed {seed}: linearized {:.6e} > upper {:.6e}",
                lin.value,
                upper
            );
            if upper > 1e-6 {
                assert!(
                    lin.value < upper - 1e-9,
                    "gen {gen_id} seed {seed}: strictness fails: lin {:.6e} vs upper {:.6e}",
                    lin.value,
                    upper
                );
                strict_checked += 1;
            }
            for w in &report.warnings {
                assert!(
                    !w.contains("exceeds upper bound") && !w.contains("exceeds quotient"),
                    "gen {gen_id} seed {seed}: chain warning: {w}"
                );
            }
            checked += 1;
        }
    }
    println!(
        "PASS criterion 4: chain held on {checked} instances (strictness exercised on \
         {strict_checked})"
    );
}

/// Criterion 5: exact singular-value oracles — rank-1 symbols, Blaschke
/// partial isometries, and Kronecker rank detection.
#[test]
fn criterion_5_aak_oracle_suite() {
    // rank-1 symbols 1/(z-a)
    for a in [c64(0.3, 0.0), c64(0.5, 0.0), c64(0.0, 0.9)] {
        let denom = Polynomial::new(vec![-a, c64(1.0, 0.0)]);
        let gram = gramian_rational(&Polynomial::one(), &denom).unwrap();
        let spec = singular_spectrum(&gram).unwrap();
        let expect = 1.0 / (1.0 - a.norm_sqr());
        assert!(
            (spec.value(0) - expect).abs() < 1e-8,
            "s_0 for pole {a}: {} vs {expect}",
            spec.value(0)
        );
    }

    // Blaschke symbols of degree d: s_0..s_{d-1} all 1
    let mut rng = ChaCha20Rng::seed_from_u64(505);
    for d in 2..=6 {
        let zeros = random_blaschke_zeros(&mut rng, d, 0.9);
        let sym = blaschke_reduction(&zeros, 40).unwrap();
        let rf = match &sym {
            Symbol::Rational(rf) => rf,
            _ => panic!("expected rational reduction"),
        };
        let gram = gramian_rational(rf.numer(), rf.denom()).unwrap();
        let spec = singular_spectrum(&gram).unwrap();
        for k in 0..d {
            assert!(
                (spec.value(k) - 1.0).abs() < 1e-8,
                "degree {d}: s_{k} = {}",
                spec.value(k)
            );
        }
    }

    // Kronecker rank detection on 10 random rational symbols
    let mut rng = ChaCha20Rng::seed_from_u64(1234);
    for trial in 0..10 {
        let deg = 2 + (trial % 7);
        let sym = random_rational(&mut rng, deg, PoleRegion::SmallDisk(0.9)).unwrap();
        let coeffs = sym.coefficients(40).unwrap();
        assert!(coeffs.len() >= 4 * deg, "section long enough");
        let spec = singular_spectrum_hankel(&hankel_matrix(&coeffs)).unwrap();
        assert_eq!(
            spec.rank(1e-9),
            deg,
            "trial {trial}: rank detection on degree {deg}"
        );
    }
    println!("PASS criterion 5: rank-1 values, Blaschke isometries, Kronecker ranks");
}

/// Criterion 6: the Malmquist-Walsh and Fourier-section spectra of the same
/// rational symbol agree.
#[test]
fn criterion_6_dual_path_equivalence() {
    let mut rng = ChaCha20Rng::seed_from_u64(606);
    let mut compared = 0usize;
    for trial in 0..10 {
        let deg = 2 + (trial % 5);
        let sym = random_rational(&mut rng, deg, PoleRegion::SmallDisk(0.9)).unwrap();
        let rf = match &sym {
            Symbol::Rational(rf) => rf,
            _ => unreachable!(),
        };
        let gram = gramian_rational(rf.numer(), rf.denom()).unwrap();
        let spec_mw = singular_spectrum(&gram).unwrap();
        let coeffs = sym.coefficients(40).unwrap();
        let spec_fs = singular_spectrum_hankel(&hankel_matrix(&coeffs)).unwrap();
        for k in 0..deg {
            let a = spec_mw.value(k);
            if a > 1e-8 * spec_mw.value(0) {
                let b = spec_fs.value(k);
                assert!((a - b).abs() <= 1e-7 * a, "trial {trial} k={k}: {a} vs {b}");
                compared += 1;
            }
        }
    }
    println!("PASS criterion 6: dual-path spectra agree on {compared} singular values");
}

/// Criterion 7: at a single pole the search reproduces the dense pole-grid
/// oracle with its closed-form projection.
#[test]
fn criterion_7_brute_force_single_pole() {
    let mut rng = ChaCha20Rng::seed_from_u64(707);
    let step = 0.005f64;
    for trial in 0..5 {
        let sym = random_rational(&mut rng, 2, PoleRegion::SmallDisk(0.85)).unwrap();
        let norm_sqr = sym.norm_sqr();
        // grid oracle: d^2 = ||f||^2 - |<f, k_zeta>|^2 (1 - |zeta|^2)
        let mut best = f64::MAX;
        let half = (1.0 / step) as i32;
        for i in -half..=half {
            for j in -half..=half {
                let zeta = c64(i as f64 * step, j as f64 * step);
                if zeta.norm() < 0.995 {
                    let beta = sym.kernel_inner(zeta);
                    let d2 = norm_sqr - beta.norm_sqr() * (1.0 - zeta.norm_sqr());
                    best = best.min(d2.max(0.0).sqrt());
                }
            }
        }
        let sol = solve_rab(
            &sym,
            1,
            &RabConfig {
                restarts: 8,
                seed: 7000 + trial,
                warm_start: None,
            },
        )
        .unwrap();
        let slack = step * norm_sqr.sqrt();
        assert!(
            sol.error <= best + 1e-9,
            "trial {trial}: solver {:.9e} worse than grid {best:.9e}",
            sol.error
        );
        assert!(
            best <= sol.error + slack,
            "trial {trial}: grid {best:.9e} beats solver {:.9e} beyond resolution",
            sol.error
        );
    }
    println!("PASS criterion 7: single-pole search matches the 0.005-step grid oracle");
}

/// Criterion 8: spectral factorization roundtrips on random nonnegative
/// trigonometric polynomials.
#[test]
fn criterion_8_fejer_riesz_roundtrip() {
    let mut rng = ChaCha20Rng::seed_from_u64(808);
    for trial in 0..100 {
        let deg = 1 + rng.gen_range(0..12);
        let p = Polynomial::new(
            (0..=deg)
                .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        );
        let t = TrigPolynomial::from_modulus_squared(&p);
        let q = fejer_riesz(&t).unwrap_or_else(|e| panic!("trial {trial} deg {deg}: {e}"));
        // roundtrip within 1e-8 relative to the mean level
        let scale = t.mean().max(1e-300);
        for j in 0..512 {
            let th = 2.0 * std::f64::consts::PI * j as f64 / 512.0;
            let z = Complex64::from_polar(1.0, th);
            let diff = (q.eval(z).norm_sqr() - t.eval(th)).abs();
            assert!(
                diff <= 1e-8 * scale,
                "trial {trial}: roundtrip off by {diff:.3e} at theta {th}"
            );
        }
        for &(r, _) in roots(&q).unwrap().roots() {
            assert!(
                r.norm() >= 1.0 - 1e-9,
                "trial {trial}: factor root {r} inside"
            );
        }
        let q0 = q.coeff(0);
        assert!(
            q0.re > 0.0 && q0.im.abs() <= 1e-10 * q0.re,
            "trial {trial}: q(0) = {q0}"
        );
    }
    println!("PASS criterion 8: 100 spectral factorizations roundtripped");
}

/// Criterion 9: the zero-based lower bounds stay below the search's upper
/// bound on random Blaschke products, and the degree-1 case is tight.
#[test]
fn criterion_9_blaschke_bounds_vs_upper() {
    let mut rng = ChaCha20Rng::seed_from_u64(909);
    let mut checked = 0usize;
    for trial in 0..10 {
        let deg = 2 + (trial % 5);
        let mut zeros = random_blaschke_zeros(&mut rng, deg, 0.9);
        h2lb::hankel::sort_disk_points(&mut zeros);
        let sym = blaschke_reduction(&zeros, 40).unwrap();
        for n in 1..deg {
            let (b1, b2) = blaschke_bounds(&zeros, n).unwrap();
            let sol = solve_rab(
                &sym,
                n,
                &RabConfig {
                    restarts: 8,
                    seed: 9000 + trial as u64,
                    warm_start: None,
                },
            )
            .unwrap();
            assert!(
                b1 <= sol.error * (1.0 + 1e-9),
                "trial {trial} n={n}: bound {b1:.6e} above upper {:.6e}",
                sol.error
            );
            assert!(
                b2 <= sol.error * (1.0 + 1e-9),
                "trial {trial} n={n}: bound {b2:.6e} above upper {:.6e}",
                sol.error
            );
            checked += 1;
        }
    }
    // b(z) = z at n = 0: the first bound is exactly the true error 1
    let (b1, _) = blaschke_bounds(&[c64(0.0, 0.0)], 0).unwrap();
    assert_eq!(b1, 1.0);
    let f = blaschke_reduction(&[c64(0.0, 0.0)], 40).unwrap();
    let true_err = criterion(&f, &[]).unwrap();
    assert!((true_err - 1.0).abs() < 1e-12);
    println!(
        "PASS criterion 9: zero-based bounds below the upper bound in {checked} cases; \
              degree-1 case tight"
    );
}
