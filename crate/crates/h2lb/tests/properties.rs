//! Property tests for the structural invariants of the transforms and the
//! polynomial algebra.

use h2lb::fourier::{check_transform, riesz_project, FourierSeries};
use h2lb::polynomial::{euclid_divide, reciprocal, Polynomial};
use h2lb::upper::BlaschkeProduct;
use h2lb::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn coeff_strategy() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c64(re, im))
}

fn series_strategy(max_order: usize) -> impl Strategy<Value = FourierSeries> {
    proptest::collection::vec(coeff_strategy(), 1..=2 * max_order + 1).prop_map(|coeffs| {
        let order = coeffs.len() / 2;
        let mut s = FourierSeries::zero(order.max(1));
        for (i, &c) in coeffs.iter().enumerate() {
            let k = i as i64 - order as i64;
            s.set(k, c);
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn check_transform_is_isometric_involution(s in series_strategy(12)) {
        let t = check_transform(&s);
        prop_assert!((t.l2_norm() - s.l2_norm()).abs() <= 1e-12 * (1.0 + s.l2_norm()));
        let back = check_transform(&t);
        let order = s.order() as i64;
        for k in -order..=order {
            prop_assert!((back.coeff(k) - s.coeff(k)).norm() <= 1e-13);
        }
    }

    #[test]
    fn riesz_projection_is_an_orthogonal_split(s in series_strategy(12)) {
        let (analytic, anti) = riesz_project(&s);
        let total = s.l2_norm().powi(2);
        let split = analytic.l2_norm().powi(2) + anti.l2_norm().powi(2);
        prop_assert!((total - split).abs() <= 1e-12 * (1.0 + total));
        let ip = analytic.inner(&anti.to_series());
        prop_assert!(ip.norm() <= 1e-12);
    }

    #[test]
    fn euclidean_division_reconstructs(
        p in proptest::collection::vec(coeff_strategy(), 1..10),
        q in proptest::collection::vec(coeff_strategy(), 1..6),
    ) {
        let p = Polynomial::new(p);
        let q = Polynomial::new(q);
        prop_assume!(!q.is_zero(1e-6));
        let (quot, rem) = euclid_divide(&p, &q).unwrap();
        let back = q.mul(&quot).add(&rem);
        prop_assert!(back.sub(&p).norm() <= 1e-9 * (1.0 + p.norm()));
    }

    #[test]
    fn reciprocal_involution_preserves_circle_modulus(
        coeffs in proptest::collection::vec(coeff_strategy(), 1..8),
    ) {
        let q = Polynomial::new(coeffs);
        let n = q.nominal_degree();
        let r = reciprocal(&q, n);
        prop_assert_eq!(reciprocal(&r, n), q.clone());
        for j in 0..32 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 32.0);
            prop_assert!((q.eval(z).norm() - r.eval(z).norm()).abs() <= 1e-11 * (1.0 + q.norm()));
        }
    }

    #[test]
    fn blaschke_products_are_unimodular_on_the_circle(
        zeros in proptest::collection::vec(
            (0.0f64..0.97, 0.0f64..(2.0 * PI)).prop_map(|(r, th)| Complex64::from_polar(r, th)),
            0..5,
        ),
    ) {
        let b = BlaschkeProduct::new(&zeros).unwrap();
        for j in 0..24 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 24.0);
            prop_assert!((b.eval(z).norm() - 1.0).abs() <= 1e-12);
        }
    }
}
