//! Frozen reference values. Analytic ones are checked against closed forms; numeric ones were
//! recorded from this implementation once cross-checked, and pin regressions.

use num_complex::Complex64;
use schwarz_lab::cardioid::{circumcircle, schwarz_sigma};
use schwarz_lab::coding::{itinerary_of_rational, rational_from_itinerary, Itinerary, RationalAngle};
use schwarz_lab::error::Error;
use schwarz_lab::point::ComplexValue::{self, Infinity};
use schwarz_lab::schwarz::{self, SchwarzMap};
use schwarz_lab::straightening::{chi_center, chi_inverse_center, index_experiment, verify_straightening};
use schwarz_lab::tricorn::{self, rational_lamination};

fn re(x: f64) -> ComplexValue {
    ComplexValue::real(x)
}

fn close(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
    a.approx_eq(&b, tol)
}

const REAL_PERIOD_THREE_TRICORN: f64 = -1.7548776662466927;
const PERIOD_FOUR_SCHWARZ: f64 = 0.06141951530355491;

#[test]
fn sigma_values() {
    assert!(close(schwarz_sigma(re(3.0 / 16.0)).unwrap(), re(0.0), 1e-12));
    assert!(close(schwarz_sigma(re(2.0 / 9.0)).unwrap(), re(3.0 / 16.0), 1e-12));
    assert_eq!(schwarz_sigma(re(0.0)).unwrap(), Infinity);
}

#[test]
fn critical_orbits_at_the_first_centers() {
    let m = SchwarzMap::real(0.0).unwrap();
    assert_eq!(m.apply(re(0.0)).unwrap(), Infinity);
    assert!(close(m.apply(Infinity).unwrap(), re(0.0), 1e-12));

    let m = SchwarzMap::real(3.0 / 16.0).unwrap();
    let orbit = [re(0.0), Infinity, re(3.0 / 16.0), re(0.0)];
    for w in orbit.windows(2) {
        assert!(close(m.apply(w[0]).unwrap(), w[1], 1e-12), "{} ↦ {}", w[0], m.apply(w[0]).unwrap());
    }
}

#[test]
fn circumcircle_at_zero() {
    let g = circumcircle(re(0.0)).unwrap();
    assert!((g.r_a - 0.75).abs() < 1e-10);
    assert!((g.alpha - Complex64::new(-0.75, 0.0)).norm() < 1e-10);
    assert!((g.alpha_prime - Complex64::new(5.0 / 36.0, 0.0)).norm() < 1e-10);
    assert!(matches!(circumcircle(re(-1.0)), Err(Error::SlitError { .. })));
}

#[test]
fn schwarz_centers() {
    let cases = [(2, 0.0), (3, 3.0 / 16.0), (4, 2.0 / 9.0), (4, (52f64.sqrt() - 5.0) / 36.0)];
    for (k, want) in cases {
        let got = schwarz::find_center(k, re(want + 0.01)).unwrap().finite().unwrap();
        assert!((got - want).norm() < 1e-8, "period {k}: {got}");
    }
    assert!((PERIOD_FOUR_SCHWARZ - (52f64.sqrt() - 5.0) / 36.0).abs() < 1e-15);
}

#[test]
fn tricorn_centers() {
    assert_eq!(tricorn::find_center(1, Complex64::new(0.3, 0.1)).unwrap(), Complex64::new(0.0, 0.0));
    let c = tricorn::find_center(2, Complex64::new(-0.9, 0.0)).unwrap();
    assert!((c + 1.0).norm() < 1e-8);
    let c = tricorn::find_center(3, Complex64::new(-1.7, 0.0)).unwrap();
    assert!((c.re - REAL_PERIOD_THREE_TRICORN).abs() < 1e-8 && c.im == 0.0);
    // Real centers of period 3 solve c³ + 2c² + c + 1 = 0.
    let x = REAL_PERIOD_THREE_TRICORN;
    assert!((x * x * x + 2.0 * x * x + x + 1.0).abs() < 1e-12);
}

#[test]
fn itinerary_examples() {
    let it = itinerary_of_rational(&RationalAngle::new(1, 9)).unwrap();
    assert_eq!(it, Itinerary::periodic(vec![1, 3, 2]));
    let it = itinerary_of_rational(&RationalAngle::new(1, 5)).unwrap();
    assert_eq!(it, Itinerary::periodic(vec![1, 2, 3, 2]));
    assert!(matches!(itinerary_of_rational(&RationalAngle::new(1, 6)), Err(Error::HitsFixedPoint { .. })));
    assert!(matches!(rational_from_itinerary(&Itinerary::periodic(vec![2, 1])), Err(Error::NoRealization(_))));
}

#[test]
fn depth_of_parameter_ten() {
    assert_eq!(schwarz::depth(re(10.0), 200).unwrap(), 1);
}

#[test]
fn straightening_images() {
    let cases = [
        (0.0, Complex64::new(-1.0, 0.0)),
        (3.0 / 16.0, Complex64::new(REAL_PERIOD_THREE_TRICORN, 0.0)),
        (2.0 / 9.0, Complex64::new(-1.9407998065294847, 0.0)),
        (PERIOD_FOUR_SCHWARZ, Complex64::new(-1.310702641336833, 0.0)),
    ];
    for (a, c) in cases {
        let r = chi_center(Complex64::new(a, 0.0)).unwrap();
        assert!((r.c - c).norm() < 1e-8, "χ({a}) = {}", r.c);
        let back = chi_inverse_center(c).unwrap();
        assert!((back.a - Complex64::new(a, 0.0)).norm() < 1e-8);
    }
}

#[test]
fn period_four_pair_at_two_ninths() {
    let r = chi_center(Complex64::new(2.0 / 9.0, 0.0)).unwrap();
    assert_eq!(r.characteristic_angles_s.0.to_string(), "|2131");
    assert_eq!(r.characteristic_angles_s.1.to_string(), "|2313");
    assert_eq!(r.characteristic_angles_t, (RationalAngle::new(7, 15), RationalAngle::new(8, 15)));
}

#[test]
fn mismatched_parameters_fail_verification() {
    let rep = verify_straightening(Complex64::new(3.0 / 16.0, 0.0), Complex64::new(-1.0, 0.0), 6);
    assert!(!rep.passed);
}

#[test]
fn index_experiment_values() {
    let e = index_experiment().unwrap();
    assert!((e.iota_s - 0.4862296128353995).abs() < 1e-6, "{}", e.iota_s);
    assert!((e.iota_t - 0.47959183673472766).abs() < 1e-6, "{}", e.iota_t);
    assert!(e.imaginary_parts.0.abs() < 1e-6 && e.imaginary_parts.1.abs() < 1e-6);
}

#[test]
fn basilica_lamination_is_symmetric() {
    let lam = rational_lamination(Complex64::new(-1.0, 0.0), 3, 60).unwrap();
    let keys = lam.lamination.leaf_keys();
    assert!(!keys.is_empty());
    let flip = |t: &RationalAngle| RationalAngle::from_ratio(-t.value());
    for (s, t) in &keys {
        let (x, y) = (flip(t), flip(s));
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        assert!(keys.contains(&(x.clone(), y.clone())), "({s}, {t}) has no mirror ({x}, {y})");
    }
    assert!(keys.contains(&(RationalAngle::new(1, 3), RationalAngle::new(2, 3))));
}
