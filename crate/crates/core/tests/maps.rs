use lorenz_core::*;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn quadratic_constructor_examples() {
    assert_eq!(Map64::quadratic(0.0, 1.0).unwrap().critical_values(), (0.0, 0.0));
    assert_eq!(Map64::quadratic(1.0, 0.0).unwrap().critical_values(), (1.0, -1.0));
    assert!(matches!(Map64::quadratic(1.5, 0.0), Err(LorenzError::Domain(_))));
    assert!(matches!(Map64::quadratic(0.5, -0.1), Err(LorenzError::Domain(_))));
}

#[test]
fn affine_constructor_examples() {
    let m = ExactMap::affine(q(3, 2), q(3, 2)).unwrap();
    assert_eq!(m.critical_values(), (q(1, 2), q(-1, 2)));
    let full = ExactMap::affine(q(2, 1), q(2, 1)).unwrap();
    assert_eq!(full.critical_values(), (q(1, 1), q(-1, 1)));
    assert!(matches!(ExactMap::affine(q(1, 1), q(3, 2)), Err(LorenzError::Domain(_))));
    assert!(matches!(ExactMap::affine(q(3, 2), q(5, 2)), Err(LorenzError::Domain(_))));
}

#[test]
fn eval_examples() {
    let full = Map64::quadratic(1.0, 0.0).unwrap();
    assert_eq!(full.eval(&Point64::left_of_zero()).unwrap(), 1.0);
    assert_eq!(full.eval(&Point64::interior(-1.0)).unwrap(), -1.0);
    let a = ExactMap::affine(q(3, 2), q(3, 2)).unwrap();
    assert_eq!(a.eval(&ExactPoint::interior(q(1, 2))).unwrap(), q(1, 4));
    assert!(matches!(full.eval(&Point64::interior(1.5)), Err(LorenzError::Domain(_))));
}

#[test]
fn orbit_examples() {
    let m = Map64::quadratic(1.0, 1.0).unwrap();
    let orbit = m.orbit(&Point64::right_of_zero(), 3).unwrap();
    assert!(orbit.iter().all(|p| *p == Point64::right_of_zero()));

    let full = Map64::quadratic(1.0, 0.0).unwrap();
    let values: Vec<f64> = full.orbit(&Point64::left_of_zero(), 2).unwrap().iter().map(|p| p.value).collect();
    assert_eq!(values, vec![0.0, 1.0, 1.0]);
}

/// Third derivative by a central difference, with the step swept until stable.
fn finite_difference_schwarzian(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let mut best = f64::NAN;
    for k in 2..5 {
        let h = 10f64.powi(-k);
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let d3 = (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
        best = d3 / d1 - 1.5 * (d2 / d1).powi(2);
    }
    best
}

#[test]
fn schwarzian_matches_finite_differences() {
    let m = Map64::quadratic(0.0, 0.0).unwrap();
    let branch = |x: f64| m.branch(Symbol::L, &x);
    let fd = finite_difference_schwarzian(branch, -0.5);
    let exact = m.schwarzian(&-0.5).unwrap();
    assert!((fd - exact).abs() < 1e-3, "{fd} vs {exact}");
    assert!((exact + 6.0).abs() < 1e-12);
    assert_eq!(Map64::affine(1.5, 1.75).unwrap().schwarzian(&0.3).unwrap(), 0.0);
    assert!(m.schwarzian(&0.0).is_err());
}

#[test]
fn literals_serialize_rationals_as_strings() {
    let m = ExactMap::affine(q(3, 2), q(7, 4)).unwrap();
    let lit = m.to_literal();
    assert_eq!(lit["kind"], "affine");
    let back = ExactMap::from_literal(&lit).unwrap();
    assert_eq!(back.critical_values(), m.critical_values());
}

proptest! {
    #[test]
    fn branches_increase(s in 0.0..=1.0f64, t in 0.0..=1.0f64, a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let m = Map64::quadratic(s, t).unwrap();
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(x < y && (x != 0.0) && (y != 0.0) && (x < 0.0) == (y < 0.0));
        let fx = m.eval(&Point64::interior(x)).unwrap();
        let fy = m.eval(&Point64::interior(y)).unwrap();
        prop_assert!(fx < fy);
    }

    #[test]
    fn boundary_fixed_and_expanding(s in 0.0..=1.0f64, t in 0.0..=1.0f64) {
        let m = Map64::quadratic(s, t).unwrap();
        prop_assert!((m.eval(&Point64::interior(-1.0)).unwrap() + 1.0).abs() < 1e-15);
        prop_assert!((m.eval(&Point64::interior(1.0)).unwrap() - 1.0).abs() < 1e-15);
        let h = 1e-7;
        let left = (m.branch(Symbol::L, &(-1.0 + h)) - m.branch(Symbol::L, &-1.0)) / h;
        let right = (m.branch(Symbol::R, &1.0) - m.branch(Symbol::R, &(1.0 - h))) / h;
        prop_assert!(left > 1.0 && right > 1.0);
        prop_assert!(m.validate(32).is_ok());
    }

    #[test]
    fn negative_schwarzian(s in 0.0..=1.0f64, t in 0.0..=1.0f64, x in -0.999..0.999f64) {
        prop_assume!(x.abs() > 1e-6);
        let m = Map64::quadratic(s, t).unwrap();
        prop_assert!(m.schwarzian(&x).unwrap() < 0.0);
    }

    /// Each float step agrees with the exact step from the same rational point.
    #[test]
    fn exact_affine_orbits_match_floats(kn in 1i64..=32, ln in 1i64..=32, x0 in -63i64..=63) {
        prop_assume!(x0 != 0);
        let (km, kp) = (q(32 + kn, 32), q(32 + ln, 32));
        let exact = ExactMap::affine(km.clone(), kp.clone()).unwrap();
        let float = Map64::affine(km.approx(), kp.approx()).unwrap();
        let mut x = ExactPoint::interior(q(x0, 64));
        for _ in 0..12 {
            if x.value.approx().abs() < 1e-9 {
                break;
            }
            let exact_next = exact.eval(&x).unwrap();
            let float_next = float.eval(&Point64::interior(x.value.approx())).unwrap();
            prop_assert!((exact_next.approx() - float_next).abs() < 1e-12);
            x = ExactPoint::interior(exact_next);
        }
    }
}
