use std::cmp::Ordering;

use lorenz_core::family::{family_map, realize_kneading, ParamPoint};
use lorenz_core::symbolic::*;
use lorenz_core::*;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

#[test]
fn word_order_examples() {
    assert_eq!(compare_words(&w("LRL"), &w("LRR")), Ordering::Less);
    assert_eq!(compare_words(&w("R"), &w("LLL")), Ordering::Greater);
    assert_eq!(compare_words(&w("LRL"), &w("LRL")), Ordering::Equal);
    assert_eq!(compare_words(&w("LR"), &w("LRL")), Ordering::Less);
}

#[test]
fn full_branch_depth_two_counts_sign_changes() {
    let m = Map64::quadratic(1.0, 0.0).unwrap();
    let p = branch_partition(&m, 2).unwrap();
    let words: Vec<String> = p.branches.iter().map(|b| b.word.to_string()).collect();
    assert_eq!(words, ["LL", "LR", "RL", "RR"]);
    // oracle: jumps of f² on a fine grid, one at 0 and one inside each half
    let n = 20_000;
    let f2 = |x: f64| {
        let y = m.eval(&Point64::interior(x)).unwrap();
        if y == 0.0 {
            return 0.0;
        }
        m.eval(&Point64::interior(y)).unwrap()
    };
    let xs: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).filter(|x| *x != 0.0).collect();
    let jumps = xs.windows(2).filter(|p| f2(p[1]) < f2(p[0])).count();
    assert_eq!(jumps + 1, p.len());
}

#[test]
fn exact_dyadic_preimages() {
    let m = ExactMap::affine(q(2, 1), q(2, 1)).unwrap();
    let p = branch_partition(&m, 3).unwrap();
    assert_eq!(p.len(), 8);
    let cuts: Vec<BigRational> = p.branches.iter().skip(1).map(|b| b.lo.clone()).collect();
    let expected: Vec<BigRational> = (1..8).map(|i| q(-4 + i, 4)).collect();
    assert_eq!(cuts, expected);
}

#[test]
fn cutting_time_examples() {
    let m = Map64::quadratic(0.4, 0.7).unwrap();
    let p1 = branch_partition(&m, 1).unwrap();
    assert_eq!(cutting_times(&p1.branches[0]), (Some(0), None));
    assert_eq!(cutting_times(&p1.branches[1]), (None, Some(0)));

    let full = ExactMap::affine(q(2, 1), q(2, 1)).unwrap();
    let p2 = branch_partition(&full, 2).unwrap();
    let lr = p2.find_word(&w("LR")).unwrap();
    let (l, r) = cutting_times(lr);
    assert!(l == Some(1) || r == Some(1));
}

#[test]
fn mirror_branches_swap_cutting_times() {
    let m = ExactMap::affine(q(3, 2), q(3, 2)).unwrap();
    for n in 1..=8 {
        let p = branch_partition(&m, n).unwrap();
        let k = p.len();
        for (i, b) in p.branches.iter().enumerate() {
            let mirror = &p.branches[k - 1 - i];
            assert_eq!(b.lo, -mirror.hi.clone());
            assert_eq!(b.word, mirror.word.mirrored());
            assert_eq!(cutting_times(b), (cutting_times(mirror).1, cutting_times(mirror).0));
        }
    }
}

#[test]
fn mesh_examples() {
    let full = ExactMap::affine(q(2, 1), q(2, 1)).unwrap();
    assert_eq!(partition_mesh(&full, 10).unwrap(), q(2, 1024));
    assert_eq!(partition_mesh(&full, 1).unwrap(), q(1, 1));
    let m = Map64::quadratic(1.0, 1.0).unwrap();
    let meshes: Vec<f64> = (1..=16).map(|n| partition_mesh(&m, n).unwrap()).collect();
    assert!(meshes.windows(2).all(|p| p[1] <= p[0]), "{meshes:?}");
}

#[test]
fn affine_and_quadratic_with_equal_kneading_correspond() {
    let affine = Map64::affine(1.5, 1.5).unwrap();
    let k = kneading(&affine, 8).unwrap();
    let pt = realize_kneading(&k.k_minus, &k.k_plus).unwrap().point().expect("realizable");
    let quad = family_map(&pt);
    let report = check_combinatorial_equivalence(&affine, &quad, 8).unwrap();
    assert!(report.verified(), "{report:?}");
    assert_eq!(report.branch_counts.len(), 8);
}

#[test]
fn kneading_json_shape() {
    let k = kneading(&Map64::quadratic(1.0, 1.0).unwrap(), 6).unwrap();
    let v = serde_json::to_value(&k).unwrap();
    assert_eq!(v["k_minus"], "LRRRRR");
    assert_eq!(v["depth"], 6);
    assert_eq!(v["exact_hits"][0]["side"], "+");
}

fn quadratic() -> impl Strategy<Value = Map64> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(s, t)| Map64::quadratic(s, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partitions_refine(m in quadratic(), n in 1usize..10) {
        let coarse = branch_partition(&m, n).unwrap();
        let fine = branch_partition(&m, n + 1).unwrap();
        prop_assert_eq!(fine.branches.first().unwrap().lo, -1.0);
        prop_assert_eq!(fine.branches.last().unwrap().hi, 1.0);
        for b in &fine.branches {
            let parents: Vec<_> = coarse.branches.iter().filter(|c| c.lo <= b.lo && b.hi <= c.hi).collect();
            prop_assert_eq!(parents.len(), 1);
            prop_assert!(b.word.starts_with(&parents[0].word));
        }
        for pair in fine.branches.windows(2) {
            prop_assert_eq!(pair[0].hi, pair[1].lo);
        }
    }

    #[test]
    fn words_match_orbits(m in quadratic(), n in 1usize..10) {
        let p = branch_partition(&m, n).unwrap();
        for b in p.branches.iter().filter(|b| b.hi - b.lo > 1e-9) {
            let x = b.midpoint();
            let orbit = m.orbit(&Point64::interior(x), n - 1).unwrap();
            let symbols: Word = orbit.iter().map(|y| y.symbol().unwrap()).collect();
            prop_assert_eq!(&symbols, &b.word);
        }
    }

    #[test]
    fn kneading_equals_adjacent_words(m in quadratic(), n in 1usize..12) {
        let k = kneading(&m, n).unwrap();
        let p = branch_partition(&m, n).unwrap();
        prop_assert_eq!(&p.adjacent(CriticalSide::Minus).unwrap().word, &k.k_minus);
        prop_assert_eq!(&p.adjacent(CriticalSide::Plus).unwrap().word, &k.k_plus);
    }

    #[test]
    fn exact_and_float_kneading_agree(a in 1i64..=48, b in 1i64..=48) {
        let (km, kp) = (q(48 + a, 48), q(48 + b, 48));
        let exact = ExactMap::affine(km.clone(), kp.clone()).unwrap();
        let float = Map64::affine(km.approx(), kp.approx()).unwrap();
        let depth = 40;
        let near_zero = [ExactPoint::left_of_zero(), ExactPoint::right_of_zero()]
            .iter()
            .any(|seed| exact.orbit(seed, depth).unwrap()[1..].iter().any(|x| x.value.approx().abs() < 1e-9));
        prop_assume!(!near_zero);
        let (ke, kf) = (kneading(&exact, depth).unwrap(), kneading(&float, depth).unwrap());
        prop_assert_eq!(ke.k_minus, kf.k_minus);
        prop_assert_eq!(ke.k_plus, kf.k_plus);
    }

    #[test]
    fn kneading_is_cone_monotone(s in 0.0..=1.0f64, t in 0.0..=1.0f64, ds in 0.0..0.3f64, dt in 0.0..0.3f64) {
        let z = ParamPoint::new(s, t).unwrap();
        let z2 = ParamPoint::clamped(s + ds, t + dt);
        let (a, b) = (kneading(&family_map(&z), 20).unwrap(), kneading(&family_map(&z2), 20).unwrap());
        prop_assert!(a.k_minus <= b.k_minus);
        prop_assert!(a.k_plus <= b.k_plus);
    }
}
