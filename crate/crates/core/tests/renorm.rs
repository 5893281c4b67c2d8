use std::collections::BTreeSet;

use lorenz_core::family::{family_map, ParamPoint};
use lorenz_core::renorm::*;
use lorenz_core::*;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn principal() -> RenormType {
    "LR,RL".parse().unwrap()
}

fn center() -> Map64 {
    family_map(&ParamPoint::new(0.75, 0.25).unwrap())
}

#[test]
fn center_of_principal_island() {
    let m = center();
    let rs = detect_renormalizations(&m, 2, 2).unwrap();
    assert_eq!(rs.len(), 1);
    let r = &rs[0];
    assert_eq!((r.a, r.b), (2, 2));
    assert_eq!(r.rtype, principal());
    assert!(r.p < 0.0 && r.q > 0.0);
    assert!(r.deriv_p > 1.0 && r.deriv_q > 1.0);
    verify_renormalization(&m, r).unwrap();
    assert_eq!(detect_type(&m, &principal()).unwrap().as_ref(), Some(r));
}

#[test]
fn renormalized_map_is_lorenz() {
    let m = center();
    let r = detect_type(&m, &principal()).unwrap().unwrap();
    let rm = renormalize(&m, &r);
    rm.validate(64).unwrap();
    let (lo, hi) = (*rm.lo(), *rm.hi());
    assert!((hi - 1.0).abs() < 1e-12);
    assert!((lo - r.p / r.q).abs() < 1e-12);
}

#[test]
fn doubly_renormalizable_words_decompose() {
    let m = center();
    let rs = detect_renormalizations(&m, 8, 8).unwrap();
    let outer = rs.iter().find(|r| r.rtype == principal()).unwrap();
    let inner = rs.iter().find(|r| r.a + r.b > 4).expect("a deeper renormalization");
    let rel = check_nesting(outer, inner).unwrap();
    assert_eq!(&rel.alpha_blocks[..2], &[Block::Alpha, Block::Beta]);
    assert!(inner.a >= 4 && inner.b >= 4);
    assert!(inner.p >= outer.p && inner.q <= outer.q);
}

#[test]
fn full_affine_map_has_no_renormalization() {
    let m = ExactMap::affine(q(2, 1), q(2, 1)).unwrap();
    assert!(detect_renormalizations(&m, 4, 4).unwrap().is_empty());
}

#[test]
fn decompose_examples() {
    let (a, b): (Word, Word) = ("LR".parse().unwrap(), "RL".parse().unwrap());
    let blocks = decompose(&"LRRLRL".parse().unwrap(), &a, &b).unwrap();
    assert_eq!(blocks, [Block::Alpha, Block::Beta, Block::Beta]);
    assert!(decompose(&"LL".parse().unwrap(), &a, &b).is_none());
}

#[test]
fn type_parsing() {
    let t: RenormType = "LRR,RLL".parse().unwrap();
    assert_eq!((t.a(), t.b(), t.total_period()), (3, 3, 6));
    assert_eq!(t.to_string(), "(LRR, RLL)");
    assert!("RL,RL".parse::<RenormType>().is_err());
    assert!("LR".parse::<RenormType>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Every detection passes the pointwise check, expands at its boundary,
    /// and the detections of one map are pairwise nested.
    #[test]
    fn detections_are_sound_and_nested(s in 0.55..0.95f64, t in 0.05..0.45f64) {
        let m = family_map(&ParamPoint::new(s, t).unwrap());
        let rs = detect_renormalizations(&m, 6, 6).unwrap();
        for r in rs.iter().filter(|r| !r.uncertain) {
            prop_assert!(verify_renormalization(&m, r).is_ok(), "{}", r.rtype);
            prop_assert!(r.deriv_p > 1.0 && r.deriv_q > 1.0);
        }
        let sure: Vec<_> = rs.iter().filter(|r| !r.uncertain).collect();
        for (i, x) in sure.iter().enumerate() {
            for y in &sure[i + 1..] {
                prop_assert!(check_nesting(*x, *y).is_ok(), "{} vs {}", x.rtype, y.rtype);
            }
        }
    }

    /// The family symmetry `(s, t) ↦ (1 − t, 1 − s)` conjugates by `x ↦ −x`,
    /// which turns type `(α, β)` into `(β̄, ᾱ)`.
    #[test]
    fn detections_respect_mirror(s in 0.0..=1.0f64, t in 0.0..=1.0f64) {
        let detect = |s: f64, t: f64| detect_renormalizations(&family_map(&ParamPoint::new(s, t).unwrap()), 4, 4).unwrap();
        let mirrored: BTreeSet<RenormType> = detect(1.0 - t, 1.0 - s).into_iter().map(|r| r.rtype).collect();
        for r in detect(s, t).iter().filter(|r| r.slack > 1e-6) {
            let image = RenormType::new(r.rtype.beta.mirrored(), r.rtype.alpha.mirrored()).unwrap();
            prop_assert!(mirrored.contains(&image), "{} has no mirror {}", r.rtype, image);
        }
    }
}
