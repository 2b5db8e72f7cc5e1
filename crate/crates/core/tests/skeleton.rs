use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bpic::groups::{Homomorphism, IntMatrix};
use bpic::holonomy::{compose_holonomy_isos, is_trivial_bimodule, twist_class, HolonomyIso};
use bpic::isotropy::Side;
use bpic::samples::{lefschetz_holonomy, trivial_holonomy};
use bpic::skeleton::bimodule::extract;
use bpic::skeleton::random::{random_data, small_automorphisms, small_data, transport};
use bpic::skeleton::selftest::{rand_arrow, skeleton_triviality, triviality};
use bpic::skeleton::{aff_mul, plane_projection, tensor, AffArrow, Arrow, Bimodule, CylSkeleton, PlaneSkeleton, Point};
use bpic::skeleton::{oracle_selftest, SelfTestTarget};
use bpic::Rational;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn zero_arrow(y: Rational, alpha: Vec<i64>) -> Arrow {
    Arrow::Zero { y, scale: r(1, 1), shift: r(0, 1), alpha }
}

#[test]
fn zero_sector_winding_applies_hol() {
    let d = lefschetz_holonomy(0, r(1, 1));
    let cyl = CylSkeleton::new(&d).unwrap();
    let shifted = cyl.normal_form(&zero_arrow(r(1, 1), vec![0, 1]));
    assert_eq!(shifted, zero_arrow(r(0, 1), vec![1, 1]));
}

#[test]
fn side_winding_multiplies_by_gamma() {
    let d = lefschetz_holonomy(1, r(1, 1));
    let cyl = CylSkeleton::new(&d).unwrap();
    let wound = Arrow::Side { side: Side::Plus, y_src: r(0, 1), y_tgt: r(1, 1), alpha: vec![2] };
    let absorbed = Arrow::Side { side: Side::Plus, y_src: r(0, 1), y_tgt: r(0, 1), alpha: vec![3] };
    assert_eq!(cyl.normal_form(&wound), cyl.normal_form(&absorbed));
    assert_eq!(cyl.normal_form(&absorbed), absorbed);
}

#[test]
fn projection_of_plus_arrow() {
    let got = plane_projection(&Arrow::Side { side: Side::Plus, y_src: r(1, 2), y_tgt: r(3, 1), alpha: vec![] });
    assert_eq!(got, AffArrow { scale: r(1, 1), shift: r(5, 2), x: 1, y: r(1, 2) });
    let minus = plane_projection(&Arrow::Side { side: Side::Minus, y_src: r(1, 2), y_tgt: r(3, 1), alpha: vec![] });
    assert_eq!(minus.shift, r(-5, 2));
}

#[test]
fn zero_sector_composition_is_associative() {
    let d = lefschetz_holonomy(0, r(1, 1));
    let pl = PlaneSkeleton::new(&d.iso).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = Point::Zero(r(1, 3));
    for _ in 0..10_000 {
        let (a, b, c) = (rand_arrow(&mut rng, &d.iso, &p), rand_arrow(&mut rng, &d.iso, &p), rand_arrow(&mut rng, &d.iso, &p));
        assert_eq!(pl.mul(&c, &pl.mul(&b, &a).unwrap()).unwrap(), pl.mul(&pl.mul(&c, &b).unwrap(), &a).unwrap());
        let composite = plane_projection(&pl.mul(&b, &a).unwrap());
        assert_eq!(composite, aff_mul(&plane_projection(&b), &plane_projection(&a)));
    }
}

#[test]
fn mismatched_arrows_do_not_compose() {
    let d = trivial_holonomy(r(1, 1));
    let pl = PlaneSkeleton::new(&d.iso).unwrap();
    let a = zero_arrow(r(0, 1), vec![]);
    let b = zero_arrow(r(1, 2), vec![]);
    assert!(pl.mul(&a, &b).is_err());
}

#[test]
fn twist_squared_is_shear_by_two() {
    let d = lefschetz_holonomy(0, r(1, 1));
    let t = twist_class(&d).unwrap();
    let b = Bimodule::new(&t, &d, &d).unwrap();
    let (psi, _, _, h) = extract(&b, &b).unwrap();
    assert_eq!(psi, IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]));
    assert_eq!(h, vec![0, 0]);
}

#[test]
fn identity_bimodule_is_neutral() {
    let d = lefschetz_holonomy(0, r(1, 1));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (d2, f) = transport(&mut rng, &d).unwrap();
    let id = HolonomyIso::identity(&d2);
    let bf = Bimodule::new(&f, &d, &d2).unwrap();
    let bid = Bimodule::new(&id, &d2, &d2).unwrap();
    for _ in 0..200 {
        let at = Point::Zero(r(rng.gen_range(0..4), 4));
        let p = bf.normal_form(&rand_arrow(&mut rng, &d2.iso, &at));
        let u = bid.normal_form(&PlaneSkeleton::new(&d2.iso).unwrap().unit(&p.target()));
        assert_eq!(tensor(&bid, &bf, &u, &p).unwrap(), p);
    }
}

#[test]
fn wrong_composite_is_detected_by_lifts() {
    // h₁ h₂ without applying Ψ₁ to h₂ is not the composite; the twisted windings notice
    let d = lefschetz_holonomy(0, r(1, 1));
    let t = twist_class(&d).unwrap();
    let mut f = HolonomyIso::identity(&d);
    f.h = d.iso.h.element(vec![0, 1]).unwrap();
    let twisted_h = compose_holonomy_isos(&t, &f).unwrap();
    assert_eq!(twisted_h.h.repr(), &[1, 1]);
    let mut g = twisted_h.clone();
    g.h = d.iso.h.element(vec![0, 1]).unwrap();
    let (bt, bf, bg) = (Bimodule::new(&t, &d, &d).unwrap(), Bimodule::new(&f, &d, &d).unwrap(), Bimodule::new(&g, &d, &d).unwrap());
    let bc = Bimodule::new(&twisted_h, &d, &d).unwrap();
    let p1 = bt.normal_form(&zero_arrow(r(0, 1), vec![0, 0]));
    let p2 = bf.normal_form(&zero_arrow(r(0, 1), vec![0, 0]));
    let lifted = bt.plane().mul(&bt.lift(&p1, 1, 1), &bt.push(&bf.lift(&p2, 1, 1))).unwrap();
    let t12 = tensor(&bt, &bf, &p1, &p2).unwrap();
    assert_eq!(bc.normal_form(&lifted), t12);
    assert_ne!(bg.normal_form(&lifted), t12);
}

#[test]
fn triviality_on_lefschetz() {
    let d = lefschetz_holonomy(0, r(1, 1));
    let t = twist_class(&d).unwrap();
    assert_eq!(skeleton_triviality(&t, &d).unwrap(), None);
    assert!(is_trivial_bimodule(&t, &d, 4).unwrap().is_no());
    let mut f = HolonomyIso::identity(&d);
    f.h = d.iso.h.element(vec![3, 0]).unwrap();
    assert!(skeleton_triviality(&f, &d).unwrap().is_some());
    assert_eq!(triviality(&f, &d).unwrap(), Ok(()));
}

#[test]
fn triviality_agrees_on_all_small_rank_one_automorphisms() {
    let mut total = 0;
    for d in small_data(2) {
        for f in small_automorphisms(&d, 3).unwrap() {
            assert_eq!(triviality(&f, &d).unwrap(), Ok(()), "data {d:?} iso {f:?}");
            total += 1;
        }
    }
    assert!(total > 1000);
}

#[test]
fn transported_isos_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let d = random_data(&mut rng).unwrap();
        let (d2, f) = transport(&mut rng, &d).unwrap();
        assert_eq!(f.failures(&d, &d2, Default::default()).unwrap(), Vec::<String>::new());
    }
}

#[test]
fn selftest_passes_on_random_and_sample_data() {
    for target in [
        SelfTestTarget::Random,
        SelfTestTarget::Data(Box::new(lefschetz_holonomy(0, r(1, 1)))),
        SelfTestTarget::Data(Box::new(trivial_holonomy(r(5, 2)))),
    ] {
        let rep = oracle_selftest(&target, 0, 200);
        assert!(rep.all_passed(), "{rep}");
        assert!(rep.properties.iter().all(|p| p.passed == 200), "{rep}");
    }
}

#[test]
fn selftest_is_deterministic() {
    let a = oracle_selftest(&SelfTestTarget::Random, 5, 50);
    let b = oracle_selftest(&SelfTestTarget::Random, 5, 50);
    assert_eq!(a, b);
}

#[test]
fn corrupted_hol_is_reported_without_running_properties() {
    let mut d = lefschetz_holonomy(0, r(1, 1));
    d.hol = Homomorphism::from_matrix(d.iso.h.clone(), d.iso.h.clone(), IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]])).unwrap();
    let rep = oracle_selftest(&SelfTestTarget::Data(Box::new(d)), 0, 10);
    assert!(!rep.validation.is_empty());
    assert!(rep.properties.is_empty());
    assert!(!rep.all_passed());
}
