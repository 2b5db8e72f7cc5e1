mod common;

use proptest::prelude::*;

use bpic::groups::{GroupDescriptor, Homomorphism, IntMatrix};
use bpic::holonomy::{check_holonomy_iso, compose_holonomy_isos, inner_holonomy, invert_holonomy_iso, is_trivial_bimodule, picard_cylinder, twist_class, validate_holonomy, Conventions, HolonomyData, HolonomyIso};
use bpic::isotropy::IsotropyMap;
use bpic::{samples, Rational, Verdict};

fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn lef() -> HolonomyData {
    samples::lefschetz_holonomy(0, Rational::from(1))
}

fn lef_iso(psi: &[Vec<i64>], h: Vec<i64>) -> HolonomyIso {
    let d = lef();
    let mut base = IsotropyMap::identity(&d.iso);
    base.psi = Homomorphism::from_matrix(d.iso.h.clone(), d.iso.h.clone(), m(psi)).unwrap();
    base.witnesses = None;
    HolonomyIso { base, h: d.iso.h.element(h).unwrap() }
}

const STRICT: Conventions = Conventions { reversing_hol_inverse: false };

#[test]
fn validation_examples() {
    assert!(validate_holonomy(&samples::trivial_holonomy(Rational::new(7, 3))).is_ok());
    assert!(validate_holonomy(&lef()).is_ok());
    let z = GroupDescriptor::lattice(1);
    let pr1 = samples::isotropy(GroupDescriptor::lattice(2), z.clone(), z, &[vec![1, 0]], &[vec![1, 0]]);
    let bad = samples::holonomy(pr1, &[vec![1, 1], vec![0, 1]], vec![0], vec![0], Rational::from(1));
    let diag = validate_holonomy(&bad).unwrap_err();
    assert_eq!(diag.len(), 2, "{diag:?}");
    let mut neg = samples::trivial_holonomy(Rational::from(1));
    neg.period = Rational::from(-1);
    assert!(validate_holonomy(&neg).is_err());
}

#[test]
fn iso_examples() {
    let d = lef();
    assert!(check_holonomy_iso(&HolonomyIso::identity(&d), &d, &d, STRICT).unwrap());
    for a in -4..=4 {
        for x in -3..=3 {
            assert!(check_holonomy_iso(&lef_iso(&[vec![1, a], vec![0, 1]], vec![x, 0]), &d, &d, STRICT).unwrap());
        }
        assert!(!check_holonomy_iso(&lef_iso(&[vec![1, a], vec![0, 1]], vec![0, 1]), &d, &d, STRICT).unwrap());
    }
    assert!(!check_holonomy_iso(&lef_iso(&[vec![1, 0], vec![1, 1]], vec![0, 0]), &d, &d, STRICT).unwrap());
    let other = samples::lefschetz_holonomy(0, Rational::from(2));
    let mut m2 = HolonomyIso::identity(&d);
    m2.base.target = other.iso.clone();
    assert!(!check_holonomy_iso(&m2, &d, &other, STRICT).unwrap());
}

#[test]
fn composition_examples() {
    let d = lef();
    let f = lef_iso(&[vec![1, 2], vec![0, 1]], vec![3, 0]);
    let g = lef_iso(&[vec![1, -1], vec![0, 1]], vec![5, 0]);
    let id = HolonomyIso::identity(&d);
    assert_eq!(compose_holonomy_isos(&id, &f).unwrap(), f);
    assert_eq!(compose_holonomy_isos(&f, &id).unwrap().h, f.h);
    let fg = compose_holonomy_isos(&f, &g).unwrap();
    assert_eq!(fg.h.repr(), &[8, 0]);
    assert_eq!(fg.base.psi.matrix().unwrap(), &m(&[vec![1, 1], vec![0, 1]]));
    let back = compose_holonomy_isos(&invert_holonomy_iso(&f).unwrap(), &f).unwrap();
    assert!(back.h.is_identity() && back.base.psi.is_identity());
}

#[test]
fn inner_and_triviality_examples() {
    let d = lef();
    let inner = inner_holonomy(&d, &d.iso.h.element(vec![4, 7]).unwrap()).unwrap();
    assert_eq!(inner.h.repr(), &[7, 0]);
    assert!(check_holonomy_iso(&inner, &d, &d, STRICT).unwrap());
    let t = samples::trivial_holonomy(Rational::from(1));
    assert_eq!(inner_holonomy(&t, &t.iso.h.identity()).unwrap(), HolonomyIso::identity(&t));
    let c = samples::cyclic_holonomy(5, Rational::from(1));
    assert!(inner_holonomy(&c, &c.iso.h.element(vec![3]).unwrap()).unwrap().h.is_identity());

    assert_eq!(is_trivial_bimodule(&HolonomyIso::identity(&d), &d, 0).unwrap(), Verdict::Yes(d.iso.h.identity()));
    assert_eq!(is_trivial_bimodule(&lef_iso(&[vec![1, 0], vec![0, 1]], vec![5, 0]), &d, 0).unwrap(), Verdict::Yes(d.iso.h.element(vec![0, 5]).unwrap()));
    assert!(is_trivial_bimodule(&lef_iso(&[vec![1, 1], vec![0, 1]], vec![0, 0]), &d, 0).unwrap().is_no());
}

#[test]
fn twist_examples() {
    let t = samples::trivial_holonomy(Rational::from(3));
    assert_eq!(twist_class(&t).unwrap(), HolonomyIso::identity(&t));
    let c = samples::cyclic_holonomy(4, Rational::from(1));
    assert_eq!(twist_class(&c).unwrap().base.psi, HolonomyIso::identity(&c).base.psi);
    let tw = twist_class(&lef()).unwrap();
    assert_eq!(tw.base.psi.matrix().unwrap(), &m(&[vec![1, 1], vec![0, 1]]));
    assert!(tw.base.psi_plus.is_identity() && tw.base.psi_minus.is_identity() && tw.h.is_identity());
    assert!(check_holonomy_iso(&tw, &lef(), &lef(), STRICT).unwrap());
}

#[test]
fn cylinder_picard_examples() {
    for rho in [Rational::from(1), Rational::new(5, 2), Rational::new(1, 7)] {
        let c = picard_cylinder(&samples::trivial_holonomy(rho)).unwrap();
        assert_eq!(c.resolved().unwrap().circle_periods, vec![rho]);
        assert_eq!(c.resolved().unwrap().factors().len(), 1);
    }
    let lc = picard_cylinder(&lef()).unwrap().resolved().cloned().unwrap();
    assert_eq!((lc.real_rank, lc.circle_periods.len()), (1, 0));
    let z2 = samples::cyclic_holonomy(2, Rational::from(1));
    let c = picard_cylinder(&z2).unwrap().resolved().cloned().unwrap();
    assert_eq!(c.to_string(), "circle(1)");
}

/// Finite holonomy data over `{1, Z/2, Z/3, Z/4}` with cyclic maps.
fn small_finite_data() -> &'static [HolonomyData] {
    static DATA: std::sync::OnceLock<Vec<HolonomyData>> = std::sync::OnceLock::new();
    DATA.get_or_init(build_small_finite_data)
}

fn build_small_finite_data() -> Vec<HolonomyData> {
    let groups = [GroupDescriptor::Trivial, GroupDescriptor::cyclic(2), GroupDescriptor::cyclic(3), GroupDescriptor::cyclic(4)];
    let mut out = Vec::new();
    let rho = Rational::new(3, 2);
    for h in &groups {
        for gp in &groups {
            for gm in &groups {
                let coef = |g: &GroupDescriptor| if h.dim() == 0 || g.dim() == 0 { vec![None] } else { (0..g.moduli()[0]).map(Some).collect() };
                for a in coef(gp) {
                    for b in coef(gm) {
                        let row = |x: Option<i64>| x.map(|x| vec![vec![x]]).unwrap_or_default();
                        let i = samples::isotropy(h.clone(), gp.clone(), gm.clone(), &row(a), &row(b));
                        for hol in common::automorphisms(h, 4) {
                            for gpe in common::elements(gp) {
                                for gme in common::elements(gm) {
                                    let d = HolonomyData {
                                        iso: i.clone(),
                                        hol: hol.clone(),
                                        hol_inverse: None,
                                        gamma_plus: gpe.clone(),
                                        gamma_minus: gme.clone(),
                                        period: rho,
                                    };
                                    if validate_holonomy(&d).is_ok() {
                                        out.push(d);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn cylinder_picard_matches_enumeration() {
    let data = small_finite_data();
    assert!(data.len() > 200, "{}", data.len());
    let (mut abelian, mut symbolic) = (0, 0);
    for (k, d) in data.iter().enumerate() {
        if k % 3 != 0 {
            continue;
        }
        let g = common::CylinderGroup::enumerate(d);
        let result = picard_cylinder(d).unwrap();
        if !g.is_abelian() {
            assert!(result.resolved().is_none(), "nonabelian OutAut resolved for {d:?}");
            symbolic += 1;
            continue;
        }
        let c = result.resolved().cloned().unwrap_or_else(|| panic!("unresolved for {d:?}"));
        let t = g.index(&twist_class(d).unwrap());
        let order = g.powers(t).len() as i64;
        assert_eq!(c.real_rank + c.free_rank, 0);
        assert_eq!(c.circle_periods, vec![d.period * order], "{d:?}");
        assert_eq!(g.quotient_profile(t), common::cyclic_product_profile(&c.torsion), "{d:?}");
        abelian += 1;
    }
    assert!(abelian > 50, "{abelian} {symbolic}");
}

fn lefschetz_auto() -> impl Strategy<Value = HolonomyIso> {
    (-5i64..=5, -5i64..=5, prop::bool::ANY).prop_map(|(a, x, flip)| {
        let s = if flip { -1 } else { 1 };
        let d = lef();
        let z = GroupDescriptor::lattice(1);
        let mut f = lef_iso(&[vec![s, a], vec![0, s]], vec![x, 0]);
        let sign = Homomorphism::from_matrix(z.clone(), z, m(&[vec![s]])).unwrap();
        f.base.psi_plus = sign.clone();
        f.base.psi_minus = sign;
        assert!(check_holonomy_iso(&f, &d, &d, STRICT).unwrap());
        f
    })
}

proptest! {
    #[test]
    fn composition_is_associative_and_inner_is_normal(f in lefschetz_auto(), g in lefschetz_auto(), k in lefschetz_auto(), a in -5i64..=5, b in -5i64..=5) {
        let d = lef();
        let fg_k = compose_holonomy_isos(&compose_holonomy_isos(&f, &g).unwrap(), &k).unwrap();
        let f_gk = compose_holonomy_isos(&f, &compose_holonomy_isos(&g, &k).unwrap()).unwrap();
        prop_assert_eq!(&fg_k, &f_gk);
        prop_assert!(check_holonomy_iso(&fg_k, &d, &d, STRICT).unwrap());
        let inner = inner_holonomy(&d, &d.iso.h.element(vec![a, b]).unwrap()).unwrap();
        prop_assert!(is_trivial_bimodule(&inner, &d, 0).unwrap().is_yes());
        let conj = compose_holonomy_isos(&compose_holonomy_isos(&f, &inner).unwrap(), &invert_holonomy_iso(&f).unwrap()).unwrap();
        prop_assert!(is_trivial_bimodule(&conj, &d, 0).unwrap().is_yes());
    }

    #[test]
    fn twist_always_passes(k in 0usize..1000) {
        let data = small_finite_data();
        let d = &data[k % data.len()];
        prop_assert!(check_holonomy_iso(&twist_class(d).unwrap(), d, d, STRICT).unwrap());
    }
}
