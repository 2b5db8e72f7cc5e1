mod common;

use proptest::prelude::*;

use bpic::groups::{GroupDescriptor, Homomorphism, IntMatrix};
use bpic::isotropy::{check_isotropy_map, compose_isotropy_maps, inner_isotropy, is_inner_isotropy, picard_plane, validate_isotropy, IsotropyMap, Orientation};
use bpic::samples;
use bpic::Verdict;

fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn lefschetz() -> bpic::isotropy::IsotropyData {
    samples::lefschetz_holonomy(0, 1.into()).iso
}

fn with_psi(rows: &[Vec<i64>]) -> IsotropyMap {
    let i = lefschetz();
    let mut map = IsotropyMap::identity(&i);
    map.psi = Homomorphism::from_matrix(i.h.clone(), i.h.clone(), m(rows)).unwrap();
    map.witnesses = None;
    map
}

#[test]
fn validation_examples() {
    assert!(validate_isotropy(&samples::trivial_isotropy()).is_ok());
    assert!(validate_isotropy(&lefschetz()).is_ok());
    let z4 = GroupDescriptor::cyclic(4);
    let ok = samples::isotropy(z4.clone(), GroupDescriptor::cyclic(2), GroupDescriptor::Trivial, &[vec![1]], &[]);
    assert!(validate_isotropy(&ok).is_ok());
    let bad = bpic::isotropy::IsotropyData {
        phi_plus: Homomorphism::from_matrix(z4.clone(), GroupDescriptor::cyclic(3), m(&[vec![1]])).unwrap(),
        g_plus: GroupDescriptor::cyclic(3),
        ..ok
    };
    let diag = validate_isotropy(&bad).unwrap_err();
    assert_eq!(diag.len(), 1);
    assert!(diag[0].starts_with("phi+"), "{diag:?}");
}

#[test]
fn map_examples() {
    assert!(check_isotropy_map(&IsotropyMap::identity(&lefschetz())).unwrap());
    assert!(check_isotropy_map(&with_psi(&[vec![1, 1], vec![0, 1]])).unwrap());
    assert!(!check_isotropy_map(&with_psi(&[vec![1, 0], vec![1, 1]])).unwrap());
    for (a, b) in [(1, 2), (-3, 5), (0, 7)] {
        let ab = compose_isotropy_maps(&with_psi(&[vec![1, a], vec![0, 1]]), &with_psi(&[vec![1, b], vec![0, 1]])).unwrap();
        assert_eq!(ab.psi.matrix().unwrap(), &m(&[vec![1, a + b], vec![0, 1]]));
        assert!(check_isotropy_map(&ab).unwrap());
    }
    let x = with_psi(&[vec![1, 4], vec![0, 1]]);
    let id = IsotropyMap::identity(&lefschetz());
    assert_eq!(compose_isotropy_maps(&id, &x).unwrap().psi, x.psi);
}

#[test]
fn reversing_maps_compose_to_preserving() {
    let t = samples::trivial_isotropy();
    let mut r = IsotropyMap::identity(&t);
    r.orientation = Orientation::Reversing;
    let rr = compose_isotropy_maps(&r, &r).unwrap();
    assert_eq!(rr.orientation, Orientation::Preserving);
    assert_eq!(rr, IsotropyMap::identity(&t));
}

#[test]
fn inner_examples() {
    let i = lefschetz();
    let alpha = i.h.element(vec![3, -2]).unwrap();
    let inner = inner_isotropy(&i, &alpha).unwrap();
    assert!(inner.psi.is_identity() && inner.psi_plus.is_identity() && inner.psi_minus.is_identity());
    assert_eq!(is_inner_isotropy(&inner, 0).unwrap(), Verdict::Yes(i.h.identity()));
    assert!(is_inner_isotropy(&with_psi(&[vec![1, 1], vec![0, 1]]), 0).unwrap().is_no());

    let z = GroupDescriptor::lattice(1);
    let j = samples::isotropy(GroupDescriptor::Trivial, z.clone(), z.clone(), &[], &[]);
    let mut flip = IsotropyMap::identity(&j);
    flip.psi_plus = Homomorphism::from_matrix(z.clone(), z, m(&[vec![-1]])).unwrap();
    flip.witnesses = None;
    assert!(check_isotropy_map(&flip).unwrap());
    assert!(is_inner_isotropy(&flip, 0).unwrap().is_no());

    let f2 = GroupDescriptor::free(2);
    let t = GroupDescriptor::Trivial;
    let free = bpic::isotropy::IsotropyData::new(f2.clone(), t.clone(), t.clone(), Homomorphism::zero(&f2, &t), Homomorphism::zero(&f2, &t));
    let x = f2.element(vec![1]).unwrap();
    let c = inner_isotropy(&free, &x).unwrap();
    assert_eq!(c.psi.apply(&f2.element(vec![2, -1]).unwrap()).unwrap().repr(), &[1, 2, -1, -1]);
    assert_eq!(is_inner_isotropy(&c, 1).unwrap(), Verdict::Yes(x));
}

#[test]
fn hausdorff_predicate() {
    assert_eq!(samples::trivial_isotropy().is_hausdorff(), Some(true));
    assert_eq!(lefschetz().is_hausdorff(), Some(false));
    let z = GroupDescriptor::lattice(1);
    let inj = samples::isotropy(z.clone(), z.clone(), z.clone(), &[vec![2]], &[vec![-1]]);
    assert_eq!(inj.is_hausdorff(), Some(true));
    let z6 = GroupDescriptor::cyclic(6);
    let not = samples::isotropy(z6.clone(), GroupDescriptor::cyclic(3), z6, &[vec![1]], &[vec![1]]);
    assert_eq!(not.is_hausdorff(), Some(false));
}

fn plane_matches_oracle(i: &bpic::isotropy::IsotropyData, b: i64) {
    let c = picard_plane(i).unwrap().resolved().cloned().unwrap();
    assert_eq!((c.real_rank, c.free_rank, c.circle_periods.len()), (1, 0, 0));
    let autos = common::plane_automorphisms(i, b);
    assert_eq!(common::triple_profile(&autos), common::cyclic_product_profile(&c.torsion));
}

#[test]
fn plane_picard_examples() {
    let trivial = picard_plane(&samples::trivial_isotropy()).unwrap();
    assert_eq!(trivial.resolved().unwrap().to_string(), "R");
    let z2 = GroupDescriptor::cyclic(2);
    let zz = samples::isotropy(z2.clone(), z2.clone(), z2, &[vec![1]], &[vec![1]]);
    assert_eq!(picard_plane(&zz).unwrap().resolved().unwrap().to_string(), "R");
    plane_matches_oracle(&zz, 2);
    let z = GroupDescriptor::lattice(1);
    let signs = samples::isotropy(GroupDescriptor::Trivial, z.clone(), z, &[], &[]);
    let c = picard_plane(&signs).unwrap().resolved().cloned().unwrap();
    assert_eq!(c.torsion, vec![2, 2]);
    plane_matches_oracle(&signs, 2);
}

#[test]
fn plane_picard_matches_oracle_on_small_diagrams() {
    let groups = [GroupDescriptor::Trivial, GroupDescriptor::cyclic(2), GroupDescriptor::cyclic(3), GroupDescriptor::cyclic(4), GroupDescriptor::lattice(1)];
    let mut checked = 0;
    for h in &groups {
        for gp in &groups {
            for gm in &groups {
                for a in 0..h.dim().max(1) as i64 * 3 {
                    for b in 0..3 {
                        let row = |x: i64, g: &GroupDescriptor| if h.dim() == 0 || g.dim() == 0 { vec![] } else { vec![vec![x]] };
                        let i = samples::isotropy(h.clone(), gp.clone(), gm.clone(), &row(a, gp), &row(b, gm));
                        if validate_isotropy(&i).is_err() {
                            continue;
                        }
                        plane_matches_oracle(&i, 4);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

proptest! {
    #[test]
    fn composites_of_passing_maps_pass(a in -6i64..=6, b in -6i64..=6, sa in prop::bool::ANY, sb in prop::bool::ANY) {
        let i = lefschetz();
        let z = GroupDescriptor::lattice(1);
        let sign = |s: bool| Homomorphism::from_matrix(z.clone(), z.clone(), m(&[vec![if s { -1 } else { 1 }]])).unwrap();
        let mk = |x: i64, s: bool| {
            let mut f = with_psi(&[vec![1, x], vec![0, if s { -1 } else { 1 }]]);
            f.psi = Homomorphism::from_matrix(i.h.clone(), i.h.clone(), m(&[vec![1, x], vec![0, if s { -1 } else { 1 }]])).unwrap();
            f.psi_plus = sign(s);
            f.psi_minus = sign(s);
            f
        };
        let (f, g) = (mk(a, sa), mk(b, sb));
        prop_assert!(check_isotropy_map(&f).unwrap());
        prop_assert!(check_isotropy_map(&compose_isotropy_maps(&f, &g).unwrap()).unwrap());
        let alpha = i.h.element(vec![a, b]).unwrap();
        let c = inner_isotropy(&i, &alpha).unwrap();
        let conj = compose_isotropy_maps(&compose_isotropy_maps(&c, &f).unwrap(), &c).unwrap();
        prop_assert!(check_isotropy_map(&conj).unwrap());
        prop_assert_eq!(is_inner_isotropy(&conj, 0).unwrap().is_yes(), is_inner_isotropy(&f, 0).unwrap().is_yes());
    }
}
