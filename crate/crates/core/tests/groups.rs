use proptest::prelude::*;

use bpic::groups::lattice::{lattice_basis, lattice_coords};
use bpic::groups::{free, mixed_quotient_structure, smith_normal_form, solve_intertwiners, ClosedForm, GroupDescriptor, Homomorphism, IntMatrix, MixedQuotientStructure};
use bpic::Rational;

fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn is_smith_diagonal(d: &IntMatrix) -> bool {
    let mut prev = 1;
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j && d[(i, j)] != 0 {
                return false;
            }
        }
    }
    for k in 0..d.rows().min(d.cols()) {
        let x = d[(k, k)];
        if x < 0 || (prev == 0 && x != 0) || (x != 0 && x % prev != 0) {
            return false;
        }
        prev = x;
    }
    true
}

#[test]
fn smith_examples() {
    let s = smith_normal_form(&IntMatrix::identity(2));
    assert_eq!((s.u.clone(), s.d.clone(), s.v.clone()), (IntMatrix::identity(2), IntMatrix::identity(2), IntMatrix::identity(2)));
    let a = m(&[vec![2, 4], vec![6, 8]]);
    let s = smith_normal_form(&a);
    assert_eq!(s.diagonal(), vec![2, 4]);
    assert_eq!(&(&s.u * &a) * &s.v, s.d);
    assert_eq!(s.u.det().abs(), 1);
    assert_eq!(s.v.det().abs(), 1);
    let z = IntMatrix::zeros(3, 2);
    let s = smith_normal_form(&z);
    assert!(s.d.is_zero());
    assert_eq!((s.u, s.v), (IntMatrix::identity(3), IntMatrix::identity(2)));
}

fn matrix_strategy() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| IntMatrix::from_rows(&rows)))
}

/// Exact product in `i128`, so the check never overflows where the factors fit.
fn mul_wide(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    a.iter().map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
}

fn wide(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect()
}

proptest! {
    #[test]
    fn smith_remultiplies(a in matrix_strategy()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(mul_wide(&mul_wide(&wide(&s.u), &wide(&a)), &wide(&s.v)), wide(&s.d));
        prop_assert_eq!(s.u.det().abs(), 1);
        prop_assert_eq!(s.v.det().abs(), 1);
        prop_assert!(is_smith_diagonal(&s.d));
    }

    #[test]
    fn composition_is_associative(a in prop::collection::vec(-4i64..=4, 4), b in prop::collection::vec(-4i64..=4, 4), c in prop::collection::vec(-4i64..=4, 4)) {
        let z2 = GroupDescriptor::lattice(2);
        let h = |v: &[i64]| Homomorphism::from_matrix(z2.clone(), z2.clone(), m(&[v[..2].to_vec(), v[2..].to_vec()])).unwrap();
        let (f, g, k) = (h(&a), h(&b), h(&c));
        prop_assert_eq!(f.compose(&g).unwrap().compose(&k).unwrap(), f.compose(&g.compose(&k).unwrap()).unwrap());
        let x = z2.element(vec![a[0], b[1]]).unwrap();
        prop_assert_eq!(f.compose(&g).unwrap().apply(&x).unwrap(), f.apply(&g.apply(&x).unwrap()).unwrap());
    }
}

fn flatten(x: &IntMatrix) -> Vec<i64> {
    x.to_rows().concat()
}

/// Every `X` with entries in `[-3, 3]` solving `X A = B X`.
fn brute_force_intertwiners(a: &IntMatrix, b: &IntMatrix) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for e in 0..7i64.pow(4) {
        let v: Vec<i64> = (0..4).map(|k| (e / 7i64.pow(k)) % 7 - 3).collect();
        let x = m(&[v[..2].to_vec(), v[2..].to_vec()]);
        if &x * a == b * &x {
            out.push(x);
        }
    }
    out
}

fn check_intertwiners(a: &IntMatrix, b: &IntMatrix) {
    let basis = solve_intertwiners(a, b);
    let flat: Vec<Vec<i64>> = basis.iter().map(flatten).collect();
    assert_eq!(lattice_basis(&flat, 4).len(), basis.len(), "basis not independent for {a:?}, {b:?}");
    for x in &basis {
        assert_eq!(&(x * a), &(b * x));
    }
    for x in brute_force_intertwiners(a, b) {
        assert!(lattice_coords(&flat, &flatten(&x)).is_some(), "{x:?} missing from span for {a:?}, {b:?}");
    }
}

#[test]
fn intertwiner_examples() {
    let u = m(&[vec![1, 1], vec![0, 1]]);
    let basis = solve_intertwiners(&u, &u);
    assert_eq!(basis.len(), 2);
    check_intertwiners(&u, &u);
    assert_eq!(solve_intertwiners(&IntMatrix::identity(2), &IntMatrix::identity(2)).len(), 4);
    assert!(solve_intertwiners(&m(&[vec![2]]), &m(&[vec![3]])).is_empty());
}

#[test]
fn intertwiners_complete_on_sampled_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for k in 0..40 {
        let mut pick = || m(&[vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)], vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)]]);
        let a = pick();
        let b = if k % 2 == 0 { a.clone() } else { pick() };
        check_intertwiners(&a, &b);
    }
}

#[test]
fn homomorphism_examples() {
    let z2 = GroupDescriptor::lattice(2);
    let z = GroupDescriptor::lattice(1);
    let pr2 = Homomorphism::from_matrix(z2.clone(), z.clone(), m(&[vec![0, 1]])).unwrap();
    assert_eq!(pr2.apply(&z2.element(vec![3, 5]).unwrap()).unwrap().repr(), &[5]);
    let u = Homomorphism::from_matrix(z2.clone(), z2.clone(), m(&[vec![1, 1], vec![0, 1]])).unwrap();
    let w = Homomorphism::from_matrix(z2.clone(), z2.clone(), m(&[vec![1, -1], vec![0, 1]])).unwrap();
    assert!(u.is_iso(Some(&w)).unwrap());
    assert!(u.is_iso(None).unwrap());
    let double = Homomorphism::from_matrix(z.clone(), z, m(&[vec![2]])).unwrap();
    assert!(!double.is_iso(None).unwrap());
    assert!(u.compose(&u).unwrap().is_iso(None).unwrap());
}

#[test]
fn torsion_well_definedness() {
    let z4 = GroupDescriptor::cyclic(4);
    let ok = Homomorphism::from_matrix(z4.clone(), GroupDescriptor::cyclic(2), m(&[vec![1]])).unwrap();
    assert!(ok.validate().is_ok());
    let bad = Homomorphism::from_matrix(z4, GroupDescriptor::cyclic(3), m(&[vec![1]]));
    assert!(bad.and_then(|f| f.validate()).is_err());
}

#[test]
fn canonical_descriptors() {
    assert_eq!(GroupDescriptor::abelian(0, vec![]).unwrap(), GroupDescriptor::Trivial);
    assert!(GroupDescriptor::abelian(0, vec![2, 3]).is_err());
    assert_eq!(GroupDescriptor::from_relations(&[vec![2, 0], vec![0, 3]], 2), GroupDescriptor::cyclic(6));
    let z6 = GroupDescriptor::cyclic(6);
    assert_eq!(z6.element(vec![-1]).unwrap().repr(), &[5]);
}

#[test]
fn free_group_conjugation() {
    let f2 = GroupDescriptor::free(2);
    let x = f2.element(vec![1]).unwrap();
    let c = Homomorphism::conjugation(&x);
    let y = f2.element(vec![2]).unwrap();
    assert_eq!(c.apply(&y).unwrap().repr(), &[1, 2, -1]);
    assert_eq!(c.apply(&x).unwrap().repr(), &[1]);
    assert!(free::are_conjugate(&[1, 2, -1], &[2]));
    assert!(!c.is_iso(None).is_ok_and(|b| b) || c.is_iso(Some(&Homomorphism::conjugation(&f2.inv(&x).unwrap()))).unwrap());
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn closed(s: MixedQuotientStructure) -> ClosedForm {
    s.resolved().cloned().expect("resolved")
}

#[test]
fn mixed_quotient_examples() {
    let t = GroupDescriptor::Trivial;
    let c = closed(mixed_quotient_structure(1, &t, &[(vec![r(5, 2)], t.identity())]).unwrap());
    assert_eq!(c.to_string(), "circle(5/2)");
    let z = GroupDescriptor::lattice(1);
    let c = closed(mixed_quotient_structure(1, &z, &[(vec![r(3, 1)], z.element(vec![1]).unwrap())]).unwrap());
    assert_eq!(c.to_string(), "R");
    let z3 = GroupDescriptor::cyclic(3);
    let c = closed(mixed_quotient_structure(1, &z3, &[(vec![r(1, 2)], z3.element(vec![1]).unwrap())]).unwrap());
    assert_eq!(c.circle_periods, vec![r(3, 2)]);
    assert_eq!(c.real_rank + c.free_rank + c.torsion.len(), 0);
    assert!(mixed_quotient_structure(1, &GroupDescriptor::free(2), &[]).is_err());
}

/// Cosets of `⟨(ρ, 1)⟩` in `R × Z/k` are `t − mρ mod kρ`, a circle of period `kρ`.
#[test]
fn cyclic_quotient_matches_coset_enumeration() {
    for k in 2..6 {
        for (p, q) in [(1, 1), (5, 2), (2, 3)] {
            let rho = r(p, q);
            let zk = GroupDescriptor::cyclic(k);
            let c = closed(mixed_quotient_structure(1, &zk, &[(vec![rho], zk.element(vec![1]).unwrap())]).unwrap());
            let period = rho * k;
            let class = |t: Rational, m: i64| {
                let x = t - rho * m;
                x - (x / period).floor() * period
            };
            for m in 0..k {
                assert_eq!(class(rho * m, m), r(0, 1));
                assert_eq!(class(rho * (m + k), m), r(0, 1));
            }
            assert_ne!(class(rho, 0), r(0, 1));
            assert_eq!(c.circle_periods, vec![period]);
        }
    }
}

#[test]
fn mixed_quotient_is_invariant_under_relation_order_and_unimodular_change() {
    let g = GroupDescriptor::abelian(1, vec![2]).unwrap();
    let rels = vec![
        (vec![r(1, 1), r(0, 1)], g.element(vec![1, 0]).unwrap()),
        (vec![r(0, 1), r(3, 2)], g.element(vec![0, 1]).unwrap()),
    ];
    let base = mixed_quotient_structure(2, &g, &rels).unwrap();
    let mut rev = rels.clone();
    rev.reverse();
    assert_eq!(mixed_quotient_structure(2, &g, &rev).unwrap(), base);
    // (x, y) ↦ (x + y, y)
    let sheared: Vec<_> = rels.iter().map(|(v, a)| (vec![v[0] + v[1], v[1]], a.clone())).collect();
    assert_eq!(mixed_quotient_structure(2, &g, &sheared).unwrap(), base);
}
