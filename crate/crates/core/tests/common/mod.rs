#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use bpic::groups::{GroupDescriptor, GroupElement, Homomorphism, IntMatrix};
use bpic::isotropy::{check_isotropy_map, IsotropyData, IsotropyMap, Orientation};

/// All `n × m` matrices with entries in `[-b, b]`.
pub fn matrices(rows: usize, cols: usize, b: i64) -> Vec<IntMatrix> {
    let n = rows * cols;
    let width = 2 * b + 1;
    (0..width.pow(n as u32))
        .map(|mut e| {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push(e % width - b);
                e /= width;
            }
            IntMatrix::from_rows_with_cols(&v.chunks(cols.max(1)).map(|c| c.to_vec()).collect::<Vec<_>>(), cols)
        })
        .collect()
}

/// Every element of a finite abelian group.
pub fn elements(g: &GroupDescriptor) -> Vec<GroupElement> {
    let mut out = vec![vec![]];
    for m in g.moduli() {
        assert!(m > 0, "group is infinite");
        out = out.into_iter().flat_map(|p: Vec<i64>| (0..m).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.into_iter().map(|r| g.element(r).unwrap()).collect()
}

/// Every automorphism of `g` whose matrix has entries in `[-b, b]`, deduplicated by generator images.
pub fn automorphisms(g: &GroupDescriptor, b: i64) -> Vec<Homomorphism> {
    let n = g.dim();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for m in matrices(n, n, b) {
        let Ok(f) = Homomorphism::from_matrix(g.clone(), g.clone(), m) else { continue };
        if f.validate().is_err() || !f.is_iso(None).unwrap() {
            continue;
        }
        if seen.insert(key(&f)) {
            out.push(f);
        }
    }
    out
}

pub fn key(f: &Homomorphism) -> Vec<Vec<i64>> {
    f.source.generators().iter().map(|x| f.apply(x).unwrap().repr().to_vec()).collect()
}

/// Orientation preserving automorphism triples of `i` found by exhaustive search.
pub fn plane_automorphisms(i: &IsotropyData, b: i64) -> Vec<IsotropyMap> {
    let mut out = Vec::new();
    for psi in automorphisms(&i.h, b) {
        for pp in automorphisms(&i.g_plus, b) {
            for pm in automorphisms(&i.g_minus, b) {
                let m = IsotropyMap {
                    source: i.clone(),
                    target: i.clone(),
                    orientation: Orientation::Preserving,
                    psi: psi.clone(),
                    psi_plus: pp.clone(),
                    psi_minus: pm.clone(),
                    witnesses: None,
                };
                if check_isotropy_map(&m).unwrap() {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// `#{x : x^k = e}` for each `k` up to the group order, which pins a finite abelian group down.
pub fn order_profile<T: Clone + Ord>(elems: &[T], e: &T, mul: impl Fn(&T, &T) -> T) -> Vec<usize> {
    let n = elems.len();
    (1..=n)
        .map(|k| {
            elems
                .iter()
                .filter(|x| {
                    let mut acc = e.clone();
                    for _ in 0..k {
                        acc = mul(&acc, x);
                    }
                    &acc == e
                })
                .count()
        })
        .collect()
}

/// Profile of `Z/n₁ × … × Z/n_k`.
pub fn cyclic_product_profile(factors: &[i64]) -> Vec<usize> {
    let g = GroupDescriptor::abelian(0, factors.to_vec()).unwrap();
    let elems = elements(&g);
    let id = g.identity();
    order_profile(&elems, &id, |a, b| g.mul(a, b).unwrap())
}

/// Profile of a finite group of automorphism triples under composition.
pub fn triple_profile(maps: &[IsotropyMap]) -> Vec<usize> {
    let index: BTreeMap<_, usize> = maps.iter().enumerate().map(|(k, m)| (triple_key(m), k)).collect();
    let id = index[&triple_key(&IsotropyMap::identity(&maps[0].source))];
    let compose = |a: &usize, b: &usize| index[&triple_key(&bpic::isotropy::compose_isotropy_maps(&maps[*a], &maps[*b]).unwrap())];
    let all: Vec<usize> = (0..maps.len()).collect();
    order_profile(&all, &id, compose)
}

pub fn triple_key(m: &IsotropyMap) -> [Vec<Vec<i64>>; 3] {
    [key(&m.psi), key(&m.psi_plus), key(&m.psi_minus)]
}

use bpic::holonomy::{check_holonomy_iso, compose_holonomy_isos, Conventions, HolonomyData, HolonomyIso};

/// Orientation preserving automorphisms of finite data, as classes modulo inner ones.
pub struct CylinderGroup {
    pub data: HolonomyData,
    pub classes: Vec<HolonomyIso>,
    pub keys: Vec<ClassKey>,
    image: BTreeSet<Vec<i64>>,
}

pub type ClassKey = ([Vec<Vec<i64>>; 3], Vec<i64>);

impl CylinderGroup {
    pub fn enumerate(d: &HolonomyData) -> Self {
        let h = &d.iso.h;
        let hs = elements(h);
        // inner h-components are hol(α)·α⁻¹ with Ψ = id
        let image: BTreeSet<Vec<i64>> = hs.iter().map(|a| h.div(&d.hol.apply(a).unwrap(), a).unwrap().repr().to_vec()).collect();
        let mut out = CylinderGroup { data: d.clone(), classes: Vec::new(), keys: Vec::new(), image };
        for base in plane_automorphisms(&d.iso, 4) {
            for x in &hs {
                let m = HolonomyIso { base: base.clone(), h: x.clone() };
                if !check_holonomy_iso(&m, d, d, Conventions::default()).unwrap() {
                    continue;
                }
                let k = out.key(&m);
                if !out.keys.contains(&k) {
                    out.keys.push(k);
                    out.classes.push(m);
                }
            }
        }
        out
    }

    /// `h` is replaced by the least representative of `h + image(hol − 1)`.
    pub fn key(&self, m: &HolonomyIso) -> ClassKey {
        let h = &self.data.iso.h;
        let rep = self
            .image
            .iter()
            .map(|i| h.mul(&m.h, &h.element(i.clone()).unwrap()).unwrap().repr().to_vec())
            .min()
            .unwrap();
        (triple_key(&m.base), rep)
    }

    pub fn index(&self, m: &HolonomyIso) -> usize {
        let k = self.key(m);
        self.keys.iter().position(|x| *x == k).expect("class not enumerated")
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index(&compose_holonomy_isos(&self.classes[a], &self.classes[b]).unwrap())
    }

    pub fn identity(&self) -> usize {
        self.index(&HolonomyIso::identity(&self.data))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.classes.len();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Cyclic subgroup generated by `t`.
    pub fn powers(&self, t: usize) -> Vec<usize> {
        let e = self.identity();
        let mut out = vec![e];
        let mut x = t;
        while x != e {
            out.push(x);
            x = self.mul(x, t);
        }
        out
    }

    /// Order profile of the quotient by the cyclic subgroup of `t`, which is normal when the group is abelian.
    pub fn quotient_profile(&self, t: usize) -> Vec<usize> {
        let sub = self.powers(t);
        let coset = |a: usize| -> Vec<usize> {
            let mut c: Vec<usize> = sub.iter().map(|&s| self.mul(a, s)).collect();
            c.sort();
            c
        };
        let cosets: Vec<Vec<usize>> = (0..self.classes.len()).map(coset).collect::<BTreeSet<_>>().into_iter().collect();
        let e = coset(self.identity());
        order_profile(&cosets, &e, |x, y| coset(self.mul(x[0], y[0])))
    }
}
