//! Outer automorphism groups of discrete presentations.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use super::graph::{graph_isomorphisms, GraphMap};
use super::iso::DiscreteIso;
use super::solver::{Auto, AutGroup, Layer, RepSearch, SolveOptions};
use super::DiscretePresentation;
use crate::error::Result;
use crate::groups::lattice::{kernel_mod, lattice_basis, lattice_coords, QuotientCoords};
use crate::groups::{GroupDescriptor, GroupElement, Int, IntMatrix};
use crate::isotropy::Orientation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Lift of a nontrivial graph automorphism.
    GraphSymmetry,
    /// Identity graph map, nontrivial ψ.
    Unit,
    /// Identity ψ, nontrivial `h` or cocycles.
    Translation,
    /// Twisting automorphism about an edge.
    Twist(usize),
}

#[derive(Clone, Debug)]
pub struct OutAutGenerator {
    pub label: String,
    pub kind: GeneratorKind,
    pub iso: DiscreteIso,
    pub(crate) auto: Auto,
}

impl OutAutGenerator {
    pub fn orientation(&self) -> Orientation {
        self.iso.orientation
    }

    pub fn edge_permutation(&self) -> &[usize] {
        &self.iso.edge_map
    }
}

/// `OutAut ≅ Z^k / R` read off in invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct AbelianStructure {
    pub group: GroupDescriptor,
    /// Class of each generator.
    pub coords: Vec<GroupElement>,
    quotient: QuotientCoords,
}

impl AbelianStructure {
    /// Exponent vector on the generators representing a class.
    pub fn exponents(&self, class: &GroupElement) -> Vec<Int> {
        self.quotient.preimage(class.repr())
    }

    pub fn class_of(&self, exponents: &[Int]) -> Result<GroupElement> {
        self.group.element(self.quotient.coords(exponents))
    }
}

#[derive(Clone, Debug)]
pub struct OutAut {
    pub generators: Vec<OutAutGenerator>,
    /// Generator index of each edge's twisting automorphism.
    pub twists: Vec<usize>,
    /// Whether each twisting automorphism is inner (`None` if undecided).
    pub twist_inner: Vec<Option<bool>>,
    /// `None` when commutativity could not be decided.
    pub abelian: Option<bool>,
    pub structure: Option<AbelianStructure>,
    /// Order, when the group is finite and was enumerated.
    pub order: Option<usize>,
    pub exhaustive: bool,
    pub notes: Vec<String>,
    pub options: SolveOptions,
    pub(crate) layer: Layer,
}

impl OutAut {
    /// An explicit automorphism in the class of `∏ generator^exponent`.
    pub fn witness(&self, p: &DiscretePresentation, exponents: &[Int]) -> Result<DiscreteIso> {
        let grp = AutGroup::new(p, self.layer, self.options);
        let autos: Vec<Auto> = self.generators.iter().map(|g| g.auto.clone()).collect();
        grp.ctx.to_public(&grp.product(&autos, exponents))
    }

    /// Whether two automorphisms of `p` differ by an inner one.
    pub fn same_class(&self, p: &DiscretePresentation, f: &DiscreteIso, g: &DiscreteIso) -> Result<bool> {
        let grp = AutGroup::new(p, self.layer, self.options);
        Ok(grp.same_class(&grp.ctx.from_public(f)?, &grp.ctx.from_public(g)?))
    }

    /// Class of an automorphism, searched among classes whose free coordinates are bounded by `bound`.
    pub fn class_of_iso(&self, p: &DiscretePresentation, f: &DiscreteIso, bound: Int) -> Result<Option<GroupElement>> {
        let Some(s) = &self.structure else {
            return Ok(None);
        };
        let grp = AutGroup::new(p, self.layer, self.options);
        let target = grp.ctx.from_public(f)?;
        let autos: Vec<Auto> = self.generators.iter().map(|g| g.auto.clone()).collect();
        let ranges: Vec<Vec<Int>> = s.group.moduli().iter().map(|&m| if m == 0 { (-bound..=bound).collect() } else { (0..m).collect() }).collect();
        let mut coords = vec![Vec::new()];
        for r in &ranges {
            coords = coords.into_iter().flat_map(|c: Vec<Int>| r.iter().map(move |&x| [c.clone(), vec![x]].concat())).collect();
        }
        for c in coords {
            let class = s.group.element(c)?;
            if grp.same_class(&grp.product(&autos, &s.exponents(&class)), &target) {
                return Ok(Some(class));
            }
        }
        Ok(None)
    }

    pub fn is_resolved(&self) -> bool {
        self.structure.is_some()
    }

    /// Orientation character on a class given by exponents.
    pub fn orientation_of(&self, exponents: &[Int]) -> Orientation {
        let odd = self
            .generators
            .iter()
            .zip(exponents)
            .filter(|(g, &e)| g.orientation().is_reversing() && e.rem_euclid(2) == 1)
            .count();
        if odd % 2 == 1 {
            Orientation::Reversing
        } else {
            Orientation::Preserving
        }
    }
}

impl fmt::Display for OutAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.structure, self.order) {
            (Some(s), _) => write!(f, "{}", s.group)?,
            (None, Some(n)) => write!(f, "nonabelian group of order {n}")?,
            (None, None) => write!(f, "unresolved")?,
        }
        if !self.exhaustive {
            write!(f, " (non-exhaustive)")?;
        }
        Ok(())
    }
}

/// `OutAut` of a presentation under the given conventions.
pub fn compute_outaut(p: &DiscretePresentation, opts: SolveOptions) -> Result<OutAut> {
    compute_layer(p, Layer::Holonomy, opts, true)
}

fn unsupported(p: &DiscretePresentation, opts: SolveOptions) -> Result<OutAut> {
    let mut generators = Vec::new();
    let mut twists = Vec::new();
    for (i, e) in p.edges.iter().enumerate() {
        twists.push(generators.len());
        let iso = super::iso::twisting_presentation(p, &e.id)?;
        let g = GraphMap::identity(p);
        let auto = Auto { graph: g, psi: Vec::new(), h: Vec::new(), pot: Vec::new() };
        generators.push(OutAutGenerator { label: format!("twist({})", e.id), kind: GeneratorKind::Twist(i), iso, auto });
    }
    Ok(OutAut {
        twist_inner: vec![None; twists.len()],
        generators,
        twists,
        abelian: None,
        structure: None,
        order: None,
        exhaustive: false,
        notes: vec!["free-group backends: automorphism search is not supported, only twisting classes are listed".into()],
        options: opts,
        layer: Layer::Holonomy,
    })
}

pub(crate) fn compute_layer(p: &DiscretePresentation, layer: Layer, opts: SolveOptions, allow_reversing: bool) -> Result<OutAut> {
    if !p.is_abelian() {
        return unsupported(p, opts);
    }
    let grp = AutGroup::new(p, layer, opts);
    let mut notes = Vec::new();
    let mut exhaustive = true;
    let mut gens: Vec<(String, GeneratorKind, Auto)> = Vec::new();

    // lifts of graph automorphisms, skipping those already generated
    let mut reached: Vec<GraphMap> = vec![GraphMap::identity(p)];
    for g in graph_isomorphisms(p, p, allow_reversing) {
        if reached.contains(&g) {
            continue;
        }
        match grp.ctx.find_rep(&g)? {
            RepSearch::Found(a) => {
                gens.push((graph_label(p, &g), GeneratorKind::GraphSymmetry, a));
                reached = close_graph_maps(&reached, &g);
            }
            RepSearch::Infeasible => {}
            RepSearch::NotFound { exhaustive: ex } => {
                if !ex {
                    exhaustive = false;
                    notes.push(format!("no lift of {} found within the search bound", graph_label(p, &g)));
                }
            }
        }
    }

    let units = grp.analyze_units()?;
    notes.extend(units.notes.iter().cloned());
    if !(units.certified && units.exhaustive) {
        exhaustive = false;
    }
    let id_graph = GraphMap::identity(p);
    for (k, psi) in units.generators.iter().enumerate() {
        if let Some(a) = grp.ctx.auto_from_psi(&id_graph, psi.clone()) {
            if !grp.is_inner(&a) {
                gens.push((format!("unit{}", k + 1), GeneratorKind::Unit, a));
            }
        }
    }
    for (k, a) in grp.translation_generators().into_iter().enumerate() {
        if !grp.is_inner(&a) {
            gens.push((format!("translation{}", k + 1), GeneratorKind::Translation, a));
        }
    }
    let mut twists = Vec::new();
    for (i, e) in p.edges.iter().enumerate() {
        twists.push(gens.len());
        gens.push((format!("twist({})", e.id), GeneratorKind::Twist(i), grp.twist(i)));
    }

    let autos: Vec<Auto> = gens.iter().map(|g| g.2.clone()).collect();
    let twist_inner = twists.iter().map(|&k| Some(grp.is_inner(&autos[k]))).collect();
    let mut abelian = true;
    'pairs: for (i, a) in autos.iter().enumerate() {
        for b in &autos[i + 1..] {
            let ab = grp.compose(a, b);
            let ba = grp.compose(b, a);
            if !grp.same_class(&ab, &ba) {
                abelian = false;
                break 'pairs;
            }
        }
    }

    let mut structure = None;
    let mut order = None;
    if abelian {
        match relation_lattice(&grp, &autos, &units) {
            Some(rels) => {
                let q = QuotientCoords::new(&rels, autos.len());
                let group = GroupDescriptor::abelian(q.free_rank(), q.torsion())?;
                let coords = (0..autos.len())
                    .map(|k| {
                        let mut e = vec![0; autos.len()];
                        e[k] = 1;
                        group.element(q.coords(&e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                structure = Some(AbelianStructure { group, coords, quotient: q });
            }
            None => notes.push("relations among generators could not be determined".into()),
        }
    } else {
        notes.push("generators do not commute modulo inner automorphisms".into());
        order = enumerate_classes(&grp, &autos);
        if order.is_none() {
            notes.push("group is not enumerable within the cap".into());
        }
    }

    let generators = gens
        .into_iter()
        .map(|(label, kind, auto)| Ok(OutAutGenerator { iso: grp.ctx.to_public(&auto)?, label, kind, auto }))
        .collect::<Result<Vec<_>>>()?;
    Ok(OutAut { generators, twists, twist_inner, abelian: Some(abelian), structure, order, exhaustive, notes, options: opts, layer })
}

fn graph_label(p: &DiscretePresentation, g: &GraphMap) -> String {
    let moved: Vec<String> = g.edge_map.iter().enumerate().map(|(i, &j)| format!("{}->{}", p.edges[i].id, p.edges[j].id)).collect();
    let o = if g.orientation.is_reversing() { "reversing " } else { "" };
    format!("{o}graph[{}]", moved.join(","))
}

fn close_graph_maps(reached: &[GraphMap], g: &GraphMap) -> Vec<GraphMap> {
    let mut out = reached.to_vec();
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for y in [x.compose(g)].into_iter().chain(reached.iter().map(|r| x.compose(r))) {
            if !out.contains(&y) {
                out.push(y);
            }
        }
    }
    out
}

const BFS_CAP: usize = 4096;

/// Relations of `⟨elems⟩` through a key function that is injective on it (Schreier).
fn schreier_relations<K: Hash + Eq>(grp: &AutGroup, elems: &[Auto], key: impl Fn(&Auto) -> K) -> Option<Vec<Vec<Int>>> {
    let m = elems.len();
    let mut nodes: Vec<(Auto, Vec<Int>)> = vec![(grp.identity(), vec![0; m])];
    let mut index: HashMap<K, usize> = HashMap::new();
    index.insert(key(&nodes[0].0), 0);
    let mut rels = Vec::new();
    let mut head = 0;
    while head < nodes.len() {
        let (x, ex) = nodes[head].clone();
        head += 1;
        for (j, y) in elems.iter().enumerate() {
            let z = grp.compose(y, &x);
            let mut ez = ex.clone();
            ez[j] += 1;
            let kz = key(&z);
            match index.get(&kz) {
                Some(&n) => {
                    let r: Vec<Int> = ez.iter().zip(&nodes[n].1).map(|(a, b)| a - b).collect();
                    if r.iter().any(|&c| c != 0) {
                        rels.push(r);
                    }
                }
                None => {
                    if nodes.len() >= BFS_CAP {
                        return None;
                    }
                    index.insert(kz, nodes.len());
                    nodes.push((z, ez));
                }
            }
        }
    }
    Some(rels)
}

/// Relations of `⟨elems⟩` through an additive map into `Z^n / moduli`.
fn additive_relations(grp_thetas: &[Vec<Int>], moduli: &[Int]) -> Vec<Vec<Int>> {
    let m = grp_thetas.len();
    if moduli.is_empty() {
        return (0..m)
            .map(|k| {
                let mut v = vec![0; m];
                v[k] = 1;
                v
            })
            .collect();
    }
    kernel_mod(&IntMatrix::from_columns(grp_thetas, moduli.len()), moduli)
}

/// Pulls relations on the current basis back to exponent vectors and rebuilds the basis.
fn refine(basis: &[Vec<Int>], rels: &[Vec<Int>], k: usize) -> Vec<Vec<Int>> {
    let pulled: Vec<Vec<Int>> = rels
        .iter()
        .map(|r| {
            let mut v = vec![0; k];
            for (c, b) in r.iter().zip(basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            v
        })
        .collect();
    lattice_basis(&pulled, k)
}

/// The lattice of exponent vectors representing the trivial class, computed
/// through successive homomorphisms: graph map, signs, square-zero parts,
/// finite ψ part and finally translations.
fn relation_lattice(grp: &AutGroup, gens: &[Auto], units: &super::solver::UnitAnalysis) -> Option<Vec<Vec<Int>>> {
    let k = gens.len();
    let mut basis: Vec<Vec<Int>> = (0..k)
        .map(|i| {
            let mut v = vec![0; k];
            v[i] = 1;
            v
        })
        .collect();
    let elems = |basis: &[Vec<Int>]| -> Vec<Auto> { basis.iter().map(|b| grp.product(gens, b)).collect() };

    let es = elems(&basis);
    let rels = schreier_relations(grp, &es, |a| a.graph.clone())?;
    basis = refine(&basis, &rels, k);

    if units.certified {
        let es = elems(&basis);
        let thetas: Vec<Vec<Int>> = es.iter().map(|a| grp.signs(&a.psi, &units.components)).collect();
        let rels = additive_relations(&thetas, &vec![2; units.components.len()]);
        basis = refine(&basis, &rels, k);

        let es = elems(&basis);
        let mut thetas = Vec::new();
        for a in &es {
            let n = grp.radical_part(&a.psi, &units.components);
            thetas.push(lattice_coords(&units.radical_basis, &n)?);
        }
        let rels = additive_relations(&thetas, &vec![0; units.radical_basis.len()]);
        basis = refine(&basis, &rels, k);
    }

    let es = elems(&basis);
    let rels = schreier_relations(grp, &es, |a| a.psi.clone())?;
    basis = refine(&basis, &rels, k);

    let es = elems(&basis);
    let thetas: Vec<Vec<Int>> = es.iter().map(|a| grp.tq.coords(&grp.translation(a))).collect();
    let rels = additive_relations(&thetas, &grp.tq.moduli());
    Some(refine(&basis, &rels, k))
}

/// Number of classes in a finite group, by enumeration modulo inner automorphisms.
fn enumerate_classes(grp: &AutGroup, gens: &[Auto]) -> Option<usize> {
    let mut classes = vec![grp.identity()];
    let mut head = 0;
    while head < classes.len() {
        let x = classes[head].clone();
        head += 1;
        for g in gens {
            let y = grp.compose(g, &x);
            if !classes.iter().any(|c| grp.same_class(c, &y)) {
                if classes.len() >= 512 {
                    return None;
                }
                classes.push(y);
            }
        }
    }
    Some(classes.len())
}
