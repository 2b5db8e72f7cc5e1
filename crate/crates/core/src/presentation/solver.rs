//! Integer-linear solver for isomorphisms of abelian presentations.
//!
//! For a fixed graph map σ the unknown maps ψ (one per vertex and per edge)
//! range over a lattice cut out by the diagram and holonomy equations. The
//! affine condition on `h` restricts ψ further to a coset of a sublattice;
//! isomorphisms are the invertible points of that coset.

use std::collections::{BTreeMap, HashMap};

use super::graph::GraphMap;
use super::iso::DiscreteIso;
use super::DiscretePresentation;
use crate::error::{Error, Result};
use crate::groups::lattice::{kernel_mod, lattice_basis, lattice_coords, solve_mod, QuotientCoords};
use crate::groups::{GroupDescriptor, Homomorphism, Int, IntMatrix};
use crate::holonomy::{Conventions, HolonomyIso};
use crate::isotropy::{IsotropyMap, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Ignore inner quotienting and keep only unipotent ψ, as in the worked examples of the source.
    pub paper_conventions: bool,
    pub conventions: Conventions,
    /// Coefficient bound for bounded searches.
    pub search_height: i64,
    /// Maximum number of candidates or group elements visited by one search.
    pub enumeration_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { paper_conventions: false, conventions: Conventions::default(), search_height: 8, enumeration_cap: 50_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Layer {
    /// Plane data: no holonomy, no `h`.
    Isotropy,
    Holonomy,
}

fn side_index(s: Side) -> usize {
    match s {
        Side::Plus => 0,
        Side::Minus => 1,
    }
}

/// An abelian isomorphism in solver coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Auto {
    pub graph: GraphMap,
    /// Per source object (vertices, then edges).
    pub psi: Vec<IntMatrix>,
    /// Per source edge, coordinates in the target `H`.
    pub h: Vec<Vec<Int>>,
    /// Cocycle potentials per source edge and side: `g_ij = pot_i − pot_j`.
    pub pot: Vec<[Vec<Int>; 2]>,
}

pub(crate) struct Layout {
    pub offsets: Vec<usize>,
    pub shapes: Vec<(usize, usize)>,
    pub total: usize,
}

impl Layout {
    pub fn index(&self, c: usize, r: usize, k: usize) -> usize {
        self.offsets[c] + r * self.shapes[c].1 + k
    }
}

pub(crate) fn reduce_vec(v: &mut [Int], moduli: &[Int]) {
    for (x, &m) in v.iter_mut().zip(moduli) {
        if m != 0 {
            *x = x.rem_euclid(m);
        }
    }
}

pub(crate) fn reduce_rows(m: &mut IntMatrix, moduli: &[Int]) {
    for r in 0..m.rows() {
        if moduli[r] != 0 {
            for k in 0..m.cols() {
                m[(r, k)] = m[(r, k)].rem_euclid(moduli[r]);
            }
        }
    }
}

fn matrix_of(h: &Homomorphism) -> &IntMatrix {
    h.matrix().expect("abelian backend")
}

/// Whether a matrix between groups with equal invariants is invertible.
pub(crate) fn is_invertible(m: &IntMatrix, src: &GroupDescriptor, dst: &GroupDescriptor) -> bool {
    if src != dst {
        return false;
    }
    let f = src.free_rank();
    let n = src.dim();
    if f > 0 && m.block(0..f, 0..f).det().abs() != 1 {
        return false;
    }
    if n == f {
        return true;
    }
    let t = GroupDescriptor::abelian(0, src.torsion().to_vec()).expect("torsion chain");
    Homomorphism::from_matrix(t.clone(), t, m.block(f..n, f..n)).and_then(|h| h.is_iso(None)).unwrap_or(false)
}

pub(crate) struct Ctx<'a> {
    pub p: &'a DiscretePresentation,
    pub q: &'a DiscretePresentation,
    pub layer: Layer,
    pub opts: SolveOptions,
}

/// Outcome of a search for an isomorphism over one graph map.
pub(crate) enum RepSearch {
    Found(Auto),
    /// No point satisfies the linear and affine conditions.
    Infeasible,
    /// Nothing invertible found; `exhaustive` says whether the search was complete.
    NotFound { exhaustive: bool },
}

impl<'a> Ctx<'a> {
    pub fn nv(&self) -> usize {
        self.p.vertices.len()
    }

    pub fn ne(&self) -> usize {
        self.p.edges.len()
    }

    pub fn n_objects(&self) -> usize {
        self.nv() + self.ne()
    }

    pub fn src_group(&self, c: usize) -> &GroupDescriptor {
        if c < self.nv() {
            &self.p.vertices[c].group
        } else {
            &self.p.edges[c - self.nv()].data.iso.h
        }
    }

    pub fn dst_group(&self, c: usize) -> &GroupDescriptor {
        if c < self.nv() {
            &self.q.vertices[c].group
        } else {
            &self.q.edges[c - self.nv()].data.iso.h
        }
    }

    pub fn obj_map(&self, g: &GraphMap, c: usize) -> usize {
        if c < self.nv() {
            g.vertex_map[c]
        } else {
            self.nv() + g.edge_map[c - self.nv()]
        }
    }

    pub fn all_finite(&self) -> bool {
        (0..self.n_objects()).all(|c| self.src_group(c).is_finite() && self.dst_group(c).is_finite())
    }

    pub fn layout(&self, g: &GraphMap) -> Layout {
        let mut offsets = Vec::new();
        let mut shapes = Vec::new();
        let mut total = 0;
        for c in 0..self.n_objects() {
            let shape = (self.dst_group(self.obj_map(g, c)).dim(), self.src_group(c).dim());
            offsets.push(total);
            shapes.push(shape);
            total += shape.0 * shape.1;
        }
        Layout { offsets, shapes, total }
    }

    fn hol1(&self, i: usize, g: &GraphMap) -> Result<IntMatrix> {
        let d = &self.p.edges[i].data;
        if g.orientation.is_reversing() && self.opts.conventions.reversing_hol_inverse {
            Ok(matrix_of(&d.hol_inv()?).clone())
        } else {
            Ok(matrix_of(&d.hol).clone())
        }
    }

    /// Lattice of ψ-tuples (as entry vectors) satisfying the homogeneous conditions for `g`.
    pub fn psi_lattice(&self, g: &GraphMap, lay: &Layout) -> Result<Vec<Vec<Int>>> {
        let mut rows: Vec<Vec<Int>> = Vec::new();
        let mut moduli: Vec<Int> = Vec::new();
        let nv = self.nv();
        for i in 0..self.ne() {
            let j = g.edge_map[i];
            let e = nv + i;
            for s in Side::BOTH {
                let v = self.p.endpoint(i, s);
                let t = s.under(g.orientation);
                let w = g.vertex_map[v];
                let phi = matrix_of(self.p.edges[i].data.iso.phi(s));
                let phi2 = matrix_of(self.q.edges[j].data.iso.phi(t));
                let gw = &self.q.vertices[w].group;
                let gm = gw.moduli();
                for r in 0..gw.dim() {
                    for col in 0..phi.cols() {
                        let mut row = vec![0; lay.total];
                        for k in 0..phi.rows() {
                            row[lay.index(v, r, k)] += phi[(k, col)];
                        }
                        for k in 0..phi2.cols() {
                            row[lay.index(e, k, col)] -= phi2[(r, k)];
                        }
                        rows.push(row);
                        moduli.push(gm[r]);
                    }
                }
            }
            if self.layer == Layer::Holonomy {
                let hol2 = matrix_of(&self.q.edges[j].data.hol);
                let hol1 = self.hol1(i, g)?;
                let hm = self.q.edges[j].data.iso.h.moduli();
                for r in 0..hol2.rows() {
                    for col in 0..hol1.cols() {
                        let mut row = vec![0; lay.total];
                        for k in 0..hol2.cols() {
                            row[lay.index(e, k, col)] += hol2[(r, k)];
                        }
                        for k in 0..hol1.rows() {
                            row[lay.index(e, r, k)] -= hol1[(k, col)];
                        }
                        rows.push(row);
                        moduli.push(hm[r]);
                    }
                }
            }
        }
        for c in 0..self.n_objects() {
            let sm = self.src_group(c).moduli();
            let dm = self.dst_group(self.obj_map(g, c)).moduli();
            for (r, &b) in dm.iter().enumerate() {
                for (k, &a) in sm.iter().enumerate() {
                    if a == 0 || (b != 0 && a % b == 0) {
                        continue;
                    }
                    let mut row = vec![0; lay.total];
                    row[lay.index(c, r, k)] = if b == 0 { 1 } else { a };
                    rows.push(row);
                    moduli.push(b);
                }
            }
        }
        if rows.is_empty() {
            return Ok((0..lay.total)
                .map(|k| {
                    let mut v = vec![0; lay.total];
                    v[k] = 1;
                    v
                })
                .collect());
        }
        Ok(kernel_mod(&IntMatrix::from_rows_with_cols(&rows, lay.total), &moduli))
    }

    /// Split an entry vector into reduced matrices.
    pub fn matrices(&self, g: &GraphMap, lay: &Layout, entries: &[Int]) -> Vec<IntMatrix> {
        (0..self.n_objects())
            .map(|c| {
                let (r, k) = lay.shapes[c];
                let rows: Vec<Vec<Int>> = (0..r).map(|a| entries[lay.index(c, a, 0)..lay.index(c, a, 0) + k].to_vec()).collect();
                let mut m = IntMatrix::from_rows_with_cols(&rows, k);
                reduce_rows(&mut m, &self.dst_group(self.obj_map(g, c)).moduli());
                m
            })
            .collect()
    }

    pub fn reduce_entries(&self, g: &GraphMap, lay: &Layout, entries: &mut [Int]) {
        for c in 0..self.n_objects() {
            let dm = self.dst_group(self.obj_map(g, c)).moduli();
            let (r, k) = lay.shapes[c];
            for a in 0..r {
                for b in 0..k {
                    if dm[a] != 0 {
                        let idx = lay.index(c, a, b);
                        entries[idx] = entries[idx].rem_euclid(dm[a]);
                    }
                }
            }
        }
    }

    /// Affine condition (ii) in lattice coordinates: particular point and direction basis.
    pub fn affine(&self, g: &GraphMap, lam: &[Vec<Int>]) -> Option<(Vec<Int>, Vec<Vec<Int>>)> {
        let nb = lam.len();
        let unit_basis = || {
            (0..nb)
                .map(|k| {
                    let mut v = vec![0; nb];
                    v[k] = 1;
                    v
                })
                .collect::<Vec<_>>()
        };
        if self.layer == Layer::Isotropy {
            return Some((vec![0; nb], unit_basis()));
        }
        let lay = self.layout(g);
        let mut h_off = Vec::new();
        let mut nh = 0;
        for i in 0..self.ne() {
            h_off.push(nh);
            nh += self.q.edges[g.edge_map[i]].data.iso.h.dim();
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..self.ne() {
            let j = g.edge_map[i];
            for s in Side::BOTH {
                let v = self.p.endpoint(i, s);
                let t = s.under(g.orientation);
                let gamma = self.p.edges[i].data.gamma(s).repr();
                let gamma2 = self.q.edges[j].data.gamma(t).repr();
                let phi2 = matrix_of(self.q.edges[j].data.iso.phi(t));
                let gm = self.q.vertices[g.vertex_map[v]].group.moduli();
                for r in 0..gm.len() {
                    let mut row = vec![0; nb + nh];
                    for (k, b) in lam.iter().enumerate() {
                        row[k] = (0..gamma.len()).map(|a| b[lay.index(v, r, a)] * gamma[a]).sum();
                    }
                    for a in 0..phi2.cols() {
                        row[nb + h_off[i] + a] = phi2[(r, a)];
                    }
                    rows.push(row);
                    rhs.push(gamma2[r]);
                    moduli.push(gm[r]);
                }
            }
        }
        if rows.is_empty() {
            return Some((vec![0; nb], unit_basis()));
        }
        let e = IntMatrix::from_rows_with_cols(&rows, nb + nh);
        let z = solve_mod(&e, &rhs, &moduli)?;
        let dirs: Vec<Vec<Int>> = kernel_mod(&e, &moduli).into_iter().map(|v| v[..nb].to_vec()).collect();
        Some((z[..nb].to_vec(), lattice_basis(&dirs, nb)))
    }

    /// The `h_i` making ψ satisfy condition (ii), if any.
    pub fn solve_h(&self, g: &GraphMap, psi: &[IntMatrix]) -> Option<Vec<Vec<Int>>> {
        let nv = self.nv();
        let mut out = Vec::new();
        for i in 0..self.ne() {
            let j = g.edge_map[i];
            let h2 = &self.q.edges[j].data.iso.h;
            if self.layer == Layer::Isotropy {
                out.push(vec![0; h2.dim()]);
                continue;
            }
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            let mut moduli = Vec::new();
            for s in Side::BOTH {
                let v = self.p.endpoint(i, s);
                let t = s.under(g.orientation);
                let moved = psi[v].mul_vec(self.p.edges[i].data.gamma(s).repr());
                let gamma2 = self.q.edges[j].data.gamma(t).repr();
                let phi2 = matrix_of(self.q.edges[j].data.iso.phi(t));
                let gm = self.q.vertices[g.vertex_map[v]].group.moduli();
                for r in 0..gm.len() {
                    rows.push(phi2.row(r).to_vec());
                    rhs.push(gamma2[r] - moved[r]);
                    moduli.push(gm[r]);
                }
            }
            let _ = nv;
            let mut h = if rows.is_empty() {
                vec![0; h2.dim()]
            } else {
                solve_mod(&IntMatrix::from_rows_with_cols(&rows, h2.dim()), &rhs, &moduli)?
            };
            reduce_vec(&mut h, &h2.moduli());
            out.push(h);
        }
        Some(out)
    }

    pub fn auto_from_psi(&self, g: &GraphMap, psi: Vec<IntMatrix>) -> Option<Auto> {
        let h = self.solve_h(g, &psi)?;
        let pot = (0..self.ne())
            .map(|i| {
                let dim = |s: Side| self.q.vertices[g.vertex_map[self.p.endpoint(i, s)]].group.dim();
                [vec![0; dim(Side::Plus)], vec![0; dim(Side::Minus)]]
            })
            .collect();
        Some(Auto { graph: g.clone(), psi, h, pot })
    }

    pub fn psi_invertible(&self, g: &GraphMap, psi: &[IntMatrix]) -> bool {
        (0..self.n_objects()).all(|c| is_invertible(&psi[c], self.src_group(c), self.dst_group(self.obj_map(g, c))))
    }

    /// Every free block of every ψ is unipotent.
    pub fn psi_unipotent(&self, psi: &[IntMatrix]) -> bool {
        (0..self.n_objects()).all(|c| {
            let f = self.src_group(c).free_rank();
            if f == 0 || psi[c].rows() < f {
                return true;
            }
            let n = psi[c].block(0..f, 0..f).sub(&IntMatrix::identity(f));
            n.pow(f as u32).is_zero()
        })
    }

    fn acceptable(&self, g: &GraphMap, psi: &[IntMatrix]) -> bool {
        self.psi_invertible(g, psi) && (!self.opts.paper_conventions || self.psi_unipotent(psi))
    }

    /// Looks for one isomorphism over the graph map `g`.
    pub fn find_rep(&self, g: &GraphMap) -> Result<RepSearch> {
        let lay = self.layout(g);
        let lam = self.psi_lattice(g, &lay)?;
        let Some((c0, dirs)) = self.affine(g, &lam) else {
            return Ok(RepSearch::Infeasible);
        };
        let combine = |c: &[Int]| -> Vec<Int> {
            let mut v = vec![0; lay.total];
            for (k, b) in lam.iter().enumerate() {
                if c[k] != 0 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += c[k] * y;
                    }
                }
            }
            v
        };
        let base = combine(&c0);
        let dir_entries: Vec<Vec<Int>> = dirs.iter().map(|d| combine(d)).collect();
        let try_entries = |entries: &[Int]| -> Option<Auto> {
            let psi = self.matrices(g, &lay, entries);
            if self.acceptable(g, &psi) {
                self.auto_from_psi(g, psi)
            } else {
                None
            }
        };
        if self.all_finite() {
            // the coset is finite modulo torsion: enumerate it completely
            let mut start = base.clone();
            self.reduce_entries(g, &lay, &mut start);
            let mut seen: HashMap<Vec<Int>, ()> = HashMap::new();
            let mut queue = vec![start.clone()];
            seen.insert(start, ());
            while let Some(x) = queue.pop() {
                if let Some(a) = try_entries(&x) {
                    return Ok(RepSearch::Found(a));
                }
                for d in &dir_entries {
                    let mut y: Vec<Int> = x.iter().zip(d).map(|(a, b)| a + b).collect();
                    self.reduce_entries(g, &lay, &mut y);
                    if !seen.contains_key(&y) {
                        if seen.len() >= self.opts.enumeration_cap {
                            return Ok(RepSearch::NotFound { exhaustive: false });
                        }
                        seen.insert(y.clone(), ());
                        queue.push(y);
                    }
                }
            }
            return Ok(RepSearch::NotFound { exhaustive: true });
        }
        let k = dir_entries.len();
        if k == 0 {
            return Ok(match try_entries(&base) {
                Some(a) => RepSearch::Found(a),
                None => RepSearch::NotFound { exhaustive: true },
            });
        }
        let mut visited = 0usize;
        for radius in 0..=self.opts.search_height {
            let mut t = vec![-radius; k];
            loop {
                if t.iter().any(|x| x.abs() == radius) {
                    visited += 1;
                    if visited > self.opts.enumeration_cap {
                        return Ok(RepSearch::NotFound { exhaustive: false });
                    }
                    let mut v = base.clone();
                    for (c, d) in t.iter().zip(&dir_entries) {
                        if *c != 0 {
                            for (x, y) in v.iter_mut().zip(d) {
                                *x += c * y;
                            }
                        }
                    }
                    if let Some(a) = try_entries(&v) {
                        return Ok(RepSearch::Found(a));
                    }
                }
                // odometer over [-radius, radius]^k
                let mut pos = 0;
                while pos < k && t[pos] == radius {
                    t[pos] = -radius;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
                t[pos] += 1;
            }
        }
        Ok(RepSearch::NotFound { exhaustive: false })
    }

    /// Converts to the public representation.
    pub fn to_public(&self, a: &Auto) -> Result<DiscreteIso> {
        let nv = self.nv();
        let g = &a.graph;
        let mut edge_isos = Vec::new();
        for i in 0..self.ne() {
            let j = g.edge_map[i];
            let (d1, d2) = (&self.p.edges[i].data, &self.q.edges[j].data);
            let side_map = |s: Side| -> Result<Homomorphism> {
                let v = self.p.endpoint(i, s);
                Homomorphism::from_matrix(d1.iso.group(s).clone(), d2.iso.group(s.under(g.orientation)).clone(), a.psi[v].clone())
            };
            let base = IsotropyMap {
                source: d1.iso.clone(),
                target: d2.iso.clone(),
                orientation: g.orientation,
                psi: Homomorphism::from_matrix(d1.iso.h.clone(), d2.iso.h.clone(), a.psi[nv + i].clone())?,
                psi_plus: side_map(Side::Plus)?,
                psi_minus: side_map(Side::Minus)?,
                witnesses: None,
            };
            edge_isos.push(HolonomyIso { base, h: d2.iso.h.element(a.h[i].clone())? });
        }
        let mut cocycles = BTreeMap::new();
        for v in 0..nv {
            let s = self.p.vertices[v].sign;
            let grp = &self.q.vertices[g.vertex_map[v]].group;
            let b = self.p.base_edge(v);
            for i in self.p.incident(v) {
                if i == b {
                    continue;
                }
                let diff: Vec<Int> = a.pot[i][side_index(s)].iter().zip(&a.pot[b][side_index(s)]).map(|(x, y)| x - y).collect();
                let el = grp.element(diff)?;
                if !el.is_identity() {
                    cocycles.insert((v, i), el);
                }
            }
        }
        Ok(DiscreteIso { vertex_map: g.vertex_map.clone(), edge_map: g.edge_map.clone(), orientation: g.orientation, edge_isos, cocycles })
    }

    /// Reads a public isomorphism back into solver coordinates.
    pub fn from_public(&self, f: &DiscreteIso) -> Result<Auto> {
        let nv = self.nv();
        let graph = GraphMap { orientation: f.orientation, edge_map: f.edge_map.clone(), vertex_map: f.vertex_map.clone() };
        let mut psi = Vec::new();
        for v in 0..nv {
            let b = self.p.base_edge(v);
            let m = f.edge_isos[b].base.psi_side(self.p.vertices[v].sign);
            psi.push(m.matrix().ok_or_else(|| Error::UnsupportedBackend("free".into()))?.clone());
        }
        for m in &f.edge_isos {
            psi.push(m.base.psi.matrix().ok_or_else(|| Error::UnsupportedBackend("free".into()))?.clone());
        }
        let h = f.edge_isos.iter().map(|m| m.h.repr().to_vec()).collect();
        let mut pot = Vec::new();
        for i in 0..self.ne() {
            let mut pair: [Vec<Int>; 2] = [Vec::new(), Vec::new()];
            for s in Side::BOTH {
                let v = self.p.endpoint(i, s);
                pair[side_index(s)] = f.cocycle(self.p, self.q, v, i, self.p.base_edge(v))?.repr().to_vec();
            }
            pot.push(pair);
        }
        Ok(Auto { graph, psi, h, pot })
    }
}

/// Operations on automorphisms of one presentation.
pub(crate) struct AutGroup<'a> {
    pub ctx: Ctx<'a>,
    /// Coordinates on translations modulo inner ones and cocycle constants.
    pub tq: QuotientCoords,
    pub t_dim: usize,
}

impl<'a> AutGroup<'a> {
    pub fn new(p: &'a DiscretePresentation, layer: Layer, opts: SolveOptions) -> Self {
        let ctx = Ctx { p, q: p, layer, opts };
        let (tq, t_dim) = translation_quotient(&ctx);
        AutGroup { ctx, tq, t_dim }
    }

    fn p(&self) -> &DiscretePresentation {
        self.ctx.p
    }

    pub fn identity(&self) -> Auto {
        let g = GraphMap::identity(self.p());
        let psi = (0..self.ctx.n_objects()).map(|c| IntMatrix::identity(self.ctx.src_group(c).dim())).collect();
        self.ctx.auto_from_psi(&g, psi).expect("identity satisfies every condition")
    }

    fn vertex_moduli(&self, v: usize) -> Vec<Int> {
        self.p().vertices[v].group.moduli()
    }

    /// `a ∘ b`.
    pub fn compose(&self, a: &Auto, b: &Auto) -> Auto {
        let ctx = &self.ctx;
        let nv = ctx.nv();
        let graph = a.graph.compose(&b.graph);
        let psi = (0..ctx.n_objects())
            .map(|c| {
                let mut m = &a.psi[ctx.obj_map(&b.graph, c)] * &b.psi[c];
                reduce_rows(&mut m, &ctx.src_group(ctx.obj_map(&graph, c)).moduli());
                m
            })
            .collect();
        let h = (0..ctx.ne())
            .map(|i| {
                let bi = b.graph.edge_map[i];
                let moved = a.psi[nv + bi].mul_vec(&b.h[i]);
                let mut v: Vec<Int> = a.h[bi].iter().zip(&moved).map(|(x, y)| x + y).collect();
                reduce_vec(&mut v, &self.p().edges[graph.edge_map[i]].data.iso.h.moduli());
                v
            })
            .collect();
        let pot = (0..ctx.ne())
            .map(|i| {
                let bi = b.graph.edge_map[i];
                let mut pair: [Vec<Int>; 2] = [Vec::new(), Vec::new()];
                for s in Side::BOTH {
                    let t = s.under(b.graph.orientation);
                    let w = b.graph.vertex_map[self.p().endpoint(i, s)];
                    let moved = a.psi[w].mul_vec(&b.pot[i][side_index(s)]);
                    let mut v: Vec<Int> = a.pot[bi][side_index(t)].iter().zip(&moved).map(|(x, y)| x + y).collect();
                    reduce_vec(&mut v, &self.vertex_moduli(a.graph.vertex_map[w]));
                    pair[side_index(s)] = v;
                }
                pair
            })
            .collect();
        Auto { graph, psi, h, pot }
    }

    pub fn inverse(&self, a: &Auto) -> Auto {
        let ctx = &self.ctx;
        let nv = ctx.nv();
        let n = ctx.n_objects();
        let inv_perm = |m: &[usize]| {
            let mut out = vec![0; m.len()];
            for (x, &y) in m.iter().enumerate() {
                out[y] = x;
            }
            out
        };
        let graph = GraphMap { orientation: a.graph.orientation, edge_map: inv_perm(&a.graph.edge_map), vertex_map: inv_perm(&a.graph.vertex_map) };
        let mut psi = vec![IntMatrix::zeros(0, 0); n];
        for c in 0..n {
            let tc = ctx.obj_map(&a.graph, c);
            let hom = Homomorphism::from_matrix(ctx.src_group(c).clone(), ctx.src_group(tc).clone(), a.psi[c].clone()).expect("shape");
            let inv = hom.abelian_inverse().expect("abelian").expect("automorphism");
            psi[tc] = inv.matrix().expect("abelian").clone();
        }
        let neg = |m: &IntMatrix, v: &[Int], moduli: &[Int]| {
            let mut out: Vec<Int> = m.mul_vec(v).into_iter().map(|x| -x).collect();
            reduce_vec(&mut out, moduli);
            out
        };
        let mut h = vec![Vec::new(); ctx.ne()];
        let mut pot = vec![[Vec::new(), Vec::new()]; ctx.ne()];
        for i in 0..ctx.ne() {
            let j = a.graph.edge_map[i];
            h[j] = neg(&psi[nv + j], &a.h[i], &self.p().edges[i].data.iso.h.moduli());
            for s in Side::BOTH {
                let v = self.p().endpoint(i, s);
                let w = a.graph.vertex_map[v];
                let t = s.under(a.graph.orientation);
                pot[j][side_index(t)] = neg(&psi[w], &a.pot[i][side_index(s)], &self.vertex_moduli(v));
            }
        }
        Auto { graph, psi, h, pot }
    }

    pub fn pow(&self, a: &Auto, n: Int) -> Auto {
        let mut base = if n < 0 { self.inverse(a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.compose(&base, &acc);
            }
            base = self.compose(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn product(&self, gens: &[Auto], exps: &[Int]) -> Auto {
        gens.iter().zip(exps).fold(self.identity(), |acc, (g, &n)| if n == 0 { acc } else { self.compose(&self.pow(g, n), &acc) })
    }

    pub fn psi_is_identity(&self, a: &Auto) -> bool {
        a.graph.is_identity() && a.psi.iter().enumerate().all(|(c, m)| *m == IntMatrix::identity(self.ctx.src_group(c).dim()))
    }

    /// Translation part as one vector (`h` blocks, then potentials).
    pub fn translation(&self, a: &Auto) -> Vec<Int> {
        let mut v = Vec::with_capacity(self.t_dim);
        if self.ctx.layer == Layer::Holonomy {
            for h in &a.h {
                v.extend_from_slice(h);
            }
        }
        for pair in &a.pot {
            v.extend_from_slice(&pair[0]);
            v.extend_from_slice(&pair[1]);
        }
        v
    }

    pub fn is_inner(&self, a: &Auto) -> bool {
        self.psi_is_identity(a) && self.tq.is_zero(&self.translation(a))
    }

    pub fn same_class(&self, a: &Auto, b: &Auto) -> bool {
        self.is_inner(&self.compose(&self.inverse(a), b))
    }

    /// Generators of the translations `{(h, cocycles) : φ±(h) = 0}`.
    pub fn translation_generators(&self) -> Vec<Auto> {
        let id = self.identity();
        let mut out = Vec::new();
        if self.ctx.layer == Layer::Holonomy {
            for (i, e) in self.p().edges.iter().enumerate() {
                let phi = matrix_of(&e.data.iso.phi_plus).vstack(matrix_of(&e.data.iso.phi_minus));
                let mut moduli = e.data.iso.g_plus.moduli();
                moduli.extend(e.data.iso.g_minus.moduli());
                let basis = if phi.rows() == 0 {
                    (0..e.data.iso.h.dim())
                        .map(|k| {
                            let mut v = vec![0; e.data.iso.h.dim()];
                            v[k] = 1;
                            v
                        })
                        .collect()
                } else {
                    kernel_mod(&phi, &moduli)
                };
                for mut b in basis {
                    reduce_vec(&mut b, &e.data.iso.h.moduli());
                    let mut a = id.clone();
                    a.h[i] = b;
                    out.push(a);
                }
            }
        }
        for i in 0..self.ctx.ne() {
            for s in Side::BOTH {
                let v = self.p().endpoint(i, s);
                for k in 0..self.p().vertices[v].group.dim() {
                    let mut a = id.clone();
                    a.pot[i][side_index(s)][k] = 1;
                    out.push(a);
                }
            }
        }
        out
    }

    /// The twisting automorphism about edge `t`.
    pub fn twist(&self, t: usize) -> Auto {
        let mut a = self.identity();
        let d = &self.p().edges[t].data;
        if self.ctx.layer == Layer::Holonomy {
            a.psi[self.ctx.nv() + t] = matrix_of(&d.hol).clone();
            for s in Side::BOTH {
                a.pot[t][side_index(s)] = d.gamma(s).repr().to_vec();
            }
        }
        a
    }
}

/// `T / (inner + cocycle constants + torsion)` for automorphisms of `ctx.p`.
fn translation_quotient(ctx: &Ctx) -> (QuotientCoords, usize) {
    let p = ctx.p;
    let hol_layer = ctx.layer == Layer::Holonomy;
    let mut h_off = Vec::new();
    let mut dim = 0;
    for e in &p.edges {
        h_off.push(dim);
        if hol_layer {
            dim += e.data.iso.h.dim();
        }
    }
    let mut pot_off = Vec::new();
    for i in 0..p.edges.len() {
        let mut pair = [0; 2];
        for s in Side::BOTH {
            pair[side_index(s)] = dim;
            dim += p.vertices[p.endpoint(i, s)].group.dim();
        }
        pot_off.push(pair);
    }
    let mut rels: Vec<Vec<Int>> = Vec::new();
    let unit = |at: usize, val: Int| {
        let mut v = vec![0; dim];
        v[at] = val;
        v
    };
    for (i, e) in p.edges.iter().enumerate() {
        if hol_layer {
            for (k, &m) in e.data.iso.h.moduli().iter().enumerate() {
                if m != 0 {
                    rels.push(unit(h_off[i] + k, m));
                }
            }
        }
        for s in Side::BOTH {
            let g = &p.vertices[p.endpoint(i, s)].group;
            for (k, &m) in g.moduli().iter().enumerate() {
                if m != 0 {
                    rels.push(unit(pot_off[i][side_index(s)] + k, m));
                }
            }
        }
    }
    for v in 0..p.vertices.len() {
        let s = p.vertices[v].sign;
        for k in 0..p.vertices[v].group.dim() {
            let mut r = vec![0; dim];
            for i in p.incident(v) {
                r[pot_off[i][side_index(s)] + k] = 1;
            }
            rels.push(r);
        }
    }
    if !ctx.opts.paper_conventions {
        for (i, e) in p.edges.iter().enumerate() {
            let hdim = e.data.iso.h.dim();
            let hol = matrix_of(&e.data.hol);
            for k in 0..hdim {
                let mut r = vec![0; dim];
                if hol_layer {
                    for a in 0..hdim {
                        r[h_off[i] + a] = hol[(a, k)] - Int::from(a == k);
                    }
                }
                for s in Side::BOTH {
                    let phi = matrix_of(e.data.iso.phi(s));
                    for a in 0..phi.rows() {
                        r[pot_off[i][side_index(s)] + a] = phi[(a, k)];
                    }
                }
                rels.push(r);
            }
        }
    }
    (QuotientCoords::new(&rels, dim), dim)
}

/// Free-block data of the σ = id unit group, when it has the split shape
/// "scalar plus square-zero" on every component.
pub(crate) struct UnitAnalysis {
    pub generators: Vec<Vec<IntMatrix>>,
    pub certified: bool,
    pub exhaustive: bool,
    /// Basis of the square-zero parts, as concatenated free blocks.
    pub radical_basis: Vec<Vec<Int>>,
    /// Objects with nonzero free rank.
    pub components: Vec<usize>,
    pub notes: Vec<String>,
}

impl<'a> AutGroup<'a> {
    fn free_block(&self, c: usize, psi_entries: &[Int], lay: &Layout) -> IntMatrix {
        let f = self.ctx.src_group(c).free_rank();
        let mut m = IntMatrix::zeros(f, f);
        for r in 0..f {
            for k in 0..f {
                m[(r, k)] = psi_entries[lay.index(c, r, k)];
            }
        }
        m
    }

    /// Concatenated `F_c − I` over free components of a ψ-tuple.
    pub fn radical_part(&self, psi: &[IntMatrix], components: &[usize]) -> Vec<Int> {
        let mut v = Vec::new();
        for &c in components {
            let f = self.ctx.src_group(c).free_rank();
            let n = psi[c].block(0..f, 0..f).sub(&IntMatrix::identity(f));
            for r in 0..f {
                v.extend_from_slice(n.row(r));
            }
        }
        v
    }

    /// Sign of the scalar part of each free block.
    pub fn signs(&self, psi: &[IntMatrix], components: &[usize]) -> Vec<Int> {
        components
            .iter()
            .map(|&c| {
                let f = self.ctx.src_group(c).free_rank() as Int;
                let tr: Int = (0..f as usize).map(|k| psi[c][(k, k)]).sum();
                if tr * f < 0 || (tr == 0 && f > 0) {
                    1
                } else {
                    0
                }
            })
            .collect()
    }

    pub fn analyze_units(&self) -> Result<UnitAnalysis> {
        let ctx = &self.ctx;
        let g = GraphMap::identity(ctx.p);
        let lay = ctx.layout(&g);
        let lam = ctx.psi_lattice(&g, &lay)?;
        let id_entries: Vec<Int> = {
            let mut v = vec![0; lay.total];
            for c in 0..ctx.n_objects() {
                for k in 0..lay.shapes[c].0 {
                    v[lay.index(c, k, k)] = 1;
                }
            }
            v
        };
        let (_, dirs) = ctx.affine(&g, &lam).ok_or_else(|| Error::Invalid("identity violates condition (ii)".into()))?;
        let combine = |c: &[Int]| -> Vec<Int> {
            let mut v = vec![0; lay.total];
            for (k, b) in lam.iter().enumerate() {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c[k] * y;
                }
            }
            v
        };
        // X-lattice: ψ = 1 + X
        let xs: Vec<Vec<Int>> = lattice_basis(&dirs.iter().map(|d| combine(d)).collect::<Vec<_>>(), lay.total);
        let components: Vec<usize> = (0..ctx.n_objects()).filter(|&c| ctx.src_group(c).free_rank() > 0).collect();
        let mut notes = Vec::new();

        // certificate: each free block is λI + N with all N pairwise square-zero
        let mut lambdas: Vec<Vec<Int>> = Vec::new();
        let mut radicals: Vec<Vec<IntMatrix>> = vec![Vec::new(); components.len()];
        let mut certified = true;
        for x in &xs {
            let mut col = Vec::new();
            for (ci, &c) in components.iter().enumerate() {
                let f = ctx.src_group(c).free_rank() as Int;
                let fb = self.free_block(c, x, &lay);
                let tr: Int = (0..f as usize).map(|k| fb[(k, k)]).sum();
                if tr % f != 0 {
                    certified = false;
                }
                let lam_c = tr / f;
                col.push(lam_c);
                radicals[ci].push(fb.sub(&IntMatrix::identity(f as usize).scale(lam_c)));
            }
            lambdas.push(col);
        }
        for rs in &radicals {
            for a in rs {
                for b in rs {
                    if !(a * b).is_zero() {
                        certified = false;
                    }
                }
            }
        }
        if !certified {
            notes.push("free blocks are not scalar plus square-zero; unit group searched with bounded height".into());
            return self.bounded_units(&g, &lay, &id_entries, &xs, components, notes);
        }

        let nc = components.len();
        let lm = IntMatrix::from_columns(&lambdas, nc);
        // Λ₀ = {X : λ(X) = 0}
        let kernel_coeffs: Vec<Vec<Int>> = if nc == 0 {
            (0..xs.len())
                .map(|k| {
                    let mut v = vec![0; xs.len()];
                    v[k] = 1;
                    v
                })
                .collect()
        } else {
            crate::groups::lattice::kernel(&lm)
        };
        let lam0: Vec<Vec<Int>> = kernel_coeffs
            .iter()
            .map(|c| {
                let mut v = vec![0; lay.total];
                for (k, x) in xs.iter().enumerate() {
                    for (a, b) in v.iter_mut().zip(x) {
                        *a += c[k] * b;
                    }
                }
                v
            })
            .collect();
        let to_psi = |x: &[Int]| -> Vec<IntMatrix> {
            let e: Vec<Int> = x.iter().zip(&id_entries).map(|(a, b)| a + b).collect();
            ctx.matrices(&g, &lay, &e)
        };
        let n_of = |x: &[Int]| -> Vec<Int> { self.radical_part(&to_psi(x), &components) };
        let n_gens: Vec<Vec<Int>> = lam0.iter().map(|y| n_of(y)).collect();
        let n_dim: usize = components.iter().map(|&c| ctx.src_group(c).free_rank().pow(2)).sum();
        let radical_basis = lattice_basis(&n_gens, n_dim);
        let mut lifts = Vec::new();
        for rho in &radical_basis {
            let a = lattice_coords(&n_gens, rho).ok_or_else(|| Error::Invalid("radical basis not in span".into()))?;
            let mut y = vec![0; lay.total];
            for (k, yk) in lam0.iter().enumerate() {
                for (s, t) in y.iter_mut().zip(yk) {
                    *s += a[k] * t;
                }
            }
            lifts.push(y);
        }
        let e = (0..ctx.n_objects()).map(|c| ctx.src_group(c).exponent()).fold(1, num_integer::lcm);

        // finite image Θ(Λ₀): radical coordinates mod e and torsion rows mod their moduli
        let theta = |x: &[Int]| -> Vec<Int> {
            let mut key: Vec<Int> = if radical_basis.is_empty() {
                Vec::new()
            } else {
                lattice_coords(&radical_basis, &n_of(x)).expect("radical coordinates").into_iter().map(|c| c.rem_euclid(e)).collect()
            };
            for c in 0..ctx.n_objects() {
                let dm = ctx.src_group(c).moduli();
                for (r, &m) in dm.iter().enumerate() {
                    if m != 0 {
                        for k in 0..lay.shapes[c].1 {
                            key.push(x[lay.index(c, r, k)].rem_euclid(m));
                        }
                    }
                }
            }
            key
        };
        let normalize = |x: Vec<Int>| -> Vec<Int> {
            if radical_basis.is_empty() {
                return x;
            }
            let coords = lattice_coords(&radical_basis, &n_of(&x)).expect("radical coordinates");
            let mut y = x;
            for (k, c) in coords.iter().enumerate() {
                let q = c.div_euclid(e);
                if q != 0 {
                    for (s, t) in y.iter_mut().zip(&lifts[k]) {
                        *s -= q * e * t;
                    }
                }
            }
            y
        };
        let mut classes: Vec<Vec<Int>> = Vec::new();
        let mut seen: HashMap<Vec<Int>, usize> = HashMap::new();
        let zero = vec![0; lay.total];
        seen.insert(theta(&zero), 0);
        classes.push(zero);
        let mut head = 0;
        let mut exhaustive = true;
        while head < classes.len() {
            let x = classes[head].clone();
            head += 1;
            for y in &lam0 {
                let z: Vec<Int> = normalize(x.iter().zip(y).map(|(a, b)| a + b).collect());
                let key = theta(&z);
                if !seen.contains_key(&key) {
                    if classes.len() >= ctx.opts.enumeration_cap {
                        exhaustive = false;
                        break;
                    }
                    seen.insert(key, classes.len());
                    classes.push(z);
                }
            }
            if !exhaustive {
                notes.push("finite part of the unit group exceeded the enumeration cap".into());
                break;
            }
        }
        let mut generators: Vec<Vec<IntMatrix>> = Vec::new();
        for x in &classes {
            let psi = to_psi(x);
            if ctx.psi_invertible(&g, &psi) && !psi.iter().enumerate().all(|(c, m)| *m == IntMatrix::identity(ctx.src_group(c).dim())) {
                generators.push(psi);
            }
        }
        for y in &lifts {
            let ey: Vec<Int> = y.iter().map(|t| t * e).collect();
            generators.push(to_psi(&ey));
        }
        if !ctx.opts.paper_conventions && nc > 0 {
            for mask in 1u32..(1 << nc) {
                let target: Vec<Int> = (0..nc).map(|k| if mask >> k & 1 == 1 { -2 } else { 0 }).collect();
                let Some(a) = crate::groups::lattice::solve(&lm, &target) else { continue };
                let xs_sign: Vec<Int> = {
                    let mut v = vec![0; lay.total];
                    for (k, x) in xs.iter().enumerate() {
                        for (s, t) in v.iter_mut().zip(x) {
                            *s += a[k] * t;
                        }
                    }
                    v
                };
                for x in &classes {
                    let cand: Vec<Int> = xs_sign.iter().zip(x).map(|(s, t)| s + t).collect();
                    let psi = to_psi(&cand);
                    if ctx.psi_invertible(&g, &psi) {
                        generators.push(psi);
                        break;
                    }
                }
            }
        }
        Ok(UnitAnalysis { generators, certified: true, exhaustive, radical_basis, components, notes })
    }

    fn bounded_units(
        &self,
        g: &GraphMap,
        lay: &Layout,
        id_entries: &[Int],
        xs: &[Vec<Int>],
        components: Vec<usize>,
        notes: Vec<String>,
    ) -> Result<UnitAnalysis> {
        let ctx = &self.ctx;
        let mut generators = Vec::new();
        let k = xs.len();
        let height = ctx.opts.search_height.min(2);
        let mut t = vec![-height; k];
        let mut visited = 0;
        'outer: loop {
            visited += 1;
            if visited > ctx.opts.enumeration_cap {
                break;
            }
            let mut e = id_entries.to_vec();
            for (c, x) in t.iter().zip(xs) {
                for (a, b) in e.iter_mut().zip(x) {
                    *a += c * b;
                }
            }
            let psi = ctx.matrices(g, lay, &e);
            if ctx.psi_invertible(g, &psi) && (!ctx.opts.paper_conventions || ctx.psi_unipotent(&psi)) && !generators.contains(&psi) {
                generators.push(psi);
            }
            let mut pos = 0;
            while pos < k && t[pos] == height {
                t[pos] = -height;
                pos += 1;
            }
            if pos == k {
                break 'outer;
            }
            t[pos] += 1;
        }
        Ok(UnitAnalysis { generators, certified: false, exhaustive: false, radical_basis: Vec::new(), components, notes })
    }
}
