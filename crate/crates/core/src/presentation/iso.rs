use std::collections::BTreeMap;

use super::DiscretePresentation;
use crate::error::{Error, Result};
use crate::groups::{lattice, GroupElement, Homomorphism, IntMatrix};
use crate::holonomy::{compose_holonomy_isos, inner_holonomy, invert_holonomy_iso, twist_class, Conventions, HolonomyIso};
use crate::isotropy::{Orientation, Side};
use crate::verdict::Verdict;

/// An isomorphism of discrete presentations.
///
/// Cocycles are stored against the base edge of each source vertex (its first
/// incident edge): `cocycles[(v, i)] = g_{i,b(v)}`, an element of the target
/// group at `F(v)`. Missing entries are the identity; all other pairs follow
/// from `g_ij = g_ib · g_jb⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteIso {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub orientation: Orientation,
    /// Indexed by source edge; maps edge `i`'s data to edge `F(i)`'s data.
    pub edge_isos: Vec<HolonomyIso>,
    pub cocycles: BTreeMap<(usize, usize), GroupElement>,
}

impl DiscreteIso {
    pub fn identity(p: &DiscretePresentation) -> Self {
        DiscreteIso {
            vertex_map: (0..p.vertices.len()).collect(),
            edge_map: (0..p.edges.len()).collect(),
            orientation: Orientation::Preserving,
            edge_isos: p.edges.iter().map(|e| HolonomyIso::identity(&e.data)).collect(),
            cocycles: BTreeMap::new(),
        }
    }

    pub fn is_graph_identity(&self) -> bool {
        self.orientation == Orientation::Preserving
            && self.vertex_map.iter().enumerate().all(|(a, &b)| a == b)
            && self.edge_map.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// `g_ij` at source vertex `v` (both edges incident to `v`).
    pub fn cocycle(&self, p1: &DiscretePresentation, p2: &DiscretePresentation, v: usize, i: usize, j: usize) -> Result<GroupElement> {
        let g = &p2.vertices[self.vertex_map[v]].group;
        let b = p1.base_edge(v);
        let at = |k: usize| -> GroupElement {
            if k == b {
                g.identity()
            } else {
                self.cocycles.get(&(v, k)).cloned().unwrap_or_else(|| g.identity())
            }
        };
        g.div(&at(i), &at(j))
    }

    /// Reasons the map fails; empty when it passes.
    pub fn failures(&self, p1: &DiscretePresentation, p2: &DiscretePresentation, conv: Conventions) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let (nv, ne) = (p1.vertices.len(), p1.edges.len());
        if self.vertex_map.len() != nv || self.edge_map.len() != ne || self.edge_isos.len() != ne {
            return Err(Error::Mismatch("map sizes do not match the source presentation".into()));
        }
        if p2.vertices.len() != nv || p2.edges.len() != ne {
            out.push("vertex or edge counts differ".into());
            return Ok(out);
        }
        if !is_bijection(&self.vertex_map, nv) || !is_bijection(&self.edge_map, ne) {
            out.push("graph map is not a bijection".into());
            return Ok(out);
        }
        let o = self.orientation;
        for i in 0..ne {
            let fi = self.edge_map[i];
            for s in Side::BOTH {
                if self.vertex_map[p1.endpoint(i, s)] != p2.endpoint(fi, s.under(o)) {
                    out.push(format!("edge {:?}: endpoint on side {} is not sent to the matching endpoint", p1.edges[i].id, s.symbol()));
                }
            }
            let m = &self.edge_isos[i];
            if m.orientation() != o {
                out.push(format!("edge {:?}: orientation differs from the global orientation", p1.edges[i].id));
            }
            let (d1, d2) = (&p1.edges[i].data, &p2.edges[fi].data);
            if m.base.source != d1.iso || m.base.target != d2.iso {
                out.push(format!("edge {:?}: holonomy isomorphism has the wrong endpoints", p1.edges[i].id));
                continue;
            }
            out.extend(m.failures(d1, d2, conv)?.into_iter().map(|f| format!("edge {:?}: {f}", p1.edges[i].id)));
        }
        if !out.is_empty() {
            return Ok(out);
        }
        for (&(v, i), g) in &self.cocycles {
            if v >= nv || !p1.incident(v).contains(&i) || p1.base_edge(v) == i {
                out.push(format!("cocycle entry ({v}, {i}) is not a non-base incidence"));
            } else if g.parent != p2.vertices[self.vertex_map[v]].group {
                out.push(format!("cocycle entry ({v}, {i}) lies in the wrong group"));
            }
        }
        if !out.is_empty() {
            return Ok(out);
        }
        // (iii) ψ_i = C_{g_ij} ∘ ψ_j at every vertex
        for v in 0..nv {
            let s = p1.vertices[v].sign;
            let inc = p1.incident(v);
            for &i in &inc {
                for &j in &inc {
                    let g = self.cocycle(p1, p2, v, i, j)?;
                    let lhs = self.edge_isos[i].base.psi_side(s);
                    let rhs = Homomorphism::conjugation(&g).compose(self.edge_isos[j].base.psi_side(s))?;
                    if *lhs != rhs {
                        out.push(format!(
                            "vertex {:?}: cocycle condition fails for edges {:?}, {:?}",
                            p1.vertices[v].id, p1.edges[i].id, p1.edges[j].id
                        ));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

pub fn check_discrete_iso(f: &DiscreteIso, p1: &DiscretePresentation, p2: &DiscretePresentation, conv: Conventions) -> Result<bool> {
    Ok(f.failures(p1, p2, conv)?.is_empty())
}

/// Base-edge storage from a pair function `g(i, j)` on each source vertex.
fn rebase<F>(p1: &DiscretePresentation, mut pair: F) -> Result<BTreeMap<(usize, usize), GroupElement>>
where
    F: FnMut(usize, usize, usize) -> Result<GroupElement>,
{
    let mut out = BTreeMap::new();
    for v in 0..p1.vertices.len() {
        let b = p1.base_edge(v);
        for i in p1.incident(v) {
            if i != b {
                let g = pair(v, i, b)?;
                if !g.is_identity() {
                    out.insert((v, i), g);
                }
            }
        }
    }
    Ok(out)
}

/// `F′ ∘ F` for `F: P₁ → P₂`, `F′: P₂ → P₃`.
pub fn compose_discrete_isos(
    f2: &DiscreteIso,
    f1: &DiscreteIso,
    p1: &DiscretePresentation,
    p2: &DiscretePresentation,
    p3: &DiscretePresentation,
) -> Result<DiscreteIso> {
    if f1.vertex_map.len() != p1.vertices.len() || f2.vertex_map.len() != p2.vertices.len() {
        return Err(Error::Mismatch("isomorphisms do not chain".into()));
    }
    let edge_isos = (0..p1.edges.len())
        .map(|i| compose_holonomy_isos(&f2.edge_isos[f1.edge_map[i]], &f1.edge_isos[i]))
        .collect::<Result<Vec<_>>>()?;
    let cocycles = rebase(p1, |v, i, j| {
        let w = f1.vertex_map[v];
        let s2 = p2.vertices[w].sign;
        let g3 = &p3.vertices[f2.vertex_map[w]].group;
        let outer = f2.cocycle(p2, p3, w, f1.edge_map[i], f1.edge_map[j])?;
        let moved = f2.edge_isos[f1.edge_map[i]].base.psi_side(s2).apply(&f1.cocycle(p1, p2, v, i, j)?)?;
        g3.mul(&outer, &moved)
    })?;
    Ok(DiscreteIso {
        vertex_map: f1.vertex_map.iter().map(|&w| f2.vertex_map[w]).collect(),
        edge_map: f1.edge_map.iter().map(|&k| f2.edge_map[k]).collect(),
        orientation: f2.orientation.compose(f1.orientation),
        edge_isos,
        cocycles,
    })
}

/// Inverse of `F: P₁ → P₂`.
pub fn invert_discrete_iso(f: &DiscreteIso, p1: &DiscretePresentation, p2: &DiscretePresentation) -> Result<DiscreteIso> {
    let inv_perm = |m: &[usize]| {
        let mut out = vec![0; m.len()];
        for (a, &b) in m.iter().enumerate() {
            out[b] = a;
        }
        out
    };
    let vinv = inv_perm(&f.vertex_map);
    let einv = inv_perm(&f.edge_map);
    let edge_isos = einv.iter().map(|&i| invert_holonomy_iso(&f.edge_isos[i])).collect::<Result<Vec<_>>>()?;
    let cocycles = rebase(p2, |w, k, l| {
        // g⁻¹_{F i, F j} = ψ⁻¹(g_ij)⁻¹ with ψ⁻¹ the inverse map at edge F(i)
        let v = vinv[w];
        let (i, j) = (einv[k], einv[l]);
        let g1 = &p1.vertices[v].group;
        let s = p2.vertices[w].sign;
        let g = edge_isos[k].base.psi_side(s).apply(&f.cocycle(p1, p2, v, i, j)?)?;
        g1.inv(&g)
    })?;
    Ok(DiscreteIso { vertex_map: vinv, edge_map: einv, orientation: f.orientation, edge_isos, cocycles })
}

/// Inner automorphism from one `α_i ∈ Hⁱ` per edge.
pub fn inner_presentation(p: &DiscretePresentation, alphas: &[GroupElement]) -> Result<DiscreteIso> {
    if alphas.len() != p.edges.len() {
        return Err(Error::DimensionMismatch(format!("need {} elements, got {}", p.edges.len(), alphas.len())));
    }
    let edge_isos = p.edges.iter().zip(alphas).map(|(e, a)| inner_holonomy(&e.data, a)).collect::<Result<Vec<_>>>()?;
    let cocycles = rebase(p, |v, i, j| {
        let s = p.vertices[v].sign;
        let g = &p.vertices[v].group;
        g.div(&p.edges[i].data.iso.phi(s).apply(&alphas[i])?, &p.edges[j].data.iso.phi(s).apply(&alphas[j])?)
    })?;
    Ok(DiscreteIso {
        vertex_map: (0..p.vertices.len()).collect(),
        edge_map: (0..p.edges.len()).collect(),
        orientation: Orientation::Preserving,
        edge_isos,
        cocycles,
    })
}

/// The twisting automorphism about edge `id`.
pub fn twisting_presentation(p: &DiscretePresentation, id: &str) -> Result<DiscreteIso> {
    let t = p.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))?;
    let mut f = DiscreteIso::identity(p);
    f.edge_isos[t] = twist_class(&p.edges[t].data)?;
    f.cocycles = rebase(p, |v, i, j| {
        let s = p.vertices[v].sign;
        let g = &p.vertices[v].group;
        let gamma = p.edges[t].data.gamma(s);
        Ok(if i == t && j != t {
            gamma.clone()
        } else if j == t && i != t {
            g.inv(gamma)?
        } else {
            g.identity()
        })
    })?;
    Ok(f)
}

/// Whether an automorphism is inner; returns the `α_i` on success.
///
/// Abelian presentations are decided by one linear system. With free groups
/// only a supplied witness can confirm.
pub fn is_inner_presentation(
    f: &DiscreteIso,
    p: &DiscretePresentation,
    witness: Option<&[GroupElement]>,
) -> Result<Verdict<Vec<GroupElement>>> {
    if f.vertex_map.len() != p.vertices.len() || f.edge_map.len() != p.edges.len() {
        return Err(Error::NotAutomorphism("sizes differ from the presentation".into()));
    }
    if !f.is_graph_identity() {
        return Ok(Verdict::No("underlying graph map is not the identity".into()));
    }
    if let Some(alphas) = witness {
        let g = inner_presentation(p, alphas)?;
        return Ok(if &g == f { Verdict::Yes(alphas.to_vec()) } else { Verdict::Unknown("supplied witness does not match".into()) });
    }
    if !p.is_abelian() {
        return Ok(Verdict::Unknown("free-group data needs a supplied witness".into()));
    }
    for (i, m) in f.edge_isos.iter().enumerate() {
        if !(m.base.psi.is_identity() && m.base.psi_plus.is_identity() && m.base.psi_minus.is_identity()) {
            return Ok(Verdict::No(format!("edge {:?}: psi is not the identity", p.edges[i].id)));
        }
    }
    // unknowns: α_i stacked; equations: h_i and the non-base cocycles
    let offsets: Vec<usize> = p.edges.iter().scan(0, |acc, e| {
        let o = *acc;
        *acc += e.data.iso.h.dim();
        Some(o)
    }).collect();
    let n: usize = p.edges.iter().map(|e| e.data.iso.h.dim()).sum();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs = Vec::new();
    let mut moduli = Vec::new();
    for (i, e) in p.edges.iter().enumerate() {
        let h = &e.data.iso.h;
        let shifted = e.data.hol.matrix().expect("abelian").sub(&IntMatrix::identity(h.dim()));
        for r in 0..h.dim() {
            let mut row = vec![0; n];
            row[offsets[i]..offsets[i] + h.dim()].copy_from_slice(shifted.row(r));
            rows.push(row);
        }
        rhs.extend_from_slice(f.edge_isos[i].h.repr());
        moduli.extend(h.moduli());
    }
    for v in 0..p.vertices.len() {
        let s = p.vertices[v].sign;
        let g = &p.vertices[v].group;
        let b = p.base_edge(v);
        for i in p.incident(v) {
            if i == b {
                continue;
            }
            let (pi, pb) = (p.edges[i].data.iso.phi(s).matrix().expect("abelian"), p.edges[b].data.iso.phi(s).matrix().expect("abelian"));
            for r in 0..g.dim() {
                let mut row = vec![0; n];
                for c in 0..pi.cols() {
                    row[offsets[i] + c] += pi[(r, c)];
                }
                for c in 0..pb.cols() {
                    row[offsets[b] + c] -= pb[(r, c)];
                }
                rows.push(row);
            }
            rhs.extend_from_slice(f.cocycle(p, p, v, i, b)?.repr());
            moduli.extend(g.moduli());
        }
    }
    let m = IntMatrix::from_rows_with_cols(&rows, n);
    match lattice::solve_mod(&m, &rhs, &moduli) {
        Some(x) => {
            let alphas = p
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| e.data.iso.h.element(x[offsets[i]..offsets[i] + e.data.iso.h.dim()].to_vec()))
                .collect::<Result<Vec<_>>>()?;
            Ok(Verdict::Yes(alphas))
        }
        None => Ok(Verdict::No("no alpha solves the inner equations".into())),
    }
}
