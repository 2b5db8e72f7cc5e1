//! Label-compatible maps between orbit graphs.

use super::DiscretePresentation;
use crate::isotropy::{Orientation, Side};

/// A bijection of vertices and edges respecting adjacency and signs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphMap {
    pub orientation: Orientation,
    pub edge_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

impl GraphMap {
    pub fn identity(p: &DiscretePresentation) -> Self {
        GraphMap { orientation: Orientation::Preserving, edge_map: (0..p.edges.len()).collect(), vertex_map: (0..p.vertices.len()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.orientation == Orientation::Preserving
            && self.edge_map.iter().enumerate().all(|(a, &b)| a == b)
            && self.vertex_map.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GraphMap) -> GraphMap {
        GraphMap {
            orientation: self.orientation.compose(other.orientation),
            edge_map: other.edge_map.iter().map(|&i| self.edge_map[i]).collect(),
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
        }
    }
}

/// Whether edge `i` of `p1` may be sent to edge `j` of `p2` under orientation `o`.
fn edges_compatible(p1: &DiscretePresentation, i: usize, p2: &DiscretePresentation, j: usize, o: Orientation) -> bool {
    let (a, b) = (&p1.edges[i].data, &p2.edges[j].data);
    a.period == b.period && a.iso.h == b.iso.h && Side::BOTH.iter().all(|&s| a.iso.group(s) == b.iso.group(s.under(o)))
}

/// All label-compatible graph isomorphisms `p1 → p2`, sorted.
pub fn graph_isomorphisms(p1: &DiscretePresentation, p2: &DiscretePresentation, allow_reversing: bool) -> Vec<GraphMap> {
    let mut out = Vec::new();
    if p1.vertices.len() != p2.vertices.len() || p1.edges.len() != p2.edges.len() {
        return out;
    }
    let orientations: &[Orientation] = if allow_reversing { &[Orientation::Preserving, Orientation::Reversing] } else { &[Orientation::Preserving] };
    for &o in orientations {
        let mut edge_map = vec![usize::MAX; p1.edges.len()];
        let mut vertex_map = vec![usize::MAX; p1.vertices.len()];
        let mut used = vec![false; p2.edges.len()];
        extend(p1, p2, o, 0, &mut edge_map, &mut vertex_map, &mut used, &mut out);
    }
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    p1: &DiscretePresentation,
    p2: &DiscretePresentation,
    o: Orientation,
    i: usize,
    edge_map: &mut Vec<usize>,
    vertex_map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<GraphMap>,
) {
    if i == p1.edges.len() {
        if vertex_map.iter().all(|&v| v != usize::MAX) {
            out.push(GraphMap { orientation: o, edge_map: edge_map.clone(), vertex_map: vertex_map.clone() });
        }
        return;
    }
    for j in 0..p2.edges.len() {
        if used[j] || !edges_compatible(p1, i, p2, j, o) {
            continue;
        }
        let mut assigned = Vec::new();
        let mut ok = true;
        for s in Side::BOTH {
            let (v, w) = (p1.endpoint(i, s), p2.endpoint(j, s.under(o)));
            if vertex_map[v] == usize::MAX {
                if vertex_map.contains(&w) {
                    ok = false;
                    break;
                }
                vertex_map[v] = w;
                assigned.push(v);
            } else if vertex_map[v] != w {
                ok = false;
                break;
            }
        }
        if ok {
            used[j] = true;
            edge_map[i] = j;
            extend(p1, p2, o, i + 1, edge_map, vertex_map, used, out);
            used[j] = false;
            edge_map[i] = usize::MAX;
        }
        for v in assigned {
            vertex_map[v] = usize::MAX;
        }
    }
}
