//! Discrete presentations: signed orbit graphs decorated with holonomy data.

pub mod graph;
pub mod iso;
pub mod morita;
pub mod outaut;
pub mod picard;
pub(crate) mod solver;

use crate::groups::GroupDescriptor;
use crate::holonomy::HolonomyData;
use crate::isotropy::Side;

pub use iso::{
    check_discrete_iso, compose_discrete_isos, inner_presentation, invert_discrete_iso, is_inner_presentation, twisting_presentation,
    DiscreteIso,
};
pub use morita::{morita_check, MoritaWitness};
pub use outaut::{compute_outaut, OutAut, OutAutGenerator};
pub use picard::{assemble_picard, PicardPresentation, PicardReport};
pub use solver::SolveOptions;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub sign: Side,
    pub group: GroupDescriptor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub vplus: String,
    pub vminus: String,
    pub data: HolonomyData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscretePresentation {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl DiscretePresentation {
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Index of the vertex on side `s` of edge `i`. Panics on unknown ids; validate first.
    pub fn endpoint(&self, i: usize, s: Side) -> usize {
        let e = &self.edges[i];
        let id = if s == Side::Plus { &e.vplus } else { &e.vminus };
        self.vertex_index(id).expect("validated presentation")
    }

    /// Edges meeting vertex `v`, in presentation order; the first is the base edge.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        let s = self.vertices[v].sign;
        (0..self.edges.len()).filter(|&i| self.endpoint(i, s) == v).collect()
    }

    pub fn base_edge(&self, v: usize) -> usize {
        self.incident(v)[0]
    }

    /// Empty when the presentation is valid.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.vertices.is_empty() || self.edges.is_empty() {
            out.push("presentation needs at least one vertex and one edge".into());
        }
        for (k, v) in self.vertices.iter().enumerate() {
            if self.vertices[..k].iter().any(|w| w.id == v.id) {
                out.push(format!("duplicate vertex id {:?}", v.id));
            }
        }
        for (k, e) in self.edges.iter().enumerate() {
            if self.edges[..k].iter().any(|f| f.id == e.id) {
                out.push(format!("duplicate edge id {:?}", e.id));
            }
        }
        let mut met = vec![false; self.vertices.len()];
        for e in &self.edges {
            for (s, id) in [(Side::Plus, &e.vplus), (Side::Minus, &e.vminus)] {
                let Some(v) = self.vertex_index(id) else {
                    out.push(format!("edge {:?}: unknown vertex {id:?}", e.id));
                    continue;
                };
                met[v] = true;
                let vert = &self.vertices[v];
                if vert.sign != s {
                    out.push(format!(
                        "edge {:?}: v{} = {:?} has sign {}, expected {}",
                        e.id,
                        s.symbol(),
                        id,
                        vert.sign.symbol(),
                        s.symbol()
                    ));
                }
                if e.data.iso.group(s) != &vert.group {
                    out.push(format!(
                        "edge {:?}: G{} = {} differs from the group {} of vertex {:?}",
                        e.id,
                        s.symbol(),
                        e.data.iso.group(s),
                        vert.group,
                        id
                    ));
                }
            }
            out.extend(e.data.diagnostics().into_iter().map(|d| format!("edge {:?}: {d}", e.id)));
        }
        for (v, m) in met.iter().enumerate() {
            if !m {
                out.push(format!("vertex {:?} meets no edge", self.vertices[v].id));
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.vertices.iter().all(|v| v.group.is_abelian()) && self.edges.iter().all(|e| e.data.iso.h.is_abelian())
    }
}

pub fn validate_presentation(p: &DiscretePresentation) -> std::result::Result<(), Vec<String>> {
    let d = p.diagnostics();
    if d.is_empty() {
        Ok(())
    } else {
        Err(d)
    }
}
