//! Morita equivalence of presentations: invariant screen, then isomorphism search.

use std::collections::BTreeMap;

use super::graph::graph_isomorphisms;
use super::iso::{check_discrete_iso, DiscreteIso};
use super::solver::{Ctx, Layer, RepSearch, SolveOptions};
use super::DiscretePresentation;
use crate::error::Result;
use crate::groups::{Int, IntMatrix};
use crate::rational::format_rational;
use crate::verdict::Verdict;

/// Why two presentations are not equivalent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaWitness {
    /// The invariant that differs, or `"exhaustive search"`.
    pub invariant: String,
    pub detail: String,
}

/// Characteristic polynomial `det(xI − A)`, leading coefficient first.
pub fn charpoly(a: &IntMatrix) -> Vec<Int> {
    let n = a.rows();
    let mut coeffs = vec![0; n + 1];
    coeffs[0] = 1;
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        m = (a * &m).add(&IntMatrix::identity(n).scale(coeffs[k - 1]));
        let am = a * &m;
        let tr: Int = (0..n).map(|i| am[(i, i)]).sum();
        coeffs[k] = -tr / k as Int;
    }
    coeffs
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn screen(p1: &DiscretePresentation, p2: &DiscretePresentation, opts: SolveOptions) -> Option<MoritaWitness> {
    let no = |invariant: &str, detail: String| Some(MoritaWitness { invariant: invariant.into(), detail });
    if p1.vertices.len() != p2.vertices.len() {
        return no("vertex count", format!("{} vs {}", p1.vertices.len(), p2.vertices.len()));
    }
    if p1.edges.len() != p2.edges.len() {
        return no("edge count", format!("{} vs {}", p1.edges.len(), p2.edges.len()));
    }
    let periods = |p: &DiscretePresentation| sorted(p.edges.iter().map(|e| e.data.period).collect());
    if periods(p1) != periods(p2) {
        let show = |p| periods(p).iter().map(format_rational).collect::<Vec<_>>().join(", ");
        return no("period multiset", format!("[{}] vs [{}]", show(p1), show(p2)));
    }
    let labels = |p: &DiscretePresentation, flip: bool| {
        sorted(p.vertices.iter().map(|v| (if flip { v.sign.flip() } else { v.sign }.symbol(), v.group.to_string())).collect::<Vec<_>>())
    };
    if labels(p1, false) != labels(p2, false) && labels(p1, false) != labels(p2, true) {
        return no("vertex (sign, group) multiset", "no match even after a global sign flip".into());
    }
    let edge_keys = |p: &DiscretePresentation| {
        let mut keys: BTreeMap<String, usize> = BTreeMap::new();
        for e in &p.edges {
            let hol = match e.data.hol.matrix() {
                Some(m) if !opts.conventions.reversing_hol_inverse => {
                    let f = e.data.iso.h.free_rank();
                    format!("{:?}", charpoly(&m.block(0..f, 0..f)))
                }
                _ => String::new(),
            };
            *keys.entry(format!("{} {} {}", format_rational(&e.data.period), e.data.iso.h, hol)).or_default() += 1;
        }
        keys
    };
    if edge_keys(p1) != edge_keys(p2) {
        return no("edge (period, H, hol charpoly) multiset", format!("{:?} vs {:?}", edge_keys(p1), edge_keys(p2)));
    }
    None
}

/// Decides whether two presentations are isomorphic, i.e. Morita equivalent.
pub fn morita_check(p1: &DiscretePresentation, p2: &DiscretePresentation, opts: SolveOptions) -> Result<Verdict<DiscreteIso, MoritaWitness>> {
    if let Some(w) = screen(p1, p2, opts) {
        return Ok(Verdict::No(w));
    }
    if !p1.is_abelian() || !p2.is_abelian() {
        if p1 == p2 {
            return Ok(Verdict::Yes(DiscreteIso::identity(p1)));
        }
        return Ok(Verdict::Unknown("isomorphism search needs abelian groups".into()));
    }
    let opts = SolveOptions { paper_conventions: false, ..opts };
    let ctx = Ctx { p: p1, q: p2, layer: Layer::Holonomy, opts };
    let maps = graph_isomorphisms(p1, p2, true);
    if maps.is_empty() {
        return Ok(Verdict::No(MoritaWitness { invariant: "orbit graph".into(), detail: "no label-compatible graph isomorphism".into() }));
    }
    let mut complete = true;
    for g in &maps {
        match ctx.find_rep(g)? {
            RepSearch::Found(a) => {
                let f = ctx.to_public(&a)?;
                if check_discrete_iso(&f, p1, p2, opts.conventions)? {
                    return Ok(Verdict::Yes(f));
                }
                return Ok(Verdict::Unknown("solver produced an isomorphism the checker rejects".into()));
            }
            RepSearch::Infeasible => {}
            RepSearch::NotFound { exhaustive } => complete &= exhaustive,
        }
    }
    if complete {
        Ok(Verdict::No(MoritaWitness {
            invariant: "exhaustive search".into(),
            detail: format!("none of the {} compatible graph maps lifts to an isomorphism", maps.len()),
        }))
    } else {
        Ok(Verdict::Unknown(format!("bounded search over {} graph maps found no isomorphism", maps.len())))
    }
}

