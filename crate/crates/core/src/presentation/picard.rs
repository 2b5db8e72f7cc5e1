//! Picard groups assembled from `OutAut` and the modular flows.

use std::fmt;

use super::iso::{check_discrete_iso, DiscreteIso};
use super::outaut::{compute_layer, OutAut};
use super::solver::{Layer, SolveOptions};
use super::{DiscretePresentation, Edge, Vertex};
use crate::error::Result;
use crate::groups::{mixed_quotient_structure, ClosedForm, GroupPresentation, Homomorphism, Int, MixedQuotientStructure};
use crate::holonomy::HolonomyData;
use crate::isotropy::{IsotropyData, Side};
use crate::rational::{format_rational, Rational};

/// Checked facts about one Picard computation.
#[derive(Clone, Debug, Default)]
pub struct PicardCertificates {
    /// Per edge: whether the twisting class has infinite order in `OutAut` (`None` if unresolved).
    pub twist_infinite_order: Vec<Option<bool>>,
    /// `real_rank + #circles` of the resolved structure.
    pub lie_dimension: Option<usize>,
    /// An orientation-reversing automorphism whose class has order 2, verified by the checker.
    pub reversing_involution: Option<DiscreteIso>,
}

#[derive(Clone, Debug)]
pub struct PicardPresentation {
    pub outaut: OutAut,
    pub n_edges: usize,
    pub periods: Vec<Rational>,
    pub twisting_classes: Vec<DiscreteIso>,
    /// Edge permutation of each `OutAut` generator.
    pub action: Vec<Vec<usize>>,
    pub structure: MixedQuotientStructure,
    pub certificates: PicardCertificates,
}

impl PicardPresentation {
    pub fn resolved(&self) -> Option<&ClosedForm> {
        self.structure.resolved()
    }

    pub fn exhaustive(&self) -> bool {
        self.outaut.exhaustive
    }
}

impl fmt::Display for PicardPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.structure)?;
        if !self.outaut.exhaustive {
            write!(f, " (non-exhaustive)")?;
        }
        Ok(())
    }
}

/// Strict and paper-convention results side by side.
#[derive(Clone, Debug)]
pub struct PicardReport {
    pub strict: PicardPresentation,
    pub paper: PicardPresentation,
    pub discrepancy: Option<String>,
}

impl PicardReport {
    /// The result for the requested conventions.
    pub fn selected(&self, paper_conventions: bool) -> &PicardPresentation {
        if paper_conventions {
            &self.paper
        } else {
            &self.strict
        }
    }
}

/// Computes `Pic` of the presentation under both conventions.
pub fn assemble_picard(p: &DiscretePresentation, opts: SolveOptions) -> Result<PicardReport> {
    let strict = assemble_one(p, SolveOptions { paper_conventions: false, ..opts })?;
    let paper = assemble_one(p, SolveOptions { paper_conventions: true, ..opts })?;
    let discrepancy = discrepancy_report(&strict, &paper);
    Ok(PicardReport { strict, paper, discrepancy })
}

fn assemble_one(p: &DiscretePresentation, opts: SolveOptions) -> Result<PicardPresentation> {
    let outaut = compute_layer(p, Layer::Holonomy, opts, true)?;
    finish(p, outaut)
}

fn finish(p: &DiscretePresentation, outaut: OutAut) -> Result<PicardPresentation> {
    let n = p.edges.len();
    let periods: Vec<Rational> = p.edges.iter().map(|e| e.data.period).collect();
    let action: Vec<Vec<usize>> = outaut.generators.iter().map(|g| g.edge_permutation().to_vec()).collect();
    let twisting_classes = outaut.twists.iter().map(|&k| outaut.generators[k].iso.clone()).collect();
    let trivial_action = action.iter().all(|a| a.iter().enumerate().all(|(i, &j)| i == j));
    let mut certificates = PicardCertificates { twist_infinite_order: vec![None; n], ..Default::default() };

    let structure = match &outaut.structure {
        Some(s) => {
            let f = s.group.free_rank();
            for (i, &k) in outaut.twists.iter().enumerate() {
                certificates.twist_infinite_order[i] = Some(s.coords[k].repr()[..f].iter().any(|&c| c != 0));
            }
            certificates.reversing_involution = reversing_involution(p, &outaut)?;
            if trivial_action {
                let rels: Vec<(Vec<Rational>, _)> = (0..n)
                    .map(|i| {
                        let mut v = vec![Rational::from_integer(0); n];
                        v[i] = periods[i];
                        (v, s.coords[outaut.twists[i]].clone())
                    })
                    .collect();
                mixed_quotient_structure(n, &s.group, &rels)?
            } else {
                semidirect(p, &outaut, &periods)
            }
        }
        None => semidirect(p, &outaut, &periods),
    };
    certificates.lie_dimension = structure.resolved().map(|c| c.real_dimension());
    Ok(PicardPresentation { outaut, n_edges: n, periods, twisting_classes, action, structure, certificates })
}

/// Symbolic `OutAut ⋉ R^N` modulo the twisting relations.
fn semidirect(p: &DiscretePresentation, outaut: &OutAut, periods: &[Rational]) -> MixedQuotientStructure {
    let twists_trivial = outaut.twist_inner.iter().all(|t| *t == Some(true));
    let mut generators: Vec<String> = outaut.generators.iter().map(|g| g.label.clone()).collect();
    let mut relations = Vec::new();
    if twists_trivial {
        let circles: Vec<String> = periods.iter().map(|r| format!("circle({})", format_rational(r))).collect();
        generators.push(format!("normal: {}", circles.join(" x ")));
    } else {
        generators.extend(p.edges.iter().map(|e| format!("flow({})", e.id)));
        for (i, e) in p.edges.iter().enumerate() {
            relations.push(format!("flow({})^{} = {}", e.id, format_rational(&periods[i]), outaut.generators[outaut.twists[i]].label));
        }
    }
    for g in &outaut.generators {
        let moved: Vec<String> = g
            .edge_permutation()
            .iter()
            .enumerate()
            .filter(|(i, j)| i != *j)
            .map(|(i, &j)| format!("{}->{}", p.edges[i].id, p.edges[j].id))
            .collect();
        if !moved.is_empty() {
            relations.push(format!("{} permutes flows [{}]", g.label, moved.join(",")));
        }
    }
    relations.push(format!("OutAut = {}", outaut));
    MixedQuotientStructure::Unresolved(GroupPresentation { generators, relations })
}

/// Searches the 2-torsion of an abelian `OutAut` for an orientation-reversing class.
fn reversing_involution(p: &DiscretePresentation, outaut: &OutAut) -> Result<Option<DiscreteIso>> {
    let Some(s) = &outaut.structure else { return Ok(None) };
    let f = s.group.free_rank();
    let torsion = s.group.torsion().to_vec();
    let even: Vec<usize> = (0..torsion.len()).filter(|&k| torsion[k] % 2 == 0).collect();
    if even.len() > 12 {
        return Ok(None);
    }
    for mask in 1u32..(1 << even.len()) {
        let mut coords = vec![0; s.group.dim()];
        for (b, &k) in even.iter().enumerate() {
            if mask >> b & 1 == 1 {
                coords[f + k] = torsion[k] / 2;
            }
        }
        let class = s.group.element(coords)?;
        let exps: Vec<Int> = s.exponents(&class);
        if outaut.orientation_of(&exps).is_reversing() {
            let iso = outaut.witness(p, &exps)?;
            if check_discrete_iso(&iso, p, p, outaut.options.conventions)? {
                return Ok(Some(iso));
            }
        }
    }
    Ok(None)
}

fn discrepancy_report(strict: &PicardPresentation, paper: &PicardPresentation) -> Option<String> {
    let (a, b) = (strict.structure.to_string(), paper.structure.to_string());
    let (oa, ob) = (strict.outaut.to_string(), paper.outaut.to_string());
    if a == b && oa == ob {
        return None;
    }
    let width = ["OutAut".len(), "Pic".len()].into_iter().max().unwrap_or(0);
    let col = [oa.len(), a.len(), "strict".len()].into_iter().max().unwrap_or(0);
    let mut out = String::new();
    out.push_str(&format!("{:width$}  {:col$}  {}\n", "", "strict", "paper conventions"));
    out.push_str(&format!("{:width$}  {:col$}  {}\n", "OutAut", oa, ob));
    out.push_str(&format!("{:width$}  {:col$}  {}\n", "Pic", a, b));
    out.push_str("strict quotients h by the image of hol - 1 and allows every sign of the ψ blocks; paper conventions do neither");
    Some(out)
}

fn one_edge(data: HolonomyData) -> DiscretePresentation {
    DiscretePresentation {
        vertices: vec![
            Vertex { id: "v+".into(), sign: Side::Plus, group: data.iso.g_plus.clone() },
            Vertex { id: "v-".into(), sign: Side::Minus, group: data.iso.g_minus.clone() },
        ],
        edges: vec![Edge { id: "e".into(), vplus: "v+".into(), vminus: "v-".into(), data }],
    }
}

fn unresolved(label: &str, outaut: &OutAut) -> MixedQuotientStructure {
    MixedQuotientStructure::Unresolved(GroupPresentation {
        generators: outaut.generators.iter().map(|g| g.label.clone()).chain([label.to_string()]).collect(),
        relations: outaut.notes.clone(),
    })
}

/// `OutAut(I) × R`, orientation preserving automorphisms only.
pub fn picard_plane(i: &IsotropyData) -> Result<MixedQuotientStructure> {
    let data = HolonomyData {
        iso: i.clone(),
        hol: Homomorphism::identity(&i.h),
        hol_inverse: None,
        gamma_plus: i.g_plus.identity(),
        gamma_minus: i.g_minus.identity(),
        period: Rational::from_integer(1),
    };
    let p = one_edge(data);
    let outaut = compute_layer(&p, Layer::Isotropy, SolveOptions::default(), false)?;
    Ok(match &outaut.structure {
        Some(s) => MixedQuotientStructure::Resolved(ClosedForm {
            real_rank: 1,
            circle_periods: Vec::new(),
            free_rank: s.group.free_rank(),
            torsion: s.group.torsion().to_vec(),
        }),
        None => unresolved("R", &outaut),
    })
}

/// `(OutAut(d) × R) / ⟨(twist, ρ)⟩`, orientation preserving automorphisms only.
pub fn picard_cylinder(d: &HolonomyData) -> Result<MixedQuotientStructure> {
    let p = one_edge(d.clone());
    let outaut = compute_layer(&p, Layer::Holonomy, SolveOptions::default(), false)?;
    match &outaut.structure {
        Some(s) => mixed_quotient_structure(1, &s.group, &[(vec![d.period], s.coords[outaut.twists[0]].clone())]),
        None => Ok(unresolved("flow", &outaut)),
    }
}
