//! JSON documents for presentations, data, isomorphisms and reports.
//!
//! Every document carries `"schema_version": "1"` and exactly one payload
//! key. Rationals are `"p/q"` strings; group elements are integer arrays
//! (coordinates for abelian groups, signed-letter words for free groups).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{ClosedForm, Factor, GroupDescriptor, GroupElement, Homomorphism, IntMatrix, MixedQuotientStructure};
use crate::holonomy::{HolonomyData, HolonomyIso};
use crate::isotropy::{IsotropyData, IsotropyMap, Orientation, Side};
use crate::presentation::{validate_presentation, DiscreteIso, DiscretePresentation, Edge, Vertex};
use crate::rational::{format_rational, parse_rational};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HomDoc {
    Matrix { matrix: Vec<Vec<i64>> },
    Images { images: Vec<Vec<i64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropyDoc {
    pub h: GroupDoc,
    /// Taken from the adjacent vertices inside a presentation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_plus: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_minus: Option<GroupDoc>,
    pub phi_plus: HomDoc,
    pub phi_minus: HomDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyDoc {
    pub hol: HomDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hol_inverse: Option<HomDoc>,
    pub gamma_plus: Vec<i64>,
    pub gamma_minus: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyDataDoc {
    pub period: String,
    pub isotropy: IsotropyDoc,
    pub holonomy: HolonomyDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub sign: String,
    pub group: GroupDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub vplus: String,
    pub vminus: String,
    pub period: String,
    pub isotropy: IsotropyDoc,
    pub holonomy: HolonomyDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeIsoDoc {
    pub psi: HomDoc,
    pub psi_plus: HomDoc,
    pub psi_minus: HomDoc,
    pub h: Vec<i64>,
    /// Inverses of `psi`, `psi_plus`, `psi_minus`; needed for free groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverses: Option<[HomDoc; 3]>,
}

/// `g_{edge, base}` at `vertex`, where the base is the vertex's first incident edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDoc {
    pub vertex: String,
    pub edge: String,
    pub value: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsomorphismDoc {
    /// Presentation files, relative to this document.
    pub source: String,
    pub target: String,
    pub orientation: String,
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
    pub edge_isos: BTreeMap<String, EdgeIsoDoc>,
    #[serde(default)]
    pub cocycles: Vec<CocycleDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isomorphism: Option<IsomorphismDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holonomy_data: Option<HolonomyDataDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isotropy_data: Option<IsotropyDoc>,
}

impl Document {
    fn empty() -> Self {
        Document { schema_version: SCHEMA_VERSION.into(), presentation: None, isomorphism: None, holonomy_data: None, isotropy_data: None }
    }

    pub fn kind(&self) -> &'static str {
        if self.presentation.is_some() {
            "presentation"
        } else if self.isomorphism.is_some() {
            "isomorphism"
        } else if self.holonomy_data.is_some() {
            "holonomy_data"
        } else {
            "isotropy_data"
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// Parses a document; errors carry `origin:line:column`.
pub fn parse_document(text: &str, origin: &str) -> Result<Document> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Invalid(format!("{origin}: unsupported schema_version {:?}", doc.schema_version)));
    }
    let payloads =
        [doc.presentation.is_some(), doc.isomorphism.is_some(), doc.holonomy_data.is_some(), doc.isotropy_data.is_some()].iter().filter(|&&b| b).count();
    if payloads != 1 {
        return Err(Error::Invalid(format!("{origin}: expected exactly one payload, found {payloads}")));
    }
    Ok(doc)
}

pub fn group_from_doc(d: &GroupDoc) -> Result<GroupDescriptor> {
    match d.backend.as_str() {
        "trivial" => Ok(GroupDescriptor::Trivial),
        "fg_abelian" => GroupDescriptor::abelian(d.free_rank.unwrap_or(0), d.torsion.clone().unwrap_or_default()),
        "free" => Ok(GroupDescriptor::free(d.rank.ok_or_else(|| Error::Invalid("free group needs a rank".into()))?)),
        other => Err(Error::UnsupportedBackend(other.into())),
    }
}

pub fn group_to_doc(g: &GroupDescriptor) -> GroupDoc {
    match g {
        GroupDescriptor::Trivial => GroupDoc { backend: "trivial".into(), free_rank: None, torsion: None, rank: None },
        GroupDescriptor::FgAbelian { free_rank, torsion } => {
            GroupDoc { backend: "fg_abelian".into(), free_rank: Some(*free_rank), torsion: Some(torsion.clone()), rank: None }
        }
        GroupDescriptor::Free { rank } => GroupDoc { backend: "free".into(), free_rank: None, torsion: None, rank: Some(*rank) },
    }
}

pub fn hom_from_doc(d: &HomDoc, source: &GroupDescriptor, target: &GroupDescriptor) -> Result<Homomorphism> {
    match d {
        HomDoc::Matrix { matrix } => {
            let m = IntMatrix::from_rows_with_cols(matrix, source.dim());
            Homomorphism::from_matrix(source.clone(), target.clone(), m)
        }
        HomDoc::Images { images } => {
            let els = images.iter().map(|x| target.element(x.clone())).collect::<Result<Vec<_>>>()?;
            Homomorphism::from_images(source.clone(), target.clone(), els)
        }
    }
}

pub fn hom_to_doc(h: &Homomorphism) -> HomDoc {
    match h.matrix() {
        Some(m) => HomDoc::Matrix { matrix: m.to_rows() },
        None => HomDoc::Images { images: h.images().iter().map(|x| x.repr().to_vec()).collect() },
    }
}

fn sign_from_str(s: &str) -> Result<Side> {
    match s {
        "+" => Ok(Side::Plus),
        "-" => Ok(Side::Minus),
        other => Err(Error::Invalid(format!("sign must be \"+\" or \"-\", got {other:?}"))),
    }
}

fn side_group(explicit: &Option<GroupDoc>, fallback: Option<&GroupDescriptor>, what: &str) -> Result<GroupDescriptor> {
    match (explicit, fallback) {
        (Some(d), Some(g)) => {
            let e = group_from_doc(d)?;
            if &e != g {
                return Err(Error::Mismatch(format!("{what} is {e} but the adjacent vertex carries {g}")));
            }
            Ok(e)
        }
        (Some(d), None) => group_from_doc(d),
        (None, Some(g)) => Ok(g.clone()),
        (None, None) => Err(Error::Invalid(format!("{what} missing"))),
    }
}

fn isotropy_with(d: &IsotropyDoc, g_plus: Option<&GroupDescriptor>, g_minus: Option<&GroupDescriptor>) -> Result<IsotropyData> {
    let h = group_from_doc(&d.h)?;
    let gp = side_group(&d.g_plus, g_plus, "g_plus")?;
    let gm = side_group(&d.g_minus, g_minus, "g_minus")?;
    let pp = hom_from_doc(&d.phi_plus, &h, &gp)?;
    let pm = hom_from_doc(&d.phi_minus, &h, &gm)?;
    Ok(IsotropyData::new(h, gm, gp, pm, pp))
}

pub fn isotropy_from_doc(d: &IsotropyDoc) -> Result<IsotropyData> {
    let i = isotropy_with(d, None, None)?;
    let diag = i.diagnostics();
    if !diag.is_empty() {
        return Err(Error::Invalid(diag.join("; ")));
    }
    Ok(i)
}

pub fn isotropy_to_doc(i: &IsotropyData, with_sides: bool) -> IsotropyDoc {
    IsotropyDoc {
        h: group_to_doc(&i.h),
        g_plus: with_sides.then(|| group_to_doc(&i.g_plus)),
        g_minus: with_sides.then(|| group_to_doc(&i.g_minus)),
        phi_plus: hom_to_doc(&i.phi_plus),
        phi_minus: hom_to_doc(&i.phi_minus),
    }
}

fn holonomy_with(iso: IsotropyData, d: &HolonomyDoc, period: &str) -> Result<HolonomyData> {
    let hol = hom_from_doc(&d.hol, &iso.h, &iso.h)?;
    let hol_inverse = d.hol_inverse.as_ref().map(|x| hom_from_doc(x, &iso.h, &iso.h)).transpose()?;
    Ok(HolonomyData {
        gamma_plus: iso.g_plus.element(d.gamma_plus.clone())?,
        gamma_minus: iso.g_minus.element(d.gamma_minus.clone())?,
        period: parse_rational(period)?,
        hol,
        hol_inverse,
        iso,
    })
}

fn holonomy_doc(d: &HolonomyData) -> HolonomyDoc {
    HolonomyDoc {
        hol: hom_to_doc(&d.hol),
        hol_inverse: d.hol_inverse.as_ref().map(hom_to_doc),
        gamma_plus: d.gamma_plus.repr().to_vec(),
        gamma_minus: d.gamma_minus.repr().to_vec(),
    }
}

pub fn holonomy_from_doc(d: &HolonomyDataDoc) -> Result<HolonomyData> {
    let iso = isotropy_with(&d.isotropy, None, None)?;
    let data = holonomy_with(iso, &d.holonomy, &d.period)?;
    let diag = data.diagnostics();
    if !diag.is_empty() {
        return Err(Error::Invalid(diag.join("; ")));
    }
    Ok(data)
}

pub fn holonomy_to_doc(d: &HolonomyData) -> HolonomyDataDoc {
    HolonomyDataDoc { period: format_rational(&d.period), isotropy: isotropy_to_doc(&d.iso, true), holonomy: holonomy_doc(d) }
}

/// Builds and validates a presentation.
pub fn presentation_from_doc(d: &PresentationDoc) -> Result<DiscretePresentation> {
    let vertices = d
        .vertices
        .iter()
        .map(|v| Ok(Vertex { id: v.id.clone(), sign: sign_from_str(&v.sign)?, group: group_from_doc(&v.group)? }))
        .collect::<Result<Vec<_>>>()?;
    let group_of = |id: &str| vertices.iter().find(|v| v.id == id).map(|v| &v.group);
    let mut edges = Vec::new();
    for e in &d.edges {
        let ctx = |err: Error| Error::Invalid(format!("edge {}: {err}", e.id));
        for end in [&e.vplus, &e.vminus] {
            if group_of(end).is_none() {
                return Err(ctx(Error::Invalid(format!("unknown vertex {end:?}"))));
            }
        }
        let iso = isotropy_with(&e.isotropy, group_of(&e.vplus), group_of(&e.vminus)).map_err(ctx)?;
        let data = holonomy_with(iso, &e.holonomy, &e.period).map_err(ctx)?;
        edges.push(Edge { id: e.id.clone(), vplus: e.vplus.clone(), vminus: e.vminus.clone(), data });
    }
    let p = DiscretePresentation { vertices, edges };
    validate_presentation(&p).map_err(|d| Error::Invalid(d.join("; ")))?;
    Ok(p)
}

pub fn presentation_to_doc(p: &DiscretePresentation) -> PresentationDoc {
    PresentationDoc {
        vertices: p.vertices.iter().map(|v| VertexDoc { id: v.id.clone(), sign: v.sign.symbol().into(), group: group_to_doc(&v.group) }).collect(),
        edges: p
            .edges
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                vplus: e.vplus.clone(),
                vminus: e.vminus.clone(),
                period: format_rational(&e.data.period),
                isotropy: isotropy_to_doc(&e.data.iso, false),
                holonomy: holonomy_doc(&e.data),
            })
            .collect(),
    }
}

pub fn presentation_document(p: &DiscretePresentation) -> Document {
    Document { presentation: Some(presentation_to_doc(p)), ..Document::empty() }
}

pub fn holonomy_document(d: &HolonomyData) -> Document {
    Document { holonomy_data: Some(holonomy_to_doc(d)), ..Document::empty() }
}

pub fn isotropy_document(i: &IsotropyData) -> Document {
    Document { isotropy_data: Some(isotropy_to_doc(i, true)), ..Document::empty() }
}

fn orientation_from_str(s: &str) -> Result<Orientation> {
    match s {
        "preserving" => Ok(Orientation::Preserving),
        "reversing" => Ok(Orientation::Reversing),
        other => Err(Error::Invalid(format!("orientation must be \"preserving\" or \"reversing\", got {other:?}"))),
    }
}

fn lookup<'a>(map: &'a BTreeMap<String, String>, key: &str, what: &str) -> Result<&'a str> {
    map.get(key).map(String::as_str).ok_or_else(|| Error::Invalid(format!("{what} {key:?} is not mapped")))
}

/// Reads an isomorphism between two loaded presentations.
pub fn iso_from_doc(d: &IsomorphismDoc, p1: &DiscretePresentation, p2: &DiscretePresentation) -> Result<DiscreteIso> {
    let orientation = orientation_from_str(&d.orientation)?;
    let vindex = |p: &DiscretePresentation, id: &str| p.vertex_index(id).ok_or_else(|| Error::Invalid(format!("unknown vertex {id:?}")));
    let eindex = |p: &DiscretePresentation, id: &str| p.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.into()));
    let vertex_map = p1.vertices.iter().map(|v| vindex(p2, lookup(&d.vertex_map, &v.id, "vertex")?)).collect::<Result<Vec<_>>>()?;
    let edge_map = p1.edges.iter().map(|e| eindex(p2, lookup(&d.edge_map, &e.id, "edge")?)).collect::<Result<Vec<_>>>()?;
    let mut edge_isos = Vec::new();
    for (i, e) in p1.edges.iter().enumerate() {
        let m = d.edge_isos.get(&e.id).ok_or_else(|| Error::Invalid(format!("no edge iso for {:?}", e.id)))?;
        let (a, b) = (&e.data.iso, &p2.edges[edge_map[i]].data.iso);
        let gp = b.group(Side::Plus.under(orientation));
        let gm = b.group(Side::Minus.under(orientation));
        let witnesses = match &m.inverses {
            Some([x, y, z]) => Some(Box::new([hom_from_doc(x, &b.h, &a.h)?, hom_from_doc(y, gp, &a.g_plus)?, hom_from_doc(z, gm, &a.g_minus)?])),
            None => None,
        };
        let base = IsotropyMap {
            source: a.clone(),
            target: b.clone(),
            orientation,
            psi: hom_from_doc(&m.psi, &a.h, &b.h)?,
            psi_plus: hom_from_doc(&m.psi_plus, &a.g_plus, gp)?,
            psi_minus: hom_from_doc(&m.psi_minus, &a.g_minus, gm)?,
            witnesses,
        };
        edge_isos.push(HolonomyIso { base, h: b.h.element(m.h.clone())? });
    }
    let mut cocycles = BTreeMap::new();
    for c in &d.cocycles {
        let v = vindex(p1, &c.vertex)?;
        let i = eindex(p1, &c.edge)?;
        if !p1.incident(v).contains(&i) {
            return Err(Error::Invalid(format!("cocycle edge {:?} does not meet vertex {:?}", c.edge, c.vertex)));
        }
        if i == p1.base_edge(v) {
            return Err(Error::Invalid(format!("edge {:?} is the base edge at {:?}; its cocycle is the identity", c.edge, c.vertex)));
        }
        let g = &p2.vertices[vertex_map[v]].group;
        cocycles.insert((v, i), g.element(c.value.clone())?);
    }
    Ok(DiscreteIso { vertex_map, edge_map, orientation, edge_isos, cocycles })
}

pub fn iso_to_doc(f: &DiscreteIso, p1: &DiscretePresentation, p2: &DiscretePresentation, source: &str, target: &str) -> IsomorphismDoc {
    let edge_isos = p1
        .edges
        .iter()
        .zip(&f.edge_isos)
        .map(|(e, m)| {
            let inverses = if m.base.psi.matrix().is_some() && m.base.psi_plus.matrix().is_some() && m.base.psi_minus.matrix().is_some() {
                None
            } else {
                m.base.witnesses.as_ref().map(|w| [hom_to_doc(&w[0]), hom_to_doc(&w[1]), hom_to_doc(&w[2])])
            };
            let doc = EdgeIsoDoc {
                psi: hom_to_doc(&m.base.psi),
                psi_plus: hom_to_doc(&m.base.psi_plus),
                psi_minus: hom_to_doc(&m.base.psi_minus),
                h: m.h.repr().to_vec(),
                inverses,
            };
            (e.id.clone(), doc)
        })
        .collect();
    IsomorphismDoc {
        source: source.into(),
        target: target.into(),
        orientation: f.orientation.name().into(),
        vertex_map: p1.vertices.iter().zip(&f.vertex_map).map(|(v, &w)| (v.id.clone(), p2.vertices[w].id.clone())).collect(),
        edge_map: p1.edges.iter().zip(&f.edge_map).map(|(e, &j)| (e.id.clone(), p2.edges[j].id.clone())).collect(),
        edge_isos,
        cocycles: f
            .cocycles
            .iter()
            .map(|(&(v, i), g)| CocycleDoc { vertex: p1.vertices[v].id.clone(), edge: p1.edges[i].id.clone(), value: g.repr().to_vec() })
            .collect(),
    }
}

pub fn iso_document(f: &DiscreteIso, p1: &DiscretePresentation, p2: &DiscretePresentation, source: &str, target: &str) -> Document {
    Document { isomorphism: Some(iso_to_doc(f, p1, p2, source, target)), ..Document::empty() }
}

pub fn factor_json(f: &Factor) -> Value {
    match f {
        Factor::Real => json!({"kind": "real"}),
        Factor::Circle(p) => json!({"kind": "circle", "period": format_rational(p)}),
        Factor::Free => json!({"kind": "free"}),
        Factor::Torsion(n) => json!({"kind": "torsion", "order": n}),
    }
}

pub fn closed_form_json(c: &ClosedForm) -> Value {
    json!({
        "display": c.to_string(),
        "factors": c.factors().iter().map(factor_json).collect::<Vec<_>>(),
        "real_rank": c.real_rank,
        "circle_count": c.circle_periods.len(),
    })
}

pub fn structure_json(s: &MixedQuotientStructure) -> Value {
    match s {
        MixedQuotientStructure::Resolved(c) => json!({"resolved": true, "closed_form": closed_form_json(c)}),
        MixedQuotientStructure::Unresolved(p) => json!({
            "resolved": false,
            "display": s.to_string(),
            "generators": p.generators,
            "relations": p.relations,
        }),
    }
}

pub fn group_json(g: &GroupDescriptor) -> Value {
    json!({"display": g.to_string(), "group": group_to_doc(g)})
}

pub fn element_json(x: &GroupElement) -> Value {
    json!(x.repr())
}
