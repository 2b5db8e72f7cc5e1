//! Presentations and data used throughout the examples and tests.

use crate::groups::{GroupDescriptor, Homomorphism, IntMatrix};
use crate::holonomy::HolonomyData;
use crate::isotropy::{IsotropyData, Side};
use crate::presentation::{DiscretePresentation, Edge, Vertex};
use crate::rational::Rational;

fn hom(src: &GroupDescriptor, dst: &GroupDescriptor, rows: &[Vec<i64>]) -> Homomorphism {
    let m = if rows.is_empty() { IntMatrix::zeros(dst.dim(), src.dim()) } else { IntMatrix::from_rows_with_cols(rows, src.dim()) };
    Homomorphism::from_matrix(src.clone(), dst.clone(), m).expect("sample map")
}

/// `G⁻ ← H → G⁺` with the given maps.
pub fn isotropy(h: GroupDescriptor, g_plus: GroupDescriptor, g_minus: GroupDescriptor, phi_plus: &[Vec<i64>], phi_minus: &[Vec<i64>]) -> IsotropyData {
    let pp = hom(&h, &g_plus, phi_plus);
    let pm = hom(&h, &g_minus, phi_minus);
    IsotropyData::new(h, g_minus, g_plus, pm, pp)
}

pub fn trivial_isotropy() -> IsotropyData {
    let t = GroupDescriptor::Trivial;
    isotropy(t.clone(), t.clone(), t, &[], &[])
}

/// Holonomy data with `hol` and `γ±` given in coordinates.
pub fn holonomy(iso: IsotropyData, hol: &[Vec<i64>], gamma_plus: Vec<i64>, gamma_minus: Vec<i64>, period: Rational) -> HolonomyData {
    HolonomyData {
        hol: hom(&iso.h, &iso.h, hol),
        hol_inverse: None,
        gamma_plus: iso.g_plus.element(gamma_plus).expect("gamma+"),
        gamma_minus: iso.g_minus.element(gamma_minus).expect("gamma-"),
        period,
        iso,
    }
}

pub fn trivial_holonomy(period: Rational) -> HolonomyData {
    holonomy(trivial_isotropy(), &[], vec![], vec![], period)
}

/// Identity data on `Z/n`: `H = G± = Z/n`, `φ± = id`, `hol = id`, `γ± = 0`.
pub fn cyclic_holonomy(n: i64, period: Rational) -> HolonomyData {
    let z = GroupDescriptor::cyclic(n);
    holonomy(isotropy(z.clone(), z.clone(), z, &[vec![1]], &[vec![1]]), &[vec![1]], vec![0], vec![0], period)
}

/// The Dehn twist edge: `H = Z²`, `G± = Z`, `φ± = pr₂`, `hol = (1 1; 0 1)`.
pub fn lefschetz_holonomy(gamma: i64, period: Rational) -> HolonomyData {
    let z = GroupDescriptor::lattice(1);
    let iso = isotropy(GroupDescriptor::lattice(2), z.clone(), z, &[vec![0, 1]], &[vec![0, 1]]);
    holonomy(iso, &[vec![1, 1], vec![0, 1]], vec![gamma], vec![gamma], period)
}

/// Two vertices joined by one edge carrying `data`.
pub fn one_edge(data: HolonomyData, plus: &str, minus: &str, edge: &str) -> DiscretePresentation {
    DiscretePresentation {
        vertices: vec![
            Vertex { id: plus.into(), sign: Side::Plus, group: data.iso.g_plus.clone() },
            Vertex { id: minus.into(), sign: Side::Minus, group: data.iso.g_minus.clone() },
        ],
        edges: vec![Edge { id: edge.into(), vplus: plus.into(), vminus: minus.into(), data }],
    }
}

/// The sphere with one singular circle of period `rho`.
pub fn radko_sphere(rho: Rational) -> DiscretePresentation {
    one_edge(trivial_holonomy(rho), "north", "south", "equator")
}

/// The blowup of the projective plane: same shape, listed in the other order.
pub fn blowup(rho: Rational) -> DiscretePresentation {
    let data = trivial_holonomy(rho);
    DiscretePresentation {
        vertices: vec![
            Vertex { id: "fiber-".into(), sign: Side::Minus, group: GroupDescriptor::Trivial },
            Vertex { id: "fiber+".into(), sign: Side::Plus, group: GroupDescriptor::Trivial },
        ],
        edges: vec![Edge { id: "Z".into(), vplus: "fiber+".into(), vminus: "fiber-".into(), data }],
    }
}

pub fn lefschetz(gamma: i64, period: Rational) -> DiscretePresentation {
    one_edge(lefschetz_holonomy(gamma, period), "inside", "outside", "boundary")
}

/// `n` parallel edges with trivial data between one `+` and one `−` vertex.
pub fn parallel_trivial(periods: &[Rational]) -> DiscretePresentation {
    DiscretePresentation {
        vertices: vec![
            Vertex { id: "a".into(), sign: Side::Plus, group: GroupDescriptor::Trivial },
            Vertex { id: "b".into(), sign: Side::Minus, group: GroupDescriptor::Trivial },
        ],
        edges: periods
            .iter()
            .enumerate()
            .map(|(k, &r)| Edge { id: format!("e{}", k + 1), vplus: "a".into(), vminus: "b".into(), data: trivial_holonomy(r) })
            .collect(),
    }
}

/// A path `+ − + …` of trivial edges; the vertices alternate in sign.
pub fn trivial_path(periods: &[Rational]) -> DiscretePresentation {
    let n = periods.len();
    let vertices = (0..=n)
        .map(|k| Vertex { id: format!("v{k}"), sign: if k % 2 == 0 { Side::Plus } else { Side::Minus }, group: GroupDescriptor::Trivial })
        .collect::<Vec<_>>();
    let edges = periods
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let (a, b) = (format!("v{k}"), format!("v{}", k + 1));
            let (vplus, vminus) = if k % 2 == 0 { (a, b) } else { (b, a) };
            Edge { id: format!("e{}", k + 1), vplus, vminus, data: trivial_holonomy(r) }
        })
        .collect();
    DiscretePresentation { vertices, edges }
}
