use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use super::descriptor::{GroupDescriptor, GroupElement};
use super::lattice::{kernel, lattice_basis, lattice_coords, QuotientCoords};
use super::matrix::{Int, IntMatrix};
use super::smith::smith_normal_form;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// `R^real_rank × Π R/pℤ × Z^free_rank × Π Z/d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedForm {
    pub real_rank: usize,
    pub circle_periods: Vec<Rational>,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl ClosedForm {
    pub fn discrete(g: &GroupDescriptor) -> Self {
        ClosedForm { real_rank: 0, circle_periods: Vec::new(), free_rank: g.free_rank(), torsion: g.torsion().to_vec() }
    }

    /// Dimension of the identity component.
    pub fn real_dimension(&self) -> usize {
        self.real_rank + self.circle_periods.len()
    }

    pub fn factors(&self) -> Vec<Factor> {
        let mut out = vec![Factor::Real; self.real_rank];
        out.extend(self.circle_periods.iter().map(|&p| Factor::Circle(p)));
        out.extend(std::iter::repeat(Factor::Free).take(self.free_rank));
        out.extend(self.torsion.iter().map(|&d| Factor::Torsion(d)));
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.factors().is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Real,
    Circle(Rational),
    Free,
    Torsion(Int),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Real => write!(f, "R"),
            Factor::Circle(p) => write!(f, "circle({})", format_rational(p)),
            Factor::Free => write!(f, "Z"),
            Factor::Torsion(d) => write!(f, "Z/{d}"),
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors().iter().map(|x| x.to_string()).collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// A group given by generators and relations, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MixedQuotientStructure {
    Resolved(ClosedForm),
    Unresolved(GroupPresentation),
}

impl MixedQuotientStructure {
    pub fn resolved(&self) -> Option<&ClosedForm> {
        match self {
            MixedQuotientStructure::Resolved(c) => Some(c),
            MixedQuotientStructure::Unresolved(_) => None,
        }
    }
}

impl fmt::Display for MixedQuotientStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixedQuotientStructure::Resolved(c) => write!(f, "{c}"),
            MixedQuotientStructure::Unresolved(p) => {
                write!(f, "<{} | {}>", p.generators.join(", "), p.relations.join(", "))
            }
        }
    }
}

/// Generators of `L ∩ R e_i` when `L` is their direct sum, else `None`.
fn coordinate_split(basis: &[Vec<Int>], dim: usize) -> Option<Vec<Int>> {
    let mut periods = Vec::new();
    for i in 0..dim {
        let g = basis.iter().fold(0, |acc: Int, b| acc.gcd(&b[i]));
        if g == 0 {
            continue;
        }
        let mut axis = vec![0; dim];
        axis[i] = g;
        lattice_coords(basis, &axis)?;
        periods.push(g);
    }
    (periods.len() == basis.len()).then_some(periods)
}

/// `(R^N × A) / ⟨(v_j, a_j⁻¹)⟩` for an abelian `A`.
///
/// The lattice cut out in `R^N` gives the circle periods: one per axis when it
/// splits along the coordinate axes, otherwise its invariant factors.
pub fn mixed_quotient_structure(
    real_dims: usize,
    abelian: &GroupDescriptor,
    relations: &[(Vec<Rational>, GroupElement)],
) -> Result<MixedQuotientStructure> {
    if !abelian.is_abelian() {
        return Err(Error::UnsupportedBackend(abelian.backend_name().into()));
    }
    let m = abelian.dim();
    let mut discrete_rows: Vec<Vec<Int>> = Vec::new();
    for (v, a) in relations {
        if v.len() != real_dims {
            return Err(Error::DimensionMismatch(format!("relation vector has length {}, expected {real_dims}", v.len())));
        }
        if &a.parent != abelian {
            return Err(Error::WrongParent(format!("relation element {a} is not in {abelian}")));
        }
        discrete_rows.push(a.repr().to_vec());
    }
    let f = abelian.free_rank();
    for (k, &d) in abelian.torsion().iter().enumerate() {
        let mut row = vec![0; m];
        row[f + k] = d;
        discrete_rows.push(row);
    }

    // integer combinations of the relations whose discrete part vanishes
    let st = IntMatrix::from_columns(&discrete_rows, m);
    let combos = kernel(&st);
    let denom = relations.iter().flat_map(|(v, _)| v.iter().map(|r| *r.denom())).fold(1i64, |acc, d| acc.lcm(&d));
    let real_gens: Vec<Vec<Int>> = combos
        .iter()
        .map(|n| {
            (0..real_dims)
                .map(|i| {
                    let s: Rational = relations.iter().zip(n).map(|((v, _), &c)| v[i] * c).fold(Rational::zero(), |a, b| a + b);
                    (s * denom).to_integer()
                })
                .collect()
        })
        .collect();
    let basis = lattice_basis(&real_gens, real_dims);
    let mut circle_periods: Vec<Rational> = if basis.is_empty() {
        Vec::new()
    } else if let Some(split) = coordinate_split(&basis, real_dims) {
        split.into_iter().map(|d| Rational::new(d, denom)).collect()
    } else {
        let s = smith_normal_form(&IntMatrix::from_rows(&basis));
        s.diagonal().into_iter().filter(|&d| d != 0).map(|d| Rational::new(d, denom)).collect()
    };
    circle_periods.sort();

    let q = QuotientCoords::new(&discrete_rows, m);
    Ok(MixedQuotientStructure::Resolved(ClosedForm {
        real_rank: real_dims - circle_periods.len(),
        circle_periods,
        free_rank: q.free_rank(),
        torsion: q.torsion(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn trivial_group_gives_circle() {
        let t = GroupDescriptor::Trivial;
        let s = mixed_quotient_structure(1, &t, &[(vec![r(5, 2)], t.identity())]).unwrap();
        assert_eq!(s.to_string(), "circle(5/2)");
    }

    #[test]
    fn integer_relation_kills_the_circle() {
        let z = GroupDescriptor::lattice(1);
        let s = mixed_quotient_structure(1, &z, &[(vec![r(3, 1)], z.generators()[0].clone())]).unwrap();
        assert_eq!(s.to_string(), "R");
    }

    #[test]
    fn cyclic_relation_stretches_the_period() {
        let z3 = GroupDescriptor::cyclic(3);
        let s = mixed_quotient_structure(1, &z3, &[(vec![r(1, 2)], z3.generators()[0].clone())]).unwrap();
        assert_eq!(s.to_string(), "circle(3/2)");
    }

    #[test]
    fn axis_periods_survive_when_the_lattice_splits() {
        let t = GroupDescriptor::Trivial;
        let rels: Vec<_> = [(0, 1), (1, 2), (2, 3)]
            .iter()
            .map(|&(i, p)| {
                let mut v = vec![r(0, 1); 3];
                v[i] = r(p, 1);
                (v, t.identity())
            })
            .collect();
        assert_eq!(mixed_quotient_structure(3, &t, &rels).unwrap().to_string(), "circle(1) x circle(2) x circle(3)");
        // a diagonal relation does not split
        let skew = [(vec![r(1, 1), r(1, 1)], t.identity()), (vec![r(0, 1), r(2, 1)], t.identity())];
        assert_eq!(mixed_quotient_structure(2, &t, &skew).unwrap().to_string(), "circle(1) x circle(2)");
    }
}
