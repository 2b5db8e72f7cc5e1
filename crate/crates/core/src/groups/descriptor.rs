use std::fmt;

use super::free;
use super::lattice::QuotientCoords;
use super::matrix::Int;
use crate::error::{Error, Result};

/// A group in one of the supported backends, always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupDescriptor {
    Trivial,
    /// `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with `d_1 | d_2 | … | d_k`, each `d_i ≥ 2`.
    FgAbelian { free_rank: usize, torsion: Vec<Int> },
    Free { rank: usize },
}

impl GroupDescriptor {
    /// Canonical abelian group from invariant factors; rejects broken chains.
    pub fn abelian(free_rank: usize, torsion: Vec<Int>) -> Result<Self> {
        if torsion.iter().any(|&d| d < 2) {
            return Err(Error::Invalid(format!("torsion entries must be at least 2, got {torsion:?}")));
        }
        if torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Invalid(format!("torsion {torsion:?} is not a divisibility chain")));
        }
        Ok(Self::abelian_unchecked(free_rank, torsion))
    }

    fn abelian_unchecked(free_rank: usize, torsion: Vec<Int>) -> Self {
        if free_rank == 0 && torsion.is_empty() {
            GroupDescriptor::Trivial
        } else {
            GroupDescriptor::FgAbelian { free_rank, torsion }
        }
    }

    /// `Z^n`.
    pub fn lattice(n: usize) -> Self {
        Self::abelian_unchecked(n, Vec::new())
    }

    /// Cyclic group of order `n` (`n = 0` gives `Z`).
    pub fn cyclic(n: Int) -> Self {
        match n {
            0 => Self::lattice(1),
            1 => GroupDescriptor::Trivial,
            _ => Self::abelian_unchecked(0, vec![n]),
        }
    }

    pub fn free(rank: usize) -> Self {
        if rank == 0 {
            GroupDescriptor::Trivial
        } else {
            GroupDescriptor::Free { rank }
        }
    }

    /// Abelian group `Z^dim / span(relations)`, canonicalized.
    pub fn from_relations(relations: &[Vec<Int>], dim: usize) -> Self {
        let q = QuotientCoords::new(relations, dim);
        Self::abelian_unchecked(q.free_rank(), q.torsion())
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self, GroupDescriptor::Free { .. })
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, GroupDescriptor::Trivial)
    }

    pub fn backend_name(&self) -> &'static str {
        match self {
            GroupDescriptor::Trivial => "trivial",
            GroupDescriptor::FgAbelian { .. } => "fg_abelian",
            GroupDescriptor::Free { .. } => "free",
        }
    }

    pub fn free_rank(&self) -> usize {
        match self {
            GroupDescriptor::Trivial => 0,
            GroupDescriptor::FgAbelian { free_rank, .. } => *free_rank,
            GroupDescriptor::Free { rank } => *rank,
        }
    }

    pub fn torsion(&self) -> &[Int] {
        match self {
            GroupDescriptor::FgAbelian { torsion, .. } => torsion,
            _ => &[],
        }
    }

    /// Number of coordinates (abelian) or generators (free).
    pub fn dim(&self) -> usize {
        match self {
            GroupDescriptor::Trivial => 0,
            GroupDescriptor::FgAbelian { free_rank, torsion } => free_rank + torsion.len(),
            GroupDescriptor::Free { rank } => *rank,
        }
    }

    /// Per-coordinate moduli of an abelian group, 0 on free coordinates.
    pub fn moduli(&self) -> Vec<Int> {
        let mut m = vec![0; self.free_rank()];
        if self.is_abelian() {
            m.extend_from_slice(self.torsion());
        } else {
            m.clear();
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        match self {
            GroupDescriptor::Trivial => true,
            GroupDescriptor::FgAbelian { free_rank, .. } => *free_rank == 0,
            GroupDescriptor::Free { .. } => false,
        }
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<u128> {
        self.is_finite().then(|| self.torsion().iter().map(|&d| d as u128).product())
    }

    /// Least common multiple of the torsion orders (1 if torsion-free).
    pub fn exponent(&self) -> Int {
        self.torsion().last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { parent: self.clone(), repr: vec![0; if self.is_abelian() { self.dim() } else { 0 }] }
    }

    /// Canonical generators: unit coordinate vectors or single letters.
    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.dim())
            .map(|j| match self {
                GroupDescriptor::Free { .. } => GroupElement { parent: self.clone(), repr: vec![j as Int + 1] },
                _ => {
                    let mut v = vec![0; self.dim()];
                    v[j] = 1;
                    GroupElement { parent: self.clone(), repr: v }
                }
            })
            .collect()
    }

    /// Builds an element, reducing torsion coordinates or freely reducing the word.
    pub fn element(&self, repr: Vec<Int>) -> Result<GroupElement> {
        match self {
            GroupDescriptor::Free { rank } => {
                if let Some(&x) = repr.iter().find(|&&x| x == 0 || x.unsigned_abs() as usize > *rank) {
                    return Err(Error::WrongParent(format!("{self}: letter {x} out of range")));
                }
                Ok(GroupElement { parent: self.clone(), repr: free::reduce(&repr) })
            }
            _ => {
                if repr.len() != self.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "element of {self} needs {} coordinates, got {}",
                        self.dim(),
                        repr.len()
                    )));
                }
                Ok(self.reduce_coords(repr))
            }
        }
    }

    pub(crate) fn reduce_coords(&self, mut v: Vec<Int>) -> GroupElement {
        for (x, &m) in v.iter_mut().zip(&self.moduli()) {
            if m != 0 {
                *x = x.rem_euclid(m);
            }
        }
        GroupElement { parent: self.clone(), repr: v }
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if &x.parent != self {
            return Err(Error::WrongParent(format!("element of {} used in {}", x.parent, self)));
        }
        Ok(())
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match self {
            GroupDescriptor::Free { .. } => GroupElement { parent: self.clone(), repr: free::reduce_concat(&[&a.repr, &b.repr]) },
            _ => self.reduce_coords(a.repr.iter().zip(&b.repr).map(|(x, y)| x + y).collect()),
        })
    }

    pub fn inv(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(match self {
            GroupDescriptor::Free { .. } => GroupElement { parent: self.clone(), repr: free::inverse(&a.repr) },
            _ => self.reduce_coords(a.repr.iter().map(|x| -x).collect()),
        })
    }

    pub fn pow(&self, a: &GroupElement, n: Int) -> Result<GroupElement> {
        self.check(a)?;
        Ok(match self {
            GroupDescriptor::Free { .. } => GroupElement { parent: self.clone(), repr: free::power(&a.repr, n) },
            _ => self.reduce_coords(a.repr.iter().map(|x| x * n).collect()),
        })
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: &GroupElement, x: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(x)?;
        Ok(match self {
            GroupDescriptor::Free { .. } => GroupElement { parent: self.clone(), repr: free::conjugate(&g.repr, &x.repr) },
            _ => x.clone(),
        })
    }

    /// `a b⁻¹`.
    pub fn div(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.mul(a, &self.inv(b)?)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Trivial => write!(f, "1"),
            GroupDescriptor::Free { rank } => write!(f, "F{rank}"),
            GroupDescriptor::FgAbelian { free_rank, torsion } => {
                let mut parts = Vec::new();
                match free_rank {
                    0 => {}
                    1 => parts.push("Z".to_string()),
                    n => parts.push(format!("Z^{n}")),
                }
                parts.extend(torsion.iter().map(|d| format!("Z/{d}")));
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

/// An element of a group: coordinates for abelian backends, a reduced word for free ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub parent: GroupDescriptor,
    repr: Vec<Int>,
}

impl GroupElement {
    /// Coordinates (abelian) or letters (free).
    pub fn repr(&self) -> &[Int] {
        &self.repr
    }

    pub fn is_identity(&self) -> bool {
        self.repr.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.repr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(GroupDescriptor::abelian(0, vec![]).unwrap(), GroupDescriptor::Trivial);
        assert!(GroupDescriptor::abelian(0, vec![2, 3]).is_err());
        assert_eq!(GroupDescriptor::from_relations(&[vec![2, 0], vec![0, 3]], 2), GroupDescriptor::cyclic(6));
        assert_eq!(GroupDescriptor::free(0), GroupDescriptor::Trivial);
    }

    #[test]
    fn torsion_coordinates_reduce() {
        let g = GroupDescriptor::abelian(1, vec![4]).unwrap();
        let x = g.element(vec![3, 7]).unwrap();
        assert_eq!(x.repr(), &[3, 3]);
        assert_eq!(g.mul(&x, &x).unwrap().repr(), &[6, 2]);
        assert_eq!(g.inv(&x).unwrap().repr(), &[-3, 1]);
    }

    #[test]
    fn wrong_parent_is_rejected() {
        let z = GroupDescriptor::lattice(1);
        let z2 = GroupDescriptor::cyclic(2);
        assert!(z.mul(&z.identity(), &z2.identity()).is_err());
    }
}
