use std::fmt;

use super::descriptor::{GroupDescriptor, GroupElement};
use super::lattice::solve_mod;
use super::matrix::{Int, IntMatrix};
use crate::error::{Error, Result};

/// A homomorphism between supported groups.
///
/// Between abelian groups the map is an integer matrix (target dims × source
/// dims) whose rows are reduced modulo the target torsion. Whenever a free
/// group is involved the map is stored as the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub source: GroupDescriptor,
    pub target: GroupDescriptor,
    map: HomMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum HomMap {
    Matrix(IntMatrix),
    Images(Vec<GroupElement>),
}

impl Homomorphism {
    pub fn from_matrix(source: GroupDescriptor, target: GroupDescriptor, m: IntMatrix) -> Result<Self> {
        if !source.is_abelian() || !target.is_abelian() {
            return Err(Error::BackendMismatch("matrix maps need abelian source and target".into()));
        }
        if m.rows() != target.dim() || m.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map {source} -> {target} needs a {}x{} matrix, got {}x{}",
                target.dim(),
                source.dim(),
                m.rows(),
                m.cols()
            )));
        }
        let images = (0..m.cols()).map(|j| target.reduce_coords(m.column(j))).collect();
        Self::from_images(source, target, images)
    }

    /// Map determined by the images of the canonical generators of `source`.
    pub fn from_images(source: GroupDescriptor, target: GroupDescriptor, images: Vec<GroupElement>) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map out of {source} needs {} generator images, got {}",
                source.dim(),
                images.len()
            )));
        }
        for x in &images {
            if x.parent != target {
                return Err(Error::WrongParent(format!("image {x} does not lie in {target}")));
            }
        }
        let map = if source.is_abelian() && target.is_abelian() {
            let cols: Vec<Vec<Int>> = images.iter().map(|x| x.repr().to_vec()).collect();
            HomMap::Matrix(IntMatrix::from_columns(&cols, target.dim()))
        } else {
            HomMap::Images(images)
        };
        Ok(Homomorphism { source, target, map })
    }

    pub fn identity(g: &GroupDescriptor) -> Self {
        Self::from_images(g.clone(), g.clone(), g.generators()).expect("identity map")
    }

    pub fn zero(source: &GroupDescriptor, target: &GroupDescriptor) -> Self {
        Self::from_images(source.clone(), target.clone(), vec![target.identity(); source.dim()]).expect("zero map")
    }

    /// Inner automorphism `x ↦ g x g⁻¹`.
    pub fn conjugation(g: &GroupElement) -> Self {
        let grp = &g.parent;
        let images = grp.generators().iter().map(|x| grp.conj(g, x).expect("same parent")).collect();
        Self::from_images(grp.clone(), grp.clone(), images).expect("conjugation map")
    }

    /// Matrix of a map between abelian groups.
    pub fn matrix(&self) -> Option<&IntMatrix> {
        match &self.map {
            HomMap::Matrix(m) => Some(m),
            HomMap::Images(_) => None,
        }
    }

    pub fn images(&self) -> Vec<GroupElement> {
        self.source.generators().iter().map(|x| self.apply(x).expect("generator")).collect()
    }

    /// Checks that the map respects the relations of the source.
    pub fn validate(&self) -> Result<()> {
        match &self.map {
            HomMap::Matrix(m) => {
                let f = self.source.free_rank();
                for (k, &d) in self.source.torsion().iter().enumerate() {
                    let col = m.column(f + k);
                    let img = self.target.reduce_coords(col.iter().map(|x| x * d).collect());
                    if !img.is_identity() {
                        return Err(Error::Invalid(format!(
                            "map {} -> {} is ill-defined: {d} times generator {} maps to {img}, not 0",
                            self.source,
                            self.target,
                            f + k
                        )));
                    }
                }
                Ok(())
            }
            HomMap::Images(imgs) => {
                if self.source.is_abelian() {
                    // abelian source into a free group: images must commute and kill torsion
                    let t = &self.target;
                    for (a, x) in imgs.iter().enumerate() {
                        for y in &imgs[a + 1..] {
                            if t.mul(x, y)? != t.mul(y, x)? {
                                return Err(Error::Invalid(format!("images {x} and {y} do not commute")));
                            }
                        }
                    }
                    let f = self.source.free_rank();
                    for (k, &d) in self.source.torsion().iter().enumerate() {
                        if !t.pow(&imgs[f + k], d)?.is_identity() {
                            return Err(Error::Invalid(format!("torsion generator {} has image of infinite order", f + k)));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.parent != self.source {
            return Err(Error::WrongParent(format!("{x} is not in the source {}", self.source)));
        }
        match &self.map {
            HomMap::Matrix(m) => Ok(self.target.reduce_coords(m.mul_vec(x.repr()))),
            HomMap::Images(imgs) => {
                let t = &self.target;
                let mut acc = t.identity();
                if self.source.is_abelian() {
                    for (img, &c) in imgs.iter().zip(x.repr()) {
                        acc = t.mul(&acc, &t.pow(img, c)?)?;
                    }
                } else {
                    for &letter in x.repr() {
                        let img = &imgs[letter.unsigned_abs() as usize - 1];
                        let img = if letter < 0 { t.inv(img)? } else { img.clone() };
                        acc = t.mul(&acc, &img)?;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Homomorphism) -> Result<Homomorphism> {
        if g.target != self.source {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, g.source, g.target
            )));
        }
        if let (HomMap::Matrix(a), HomMap::Matrix(b)) = (&self.map, &g.map) {
            return Self::from_matrix(g.source.clone(), self.target.clone(), a * b);
        }
        let images = g.images().iter().map(|x| self.apply(x)).collect::<Result<Vec<_>>>()?;
        Self::from_images(g.source.clone(), self.target.clone(), images)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == Self::identity(&self.source)
    }

    /// Inverse of an abelian isomorphism, or `None` if the map is not bijective.
    pub fn abelian_inverse(&self) -> Result<Option<Homomorphism>> {
        let m = self.matrix().ok_or_else(|| Error::UnsupportedBackend(self.source.backend_name().into()))?;
        if self.source != self.target {
            // finitely generated abelian groups are Hopfian: an isomorphism needs equal invariants
            let iso_types_agree = self.source.free_rank() == self.target.free_rank() && self.source.torsion() == self.target.torsion();
            if !iso_types_agree {
                return Ok(None);
            }
        }
        let moduli = self.target.moduli();
        let mut cols = Vec::with_capacity(self.target.dim());
        for i in 0..self.target.dim() {
            let mut e = vec![0; self.target.dim()];
            e[i] = 1;
            match solve_mod(m, &e, &moduli) {
                Some(x) => cols.push(self.source.reduce_coords(x)),
                None => return Ok(None),
            }
        }
        let inv = Self::from_images(self.target.clone(), self.source.clone(), cols)?;
        // surjective endomorphism of a Hopfian group is injective; double-check anyway
        if inv.compose(self)?.is_identity() && self.compose(&inv)?.is_identity() {
            Ok(Some(inv))
        } else {
            Ok(None)
        }
    }

    /// Isomorphism test; free backends need an inverse witness.
    pub fn is_iso(&self, witness: Option<&Homomorphism>) -> Result<bool> {
        if self.source.is_abelian() && self.target.is_abelian() {
            if let Some(w) = witness {
                if w.source == self.target && w.target == self.source {
                    return Ok(w.compose(self)?.is_identity() && self.compose(w)?.is_identity());
                }
            }
            return Ok(self.abelian_inverse()?.is_some());
        }
        let w = witness.ok_or(Error::MissingWitness)?;
        if w.source != self.target || w.target != self.source {
            return Err(Error::DimensionMismatch("inverse witness has the wrong shape".into()));
        }
        Ok(w.compose(self)?.is_identity() && self.compose(w)?.is_identity())
    }

    /// Inverse, using the witness for free backends.
    pub fn inverse(&self, witness: Option<&Homomorphism>) -> Result<Option<Homomorphism>> {
        if self.source.is_abelian() && self.target.is_abelian() {
            return self.abelian_inverse();
        }
        Ok(if self.is_iso(witness)? { witness.cloned() } else { None })
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.map {
            HomMap::Matrix(m) => write!(f, "{m}"),
            HomMap::Images(imgs) => {
                let parts: Vec<String> = imgs.iter().map(|x| x.to_string()).collect();
                write!(f, "<{}>", parts.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> GroupDescriptor {
        GroupDescriptor::lattice(n)
    }

    #[test]
    fn projection_applies() {
        let pr2 = Homomorphism::from_matrix(z(2), z(1), IntMatrix::from_rows(&[vec![0, 1]])).unwrap();
        let x = z(2).element(vec![3, 5]).unwrap();
        assert_eq!(pr2.apply(&x).unwrap().repr(), &[5]);
    }

    #[test]
    fn iso_tests() {
        let u = Homomorphism::from_matrix(z(2), z(2), IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]])).unwrap();
        let w = Homomorphism::from_matrix(z(2), z(2), IntMatrix::from_rows(&[vec![1, -1], vec![0, 1]])).unwrap();
        assert!(u.is_iso(Some(&w)).unwrap());
        assert_eq!(u.abelian_inverse().unwrap(), Some(w));
        let two = Homomorphism::from_matrix(z(1), z(1), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(!two.is_iso(None).unwrap());
    }

    #[test]
    fn torsion_well_definedness() {
        let z4 = GroupDescriptor::cyclic(4);
        let ok = Homomorphism::from_matrix(z4.clone(), GroupDescriptor::cyclic(2), IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(ok.validate().is_ok());
        let bad = Homomorphism::from_matrix(z4, GroupDescriptor::cyclic(3), IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn free_maps_need_witness() {
        let f2 = GroupDescriptor::free(2);
        let swap = Homomorphism::from_images(f2.clone(), f2.clone(), vec![f2.element(vec![2]).unwrap(), f2.element(vec![1]).unwrap()]).unwrap();
        assert_eq!(swap.is_iso(None), Err(Error::MissingWitness));
        assert!(swap.is_iso(Some(&swap)).unwrap());
        let c = Homomorphism::conjugation(&f2.element(vec![1]).unwrap());
        assert_eq!(c.apply(&f2.element(vec![2]).unwrap()).unwrap().repr(), &[1, 2, -1]);
    }
}
