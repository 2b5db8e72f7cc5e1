//! Skeleton of the bimodule `P(Ψ,h)` of an orientation preserving holonomy isomorphism.
//!
//! Elements are plane arrows over the target isotropy data. On the target end
//! windings are absorbed with `γ₂` (sides) as in the cylinder; on the source end
//! with `ψ±(γ₁)` (sides) and the twisted map `hol_h(α) = hol₂(α) h` (zero sector).

use super::{add, apply, mat, reduce, scale, Arrow, CylSkeleton, PlaneSkeleton};
use crate::error::{Error, Result};
use crate::groups::{Int, IntMatrix};
use crate::holonomy::{HolonomyData, HolonomyIso};
use crate::isotropy::Side;
use crate::rational::Rational;

pub struct Bimodule<'a> {
    pub source: &'a HolonomyData,
    pub target: &'a HolonomyData,
    psi: IntMatrix,
    psi_plus: IntMatrix,
    psi_minus: IntMatrix,
    h: Vec<Int>,
    hol: IntMatrix,
    hol_inv: IntMatrix,
    src_gamma: [Vec<Int>; 2],
    src_cyl: CylSkeleton<'a>,
    dst_cyl: CylSkeleton<'a>,
}

fn side_index(s: Side) -> usize {
    match s {
        Side::Plus => 0,
        Side::Minus => 1,
    }
}

impl<'a> Bimodule<'a> {
    pub fn new(f: &HolonomyIso, source: &'a HolonomyData, target: &'a HolonomyData) -> Result<Self> {
        if f.orientation().is_reversing() {
            return Err(Error::UnsupportedBackend("bimodules of reversing isomorphisms are not modelled".into()));
        }
        if f.base.source != source.iso || f.base.target != target.iso {
            return Err(Error::Mismatch("isomorphism endpoints differ from the given data".into()));
        }
        let psi_plus = mat(&f.base.psi_plus)?.clone();
        let psi_minus = mat(&f.base.psi_minus)?.clone();
        let src_gamma = [Side::Plus, Side::Minus].map(|s| {
            let m = if s == Side::Plus { &psi_plus } else { &psi_minus };
            apply(target.iso.group(s), m, source.gamma(s).repr())
        });
        Ok(Bimodule {
            source,
            target,
            psi: mat(&f.base.psi)?.clone(),
            psi_plus,
            psi_minus,
            h: f.h.repr().to_vec(),
            hol: mat(&target.hol)?.clone(),
            hol_inv: mat(&target.hol_inv()?)?.clone(),
            src_gamma,
            src_cyl: CylSkeleton::new(source)?,
            dst_cyl: CylSkeleton::new(target)?,
        })
    }

    fn psi_side(&self, s: Side) -> &IntMatrix {
        match s {
            Side::Plus => &self.psi_plus,
            Side::Minus => &self.psi_minus,
        }
    }

    pub fn plane(&self) -> PlaneSkeleton<'a> {
        PlaneSkeleton { iso: &self.target.iso }
    }

    /// `hol_hⁿ(α)`.
    pub fn hol_h_pow(&self, alpha: &[Int], n: Int) -> Vec<Int> {
        let g = &self.target.iso.h;
        (0..n.abs()).fold(alpha.to_vec(), |a, _| {
            if n > 0 {
                add(g, &apply(g, &self.hol, &a), &self.h)
            } else {
                apply(g, &self.hol_inv, &add(g, &a, &scale(g, &self.h, -1)))
            }
        })
    }

    pub fn normal_form(&self, p: &Arrow) -> Arrow {
        match p {
            Arrow::Side { side, y_src, y_tgt, alpha } => {
                let (m, n) = (y_src.floor().to_integer(), y_tgt.floor().to_integer());
                let g = self.target.iso.group(*side);
                let a = add(g, &add(g, alpha, &scale(g, self.target.gamma(*side).repr(), n)), &scale(g, &self.src_gamma[side_index(*side)], -m));
                Arrow::Side { side: *side, y_src: y_src - m, y_tgt: y_tgt - n, alpha: a }
            }
            Arrow::Zero { y, scale: a, shift, alpha } => {
                let n = y.floor().to_integer();
                Arrow::Zero { y: y - n, scale: *a, shift: *shift, alpha: self.hol_h_pow(alpha, n) }
            }
        }
    }

    /// A representative of the normal form `p` with source moved by `ks` and target by `kt` turns.
    pub fn lift(&self, p: &Arrow, ks: Int, kt: Int) -> Arrow {
        let p = self.normal_form(p);
        match &p {
            Arrow::Side { side, alpha, .. } => {
                let g = self.target.iso.group(*side);
                let a = add(g, &add(g, alpha, &scale(g, self.target.gamma(*side).repr(), -kt)), &scale(g, &self.src_gamma[side_index(*side)], ks));
                p.shifted(ks, kt).with_alpha(a)
            }
            Arrow::Zero { alpha, .. } => p.shifted(ks, ks).with_alpha(self.hol_h_pow(alpha, -ks)),
        }
    }

    /// Image of a source arrow under `Ψ`, as a plane arrow over the target data.
    pub fn push(&self, g: &Arrow) -> Arrow {
        match g {
            Arrow::Side { side, alpha, .. } => g.with_alpha(apply(self.target.iso.group(*side), self.psi_side(*side), alpha)),
            Arrow::Zero { alpha, .. } => g.with_alpha(apply(&self.target.iso.h, &self.psi, alpha)),
        }
    }

    /// `g₂ · p` for an arrow `g₂` of the target cylinder.
    pub fn left(&self, g2: &Arrow, p: &Arrow) -> Result<Arrow> {
        Ok(self.normal_form(&self.plane().mul(&self.dst_cyl.normal_form(g2), &self.normal_form(p))?))
    }

    /// `p · g₁` for an arrow `g₁` of the source cylinder.
    pub fn right(&self, p: &Arrow, g1: &Arrow) -> Result<Arrow> {
        Ok(self.normal_form(&self.plane().mul(&self.normal_form(p), &self.push(&self.src_cyl.normal_form(g1)))?))
    }

    /// The element over the unit at `y` (source and target base point agree).
    pub fn unit(&self, side: Option<Side>, y: Rational) -> Arrow {
        let pt = match side {
            Some(s) => super::Point::Side(s, y),
            None => super::Point::Zero(y),
        };
        self.normal_form(&self.plane().unit(&pt))
    }
}

/// `p₁ ⊗ p₂ ↦ p₁ · Ψ₁(p₂)` for `p₁ ∈ P(Ψ₁,h₁)` and `p₂ ∈ P(Ψ₂,h₂)`.
///
/// Inputs are normalized first, so the result has `y ∈ [0,1)` and is already
/// normal in any bimodule over the outer target.
pub fn tensor(b1: &Bimodule, b2: &Bimodule, p1: &Arrow, p2: &Arrow) -> Result<Arrow> {
    if b1.source.iso != b2.target.iso {
        return Err(Error::Mismatch("middle data of the tensor product differ".into()));
    }
    let (p1, p2) = (b1.normal_form(p1), b2.normal_form(p2));
    if p1.source() != p2.target() {
        return Err(Error::Mismatch(format!("middle base points differ: {p1} and {p2}")));
    }
    b1.plane().mul(&p1, &b1.push(&p2))
}

/// The holonomy isomorphism `(ψ, ψ+, ψ−, h)` read off a tensor product through its actions.
pub fn extract(b1: &Bimodule, b2: &Bimodule) -> Result<(IntMatrix, IntMatrix, IntMatrix, Vec<Int>)> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    let src = &b2.source.iso;
    let dst = &b1.target.iso;
    let column = |side: Option<Side>, k: usize, dim: usize| -> Result<Vec<Int>> {
        let mut e = vec![0; dim];
        e[k] = 1;
        let g = match side {
            Some(s) => Arrow::Side { side: s, y_src: zero, y_tgt: zero, alpha: e },
            None => Arrow::Zero { y: zero, scale: one, shift: zero, alpha: e },
        };
        let p2 = b2.right(&b2.unit(side, zero), &g)?;
        Ok(tensor(b1, b2, &b1.unit(side, zero), &p2)?.alpha().to_vec())
    };
    let block = |side: Option<Side>| -> Result<IntMatrix> {
        let (s, t) = match side {
            Some(x) => (src.group(x), dst.group(x)),
            None => (&src.h, &dst.h),
        };
        let cols = (0..s.dim()).map(|k| column(side, k, s.dim())).collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_columns(&cols, t.dim()))
    };
    let wound = Arrow::Zero { y: one, scale: one, shift: zero, alpha: vec![0; dst.h.dim()] };
    let wound2 = wound.with_alpha(vec![0; b2.target.iso.h.dim()]);
    let h = tensor(b1, b2, &b1.normal_form(&wound), &b2.normal_form(&wound2))?.alpha().to_vec();
    Ok((block(None)?, block(Some(Side::Plus))?, block(Some(Side::Minus))?, reduce(&dst.h, h)))
}
