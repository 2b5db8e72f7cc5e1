//! Exact model of the integrating groupoids over the slice `x ∈ {−1, 0, 1}`.
//!
//! Only abelian data is modelled, so kernel parts are integer coordinate
//! vectors. On the zero sector the affine part is stored as `(scale, shift)`
//! with `scale = eᵃ`, which keeps every composition rational.

pub mod bimodule;
pub mod random;
pub mod selftest;

use std::fmt;

use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, Homomorphism, Int, IntMatrix};
use crate::holonomy::HolonomyData;
use crate::isotropy::{IsotropyData, Side};
use crate::rational::{format_rational, Rational};

pub use bimodule::{tensor, Bimodule};
pub use selftest::{oracle_selftest, PropertyResult, SelfTestReport, SelfTestTarget};

pub(crate) fn mat(h: &Homomorphism) -> Result<&IntMatrix> {
    h.matrix().ok_or_else(|| Error::UnsupportedBackend("the skeleton model needs abelian groups".into()))
}

pub(crate) fn reduce(g: &GroupDescriptor, mut v: Vec<Int>) -> Vec<Int> {
    for (x, m) in v.iter_mut().zip(g.moduli()) {
        if m != 0 {
            *x = x.rem_euclid(m);
        }
    }
    v
}

pub(crate) fn add(g: &GroupDescriptor, a: &[Int], b: &[Int]) -> Vec<Int> {
    reduce(g, a.iter().zip(b).map(|(x, y)| x + y).collect())
}

pub(crate) fn scale(g: &GroupDescriptor, a: &[Int], k: Int) -> Vec<Int> {
    reduce(g, a.iter().map(|x| x * k).collect())
}

pub(crate) fn apply(g: &GroupDescriptor, m: &IntMatrix, v: &[Int]) -> Vec<Int> {
    reduce(g, m.mul_vec(v))
}

fn floor(r: Rational) -> Int {
    r.floor().to_integer()
}

/// A point of the slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Side(Side, Rational),
    Zero(Rational),
}

/// An arrow of the skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Arrow {
    /// Between two points of the `±` line, with kernel part in `G±`.
    Side { side: Side, y_src: Rational, y_tgt: Rational, alpha: Vec<Int> },
    /// Isotropy at `(0, y)`: affine part `(scale, shift)` and kernel part in `H`.
    Zero { y: Rational, scale: Rational, shift: Rational, alpha: Vec<Int> },
}

impl Arrow {
    pub fn source(&self) -> Point {
        match self {
            Arrow::Side { side, y_src, .. } => Point::Side(*side, *y_src),
            Arrow::Zero { y, .. } => Point::Zero(*y),
        }
    }

    pub fn target(&self) -> Point {
        match self {
            Arrow::Side { side, y_tgt, .. } => Point::Side(*side, *y_tgt),
            Arrow::Zero { y, .. } => Point::Zero(*y),
        }
    }

    pub fn alpha(&self) -> &[Int] {
        match self {
            Arrow::Side { alpha, .. } | Arrow::Zero { alpha, .. } => alpha,
        }
    }

    pub(crate) fn with_alpha(&self, a: Vec<Int>) -> Arrow {
        let mut out = self.clone();
        match &mut out {
            Arrow::Side { alpha, .. } | Arrow::Zero { alpha, .. } => *alpha = a,
        }
        out
    }

    /// The same arrow moved by whole turns of the cylinder.
    pub fn shifted(&self, src: Int, tgt: Int) -> Arrow {
        let r = |n: Int| Rational::from_integer(n);
        match self {
            Arrow::Side { side, y_src, y_tgt, alpha } => {
                Arrow::Side { side: *side, y_src: y_src + r(src), y_tgt: y_tgt + r(tgt), alpha: alpha.clone() }
            }
            Arrow::Zero { y, scale, shift, alpha } => Arrow::Zero { y: y + r(src), scale: *scale, shift: *shift, alpha: alpha.clone() },
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arrow::Side { side, y_src, y_tgt, alpha } => {
                write!(f, "[{} {} -> {}, {:?}]", side.symbol(), format_rational(y_src), format_rational(y_tgt), alpha)
            }
            Arrow::Zero { y, scale, shift, alpha } => {
                write!(f, "[0 at {}, scale {}, shift {}, {:?}]", format_rational(y), format_rational(scale), format_rational(shift), alpha)
            }
        }
    }
}

/// Arrow of the affine groupoid: `(a, b, x, y)` with `scale = eᵃ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffArrow {
    pub scale: Rational,
    pub shift: Rational,
    pub x: Int,
    pub y: Rational,
}

/// Skeleton of the plane integration `G(I)`.
pub struct PlaneSkeleton<'a> {
    pub iso: &'a IsotropyData,
}

impl<'a> PlaneSkeleton<'a> {
    pub fn new(iso: &'a IsotropyData) -> Result<Self> {
        for h in [&iso.phi_plus, &iso.phi_minus] {
            mat(h)?;
        }
        Ok(PlaneSkeleton { iso })
    }

    pub fn kernel_group(&self, p: &Point) -> &GroupDescriptor {
        match p {
            Point::Side(s, _) => self.iso.group(*s),
            Point::Zero(_) => &self.iso.h,
        }
    }

    pub fn unit(&self, p: &Point) -> Arrow {
        let one = Rational::from_integer(1);
        let zero = Rational::from_integer(0);
        match p {
            Point::Side(s, y) => Arrow::Side { side: *s, y_src: *y, y_tgt: *y, alpha: vec![0; self.iso.group(*s).dim()] },
            Point::Zero(y) => Arrow::Zero { y: *y, scale: one, shift: zero, alpha: vec![0; self.iso.h.dim()] },
        }
    }

    /// `x ∘ y`: first `y`, then `x`.
    pub fn mul(&self, x: &Arrow, y: &Arrow) -> Result<Arrow> {
        if x.source() != y.target() {
            return Err(Error::NotComposable(format!("{x} after {y}")));
        }
        Ok(match (x, y) {
            (Arrow::Side { side, y_tgt, alpha: a2, .. }, Arrow::Side { y_src, alpha: a1, .. }) => {
                Arrow::Side { side: *side, y_src: *y_src, y_tgt: *y_tgt, alpha: add(self.iso.group(*side), a2, a1) }
            }
            (Arrow::Zero { y, scale: c, shift: d, alpha: a2 }, Arrow::Zero { scale: a, shift: b, alpha: a1, .. }) => {
                Arrow::Zero { y: *y, scale: a * c, shift: b + a * d, alpha: add(&self.iso.h, a2, a1) }
            }
            _ => unreachable!("matching endpoints lie in one sector"),
        })
    }

    pub fn inv(&self, x: &Arrow) -> Arrow {
        match x {
            Arrow::Side { side, y_src, y_tgt, alpha } => {
                Arrow::Side { side: *side, y_src: *y_tgt, y_tgt: *y_src, alpha: scale(self.iso.group(*side), alpha, -1) }
            }
            Arrow::Zero { y, scale: a, shift: b, alpha } => {
                Arrow::Zero { y: *y, scale: a.recip(), shift: -b / a, alpha: scale(&self.iso.h, alpha, -1) }
            }
        }
    }
}

/// Drops the kernel part.
pub fn plane_projection(x: &Arrow) -> AffArrow {
    match x {
        Arrow::Side { side, y_src, y_tgt, .. } => {
            let sx: Int = if *side == Side::Plus { 1 } else { -1 };
            AffArrow { scale: Rational::from_integer(1), shift: (y_tgt - y_src) / Rational::from_integer(sx), x: sx, y: *y_src }
        }
        Arrow::Zero { y, scale, shift, .. } => AffArrow { scale: *scale, shift: *shift, x: 0, y: *y },
    }
}

/// `(a, b, x, y)` composed after `(c, d, ·, ·)` in the affine groupoid.
pub fn aff_mul(g: &AffArrow, f: &AffArrow) -> AffArrow {
    AffArrow { scale: f.scale * g.scale, shift: f.shift + f.scale * g.shift, x: f.x, y: f.y }
}

/// The unit-section splitting of the projection.
pub fn aff_section(iso: &IsotropyData, g: &AffArrow) -> Arrow {
    match g.x {
        0 => Arrow::Zero { y: g.y, scale: g.scale, shift: g.shift, alpha: vec![0; iso.h.dim()] },
        x => {
            let side = if x > 0 { Side::Plus } else { Side::Minus };
            Arrow::Side { side, y_src: g.y, y_tgt: g.y + g.shift * Rational::from_integer(x), alpha: vec![0; iso.group(side).dim()] }
        }
    }
}

/// Skeleton of the cylinder integration `G(I, Hol)`.
pub struct CylSkeleton<'a> {
    pub data: &'a HolonomyData,
    pub plane: PlaneSkeleton<'a>,
    hol: IntMatrix,
    hol_inv: IntMatrix,
}

impl<'a> CylSkeleton<'a> {
    pub fn new(data: &'a HolonomyData) -> Result<Self> {
        let hol = mat(&data.hol)?.clone();
        let hol_inv = mat(&data.hol_inv()?)?.clone();
        Ok(CylSkeleton { data, plane: PlaneSkeleton::new(&data.iso)?, hol, hol_inv })
    }

    /// `holⁿ(α)`.
    pub fn hol_pow(&self, alpha: &[Int], n: Int) -> Vec<Int> {
        let m = if n >= 0 { &self.hol } else { &self.hol_inv };
        (0..n.abs()).fold(alpha.to_vec(), |a, _| apply(&self.data.iso.h, m, &a))
    }

    /// Canonical representative: `y ∈ [0, 1)` with winding absorbed into `α`.
    pub fn normal_form(&self, x: &Arrow) -> Arrow {
        match x {
            Arrow::Side { side, y_src, y_tgt, alpha } => {
                let (m, n) = (floor(*y_src), floor(*y_tgt));
                let g = self.data.iso.group(*side);
                let a = add(g, alpha, &scale(g, self.data.gamma(*side).repr(), n - m));
                Arrow::Side { side: *side, y_src: y_src - m, y_tgt: y_tgt - n, alpha: a }
            }
            Arrow::Zero { y, scale, shift, alpha } => {
                let n = floor(*y);
                Arrow::Zero { y: y - n, scale: *scale, shift: *shift, alpha: self.hol_pow(alpha, n) }
            }
        }
    }

    /// A representative of `x` with source moved by `ks` and target by `kt` turns.
    pub fn lift(&self, x: &Arrow, ks: Int, kt: Int) -> Arrow {
        let x = self.normal_form(x);
        match &x {
            Arrow::Side { side, alpha, .. } => {
                let g = self.data.iso.group(*side);
                x.shifted(ks, kt).with_alpha(add(g, alpha, &scale(g, self.data.gamma(*side).repr(), ks - kt)))
            }
            Arrow::Zero { alpha, .. } => x.shifted(ks, ks).with_alpha(self.hol_pow(alpha, -ks)),
        }
    }

    pub fn unit(&self, p: &Point) -> Arrow {
        self.normal_form(&self.plane.unit(p))
    }

    /// Product of two normal forms.
    pub fn mul(&self, x: &Arrow, y: &Arrow) -> Result<Arrow> {
        Ok(self.normal_form(&self.plane.mul(&self.normal_form(x), &self.normal_form(y))?))
    }

    pub fn inv(&self, x: &Arrow) -> Arrow {
        self.normal_form(&self.plane.inv(&self.normal_form(x)))
    }
}
