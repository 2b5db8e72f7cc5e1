//! Isotropy data `G⁻ ← H → G⁺` and their maps.

use crate::error::{Error, Result};
use crate::groups::{lattice, GroupDescriptor, GroupElement, Homomorphism, MixedQuotientStructure};
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsotropyData {
    pub h: GroupDescriptor,
    pub g_minus: GroupDescriptor,
    pub g_plus: GroupDescriptor,
    pub phi_minus: Homomorphism,
    pub phi_plus: Homomorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn compose(self, other: Orientation) -> Orientation {
        if self == other {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }

    pub fn is_reversing(self) -> bool {
        self == Orientation::Reversing
    }

    pub fn name(self) -> &'static str {
        match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
        }
    }
}

/// The two sides of a singular component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Plus, Side::Minus];

    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    /// Side reached under a map of the given orientation.
    pub fn under(self, o: Orientation) -> Side {
        if o.is_reversing() {
            self.flip()
        } else {
            self
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Side::Plus => "+",
            Side::Minus => "-",
        }
    }
}

impl IsotropyData {
    pub fn new(h: GroupDescriptor, g_minus: GroupDescriptor, g_plus: GroupDescriptor, phi_minus: Homomorphism, phi_plus: Homomorphism) -> Self {
        IsotropyData { h, g_minus, g_plus, phi_minus, phi_plus }
    }

    pub fn group(&self, s: Side) -> &GroupDescriptor {
        match s {
            Side::Plus => &self.g_plus,
            Side::Minus => &self.g_minus,
        }
    }

    pub fn phi(&self, s: Side) -> &Homomorphism {
        match s {
            Side::Plus => &self.phi_plus,
            Side::Minus => &self.phi_minus,
        }
    }

    /// Empty when the data is valid.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in Side::BOTH {
            let phi = self.phi(s);
            if phi.source != self.h {
                out.push(format!("phi{} has source {}, expected H = {}", s.symbol(), phi.source, self.h));
            }
            if &phi.target != self.group(s) {
                out.push(format!("phi{} has target {}, expected G{} = {}", s.symbol(), phi.target, s.symbol(), self.group(s)));
            }
            if let Err(e) = phi.validate() {
                out.push(format!("phi{}: {e}", s.symbol()));
            }
        }
        out
    }

    /// Hausdorff iff both maps are injective; `None` for free backends.
    pub fn is_hausdorff(&self) -> Option<bool> {
        let mut all = true;
        for s in Side::BOTH {
            all &= is_injective(self.phi(s))?;
        }
        Some(all)
    }
}

pub fn validate_isotropy(i: &IsotropyData) -> std::result::Result<(), Vec<String>> {
    let d = i.diagnostics();
    if d.is_empty() {
        Ok(())
    } else {
        Err(d)
    }
}

/// Injectivity of an abelian map, via its kernel lattice.
pub fn is_injective(f: &Homomorphism) -> Option<bool> {
    let m = f.matrix()?;
    let kernel = lattice::kernel_mod(m, &f.target.moduli());
    Some(kernel.into_iter().all(|v| f.source.element(v).map(|x| x.is_identity()).unwrap_or(false)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsotropyMap {
    pub source: IsotropyData,
    pub target: IsotropyData,
    pub orientation: Orientation,
    pub psi: Homomorphism,
    /// Out of `G₁⁺`, into `G₂⁺` (preserving) or `G₂⁻` (reversing).
    pub psi_plus: Homomorphism,
    /// Out of `G₁⁻`, into `G₂⁻` (preserving) or `G₂⁺` (reversing).
    pub psi_minus: Homomorphism,
    /// Inverses of `(psi, psi_plus, psi_minus)`, required for free backends.
    pub witnesses: Option<Box<[Homomorphism; 3]>>,
}

impl IsotropyMap {
    pub fn identity(i: &IsotropyData) -> Self {
        IsotropyMap {
            source: i.clone(),
            target: i.clone(),
            orientation: Orientation::Preserving,
            psi: Homomorphism::identity(&i.h),
            psi_plus: Homomorphism::identity(&i.g_plus),
            psi_minus: Homomorphism::identity(&i.g_minus),
            witnesses: Some(Box::new([Homomorphism::identity(&i.h), Homomorphism::identity(&i.g_plus), Homomorphism::identity(&i.g_minus)])),
        }
    }

    pub fn psi_side(&self, s: Side) -> &Homomorphism {
        match s {
            Side::Plus => &self.psi_plus,
            Side::Minus => &self.psi_minus,
        }
    }

    fn witness(&self, k: usize) -> Option<&Homomorphism> {
        self.witnesses.as_ref().map(|w| &w[k])
    }

    /// Reasons the map fails; empty when it passes.
    pub fn failures(&self) -> Result<Vec<String>> {
        let (src, dst, o) = (&self.source, &self.target, self.orientation);
        let shape = |f: &Homomorphism, a: &GroupDescriptor, b: &GroupDescriptor, name: &str| -> Result<()> {
            if &f.source != a || &f.target != b {
                return Err(Error::BackendMismatch(format!("{name} maps {} -> {}, expected {a} -> {b}", f.source, f.target)));
            }
            Ok(())
        };
        shape(&self.psi, &src.h, &dst.h, "psi")?;
        for s in Side::BOTH {
            shape(self.psi_side(s), src.group(s), dst.group(s.under(o)), &format!("psi{}", s.symbol()))?;
        }
        let mut out = Vec::new();
        let maps = [(&self.psi, "psi", 0), (&self.psi_plus, "psi+", 1), (&self.psi_minus, "psi-", 2)];
        for (f, name, k) in maps {
            if let Err(e) = f.validate() {
                out.push(format!("{name}: {e}"));
            } else if !f.is_iso(self.witness(k))? {
                out.push(format!("{name} is not an isomorphism"));
            }
        }
        for s in Side::BOTH {
            let lhs = self.psi_side(s).compose(src.phi(s))?;
            let rhs = dst.phi(s.under(o)).compose(&self.psi)?;
            if lhs != rhs {
                out.push(format!("diagram fails on side {}: psi o phi = {lhs}, phi' o psi = {rhs}", s.symbol()));
            }
        }
        Ok(out)
    }
}

pub fn check_isotropy_map(m: &IsotropyMap) -> Result<bool> {
    Ok(m.failures()?.is_empty())
}

/// `f ∘ g`.
pub fn compose_isotropy_maps(f: &IsotropyMap, g: &IsotropyMap) -> Result<IsotropyMap> {
    if f.source != g.target {
        return Err(Error::Mismatch("isotropy maps do not chain".into()));
    }
    // the side of G₂ reached by g decides which map of f continues it
    let go = g.orientation;
    let psi_plus = f.psi_side(Side::Plus.under(go)).compose(&g.psi_plus)?;
    let psi_minus = f.psi_side(Side::Minus.under(go)).compose(&g.psi_minus)?;
    let witnesses = match (&f.witnesses, &g.witnesses) {
        (Some(fw), Some(gw)) => {
            let fw_side = |s: Side| if s == Side::Plus { &fw[1] } else { &fw[2] };
            Some(Box::new([
                gw[0].compose(&fw[0])?,
                gw[1].compose(fw_side(Side::Plus.under(go)))?,
                gw[2].compose(fw_side(Side::Minus.under(go)))?,
            ]))
        }
        _ => None,
    };
    Ok(IsotropyMap {
        source: g.source.clone(),
        target: f.target.clone(),
        orientation: f.orientation.compose(go),
        psi: f.psi.compose(&g.psi)?,
        psi_plus,
        psi_minus,
        witnesses,
    })
}

/// Conjugation by `alpha ∈ H`.
pub fn inner_isotropy(i: &IsotropyData, alpha: &GroupElement) -> Result<IsotropyMap> {
    if alpha.parent != i.h {
        return Err(Error::WrongParent(format!("{alpha} is not in H = {}", i.h)));
    }
    let conj = |x: &GroupElement| Homomorphism::conjugation(x);
    let a_plus = i.phi_plus.apply(alpha)?;
    let a_minus = i.phi_minus.apply(alpha)?;
    let inv = |g: &GroupDescriptor, x: &GroupElement| -> Result<Homomorphism> { Ok(conj(&g.inv(x)?)) };
    Ok(IsotropyMap {
        source: i.clone(),
        target: i.clone(),
        orientation: Orientation::Preserving,
        psi: conj(alpha),
        psi_plus: conj(&a_plus),
        psi_minus: conj(&a_minus),
        witnesses: Some(Box::new([inv(&i.h, alpha)?, inv(&i.g_plus, &a_plus)?, inv(&i.g_minus, &a_minus)?])),
    })
}

/// Whether an automorphism is conjugation by some `α ∈ H`.
///
/// Abelian data: inner means identity. Free data: searches conjugators of
/// length at most `search_len`.
pub fn is_inner_isotropy(m: &IsotropyMap, search_len: usize) -> Result<Verdict<GroupElement>> {
    if m.source != m.target {
        return Err(Error::NotAutomorphism("source and target differ".into()));
    }
    if m.orientation.is_reversing() {
        return Ok(Verdict::No("orientation reversing".into()));
    }
    let i = &m.source;
    let abelian = [&i.h, &i.g_plus, &i.g_minus].iter().all(|g| g.is_abelian());
    if abelian {
        return Ok(if m.psi.is_identity() && m.psi_plus.is_identity() && m.psi_minus.is_identity() {
            Verdict::Yes(i.h.identity())
        } else {
            Verdict::No("conjugation is trivial in abelian groups and the map is not the identity".into())
        });
    }
    let candidates: Vec<GroupElement> = match &i.h {
        GroupDescriptor::Free { rank } => crate::groups::free::words_up_to(*rank, search_len)
            .into_iter()
            .map(|w| i.h.element(w))
            .collect::<Result<_>>()?,
        _ => vec![i.h.identity()],
    };
    for alpha in candidates {
        let c = inner_isotropy(i, &alpha)?;
        if c.psi == m.psi && c.psi_plus == m.psi_plus && c.psi_minus == m.psi_minus {
            return Ok(Verdict::Yes(alpha));
        }
    }
    Ok(Verdict::Unknown(format!("no conjugator of length <= {search_len}")))
}

/// `Pic` of the plane integration: `OutAut(I) × R`, orientation preserving part.
pub fn picard_plane(i: &IsotropyData) -> Result<MixedQuotientStructure> {
    crate::presentation::picard::picard_plane(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::IntMatrix;

    fn lefschetz_iso() -> IsotropyData {
        let z2 = GroupDescriptor::lattice(2);
        let z = GroupDescriptor::lattice(1);
        let pr2 = Homomorphism::from_matrix(z2.clone(), z.clone(), IntMatrix::from_rows(&[vec![0, 1]])).unwrap();
        IsotropyData::new(z2, z.clone(), z, pr2.clone(), pr2)
    }

    fn with_psi(i: &IsotropyData, rows: &[Vec<i64>]) -> IsotropyMap {
        let mut m = IsotropyMap::identity(i);
        m.psi = Homomorphism::from_matrix(i.h.clone(), i.h.clone(), IntMatrix::from_rows(rows)).unwrap();
        m.witnesses = None;
        m
    }

    #[test]
    fn lefschetz_maps() {
        let i = lefschetz_iso();
        assert!(i.diagnostics().is_empty());
        assert!(check_isotropy_map(&with_psi(&i, &[vec![1, 1], vec![0, 1]])).unwrap());
        assert!(!check_isotropy_map(&with_psi(&i, &[vec![1, 0], vec![1, 1]])).unwrap());
        let a = with_psi(&i, &[vec![1, 2], vec![0, 1]]);
        let b = with_psi(&i, &[vec![1, 3], vec![0, 1]]);
        let ab = compose_isotropy_maps(&a, &b).unwrap();
        assert_eq!(ab.psi.matrix().unwrap(), &IntMatrix::from_rows(&[vec![1, 5], vec![0, 1]]));
        assert!(is_inner_isotropy(&a, 0).unwrap().is_no());
        assert_eq!(i.is_hausdorff(), Some(false));
    }

    #[test]
    fn reversing_twice_preserves() {
        let t = GroupDescriptor::Trivial;
        let i = IsotropyData::new(t.clone(), t.clone(), t.clone(), Homomorphism::zero(&t, &t), Homomorphism::zero(&t, &t));
        let mut r = IsotropyMap::identity(&i);
        r.orientation = Orientation::Reversing;
        assert!(check_isotropy_map(&r).unwrap());
        assert_eq!(compose_isotropy_maps(&r, &r).unwrap(), IsotropyMap::identity(&i));
    }

    #[test]
    fn free_inner_search() {
        let f2 = GroupDescriptor::free(2);
        let t = GroupDescriptor::Trivial;
        let i = IsotropyData::new(f2.clone(), t.clone(), t.clone(), Homomorphism::zero(&f2, &t), Homomorphism::zero(&f2, &t));
        let x = f2.element(vec![1]).unwrap();
        let m = inner_isotropy(&i, &x).unwrap();
        assert!(check_isotropy_map(&m).unwrap());
        assert_eq!(m.psi.apply(&f2.element(vec![2]).unwrap()).unwrap().repr(), &[1, 2, -1]);
        assert_eq!(is_inner_isotropy(&m, 2).unwrap(), Verdict::Yes(x));
    }
}
