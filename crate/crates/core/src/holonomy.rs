//! Holonomy data `(I, hol, γ±, ρ)` of cylinder integrations and their isomorphisms.

use crate::error::{Error, Result};
use crate::groups::{lattice, GroupDescriptor, GroupElement, Homomorphism, MixedQuotientStructure};
use crate::isotropy::{compose_isotropy_maps, inner_isotropy, IsotropyData, IsotropyMap, Orientation, Side};
use crate::rational::{format_rational, is_positive, Rational};
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HolonomyData {
    pub iso: IsotropyData,
    pub hol: Homomorphism,
    /// Inverse of `hol`; needed when `H` is free.
    pub hol_inverse: Option<Homomorphism>,
    pub gamma_plus: GroupElement,
    pub gamma_minus: GroupElement,
    pub period: Rational,
}

/// Switches for the parts of the theory the source leaves open.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Conventions {
    /// Reversing isomorphisms intertwine `hol₁⁻¹` instead of `hol₁`.
    pub reversing_hol_inverse: bool,
}

impl HolonomyData {
    pub fn gamma(&self, s: Side) -> &GroupElement {
        match s {
            Side::Plus => &self.gamma_plus,
            Side::Minus => &self.gamma_minus,
        }
    }

    pub fn hol_inv(&self) -> Result<Homomorphism> {
        self.hol
            .inverse(self.hol_inverse.as_ref())?
            .ok_or_else(|| Error::Invalid("hol is not an automorphism".into()))
    }

    /// Empty when the data is valid.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = self.iso.diagnostics();
        if !is_positive(&self.period) {
            out.push(format!("period {} is not positive", format_rational(&self.period)));
        }
        let h = &self.iso.h;
        if &self.hol.source != h || &self.hol.target != h {
            out.push(format!("hol maps {} -> {}, expected an endomorphism of H = {h}", self.hol.source, self.hol.target));
            return out;
        }
        match self.hol.validate().and_then(|_| self.hol.is_iso(self.hol_inverse.as_ref())) {
            Ok(true) => {}
            Ok(false) => out.push("hol is not an automorphism".into()),
            Err(e) => out.push(format!("hol: {e}")),
        }
        if !out.is_empty() {
            return out;
        }
        for s in Side::BOTH {
            let g = self.iso.group(s);
            if &self.gamma(s).parent != g {
                out.push(format!("gamma{} is not in G{} = {g}", s.symbol(), s.symbol()));
                continue;
            }
            let phi = self.iso.phi(s);
            let lhs = phi.compose(&self.hol);
            let rhs = Homomorphism::conjugation(self.gamma(s)).compose(phi);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                (Ok(l), Ok(r)) => out.push(format!(
                    "phi{0} o hol = {l} differs from C(gamma{0}) o phi{0} = {r}",
                    s.symbol()
                )),
                (Err(e), _) | (_, Err(e)) => out.push(format!("side {}: {e}", s.symbol())),
            }
        }
        out
    }
}

pub fn validate_holonomy(d: &HolonomyData) -> std::result::Result<(), Vec<String>> {
    let diag = d.diagnostics();
    if diag.is_empty() {
        Ok(())
    } else {
        Err(diag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HolonomyIso {
    pub base: IsotropyMap,
    pub h: GroupElement,
}

impl HolonomyIso {
    pub fn identity(d: &HolonomyData) -> Self {
        HolonomyIso { base: IsotropyMap::identity(&d.iso), h: d.iso.h.identity() }
    }

    pub fn orientation(&self) -> Orientation {
        self.base.orientation
    }

    /// Reasons the map fails to be an isomorphism `src → dst`; empty when it passes.
    pub fn failures(&self, src: &HolonomyData, dst: &HolonomyData, conv: Conventions) -> Result<Vec<String>> {
        if self.base.source != src.iso || self.base.target != dst.iso {
            return Err(Error::Mismatch("isomorphism endpoints differ from the given data".into()));
        }
        if self.h.parent != dst.iso.h {
            return Err(Error::WrongParent(format!("h = {} is not in H2 = {}", self.h, dst.iso.h)));
        }
        let mut out = self.base.failures()?;
        if !out.is_empty() {
            return Ok(out);
        }
        let psi = &self.base.psi;
        let o = self.orientation();
        // (i) hol₂ ∘ ψ = C_h ∘ ψ ∘ hol₁
        let hol1 = if o.is_reversing() && conv.reversing_hol_inverse { src.hol_inv()? } else { src.hol.clone() };
        let lhs = dst.hol.compose(psi)?;
        let rhs = Homomorphism::conjugation(&self.h).compose(&psi.compose(&hol1)?)?;
        if lhs != rhs {
            out.push(format!("condition (i) fails: hol2 o psi = {lhs}, C(h) o psi o hol1 = {rhs}"));
        }
        // (ii) φ₂ᵗ(h) = γ₂ᵗ · ψˢ(γ₁ˢ)⁻¹ with t the side reached from s
        for s in Side::BOTH {
            let t = s.under(o);
            let g2 = dst.iso.group(t);
            let lhs = dst.iso.phi(t).apply(&self.h)?;
            let rhs = g2.div(dst.gamma(t), &self.base.psi_side(s).apply(src.gamma(s))?)?;
            if lhs != rhs {
                out.push(format!("condition (ii) fails on side {}: phi(h) = {lhs}, expected {rhs}", t.symbol()));
            }
        }
        if src.period != dst.period {
            out.push(format!("periods differ: {} vs {}", format_rational(&src.period), format_rational(&dst.period)));
        }
        Ok(out)
    }
}

pub fn check_holonomy_iso(m: &HolonomyIso, src: &HolonomyData, dst: &HolonomyData, conv: Conventions) -> Result<bool> {
    Ok(m.failures(src, dst, conv)?.is_empty())
}

/// `f ∘ g = (Ψ_f ∘ Ψ_g, h_f · Ψ_f(h_g))`.
pub fn compose_holonomy_isos(f: &HolonomyIso, g: &HolonomyIso) -> Result<HolonomyIso> {
    let base = compose_isotropy_maps(&f.base, &g.base)?;
    let h2 = &f.base.target.h;
    let h = h2.mul(&f.h, &f.base.psi.apply(&g.h)?)?;
    Ok(HolonomyIso { base, h })
}

/// `(Ψ⁻¹, Ψ⁻¹(h)⁻¹)`.
pub fn invert_holonomy_iso(m: &HolonomyIso) -> Result<HolonomyIso> {
    let b = &m.base;
    let w = |k: usize| b.witnesses.as_ref().map(|w| w[k].clone());
    let inv = |f: &Homomorphism, k: usize| -> Result<Homomorphism> {
        f.inverse(w(k).as_ref())?.ok_or_else(|| Error::Invalid("map is not invertible".into()))
    };
    let psi = inv(&b.psi, 0)?;
    let plus_inv = inv(&b.psi_plus, 1)?;
    let minus_inv = inv(&b.psi_minus, 2)?;
    // the inverse leaves G₂ᵗ for t = s.under(o) and lands back on side s
    let (psi_plus, psi_minus) = if b.orientation.is_reversing() { (minus_inv, plus_inv) } else { (plus_inv, minus_inv) };
    let h1 = &b.source.h;
    let h = h1.inv(&psi.apply(&m.h)?)?;
    let witnesses = Some(Box::new([b.psi.clone(), psi_plus_original(b, Side::Plus), psi_plus_original(b, Side::Minus)]));
    Ok(HolonomyIso {
        base: IsotropyMap {
            source: b.target.clone(),
            target: b.source.clone(),
            orientation: b.orientation,
            psi,
            psi_plus,
            psi_minus,
            witnesses,
        },
        h,
    })
}

/// The original map whose inverse leaves side `t` of the target.
fn psi_plus_original(b: &IsotropyMap, t: Side) -> Homomorphism {
    b.psi_side(t.under(b.orientation)).clone()
}

/// `(C_α, hol(α) α⁻¹)`.
pub fn inner_holonomy(d: &HolonomyData, alpha: &GroupElement) -> Result<HolonomyIso> {
    let base = inner_isotropy(&d.iso, alpha)?;
    let h = d.iso.h.div(&d.hol.apply(alpha)?, alpha)?;
    Ok(HolonomyIso { base, h })
}

/// Whether `P(Ψ,h)` is the trivial bimodule, i.e. `(Ψ,h)` is inner.
pub fn is_trivial_bimodule(m: &HolonomyIso, d: &HolonomyData, search_len: usize) -> Result<Verdict<GroupElement>> {
    if m.base.source != m.base.target || m.base.source != d.iso {
        return Err(Error::NotAutomorphism("isomorphism is not an automorphism of the given data".into()));
    }
    if m.orientation().is_reversing() {
        return Ok(Verdict::No("orientation reversing".into()));
    }
    let h = &d.iso.h;
    let abelian = [h, &d.iso.g_plus, &d.iso.g_minus].iter().all(|g| g.is_abelian());
    if abelian {
        if !(m.base.psi.is_identity() && m.base.psi_plus.is_identity() && m.base.psi_minus.is_identity()) {
            return Ok(Verdict::No("psi is not the identity".into()));
        }
        let hol = d.hol.matrix().expect("abelian hol");
        let shifted = hol.sub(&crate::groups::IntMatrix::identity(h.dim()));
        return Ok(match lattice::solve_mod(&shifted, m.h.repr(), &h.moduli()) {
            Some(a) => Verdict::Yes(h.element(a)?),
            None => Verdict::No(format!("h = {} is not in the image of hol - 1", m.h)),
        });
    }
    let candidates: Vec<GroupElement> = match h {
        GroupDescriptor::Free { rank } => {
            crate::groups::free::words_up_to(*rank, search_len).into_iter().map(|w| h.element(w)).collect::<Result<_>>()?
        }
        _ => vec![h.identity()],
    };
    for alpha in candidates {
        let c = inner_holonomy(d, &alpha)?;
        if c.h == m.h && c.base.psi == m.base.psi && c.base.psi_plus == m.base.psi_plus && c.base.psi_minus == m.base.psi_minus {
            return Ok(Verdict::Yes(alpha));
        }
    }
    Ok(Verdict::Unknown(format!("no inner witness of length <= {search_len}")))
}

/// `(hol, C_γ⁺, C_γ⁻)` with `h = e`: the class of the modular flow.
pub fn twist_class(d: &HolonomyData) -> Result<HolonomyIso> {
    let hol_inv = d.hol_inv()?;
    let cp = Homomorphism::conjugation(&d.gamma_plus);
    let cm = Homomorphism::conjugation(&d.gamma_minus);
    let cp_inv = Homomorphism::conjugation(&d.iso.g_plus.inv(&d.gamma_plus)?);
    let cm_inv = Homomorphism::conjugation(&d.iso.g_minus.inv(&d.gamma_minus)?);
    Ok(HolonomyIso {
        base: IsotropyMap {
            source: d.iso.clone(),
            target: d.iso.clone(),
            orientation: Orientation::Preserving,
            psi: d.hol.clone(),
            psi_plus: cp,
            psi_minus: cm,
            witnesses: Some(Box::new([hol_inv, cp_inv, cm_inv])),
        },
        h: d.iso.h.identity(),
    })
}

/// `Pic` of the cylinder integration: orientation preserving part of `(OutAut(d) × R) / ⟨(twist, ρ)⟩`.
pub fn picard_cylinder(d: &HolonomyData) -> Result<MixedQuotientStructure> {
    crate::presentation::picard::picard_cylinder(d)
}
