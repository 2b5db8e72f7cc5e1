//! Seeded random abelian holonomy data and isomorphisms between them.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{apply, reduce};
use crate::error::{Error, Result};
use crate::groups::{lattice, GroupDescriptor, Homomorphism, Int, IntMatrix};
use crate::holonomy::{compose_holonomy_isos, inner_holonomy, twist_class, HolonomyData, HolonomyIso};
use crate::isotropy::{IsotropyData, IsotropyMap, Orientation, Side};
use crate::rational::Rational;

/// Largest absolute value of a random entry.
pub const BOUND: Int = 5;

pub fn random_group<R: Rng>(rng: &mut R) -> GroupDescriptor {
    let choices: [(usize, &[Int]); 8] = [(0, &[]), (1, &[]), (2, &[]), (0, &[2]), (0, &[3]), (1, &[2]), (0, &[2, 2]), (0, &[4])];
    let (f, t) = choices.choose(rng).expect("non-empty");
    GroupDescriptor::abelian(*f, t.to_vec()).expect("valid chain")
}

pub fn random_element<R: Rng>(rng: &mut R, g: &GroupDescriptor) -> Vec<Int> {
    reduce(g, (0..g.dim()).map(|_| rng.gen_range(-BOUND..=BOUND)).collect())
}

fn gcd(a: Int, b: Int) -> Int {
    num_integer::gcd(a, b)
}

/// A random well-defined map `src → dst`.
pub fn random_hom<R: Rng>(rng: &mut R, src: &GroupDescriptor, dst: &GroupDescriptor) -> IntMatrix {
    let (sm, dm) = (src.moduli(), dst.moduli());
    let mut m = IntMatrix::zeros(dst.dim(), src.dim());
    for j in 0..src.dim() {
        for i in 0..dst.dim() {
            let x = rng.gen_range(-BOUND..=BOUND);
            m[(i, j)] = match (sm[j], dm[i]) {
                (_, 0) if sm[j] != 0 => 0,
                (_, 0) => x,
                (0, n) => x.rem_euclid(n),
                (k, n) => (x * (n / gcd(k, n))).rem_euclid(n),
            };
        }
    }
    m
}

fn mod_inverse(u: Int, n: Int) -> Int {
    (1..n).find(|v| (u * v).rem_euclid(n) == 1).expect("unit")
}

/// A random automorphism of `g` and its inverse.
pub fn random_aut<R: Rng>(rng: &mut R, g: &GroupDescriptor) -> (IntMatrix, IntMatrix) {
    let d = g.dim();
    let f = g.free_rank();
    let moduli = g.moduli();
    let mut m = IntMatrix::identity(d);
    let mut inv = IntMatrix::identity(d);
    for _ in 0..rng.gen_range(0..4) {
        let (i, j) = (rng.gen_range(0..d.max(1)), rng.gen_range(0..d.max(1)));
        if d == 0 {
            break;
        }
        if i == j {
            if i < f {
                m.negate_row(i);
                inv.negate_col(i);
            } else {
                let n = moduli[i];
                let units: Vec<Int> = (1..n).filter(|&u| gcd(u, n) == 1).collect();
                let u = *units.choose(rng).expect("unit");
                let v = mod_inverse(u, n);
                for c in 0..d {
                    m[(i, c)] *= u;
                    inv[(c, i)] *= v;
                }
            }
        } else if moduli[i] == moduli[j] || (moduli[j] == 0 && moduli[i] != 0) {
            // a free coordinate may feed a torsion one, never the reverse
            let k = rng.gen_range(-2..=2);
            m.add_row_multiple(i, j, k);
            inv.add_col_multiple(j, i, -k);
        }
    }
    let fix = |x: IntMatrix| {
        let cols: Vec<Vec<Int>> = (0..d).map(|c| reduce(g, x.column(c))).collect();
        IntMatrix::from_columns(&cols, d)
    };
    (fix(m), fix(inv))
}

fn hom(src: &GroupDescriptor, dst: &GroupDescriptor, m: IntMatrix) -> Result<Homomorphism> {
    Homomorphism::from_matrix(src.clone(), dst.clone(), m)
}

fn mat_eq(g: &GroupDescriptor, a: &IntMatrix, b: &IntMatrix) -> bool {
    (0..a.cols()).all(|c| reduce(g, a.column(c)) == reduce(g, b.column(c)))
}

/// Unipotent or finite-order `hol`, so powers stay small.
fn random_hol<R: Rng>(rng: &mut R, h: &GroupDescriptor) -> (IntMatrix, IntMatrix) {
    let d = h.dim();
    let f = h.free_rank();
    let mut m = IntMatrix::identity(d);
    let mut inv = IntMatrix::identity(d);
    match rng.gen_range(0..4) {
        0 => {}
        1 if f == 2 => {
            let (i, j) = if rng.gen() { (0, 1) } else { (1, 0) };
            let k = rng.gen_range(-2..=2);
            m.add_row_multiple(i, j, k);
            inv.add_row_multiple(i, j, -k);
        }
        2 if f >= 1 => {
            let i = rng.gen_range(0..f);
            m.negate_row(i);
            inv.negate_row(i);
        }
        _ => return random_aut_finite_order(rng, h),
    }
    (m, inv)
}

fn random_aut_finite_order<R: Rng>(rng: &mut R, h: &GroupDescriptor) -> (IntMatrix, IntMatrix) {
    let d = h.dim();
    let f = h.free_rank();
    let mut m = IntMatrix::identity(d);
    let mut inv = IntMatrix::identity(d);
    if f == 2 && rng.gen() {
        m.swap_rows(0, 1);
        inv.swap_rows(0, 1);
    }
    for i in f..d {
        let n = h.moduli()[i];
        let units: Vec<Int> = (1..n).filter(|&u| gcd(u, n) == 1).collect();
        let u = *units.choose(rng).expect("unit");
        m[(i, i)] = u;
        inv[(i, i)] = mod_inverse(u, n);
    }
    (m, inv)
}

/// `φ` with `φ ∘ hol = φ`, found by sampling; the zero map as a last resort.
fn invariant_phi<R: Rng>(rng: &mut R, h: &GroupDescriptor, g: &GroupDescriptor, hol: &IntMatrix) -> IntMatrix {
    for _ in 0..60 {
        let phi = random_hom(rng, h, g);
        if mat_eq(g, &(&phi * hol), &phi) {
            return phi;
        }
    }
    IntMatrix::zeros(g.dim(), h.dim())
}

fn random_period<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

pub fn random_data<R: Rng>(rng: &mut R) -> Result<HolonomyData> {
    let h = random_group(rng);
    let (gp, gm) = (random_group(rng), random_group(rng));
    let (hol, hol_inv) = random_hol(rng, &h);
    let pp = invariant_phi(rng, &h, &gp, &hol);
    let pm = invariant_phi(rng, &h, &gm, &hol);
    let iso = IsotropyData::new(h.clone(), gm.clone(), gp.clone(), hom(&h, &gm, pm)?, hom(&h, &gp, pp)?);
    let d = HolonomyData {
        hol: hom(&h, &h, hol)?,
        hol_inverse: Some(hom(&h, &h, hol_inv)?),
        gamma_plus: gp.element(random_element(rng, &gp))?,
        gamma_minus: gm.element(random_element(rng, &gm))?,
        period: random_period(rng),
        iso,
    };
    let diag = d.diagnostics();
    if !diag.is_empty() {
        return Err(Error::Invalid(format!("generated data invalid: {}", diag.join("; "))));
    }
    Ok(d)
}

/// New data `d₂` and an orientation preserving isomorphism `d → d₂` built from random automorphisms.
pub fn transport<R: Rng>(rng: &mut R, d: &HolonomyData) -> Result<(HolonomyData, HolonomyIso)> {
    let i = &d.iso;
    let (psi, psi_inv) = random_aut(rng, &i.h);
    let (pp, pp_inv) = random_aut(rng, &i.g_plus);
    let (pm, pm_inv) = random_aut(rng, &i.g_minus);
    let hvec = random_element(rng, &i.h);
    let phi2 = |s: Side, p: &IntMatrix| -> Result<IntMatrix> {
        let g = i.group(s);
        let m = &(p * super::mat(i.phi(s))?) * &psi_inv;
        let cols: Vec<Vec<Int>> = (0..m.cols()).map(|c| reduce(g, m.column(c))).collect();
        Ok(IntMatrix::from_columns(&cols, g.dim()))
    };
    let (phi2p, phi2m) = (phi2(Side::Plus, &pp)?, phi2(Side::Minus, &pm)?);
    let hol2 = &(&psi * super::mat(&d.hol)?) * &psi_inv;
    let hol2 = IntMatrix::from_columns(&(0..hol2.cols()).map(|c| reduce(&i.h, hol2.column(c))).collect::<Vec<_>>(), i.h.dim());
    let hol2_inv = &(&psi * super::mat(&d.hol_inv()?)?) * &psi_inv;
    let hol2_inv = IntMatrix::from_columns(&(0..hol2_inv.cols()).map(|c| reduce(&i.h, hol2_inv.column(c))).collect::<Vec<_>>(), i.h.dim());
    let gamma2 = |s: Side, p: &IntMatrix, phi: &IntMatrix| -> Vec<Int> {
        let g = i.group(s);
        super::add(g, &apply(g, p, d.gamma(s).repr()), &apply(g, phi, &hvec))
    };
    let iso2 = IsotropyData::new(
        i.h.clone(),
        i.g_minus.clone(),
        i.g_plus.clone(),
        hom(&i.h, &i.g_minus, phi2m.clone())?,
        hom(&i.h, &i.g_plus, phi2p.clone())?,
    );
    let d2 = HolonomyData {
        hol: hom(&i.h, &i.h, hol2)?,
        hol_inverse: Some(hom(&i.h, &i.h, hol2_inv)?),
        gamma_plus: i.g_plus.element(gamma2(Side::Plus, &pp, &phi2p))?,
        gamma_minus: i.g_minus.element(gamma2(Side::Minus, &pm, &phi2m))?,
        period: d.period,
        iso: iso2.clone(),
    };
    let f = HolonomyIso {
        base: IsotropyMap {
            source: i.clone(),
            target: iso2,
            orientation: Orientation::Preserving,
            psi: hom(&i.h, &i.h, psi)?,
            psi_plus: hom(&i.g_plus, &i.g_plus, pp)?,
            psi_minus: hom(&i.g_minus, &i.g_minus, pm)?,
            witnesses: Some(Box::new([hom(&i.h, &i.h, psi_inv)?, hom(&i.g_plus, &i.g_plus, pp_inv)?, hom(&i.g_minus, &i.g_minus, pm_inv)?])),
        },
        h: i.h.element(hvec)?,
    };
    let diag = d2.diagnostics();
    if !diag.is_empty() {
        return Err(Error::Invalid(format!("transported data invalid: {}", diag.join("; "))));
    }
    Ok((d2, f))
}

/// `(id, h)` with `h` in the common kernel of `φ±`.
pub fn kernel_translation<R: Rng>(rng: &mut R, d: &HolonomyData) -> Result<HolonomyIso> {
    let i = &d.iso;
    let stacked = super::mat(&i.phi_plus)?.vstack(super::mat(&i.phi_minus)?);
    let moduli: Vec<Int> = i.g_plus.moduli().into_iter().chain(i.g_minus.moduli()).collect();
    let basis = lattice::kernel_mod(&stacked, &moduli);
    let mut h = vec![0; i.h.dim()];
    for b in &basis {
        let k = rng.gen_range(-2..=2);
        for (x, y) in h.iter_mut().zip(b) {
            *x += k * y;
        }
    }
    let mut f = HolonomyIso::identity(d);
    f.h = i.h.element(reduce(&i.h, h))?;
    Ok(f)
}

/// Orientation preserving automorphisms of `d`: inner, twist, kernel translations and products.
pub fn random_automorphism<R: Rng>(rng: &mut R, d: &HolonomyData) -> Result<HolonomyIso> {
    let one = |rng: &mut R| -> Result<HolonomyIso> {
        match rng.gen_range(0..4) {
            0 => inner_holonomy(d, &d.iso.h.element(random_element(rng, &d.iso.h))?),
            1 => twist_class(d),
            2 => kernel_translation(rng, d),
            _ => Ok(HolonomyIso::identity(d)),
        }
    };
    let mut f = one(rng)?;
    for _ in 0..rng.gen_range(0..3) {
        f = compose_holonomy_isos(&one(rng)?, &f)?;
    }
    Ok(f)
}

fn invert_small(m: &IntMatrix, g: &GroupDescriptor) -> IntMatrix {
    match g.moduli().first().copied() {
        Some(n) if n != 0 => IntMatrix::from_rows(&[vec![mod_inverse(m[(0, 0)], n)]]),
        _ => m.clone(),
    }
}

/// Every automorphism `(ψ, ψ+, ψ−, h)` of `d` with `h` entries in `[-bound, bound]`, for groups of rank at most one.
pub fn small_automorphisms(d: &HolonomyData, bound: Int) -> Result<Vec<HolonomyIso>> {
    let i = &d.iso;
    let auts = |g: &GroupDescriptor| -> Vec<IntMatrix> {
        match (g.dim(), g.moduli().first().copied()) {
            (0, _) => vec![IntMatrix::identity(0)],
            (1, Some(0)) => vec![IntMatrix::identity(1), IntMatrix::identity(1).scale(-1)],
            (1, Some(n)) => (1..n).filter(|&u| gcd(u, n) == 1).map(|u| IntMatrix::from_rows(&[vec![u]])).collect(),
            _ => Vec::new(),
        }
    };
    let hs: Vec<Vec<Int>> = match (i.h.dim(), i.h.moduli().first().copied()) {
        (0, _) => vec![vec![]],
        (1, Some(0)) => (-bound..=bound).map(|x| vec![x]).collect(),
        (1, Some(n)) => (0..n).map(|x| vec![x]).collect(),
        _ => return Err(Error::Invalid("exhaustive enumeration needs groups of rank at most one".into())),
    };
    let mut out = Vec::new();
    for psi in auts(&i.h) {
        let psi_inv = invert_small(&psi, &i.h);
        for pp in auts(&i.g_plus) {
            for pm in auts(&i.g_minus) {
                for h in &hs {
                    let f = HolonomyIso {
                        base: IsotropyMap {
                            source: i.clone(),
                            target: i.clone(),
                            orientation: Orientation::Preserving,
                            psi: hom(&i.h, &i.h, psi.clone())?,
                            psi_plus: hom(&i.g_plus, &i.g_plus, pp.clone())?,
                            psi_minus: hom(&i.g_minus, &i.g_minus, pm.clone())?,
                            witnesses: Some(Box::new([
                                hom(&i.h, &i.h, psi_inv.clone())?,
                                hom(&i.g_plus, &i.g_plus, invert_small(&pp, &i.g_plus))?,
                                hom(&i.g_minus, &i.g_minus, invert_small(&pm, &i.g_minus))?,
                            ])),
                        },
                        h: i.h.element(h.clone())?,
                    };
                    if f.failures(d, d, Default::default())?.is_empty() {
                        out.push(f);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every holonomy datum with `H, G± ∈ {1, Z, Z/2}` and entries in `[-bound, bound]`.
pub fn small_data(bound: Int) -> Vec<HolonomyData> {
    let groups = [GroupDescriptor::Trivial, GroupDescriptor::lattice(1), GroupDescriptor::cyclic(2)];
    let elements = |g: &GroupDescriptor| -> Vec<Vec<Int>> {
        match g.moduli().first().copied() {
            None => vec![vec![]],
            Some(0) => (-bound..=bound).map(|x| vec![x]).collect(),
            Some(n) => (0..n).map(|x| vec![x]).collect(),
        }
    };
    let homs = |s: &GroupDescriptor, t: &GroupDescriptor| -> Vec<IntMatrix> {
        match (s.dim(), t.dim()) {
            (1, 1) => elements(t)
                .into_iter()
                .map(|x| IntMatrix::from_rows(&[x]))
                .filter(|m| Homomorphism::from_matrix(s.clone(), t.clone(), m.clone()).and_then(|f| f.validate()).is_ok())
                .collect(),
            _ => vec![IntMatrix::zeros(t.dim(), s.dim())],
        }
    };
    let mut out = Vec::new();
    for h in &groups {
        let hols: Vec<IntMatrix> = match h.moduli().first().copied() {
            Some(0) => vec![IntMatrix::identity(1), IntMatrix::identity(1).scale(-1)],
            _ => vec![IntMatrix::identity(h.dim())],
        };
        for gp in &groups {
            for gm in &groups {
                for hol in &hols {
                    for pp in homs(h, gp) {
                        for pm in homs(h, gm) {
                            for cp in elements(gp) {
                                for cm in elements(gm) {
                                    let Ok(iso) = (|| -> Result<IsotropyData> {
                                        Ok(IsotropyData::new(h.clone(), gm.clone(), gp.clone(), hom(h, gm, pm.clone())?, hom(h, gp, pp.clone())?))
                                    })() else {
                                        continue;
                                    };
                                    let d = HolonomyData {
                                        hol: hom(h, h, hol.clone()).expect("hol"),
                                        hol_inverse: None,
                                        gamma_plus: gp.element(cp.clone()).expect("gamma"),
                                        gamma_minus: gm.element(cm.clone()).expect("gamma"),
                                        period: Rational::from_integer(1),
                                        iso,
                                    };
                                    if d.diagnostics().is_empty() {
                                        out.push(d);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
