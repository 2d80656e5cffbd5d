//! The differential pattern, Leibniz propagation over module descriptors,
//! page turning and convergence.
//!
//! For `E_n` the only nonzero differentials are the `d_{2^{k+1}−1}`,
//! `1 ≤ k ≤ n`, propagated from
//!
//! ```text
//! d_{2^{k+1}−1}(u_{2σ}^{2^{k−1}}) = ū_k ū^{2^k−1} a_σ^{2^{k+1}−1}   (k < n)
//! d_{2^{n+1}−1}(u_{2σ}^{2^{n−1}}) = ū^{2^n−1} a_σ^{2^{n+1}−1}
//! ```
//!
//! by the Leibniz rule. Every target is `a_σ`-divisible and hence 2-torsion,
//! so on `u_{2σ}^j` the page-`k` differential is nonzero exactly when
//! `v₂(j) = k − 1`.

mod bpr;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{is_valid_displacement, TriDegree};
use crate::pages::{
    build_e2_en, Lookup, ModuleDescriptor, Monomial, Page, PageError, PageLattice, PointData,
    Theory, Truncation, Window,
};

pub use bpr::{run_bpr, BprRun};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("pattern violation on page {page} at {at}: {detail}")]
    PatternViolation { page: u32, at: TriDegree, detail: String },
    #[error("d_{page} from interior point {from} leaves the padded window (target {to})")]
    WindowLeak { page: u32, from: TriDegree, to: TriDegree },
    #[error("generator differential k = {k} is out of range for height {n}")]
    GeneratorOutOfRange { k: u32, n: u32 },
    #[error("page {0} is not of the form 2^(k+1) - 1 for this height")]
    NotADifferentialPage(u32),
    #[error("no class at {at} on page {page}")]
    NotPresent { at: TriDegree, page: Page },
    #[error("expected a lattice of theory {expected}, found {found}")]
    WrongTheory { expected: Theory, found: Theory },
    #[error(transparent)]
    Page(#[from] PageError),
}

/// How a differential acts on the cyclic modules at its two ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ArrowMap {
    Zero,
    /// `x ↦ ū_k·x̄`; `reduce` when the source is a Witt module and the map
    /// first reduces mod 2.
    MultiplyUbar { k: u32, reduce: bool },
    /// `x ↦ x̄` (the `k = n` family).
    Unit { reduce: bool },
    /// `BP_ℝ`: `x ↦ v̄_k·x̄`.
    MultiplyVbar { k: u32 },
}

impl fmt::Display for ArrowMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrowMap::Zero => f.write_str("0"),
            ArrowMap::MultiplyUbar { k, reduce: false } => write!(f, "·ū{k}"),
            ArrowMap::MultiplyUbar { k, reduce: true } => write!(f, "·ū{k}∘mod2"),
            ArrowMap::Unit { reduce: false } => f.write_str("1"),
            ArrowMap::Unit { reduce: true } => f.write_str("mod2"),
            ArrowMap::MultiplyVbar { k } => write!(f, "·v̄{k}∘mod2"),
        }
    }
}

/// One arrow `d_r: source → target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Differential {
    pub r: u32,
    pub source: TriDegree,
    pub target: TriDegree,
    pub map: ArrowMap,
    /// The Leibniz image of the source's basis monomial; carries the `ū_k`
    /// factor that the target's basis point does not.
    pub image: Option<Monomial>,
}

/// `d_r(u_{2σ}^{2^{k−1}}) = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorRule {
    pub theory: Theory,
    pub k: u32,
    pub r: u32,
    pub source: Monomial,
    pub target: Monomial,
}

/// `2^{k+1} − 1`.
pub fn page_length(k: u32) -> u32 {
    (1 << (k + 1)) - 1
}

/// The `k` with `r = 2^{k+1} − 1`, if any.
pub fn page_index(r: u32) -> Option<u32> {
    let k = (r + 1).trailing_zeros().checked_sub(1)?;
    (k >= 1 && page_length(k) == r).then_some(k)
}

/// The generating differential of the `k`-th family. `n` is the height for
/// `E_n` and is ignored for `BP_ℝ` (which has a family for every `k ≥ 1`).
pub fn generator_differential(theory: Theory, n: u32, k: u32) -> Result<GeneratorRule, EngineError> {
    if k == 0 || (theory == Theory::En && k > n) || k > 30 {
        return Err(EngineError::GeneratorOutOfRange { k, n });
    }
    let r = page_length(k);
    let half = 1i64 << (k - 1);
    let (source, target) = match theory {
        Theory::En => {
            let ubar = (1i64 << k) - 1;
            let series = if k < n { unit_vector(k) } else { Vec::new() };
            (Monomial::en(vec![], 0, half, 0), Monomial::en(series, ubar, 0, i64::from(r)))
        }
        Theory::Bpr => (Monomial::bpr(vec![], half, 0), Monomial::bpr(unit_vector(k), 0, i64::from(r))),
    };
    Ok(GeneratorRule { theory, k, r, source, target })
}

fn unit_vector(k: u32) -> Vec<i64> {
    let mut v = vec![0; k as usize];
    v[k as usize - 1] = 1;
    v
}

/// 2-adic valuation; `None` for zero.
pub fn v2(j: i64) -> Option<u32> {
    (j != 0).then(|| j.trailing_zeros())
}

/// Does the page-`k` family act nontrivially on `u_{2σ}^j`?
pub fn supports_family(j: i64, k: u32) -> bool {
    v2(j) == Some(k - 1)
}

/// Leibniz image of `m` under the page-`k` family:
/// `m · u_{2σ}^{−2^{k−1}} · target(k)`, or `None` when the valuation rule
/// makes the differential vanish.
pub fn leibniz_image(m: &Monomial, n: u32, k: u32) -> Result<Option<Monomial>, EngineError> {
    if !supports_family(m.u2sigma, k) {
        return Ok(None);
    }
    let rule = generator_differential(m.theory, n, k)?;
    let mut quotient = Monomial::one(m.theory);
    quotient.u2sigma = -rule.source.u2sigma;
    let image = m
        .mul(&quotient)
        .and_then(|x| x.mul(&rule.target))
        .expect("same theory by construction");
    Ok(Some(image))
}

/// The `d_r` arrow leaving `td` on an `E_n` page.
pub fn leibniz_arrow(lattice: &PageLattice, td: TriDegree, r: u32) -> Result<Differential, EngineError> {
    let n = lattice.height;
    let k = page_index(r).filter(|&k| k <= n).ok_or(EngineError::NotADifferentialPage(r))?;
    let point = match lattice.lookup(td) {
        Lookup::Present(p) => p,
        _ => return Err(EngineError::NotPresent { at: td, page: lattice.page }),
    };
    let (monomial, descriptor) = match point {
        PointData::En { monomial, descriptor } => (monomial, *descriptor),
        PointData::Bpr { .. } => {
            return Err(EngineError::WrongTheory { expected: Theory::En, found: Theory::Bpr })
        }
    };
    let target = TriDegree::new(td.a() - 1, td.b(), td.s + i64::from(r));
    let Some(image) = leibniz_image(monomial, n, k)? else {
        return Ok(Differential { r, source: td, target, map: ArrowMap::Zero, image: None });
    };
    let landed = crate::grading::degree_of_monomial(&image, n).expect("valid monomial");
    if landed != target || !is_valid_displacement(td, landed, r) {
        return Err(EngineError::PatternViolation {
            page: r,
            at: td,
            detail: format!("image {image} lands at {landed}, expected {target}"),
        });
    }
    let reduce = descriptor.is_witt();
    let map = if k < n { ArrowMap::MultiplyUbar { k, reduce } } else { ArrowMap::Unit { reduce } };
    Ok(Differential { r, source: td, target, map, image: Some(image) })
}

/// New (source, target) descriptors, or `None` if the arrow is the zero
/// map on these modules.
pub fn apply_rule(
    map: ArrowMap,
    source: ModuleDescriptor,
    target: ModuleDescriptor,
) -> Result<Option<(ModuleDescriptor, ModuleDescriptor)>, String> {
    use ModuleDescriptor as D;
    if source.is_zero() || target.is_zero() || map == ArrowMap::Zero {
        return Ok(None);
    }
    let t = match target {
        D::TorsLevel { k0 } => k0,
        other => return Err(format!("target descriptor {other} cannot receive a differential")),
    };
    // The image of the source module, expressed as the kernel left behind.
    let kernel = |src: ModuleDescriptor| -> Result<Option<ModuleDescriptor>, String> {
        match src {
            D::TorsLevel { k0 } if k0 <= t => Ok(Some(D::tors_ideal(k0, t))),
            D::TorsLevel { k0 } => Err(format!("TorsLevel({k0}) source does not map into TorsLevel({t})")),
            D::WittLevel { e: 0 } => Ok(Some(D::witt_ideal(t))),
            // 2ᵉ·x reduces to zero mod 2.
            D::WittLevel { .. } => Ok(None),
            other => Err(format!("source descriptor {other} outside the supported family")),
        }
    };
    match map {
        ArrowMap::MultiplyUbar { k, .. } => {
            if k < t {
                return Ok(None);
            }
            if k > t {
                return Err(format!("multiplication by ū{k} into TorsLevel({t}) is not defined"));
            }
            Ok(kernel(source)?.map(|s| (s, D::tors_level(t + 1))))
        }
        ArrowMap::Unit { .. } => Ok(kernel(source)?.map(|s| (s, D::Zero))),
        ArrowMap::MultiplyVbar { .. } | ArrowMap::Zero => Ok(None),
    }
}

/// Page after `d_r` at height `n`.
pub fn next_page(r: u32, n: u32) -> Page {
    match page_index(r) {
        Some(k) if k < n => Page::Finite(page_length(k + 1)),
        _ => Page::Infinity,
    }
}

/// `E_r → E_{r'}`. Returns the new page and the arrows that acted
/// nontrivially.
pub fn turn_page(lattice: &PageLattice) -> Result<(PageLattice, Vec<Differential>), EngineError> {
    if lattice.theory != Theory::En {
        return Err(EngineError::WrongTheory { expected: Theory::En, found: lattice.theory });
    }
    let r = match lattice.page {
        Page::Finite(r) => r,
        Page::Infinity => return Err(EngineError::NotADifferentialPage(0)),
    };
    let mut updates: Vec<(Differential, ModuleDescriptor, ModuleDescriptor)> = Vec::new();
    for (td, point) in lattice.iter() {
        let arrow = leibniz_arrow(lattice, td, r)?;
        if arrow.map == ArrowMap::Zero {
            continue;
        }
        let tdesc = match lattice.lookup(arrow.target) {
            Lookup::Unknown => {
                if lattice.is_interior(td) {
                    return Err(EngineError::WindowLeak { page: r, from: td, to: arrow.target });
                }
                continue;
            }
            Lookup::Zero => continue,
            Lookup::Present(p) => p.descriptor().expect("E_n lattice"),
        };
        let sdesc = point.descriptor().expect("E_n lattice");
        let outcome = apply_rule(arrow.map, sdesc, tdesc)
            .map_err(|detail| EngineError::PatternViolation { page: r, at: td, detail })?;
        if let Some((s, t)) = outcome {
            updates.push((arrow, s, t));
        }
    }
    let sources: BTreeSet<TriDegree> = updates.iter().map(|(d, _, _)| d.source).collect();
    let mut targets = BTreeSet::new();
    for (d, _, _) in &updates {
        if sources.contains(&d.target) {
            return Err(EngineError::PatternViolation {
                page: r,
                at: d.target,
                detail: "point is both source and target of nonzero arrows (d∘d ≠ 0)".into(),
            });
        }
        if !targets.insert(d.target) {
            return Err(EngineError::PatternViolation {
                page: r,
                at: d.target,
                detail: "point is the target of two arrows".into(),
            });
        }
    }
    let mut next = lattice.with_page(next_page(r, lattice.height));
    let mut arrows = Vec::with_capacity(updates.len());
    for (d, s, t) in updates {
        set_descriptor(&mut next, d.source, s);
        set_descriptor(&mut next, d.target, t);
        arrows.push(d);
    }
    Ok((next, arrows))
}

fn set_descriptor(lattice: &mut PageLattice, td: TriDegree, descriptor: ModuleDescriptor) {
    let monomial = lattice.get(td).and_then(PointData::monomial).cloned().expect("point present");
    lattice.set(td, PointData::En { monomial, descriptor });
}

/// All pages of one `E_n` computation.
#[derive(Clone, Debug)]
pub struct SpectralRun {
    pub height: u32,
    pub truncation: Truncation,
    /// `E_3 (= E_2), E_7, …, E_{2^{n+1}−1}`.
    pub pages: Vec<PageLattice>,
    /// `arrows[i]` are the nonzero differentials on `pages[i]`.
    pub arrows: Vec<Vec<Differential>>,
    pub einfty: PageLattice,
}

impl SpectralRun {
    pub fn window(&self) -> &Window {
        &self.einfty.window
    }

    /// The lattice for `E_r`; intermediate pages resolve to the last
    /// materialized page at or below `r`, and `E_2` to `E_3`.
    pub fn page(&self, page: Page) -> Option<&PageLattice> {
        match page {
            Page::Infinity => Some(&self.einfty),
            Page::Finite(r) if r < 2 => None,
            Page::Finite(r) => {
                if r > page_length(self.height) {
                    return Some(&self.einfty);
                }
                self.pages.iter().rev().find(|l| matches!(l.page, Page::Finite(p) if p <= r.max(3)))
            }
        }
    }

    /// Nonzero arrows on page `r`.
    pub fn arrows_on(&self, r: u32) -> &[Differential] {
        self.pages
            .iter()
            .position(|l| l.page == Page::Finite(r))
            .map_or(&[], |i| &self.arrows[i])
    }

    /// The page `r` whose differentials change the module at `td`, for
    /// each page on which it changes; empty for permanent cycles that are
    /// never hit.
    pub fn change_pages(&self, td: TriDegree) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, l) in self.pages.iter().enumerate() {
            let after = self.pages.get(i + 1).unwrap_or(&self.einfty);
            if l.descriptor(td) != after.descriptor(td) {
                if let Page::Finite(r) = l.page {
                    out.push(r);
                }
            }
        }
        out
    }

    /// The `d_r` page on which a nonzero E₂ class dies completely, if it
    /// does.
    pub fn death_page(&self, td: TriDegree) -> Option<u32> {
        let first = self.pages.first()?;
        if first.descriptor(td).map_or(true, |d| d.is_zero()) {
            return None;
        }
        for (i, l) in self.pages.iter().enumerate() {
            let after = self.pages.get(i + 1).unwrap_or(&self.einfty);
            if after.descriptor(td) == Some(ModuleDescriptor::Zero) {
                if let Page::Finite(r) = l.page {
                    return Some(r);
                }
            }
        }
        None
    }

    /// Degree audit at E∞: every differential longer than `2^{n+1} − 1`
    /// between surviving interior points must land on zero (above the
    /// vanishing line or outside the occupied lattice). Returns the
    /// violations.
    ///
    /// Shorter lengths are the pages already processed, where survivors can
    /// legitimately face nonzero targets through a zero map (for instance
    /// `2u_{2σ}` and a `ū_1`-quotient of its old target).
    pub fn degree_audit(&self) -> Vec<(TriDegree, TriDegree)> {
        let n = self.height;
        let e = &self.einfty;
        let top = e.window.filtration.hi;
        let mut bad = Vec::new();
        for (td, _) in e.interior() {
            let mut r = i64::from(page_length(n)) + 1;
            while td.s + r <= top {
                let target = TriDegree::new(td.a() - 1, td.b(), td.s + r);
                if e.is_interior(target) && e.get(target).is_some() {
                    bad.push((td, target));
                }
                r += 1;
            }
        }
        bad
    }

    /// Interior E∞ points on or above filtration `2^{n+1} − 1`.
    pub fn above_vanishing_line(&self) -> Vec<TriDegree> {
        let line = i64::from(page_length(self.height));
        self.einfty.interior().filter(|(td, _)| td.s >= line).map(|(td, _)| td).collect()
    }

    /// Per-page count of nonzero interior points.
    pub fn summary(&self) -> Vec<(Page, usize)> {
        self.pages
            .iter()
            .chain(std::iter::once(&self.einfty))
            .map(|l| (l.page, l.interior_count()))
            .collect()
    }
}

/// Run `HFPSS(E_n)` on `window` to E∞ with ū-series truncation `d` and
/// Witt precision `m` (the engine itself is exact; `d` and `m` only fix how
/// group orders are reported).
pub fn run_to_einfty(n: u32, window: &Window, d: u32, m: u32) -> Result<SpectralRun, EngineError> {
    let e2 = build_e2_en(n, window, Truncation::new(d, m))?;
    run_from_e2(e2)
}

pub fn run_from_e2(e2: PageLattice) -> Result<SpectralRun, EngineError> {
    let n = e2.height;
    let mut current = e2.with_page(Page::Finite(3));
    let mut pages = Vec::new();
    let mut arrows = Vec::new();
    loop {
        let (next, a) = turn_page(&current)?;
        pages.push(current);
        arrows.push(a);
        if next.page == Page::Infinity {
            current = next;
            break;
        }
        current = next;
    }
    let run = SpectralRun { height: n, truncation: current.truncation, pages, arrows, einfty: current };
    if let Some((src, tgt)) = run.degree_audit().into_iter().next() {
        return Err(EngineError::PatternViolation {
            page: page_length(n),
            at: src,
            detail: format!("E∞ survivor admits a nonzero arrow to {tgt}"),
        });
    }
    Ok(run)
}

/// The `d_r` arrows by source, for every page of a run.
pub fn arrow_index(run: &SpectralRun) -> BTreeMap<(u32, TriDegree), Differential> {
    run.arrows.iter().flatten().map(|d| ((d.r, d.source), d.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use ModuleDescriptor as D;

    fn lattice(n: u32) -> PageLattice {
        let w = Window::new((-12, 12), (-4, 4), (0, 24)).unwrap();
        build_e2_en(n, &w, Truncation::new(6, n + 3)).unwrap().with_page(Page::Finite(3))
    }

    #[test]
    fn generator_rules() {
        let r = generator_differential(Theory::En, 3, 1).unwrap();
        assert_eq!(r.r, 3);
        assert_eq!(r.source, Monomial::en(vec![], 0, 1, 0));
        assert_eq!(r.target, Monomial::en(vec![1], 1, 0, 3));
        let r = generator_differential(Theory::En, 3, 3).unwrap();
        assert_eq!((r.r, &r.source), (15, &Monomial::en(vec![], 0, 4, 0)));
        assert_eq!(r.target, Monomial::en(vec![], 7, 0, 15));
        let r = generator_differential(Theory::En, 1, 1).unwrap();
        assert_eq!(r.target, Monomial::en(vec![], 1, 0, 3));
        let r = generator_differential(Theory::Bpr, 0, 2).unwrap();
        assert_eq!(r.target, Monomial::bpr(vec![0, 1], 0, 7));
        assert!(generator_differential(Theory::En, 3, 4).is_err());
        assert!(generator_differential(Theory::En, 3, 0).is_err());
    }

    #[test]
    fn page_indices() {
        assert_eq!(page_index(3), Some(1));
        assert_eq!(page_index(15), Some(3));
        assert_eq!(page_index(5), None);
        assert_eq!(page_index(1), None);
        assert_eq!(next_page(7, 3), Page::Finite(15));
        assert_eq!(next_page(15, 3), Page::Infinity);
    }

    #[test]
    fn leibniz_examples() {
        // n = 1: d₃(u^{-1}) = ū u^{-2} a³, unit map
        let l = lattice(1);
        let src = TriDegree::new(-2, 2, 0);
        let d = leibniz_arrow(&l, src, 3).unwrap();
        assert_eq!(d.image, Some(Monomial::en(vec![], 1, -2, 3)));
        assert_eq!(d.map, ArrowMap::Unit { reduce: true });
        // n = 2: ū² u² on page 3 is a zero map
        let l = lattice(2);
        let d = leibniz_arrow(&l, TriDegree::new(6, -2, 0), 3).unwrap();
        assert_eq!(d.map, ArrowMap::Zero);
        // n = 3: u² on page 7 maps by ū₂ onto ū₂ū³a⁷
        let l = lattice(3).with_page(Page::Finite(7));
        let d = leibniz_arrow(&l, TriDegree::new(4, -4, 0), 7).unwrap();
        assert_eq!(d.image, Some(Monomial::en(vec![0, 1], 3, 0, 7)));
        assert_eq!(d.map, ArrowMap::MultiplyUbar { k: 2, reduce: true });
        assert!(matches!(leibniz_arrow(&l, TriDegree::new(0, -1, 0), 7), Err(EngineError::NotPresent { .. })));
        assert!(matches!(leibniz_arrow(&l, TriDegree::new(4, -4, 0), 5), Err(EngineError::NotADifferentialPage(5))));
    }

    #[test]
    fn rule_table() {
        let mul = |k| ArrowMap::MultiplyUbar { k, reduce: false };
        // n = 1 and the first family everywhere
        assert_eq!(apply_rule(ArrowMap::Unit { reduce: true }, D::witt_level(0), D::tors_level(1)), Ok(Some((D::witt_level(1), D::Zero))));
        assert_eq!(apply_rule(mul(1), D::witt_level(0), D::tors_level(1)), Ok(Some((D::witt_level(1), D::tors_level(2)))));
        assert_eq!(apply_rule(mul(1), D::tors_level(1), D::tors_level(1)), Ok(Some((D::Zero, D::tors_level(2)))));
        // ū₂ on an unreduced source leaves (ū₁) behind
        assert_eq!(apply_rule(mul(2), D::tors_level(1), D::tors_level(2)), Ok(Some((D::tors_ideal(1, 2), D::tors_level(3)))));
        assert_eq!(apply_rule(mul(2), D::witt_level(0), D::tors_level(2)), Ok(Some((D::witt_ideal(2), D::tors_level(3)))));
        // already killed / forced zero
        assert_eq!(apply_rule(mul(1), D::tors_level(1), D::tors_level(2)), Ok(None));
        assert_eq!(apply_rule(mul(2), D::witt_level(1), D::tors_level(2)), Ok(None));
        // outside the family
        assert!(apply_rule(mul(3), D::tors_level(1), D::tors_level(2)).is_err());
        assert!(apply_rule(mul(2), D::tors_level(3), D::tors_level(2)).is_err());
        assert!(apply_rule(mul(2), D::tors_ideal(1, 2), D::tors_level(2)).is_err());
    }

    #[test]
    fn turn_page_examples() {
        // n = 1: u_{2σ} becomes 2u_{2σ} and its target dies
        let (next, arrows) = turn_page(&lattice(1)).unwrap();
        assert_eq!(next.descriptor(TriDegree::new(2, -2, 0)), Some(D::witt_level(1)));
        assert_eq!(next.descriptor(TriDegree::new(1, -2, 3)), Some(D::Zero));
        assert!(arrows.iter().any(|d| d.source == TriDegree::new(2, -2, 0)));
        // n = 3: u_{2σ} → WittLevel(1), ū₁ū a³ → TorsLevel(2)
        let (next, _) = turn_page(&lattice(3)).unwrap();
        assert_eq!(next.descriptor(TriDegree::new(2, -2, 0)), Some(D::witt_level(1)));
        assert_eq!(next.descriptor(TriDegree::new(1, -2, 3)), Some(D::tors_level(2)));
        assert_eq!(next.page, Page::Finite(7));
    }

    #[test]
    fn zero_stays_zero() {
        let run = run_to_einfty(2, &Window::new((-8, 8), (-2, 2), (0, 12)).unwrap(), 6, 5).unwrap();
        for (i, l) in run.pages.iter().enumerate() {
            let after = run.pages.get(i + 1).unwrap_or(&run.einfty);
            for td in l.window.tri_degrees() {
                if l.descriptor(td) == Some(D::Zero) {
                    assert_eq!(after.descriptor(td), Some(D::Zero));
                }
            }
        }
    }

    #[test]
    fn page_lists() {
        let w = Window::integer((-8, 16), (0, 20)).unwrap();
        let pages = |n| -> Vec<Page> { run_to_einfty(n, &w, 6, n + 3).unwrap().pages.iter().map(|l| l.page).collect() };
        assert_eq!(pages(1), vec![Page::Finite(3)]);
        assert_eq!(pages(2), vec![Page::Finite(3), Page::Finite(7)]);
        assert_eq!(pages(3), vec![Page::Finite(3), Page::Finite(7), Page::Finite(15)]);
    }

    #[test]
    fn window_leak_is_reported() {
        // A source at the top of the interior pushes d₃ beyond a window
        // whose padding was cut down by hand.
        let w = Window::integer((0, 8), (0, 8)).unwrap();
        let full = build_e2_en(1, &w, Truncation::new(6, 4)).unwrap();
        let mut e2 = PageLattice::new(Theory::En, 1, Page::Finite(3), w, w, full.truncation);
        for (td, p) in full.interior() {
            e2.set(td, p.clone());
        }
        let err = turn_page(&e2).unwrap_err();
        assert!(matches!(err, EngineError::WindowLeak { .. }), "{err}");
    }

    #[test]
    fn permanent_cycles_never_support_arrows() {
        // ū_i, ū^{±1}, a_σ and products with u_{2σ}-exponent 0, and ū²
        for n in 1..=4 {
            for k in 1..=n {
                for m in [
                    Monomial::en(vec![], 1, 0, 0),
                    Monomial::en(vec![], -1, 0, 0),
                    Monomial::en(vec![], 2, 0, 0),
                    Monomial::en(vec![], 0, 0, 5),
                    Monomial::en(vec![1, 2], 3, 0, 1),
                ] {
                    assert_eq!(leibniz_image(&m, n, k).unwrap(), None);
                }
            }
        }
    }

    /// Symbolic Leibniz expansion on a product of page-`k` factors, each of
    /// which is `u^{c}`, `u^{-c}` (c = 2^{k−1}), `u^{2c}` or a permanent
    /// cycle, with integer coefficients reduced mod 2 at the end.
    fn expand_product(factors: &[i64], n: u32, k: u32) -> Option<Monomial> {
        let c = 1i64 << (k - 1);
        let rule = generator_differential(Theory::En, n, k).unwrap();
        let mut total = Monomial::one(Theory::En);
        total.u2sigma = factors.iter().sum();
        let mut coefficient = 0i64;
        for &f in factors {
            // d(u^c) = T, d(u^{-c}) = −u^{-2c}T, d(u^{2c}) = 2u^c T, d(perm) = 0
            coefficient += match f {
                x if x == c => 1,
                x if x == -c => -1,
                x if x == 2 * c => 2,
                _ => 0,
            };
        }
        if coefficient.rem_euclid(2) == 0 {
            return None;
        }
        let mut image = total;
        image.u2sigma -= c;
        Some(image.mul(&rule.target).unwrap())
    }

    proptest! {
        #[test]
        fn valuation_rule_matches_symbolic_leibniz(
            n in 1u32..=4,
            kk in 0u32..4,
            picks in prop::collection::vec(0usize..4, 1..=3),
            ubar in -6i64..6,
            a in 0i64..9,
        ) {
            let k = 1 + kk % n;
            let c = 1i64 << (k - 1);
            let menu = [c, -c, 2 * c, 0];
            let factors: Vec<i64> = picks.iter().map(|&i| menu[i]).collect();
            let mut m = Monomial::en(vec![], ubar, factors.iter().sum(), a);
            let expected = expand_product(&factors, n, k).map(|x| {
                let mut x = x;
                x.ubar += ubar;
                x.asigma += a;
                x
            });
            m.theory = Theory::En;
            prop_assert_eq!(leibniz_image(&m, n, k).unwrap(), expected);
        }

        #[test]
        fn images_satisfy_displacement(n in 1u32..=5, k0 in 0u32..5, j in -40i64..40, x in -20i64..20, s in 0i64..30) {
            let k = 1 + k0 % n;
            let m = Monomial::en(vec![], x, j, s);
            if let Some(img) = leibniz_image(&m, n, k).unwrap() {
                let src = crate::grading::degree_of_monomial(&m, n).unwrap();
                let tgt = crate::grading::degree_of_monomial(&img, n).unwrap();
                prop_assert!(is_valid_displacement(src, tgt, page_length(k)));
                prop_assert_eq!(tgt.b(), src.b());
            }
        }
    }

    #[test]
    fn d_squared_vanishes_everywhere() {
        for n in 1..=4 {
            let w = Window::new((-10, 10), (-3, 3), (0, 2 * page_length(n) as i64)).unwrap();
            let run = run_to_einfty(n, &w, 6, n + 3).unwrap();
            for (l, arrows) in run.pages.iter().zip(&run.arrows) {
                let r = match l.page {
                    Page::Finite(r) => r,
                    Page::Infinity => unreachable!(),
                };
                let sources: BTreeSet<_> = arrows.iter().map(|d| d.source).collect();
                for d in arrows {
                    // the composite d_r ∘ d_r through this target is zero
                    assert!(!sources.contains(&d.target), "n={n} r={r} {}", d.target);
                    let onward = leibniz_arrow(l, d.target, r).unwrap();
                    if onward.map != ArrowMap::Zero {
                        let t = l.descriptor(onward.target);
                        let s = l.descriptor(d.target).unwrap();
                        if let Some(t) = t {
                            assert_eq!(apply_rule(onward.map, s, t).unwrap_or(None), None);
                        }
                    }
                }
            }
        }
    }
}
