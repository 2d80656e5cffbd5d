//! Reading homotopy off E∞: integer-stem columns, the `(kρ − 1)`-stem
//! vanishing, the strongly-even check and periodicity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::{page_length, SpectralRun};
use crate::error::{Error, Result};
use crate::grading::{RODegree, TriDegree};
use crate::pages::{monomials_below, ModuleDescriptor, Monomial, PageLattice, PointData, Span, Theory};

/// One nonzero E∞ point in a stem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnEntry {
    pub s: i64,
    pub order_log2: u64,
    pub descriptor: ModuleDescriptor,
    pub monomial: String,
    pub group: String,
}

/// How far the associated graded determines the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "group", rename_all = "kebab-case")]
pub enum Extension {
    /// Zero, a single filtration, or a lone Witt module.
    Resolved(String),
    ExtensionsUnresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemReport {
    pub stem: RODegree,
    pub entries: Vec<ColumnEntry>,
    /// log₂ of the associated graded's order at the run's truncation.
    pub associated_graded_log2: u64,
    pub extension: Extension,
}

fn en_points(l: &PageLattice) -> Result<()> {
    if l.theory != Theory::En {
        return Err(Error::Usage("homotopy post-processing needs an E_n run".into()));
    }
    Ok(())
}

/// The column of an arbitrary RO(C₂) stem.
pub fn stem_report(einfty: &PageLattice, stem: RODegree) -> Result<StemReport> {
    en_points(einfty)?;
    require_filtration_support(einfty)?;
    let n = einfty.height;
    let t = einfty.truncation;
    let mut entries = Vec::new();
    for s in einfty.window.filtration.iter() {
        let td = TriDegree { stem, s };
        if let Some(PointData::En { monomial, descriptor }) = einfty.get(td) {
            entries.push(ColumnEntry {
                s,
                order_log2: descriptor.order_log2(n, t.series_deg, t.witt_prec),
                descriptor: *descriptor,
                monomial: monomial.to_string(),
                group: descriptor.describe_group(n),
            });
        }
    }
    let associated_graded_log2 = entries.iter().map(|e| e.order_log2).sum();
    let extension = match entries.as_slice() {
        [] => Extension::Resolved("0".into()),
        [one] => Extension::Resolved(one.group.clone()),
        many if many.iter().all(|e| e.descriptor.is_witt()) => Extension::Resolved(
            many.iter().map(|e| e.group.clone()).collect::<Vec<_>>().join("+"),
        ),
        _ => Extension::ExtensionsUnresolved,
    };
    Ok(StemReport { stem, entries, associated_graded_log2, extension })
}

/// Integer-stem columns of E∞ over `stems`.
pub fn homotopy_groups(einfty: &PageLattice, stems: Span) -> Result<Vec<StemReport>> {
    if !(einfty.window.stems.covers(&stems) && einfty.window.sigma.contains(0)) {
        return Err(Error::WindowInsufficient(format!(
            "integer stems {stems} not inside {}",
            einfty.window
        )));
    }
    stems.iter().map(|a| stem_report(einfty, RODegree::new(a, 0))).collect()
}

/// E∞ vanishes from filtration `2^{n+1} − 1` on, so a column is complete
/// once the window reaches filtration `2^{n+1} − 2` from 0.
fn require_filtration_support(l: &PageLattice) -> Result<()> {
    let need = i64::from(page_length(l.height)) - 1;
    if l.window.filtration.lo != 0 || l.window.filtration.hi < need {
        return Err(Error::WindowInsufficient(format!(
            "filtration {} does not cover 0..{need}",
            l.window.filtration
        )));
    }
    Ok(())
}

/// One E₂ point of a `(kρ − 1)`-stem and how it dies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemPointFate {
    pub at: TriDegree,
    pub ell: i64,
    pub monomial: String,
    pub einfty: ModuleDescriptor,
    pub death_page: Option<u32>,
    pub expected_death_page: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingVerdict {
    pub k: i64,
    pub points: Vec<StemPointFate>,
    pub all_zero: bool,
    pub pages_match: bool,
}

impl VanishingVerdict {
    pub fn pass(&self) -> bool {
        self.all_zero && self.pages_match
    }
}

/// The page on which `ū^{k−1+2ℓ} u_{2σ}^{−ℓ} a_σ^{4ℓ−1}` dies: odd `ℓ`
/// support `d_3`, `ℓ ≡ 2 (mod 4)` support `d_7`, …, and once `v₂(ℓ) ≥ n`
/// the class is hit by `d_{2^{n+1}−1}`.
pub fn expected_death_page(ell: i64, n: u32) -> u32 {
    let v = ell.trailing_zeros();
    if v < n {
        page_length(v + 1)
    } else {
        page_length(n)
    }
}

/// Check that every point in stem `kρ − 1` is zero at E∞ and died on the
/// predicted page.
pub fn check_vanishing_krho_minus_1(run: &SpectralRun, ks: Span) -> Result<Vec<VanishingVerdict>> {
    let n = run.height;
    let w = run.window();
    // ℓ up to 2ⁿ exercises every case of the prediction.
    let need_s = 4 * (1i64 << n) - 1;
    ks.iter()
        .map(|k| {
            let stem = RODegree::new(k - 1, k);
            if !(w.stems.contains(stem.a) && w.sigma.contains(stem.b)) || w.filtration.lo != 0 || w.filtration.hi < need_s {
                return Err(Error::WindowInsufficient(format!(
                    "stem {stem} with filtration 0..{need_s} not inside {w}"
                )));
            }
            let e3 = &run.pages[0];
            let mut points = Vec::new();
            for s in w.filtration.iter() {
                let td = TriDegree { stem, s };
                let Some(PointData::En { monomial, .. }) = e3.get(td) else { continue };
                let ell = -monomial.u2sigma;
                let expected = Monomial::en(vec![], k - 1 + 2 * ell, -ell, 4 * ell - 1);
                if *monomial != expected || ell < 1 {
                    return Err(Error::TheoremViolation(format!(
                        "unexpected E₂ class {monomial} in stem {stem}"
                    )));
                }
                points.push(StemPointFate {
                    at: td,
                    ell,
                    monomial: monomial.to_string(),
                    einfty: run.einfty.descriptor(td).unwrap_or(ModuleDescriptor::Zero),
                    death_page: run.death_page(td),
                    expected_death_page: expected_death_page(ell, n),
                });
            }
            let all_zero = points.iter().all(|p| p.einfty.is_zero());
            let pages_match = points.iter().all(|p| p.death_page == Some(p.expected_death_page));
            Ok(VanishingVerdict { k, points, all_zero, pages_match })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StronglyEvenVerdict {
    pub k: i64,
    /// The filtration-0 descriptor at stem `kρ`.
    pub bottom: ModuleDescriptor,
    pub bottom_monomial: String,
    /// Image under restriction to the underlying `π_{2k} E_n`.
    pub restriction: String,
    pub restriction_bijective: bool,
    /// Nonzero E∞ points of stem `kρ` above filtration 0.
    pub torsion: Vec<TriDegree>,
    pub minus_one_stem_zero: bool,
}

impl StronglyEvenVerdict {
    pub fn pass(&self) -> bool {
        self.bottom == ModuleDescriptor::witt_level(0)
            && self.restriction_bijective
            && self.torsion.is_empty()
            && self.minus_one_stem_zero
    }
}

/// Stem `kρ` must be exactly `W(𝔽_{2ⁿ})[[ū_1..]]·ū^k` in filtration 0 with
/// restriction `ū ↦ u`, `ū_i ↦ u_i` onto the underlying homotopy, and
/// stem `kρ − 1` must vanish.
pub fn check_strongly_even(run: &SpectralRun, ks: Span) -> Result<Vec<StronglyEvenVerdict>> {
    let n = run.height;
    let t = run.truncation;
    let vanishing = check_vanishing_krho_minus_1(run, ks)?;
    let e = &run.einfty;
    ks.iter()
        .zip(vanishing)
        .map(|(k, van)| {
            let stem = RODegree::new(k, k);
            if !(e.window.stems.contains(k) && e.window.sigma.contains(k)) {
                return Err(Error::WindowInsufficient(format!("stem {stem} not inside {}", e.window)));
            }
            let bottom_td = TriDegree { stem, s: 0 };
            let (bottom, mono) = match e.get(bottom_td) {
                Some(PointData::En { monomial, descriptor }) => (*descriptor, Some(monomial.clone())),
                _ => (ModuleDescriptor::Zero, None),
            };
            let (restriction, bijective) = match &mono {
                Some(m) if m.asigma == 0 && m.u2sigma == 0 && m.series.is_empty() => {
                    // restriction sends u_{2σ} ↦ 1 and ū ↦ u; the module is
                    // all of W[[ū_i]]·ū^k exactly when its order is the
                    // underlying order.
                    let underlying = u64::from(n) * u64::from(t.witt_prec) * monomials_below(n - 1, t.series_deg);
                    let ours = bottom.order_log2(n, t.series_deg, t.witt_prec);
                    (format!("u^{}", m.ubar), ours == underlying)
                }
                Some(m) => (format!("{m} (restricts to a non-generator)"), false),
                None => ("0".into(), false),
            };
            let torsion = e
                .window
                .filtration
                .iter()
                .filter(|&s| s > 0)
                .map(|s| TriDegree { stem, s })
                .filter(|td| e.get(*td).is_some())
                .collect();
            Ok(StronglyEvenVerdict {
                k,
                bottom,
                bottom_monomial: mono.map_or_else(|| "0".into(), |m| m.to_string()),
                restriction,
                restriction_bijective: bijective,
                torsion,
                minus_one_stem_zero: van.all_zero,
            })
        })
        .collect()
}

/// Integer-stem E∞ columns, descriptor for descriptor.
fn integer_columns(e: &PageLattice) -> BTreeMap<i64, Vec<(i64, ModuleDescriptor)>> {
    let mut cols: BTreeMap<i64, Vec<(i64, ModuleDescriptor)>> =
        e.window.stems.iter().map(|a| (a, Vec::new())).collect();
    for (td, p) in e.interior() {
        if td.b() == 0 {
            if let Some(d) = p.descriptor() {
                cols.get_mut(&td.a()).expect("interior stem").push((td.s, d));
            }
        }
    }
    cols
}

/// Smallest `d > 0` with column(a) = column(a + d) throughout the window,
/// searched up to half the window width; `None` if no period fits twice.
pub fn periodicity(einfty: &PageLattice) -> Result<Option<u64>> {
    en_points(einfty)?;
    require_filtration_support(einfty)?;
    if !einfty.window.sigma.contains(0) {
        return Err(Error::WindowInsufficient("window has no integer stems".into()));
    }
    let width = einfty.window.stems.len();
    if width < 2 {
        return Err(Error::WindowInsufficient(format!("stem range {} is too short", einfty.window.stems)));
    }
    let cols = integer_columns(einfty);
    let stems: Vec<i64> = cols.keys().copied().collect();
    for d in 1..=width / 2 {
        if stems.iter().filter(|&&a| cols.contains_key(&(a + d))).all(|a| cols[a] == cols[&(a + d)]) {
            return Ok(Some(d as u64));
        }
    }
    Ok(None)
}
