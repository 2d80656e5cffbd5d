//! E₂ pages on a finite tri-degree window and the lattice data model shared
//! by every later page.

mod descriptor;
mod monomial;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use descriptor::{monomials_below, ModuleDescriptor};
pub use monomial::{Monomial, Theory};

use crate::grading::TriDegree;

/// Largest supported height; `𝔽_{2ⁿ}` elements fit in a byte.
pub const MAX_HEIGHT: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PageError {
    #[error("height {0} is out of range (1..={MAX_HEIGHT})")]
    HeightOutOfRange(u32),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid range `{0}` (expected A..B)")]
    InvalidRange(String),
    #[error("BP_R needs at least one v̄ generator")]
    NoGenerators,
}

/// An inclusive integer range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Span { lo, hi }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn len(&self) -> i64 {
        (self.hi - self.lo + 1).max(0)
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn covers(&self, other: &Span) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl From<(i64, i64)> for Span {
    fn from((lo, hi): (i64, i64)) -> Self {
        Span { lo, hi }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for Span {
    type Err = PageError;

    /// `A..B` (inclusive); a single integer `A` means `A..A`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PageError::InvalidRange(s.to_string());
        let t = s.trim();
        let (lo, hi) = match t.find("..") {
            Some(i) => {
                let hi = t[i + 2..].trim_start_matches('=');
                (t[..i].trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?)
            }
            None => {
                let v: i64 = t.parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        Ok(Span { lo, hi })
    }
}

/// The region of tri-degrees a computation reports on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    /// Range of `a` (coefficient of 1).
    pub stems: Span,
    /// Range of `b` (coefficient of σ).
    pub sigma: Span,
    /// Range of the filtration `s`.
    pub filtration: Span,
}

impl Window {
    pub fn new(
        stems: impl Into<Span>,
        sigma: impl Into<Span>,
        filtration: impl Into<Span>,
    ) -> Result<Self, PageError> {
        let w = Window { stems: stems.into(), sigma: sigma.into(), filtration: filtration.into() };
        w.validate()?;
        Ok(w)
    }

    /// Integer stems only.
    pub fn integer(stems: impl Into<Span>, filtration: impl Into<Span>) -> Result<Self, PageError> {
        Window::new(stems, (0, 0), filtration)
    }

    pub fn validate(&self) -> Result<(), PageError> {
        for (name, span) in [("stems", self.stems), ("sigma", self.sigma), ("filtration", self.filtration)] {
            if span.is_empty() {
                return Err(PageError::InvalidWindow(format!("{name} range {span} is empty")));
            }
        }
        if self.filtration.lo < 0 {
            return Err(PageError::InvalidWindow("filtration must be non-negative".into()));
        }
        Ok(())
    }

    pub fn contains(&self, td: TriDegree) -> bool {
        self.stems.contains(td.a()) && self.sigma.contains(td.b()) && self.filtration.contains(td.s)
    }

    /// Grow by `pad` in `a` (both ways) and `s` (both ways, clamped at 0).
    /// Differentials keep `b`, so the σ-range is left alone.
    pub fn padded(&self, pad: i64) -> Window {
        Window {
            stems: Span::new(self.stems.lo - pad, self.stems.hi + pad),
            sigma: self.sigma,
            filtration: Span::new((self.filtration.lo - pad).max(0), self.filtration.hi + pad),
        }
    }

    pub fn tri_degrees(&self) -> impl Iterator<Item = TriDegree> + '_ {
        self.stems.iter().flat_map(move |a| {
            self.sigma
                .iter()
                .flat_map(move |b| self.filtration.iter().map(move |s| TriDegree::new(a, b, s)))
        })
    }

    pub fn covers(&self, other: &Window) -> bool {
        self.stems.covers(&other.stems)
            && self.sigma.covers(&other.sigma)
            && self.filtration.covers(&other.filtration)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a∈{} b∈{} s∈{}", self.stems, self.sigma, self.filtration)
    }
}

/// Padding that keeps every arrow of a height-`n` run inside the window:
/// the longest differential is `d_{2^{n+1}−1}`.
pub fn padding_for_height(n: u32) -> i64 {
    1i64 << (n + 1)
}

/// A page index. Intermediate pages between `2^k − 1` and `2^{k+1} − 1`
/// are never materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Page {
    Finite(u32),
    Infinity,
}

impl fmt::Display for Page {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Page::Finite(r) => write!(f, "E{r}"),
            Page::Infinity => f.write_str("Einf"),
        }
    }
}

impl FromStr for Page {
    type Err = PageError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches(['E', 'e']);
        match t {
            "inf" | "infty" | "infinity" | "∞" => Ok(Page::Infinity),
            _ => t.parse().map(Page::Finite).map_err(|_| PageError::InvalidRange(s.to_string())),
        }
    }
}

/// Additive shape of a `BP_ℝ` lattice point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BprGroup {
    /// A sublattice of index `2^index_log2` in `ℤ^rank`.
    Free { rank: u32, index_log2: u32 },
    /// `𝔽₂^dim`.
    Torsion { dim: u32 },
}

impl BprGroup {
    pub fn is_zero(&self) -> bool {
        matches!(self, BprGroup::Free { rank: 0, .. } | BprGroup::Torsion { dim: 0 })
    }
}

/// What sits at a nonzero lattice point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theory", rename_all = "lowercase")]
pub enum PointData {
    /// The basis point `ū^x u_{2σ}^y a_σ^s` and the cyclic module over it.
    En { monomial: Monomial, descriptor: ModuleDescriptor },
    /// All E₂ monomials at the point and the current subquotient's shape.
    Bpr { basis: Vec<Monomial>, group: BprGroup },
}

impl PointData {
    pub fn is_zero(&self) -> bool {
        match self {
            PointData::En { descriptor, .. } => descriptor.is_zero(),
            PointData::Bpr { group, .. } => group.is_zero(),
        }
    }

    pub fn descriptor(&self) -> Option<ModuleDescriptor> {
        match self {
            PointData::En { descriptor, .. } => Some(*descriptor),
            PointData::Bpr { .. } => None,
        }
    }

    pub fn monomial(&self) -> Option<&Monomial> {
        match self {
            PointData::En { monomial, .. } => Some(monomial),
            PointData::Bpr { .. } => None,
        }
    }
}

/// What a lattice knows about a tri-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup<'a> {
    /// Outside the padded window.
    Unknown,
    Zero,
    Present(&'a PointData),
}

/// Truncation parameters: ū-series degree bound `D` and 2-adic precision `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub series_deg: u32,
    pub witt_prec: u32,
}

impl Truncation {
    pub fn new(series_deg: u32, witt_prec: u32) -> Self {
        Truncation { series_deg, witt_prec }
    }

    /// `D = 6`, `M = n + 3`.
    pub fn default_for(n: u32) -> Self {
        Truncation { series_deg: 6, witt_prec: n + 3 }
    }
}

/// One page of a spectral sequence on a finite window.
///
/// Only nonzero points are stored. Points inside the padded window but not
/// stored are zero; points outside the padded window are unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageLattice {
    pub theory: Theory,
    /// `n` for `E_n`, the number of retained `v̄` generators for `BP_ℝ`.
    pub height: u32,
    pub page: Page,
    pub window: Window,
    pub padded: Window,
    pub truncation: Truncation,
    points: BTreeMap<TriDegree, PointData>,
}

impl PageLattice {
    pub fn new(
        theory: Theory,
        height: u32,
        page: Page,
        window: Window,
        padded: Window,
        truncation: Truncation,
    ) -> Self {
        PageLattice { theory, height, page, window, padded, truncation, points: BTreeMap::new() }
    }

    pub fn with_page(&self, page: Page) -> Self {
        PageLattice { page, ..self.clone() }
    }

    /// Stores `data`, dropping the point if it is zero.
    pub fn set(&mut self, td: TriDegree, data: PointData) {
        debug_assert!(self.padded.contains(td), "{td} outside padded window");
        if data.is_zero() {
            self.points.remove(&td);
        } else {
            self.points.insert(td, data);
        }
    }

    pub fn remove(&mut self, td: TriDegree) {
        self.points.remove(&td);
    }

    pub fn lookup(&self, td: TriDegree) -> Lookup<'_> {
        if td.s < 0 {
            return Lookup::Zero;
        }
        if !self.padded.contains(td) {
            return Lookup::Unknown;
        }
        match self.points.get(&td) {
            Some(p) => Lookup::Present(p),
            None => Lookup::Zero,
        }
    }

    pub fn get(&self, td: TriDegree) -> Option<&PointData> {
        self.points.get(&td)
    }

    /// `None` when unknown (outside the padded window) or for `BP_ℝ`.
    pub fn descriptor(&self, td: TriDegree) -> Option<ModuleDescriptor> {
        match self.lookup(td) {
            Lookup::Unknown => None,
            Lookup::Zero => Some(ModuleDescriptor::Zero),
            Lookup::Present(p) => p.descriptor(),
        }
    }

    pub fn is_interior(&self, td: TriDegree) -> bool {
        self.window.contains(td)
    }

    /// Nonzero points in the padded window, sorted.
    pub fn iter(&self) -> impl Iterator<Item = (TriDegree, &PointData)> {
        self.points.iter().map(|(k, v)| (*k, v))
    }

    /// Nonzero points in the interior window, sorted.
    pub fn interior(&self) -> impl Iterator<Item = (TriDegree, &PointData)> {
        self.iter().filter(|(td, _)| self.window.contains(*td))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn interior_count(&self) -> usize {
        self.interior().count()
    }
}

/// E₂ of `HFPSS(E_n)`:
/// `W(𝔽_{2ⁿ})[[ū_1..ū_{n−1}]][ū^±] ⊗ ℤ[u_{2σ}^±, a_σ]/(2a_σ)`.
///
/// Each occupied point carries `WittLevel(0)` at `s = 0` and `TorsLevel(1)`
/// above. The window is padded by `2^{n+1}`.
pub fn build_e2_en(n: u32, window: &Window, trunc: Truncation) -> Result<PageLattice, PageError> {
    if n == 0 || n > MAX_HEIGHT {
        return Err(PageError::HeightOutOfRange(n));
    }
    window.validate()?;
    let padded = window.padded(padding_for_height(n));
    let mut lattice =
        PageLattice::new(Theory::En, n, Page::Finite(2), *window, padded, trunc);
    for td in padded.tri_degrees() {
        if let Some(monomial) = Monomial::solve_en(td) {
            let descriptor = if td.s == 0 {
                ModuleDescriptor::witt_level(0)
            } else {
                ModuleDescriptor::tors_level(1)
            };
            lattice.set(td, PointData::En { monomial, descriptor });
        }
    }
    Ok(lattice)
}

/// E₂ of `HFPSS(BP_ℝ)`: `ℤ[v̄_1, v̄_2, …] ⊗ ℤ[u_{2σ}^±, a_σ]/(2a_σ)`, keeping
/// `v̄_1..v̄_V` and (optionally) polynomial degree `< max_poly_degree`.
pub fn build_e2_bpr(
    window: &Window,
    v: u32,
    max_poly_degree: Option<i64>,
    trunc: Truncation,
) -> Result<PageLattice, PageError> {
    if v == 0 {
        return Err(PageError::NoGenerators);
    }
    window.validate()?;
    let padded = window.padded(padding_for_height(v));
    let mut lattice = PageLattice::new(Theory::Bpr, v, Page::Finite(2), *window, padded, trunc);
    for td in padded.tri_degrees() {
        let basis = Monomial::solve_bpr(td, v, max_poly_degree);
        if basis.is_empty() {
            continue;
        }
        let rank = basis.len() as u32;
        let group = if td.s == 0 {
            BprGroup::Free { rank, index_log2: 0 }
        } else {
            BprGroup::Torsion { dim: rank }
        };
        lattice.set(td, PointData::Bpr { basis, group });
    }
    Ok(lattice)
}

/// One point of the integer-graded part of a page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemPoint {
    pub stem: i64,
    pub s: i64,
    pub data: PointData,
}

/// The `b = 0` part of a lattice's interior, as (stem, filtration) chart
/// data. Nothing is recomputed.
pub fn restrict_to_integer_stems(lattice: &PageLattice) -> Vec<StemPoint> {
    lattice
        .interior()
        .filter(|(td, _)| td.b() == 0)
        .map(|(td, data)| StemPoint { stem: td.a(), s: td.s, data: data.clone() })
        .collect()
}
