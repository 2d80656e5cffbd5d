//! Brute-force validation of the engine.
//!
//! Starting from E₂ alone, every lattice point is expanded into explicit
//! coordinates (ū-monomials of each degree ⊗ a basis of `𝔽_{2ⁿ}` or of
//! `W(𝔽_{2ⁿ})/2^M`), every Leibniz arrow becomes an explicit matrix built
//! with the coefficient rings, and each page is the literal subquotient
//! `ker/im`. Nothing here reads a [`ModuleDescriptor`] produced by page
//! turning.
//!
//! The arrows are homogeneous in ū-degree (`·ū_k` raises it by one, the
//! unit map keeps it), so each point is split into one cell per degree.
//! Cells are built up to degree `D + n − 1`; a truncation artifact in the
//! top cell can move down at most one degree per page, so degrees `< D` are
//! exact on every page and are the only ones reported.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coefficients::{
    graded_lex, monomials_of_degree, witt_reduce, CoefficientError, GaloisField, TruncatedSeries,
    TruncatedWitt,
};
use crate::engine::{page_length, supports_family, v2, SpectralRun};
use crate::grading::TriDegree;
use crate::linalg::{evaluate_arrow, Cell, CellError, F2Map, F2Vec};
use crate::pages::{build_e2_en, ModuleDescriptor, Page, PageError, Truncation, Window};

/// Default cap on the total number of expanded coordinates.
pub const DEFAULT_COORDINATE_LIMIT: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("expansion needs {needed} coordinates, limit is {limit}")]
    ResourceBound { needed: usize, limit: usize },
    #[error("interior source {from} on page {page} leaves the padded window")]
    WindowLeak { page: u32, from: TriDegree },
    #[error("on page {page} at {at}: {detail}")]
    Inconsistent { page: u32, at: TriDegree, detail: String },
    #[error(transparent)]
    Page(#[from] PageError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
}

/// One coordinate of an expanded point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coordinate {
    /// Exponents of `ū_1..ū_{n−1}`.
    pub series: Vec<u32>,
    /// Index `j` of the coefficient basis element `xʲ`.
    pub coeff: u32,
    /// The cyclic factor here has order `2^order_log2`.
    pub order_log2: u32,
}

/// A descriptor written out in coordinates at truncation `(D, M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedPoint {
    pub descriptor: ModuleDescriptor,
    pub basis: Vec<Coordinate>,
}

impl ExpandedPoint {
    pub fn order_log2(&self) -> u64 {
        self.basis.iter().map(|c| u64::from(c.order_log2)).sum()
    }
}

/// Expand a descriptor into a direct sum of cyclic groups, graded-lex on
/// ū-exponents and then by coefficient index.
pub fn expand(descriptor: ModuleDescriptor, d: u32, m: u32, n: u32) -> ExpandedPoint {
    use ModuleDescriptor as D;
    let uses = |e: &[u32], lo: u32, hi: u32| (lo..hi).any(|i| e[i as usize - 1] > 0);
    let mut basis = Vec::new();
    for e in graded_lex(n - 1, d) {
        let order = match descriptor {
            D::Zero => 0,
            D::WittLevel { e: lvl } => m.saturating_sub(lvl),
            D::WittIdeal { upto } => {
                if uses(&e, 1, upto) {
                    m
                } else {
                    m - 1
                }
            }
            D::TorsLevel { k0 } => u32::from(!uses(&e, 1, k0)),
            D::TorsIdeal { k0, upto } => u32::from(!uses(&e, 1, k0) && uses(&e, k0, upto)),
        };
        if order == 0 {
            continue;
        }
        for j in 0..n {
            basis.push(Coordinate { series: e.clone(), coeff: j, order_log2: order });
        }
    }
    ExpandedPoint { descriptor, basis }
}

/// Per-page group orders (log₂) of interior points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub height: u32,
    pub truncation: Truncation,
    pub window: Window,
    pub pages: Vec<OraclePage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OraclePage {
    pub page: Page,
    /// Nonzero interior orders; absent points have order 1.
    pub orders: BTreeMap<TriDegree, u64>,
}

impl OracleReport {
    pub fn order(&self, page: Page, td: TriDegree) -> Option<u64> {
        self.pages.iter().find(|p| p.page == page).map(|p| p.orders.get(&td).copied().unwrap_or(0))
    }
}

struct Blocks {
    n: u32,
    bound: u32,
    field: GaloisField,
    witt: TruncatedWitt,
}

impl Blocks {
    fn dim(&self, deg: u32) -> usize {
        monomials_of_degree(self.n - 1, deg).len() * self.n as usize
    }

    fn coord_index(&self, deg: u32) -> BTreeMap<Vec<u32>, usize> {
        monomials_of_degree(self.n - 1, deg).into_iter().enumerate().map(|(i, e)| (e, i)).collect()
    }

    /// Matrix of `x ↦ reduce(ū_k^{shift}·x)` from the degree-`deg` block
    /// to the degree-`deg + shift` block, in mod-2 coordinates.
    fn arrow_matrix(&self, deg: u32, ubar_k: Option<u32>) -> F2Map {
        let vars = self.n - 1;
        let tdeg = deg + u32::from(ubar_k.is_some());
        let tindex = self.coord_index(tdeg);
        let tdim = self.dim(tdeg);
        let factor = match ubar_k {
            Some(k) => TruncatedSeries::variable(vars, self.bound, k, self.witt.one()),
            None => TruncatedSeries::constant(vars, self.bound, self.witt.one()),
        };
        let mut cols = Vec::new();
        for e in monomials_of_degree(vars, deg) {
            for j in 0..self.n {
                let x = TruncatedSeries::monomial(vars, self.bound, e.clone(), self.witt.basis(j));
                let y = x.series_mul(&factor).expect("same truncation").map(self.field.one(), witt_reduce);
                let mut col = F2Vec::zero(tdim);
                for (exps, c) in y.terms() {
                    let base = tindex[exps] * self.n as usize;
                    for b in 0..self.n {
                        if c.coord(b) {
                            col.flip(base + b as usize);
                        }
                    }
                }
                cols.push(col);
            }
        }
        F2Map::from_columns(tdim, cols)
    }
}

/// Compute page-by-page homology of `HFPSS(E_n)` from E₂ through page
/// `2^{k+1} − 1` for `k ≤ up_to` (all pages and E∞ when `up_to ≥ n`).
pub fn oracle_page_homology(
    window: &Window,
    n: u32,
    d: u32,
    m: u32,
    up_to: u32,
) -> Result<OracleReport, OracleError> {
    oracle_with_limit(window, n, d, m, up_to, DEFAULT_COORDINATE_LIMIT)
}

pub fn oracle_with_limit(
    window: &Window,
    n: u32,
    d: u32,
    m: u32,
    up_to: u32,
    limit: usize,
) -> Result<OracleReport, OracleError> {
    let trunc = Truncation::new(d, m);
    let e2 = build_e2_en(n, window, trunc)?;
    let blocks = Blocks { n, bound: d + n, field: GaloisField::new(n)?, witt: TruncatedWitt::new(n, m)? };
    let needed: usize = e2.len() * (0..d + n).map(|deg| blocks.dim(deg)).sum::<usize>();
    if needed > limit {
        return Err(OracleError::ResourceBound { needed, limit });
    }
    // (point, ū-degree) → cell
    let mut cells: BTreeMap<(TriDegree, u32), Cell> = BTreeMap::new();
    let mut u2sigma: BTreeMap<TriDegree, i64> = BTreeMap::new();
    for (td, p) in e2.iter() {
        u2sigma.insert(td, p.monomial().expect("E_n point").u2sigma);
        for deg in 0..d + n {
            let dim = blocks.dim(deg);
            let cell = if td.s == 0 { Cell::integral(dim, m) } else { Cell::torsion(dim) };
            cells.insert((td, deg), cell);
        }
    }
    let report_page = |cells: &BTreeMap<(TriDegree, u32), Cell>, page: Page| {
        let mut orders = BTreeMap::new();
        for (&(td, deg), cell) in cells {
            if deg < d && window.contains(td) {
                let o = cell.order_log2();
                if o > 0 {
                    *orders.entry(td).or_insert(0) += o;
                }
            }
        }
        OraclePage { page, orders }
    };
    let mut pages = Vec::new();
    for k in 1..=up_to.min(n) {
        let r = page_length(k);
        pages.push(report_page(&cells, Page::Finite(r)));
        let shift = k < n;
        let mats: Vec<F2Map> = (0..d + n).map(|deg| blocks.arrow_matrix(deg, shift.then_some(k))).collect();
        let mut effects = Vec::new();
        for (&td, &y) in &u2sigma {
            let target = TriDegree::new(td.a() - 1, td.b(), td.s + i64::from(r));
            let interior = window.contains(td);
            if !supports_family(y, k) {
                let survives = (0..d).any(|deg| !cells[&(td, deg)].is_zero());
                if v2(y).is_some_and(|vy| vy < k - 1) && interior && survives && e2.padded.contains(target) {
                    for deg in 0..d {
                        if cells.get(&(target, deg)).is_some_and(|c| !c.is_zero()) {
                            return Err(OracleError::Inconsistent {
                                page: r,
                                at: td,
                                detail: format!(
                                    "surviving class without a Leibniz differential faces nonzero target {target} in degree {deg}"
                                ),
                            });
                        }
                    }
                }
                continue;
            }
            if !e2.padded.contains(target) {
                if interior {
                    return Err(OracleError::WindowLeak { page: r, from: td });
                }
                continue;
            }
            if !u2sigma.contains_key(&target) {
                return Err(OracleError::Inconsistent {
                    page: r,
                    at: td,
                    detail: format!("Leibniz target {target} is not an E₂ point"),
                });
            }
            for deg in 0..d + n {
                let tdeg = deg + u32::from(shift);
                if tdeg >= d + n {
                    continue;
                }
                let src = &cells[&(td, deg)];
                let tgt = &cells[&(target, tdeg)];
                let eff = evaluate_arrow(src, tgt, &mats[deg as usize]).map_err(|e| inconsistent(r, td, e))?;
                effects.push(((td, deg), (target, tdeg), eff));
            }
        }
        for (src, tgt, eff) in effects {
            cells.insert(src, eff.source);
            cells.get_mut(&tgt).expect("present").absorb(&eff.new_boundaries).map_err(|e| inconsistent(r, tgt.0, e))?;
        }
    }
    if up_to >= n {
        pages.push(report_page(&cells, Page::Infinity));
    }
    Ok(OracleReport { height: n, truncation: trunc, window: *window, pages })
}

fn inconsistent(page: u32, at: TriDegree, e: CellError) -> OracleError {
    OracleError::Inconsistent { page, at, detail: format!("{e:?}") }
}

/// A point where the engine and the oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub page: Page,
    pub at: TriDegree,
    pub descriptor: ModuleDescriptor,
    pub engine_order_log2: u64,
    pub oracle_order_log2: u64,
}

/// Compare descriptor orders of every interior point on every page.
pub fn compare_with_engine(run: &SpectralRun, report: &OracleReport) -> Vec<Mismatch> {
    let Truncation { series_deg: d, witt_prec: m } = report.truncation;
    let n = report.height;
    let mut out = Vec::new();
    for op in &report.pages {
        let Some(lattice) = run.page(op.page) else { continue };
        for td in report.window.tri_degrees() {
            let desc = lattice.descriptor(td).unwrap_or(ModuleDescriptor::Zero);
            let engine = desc.order_log2(n, d, m);
            let oracle = op.orders.get(&td).copied().unwrap_or(0);
            if engine != oracle {
                out.push(Mismatch { page: op.page, at: td, descriptor: desc, engine_order_log2: engine, oracle_order_log2: oracle });
            }
        }
    }
    out
}
