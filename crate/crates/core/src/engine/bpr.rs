//! `HFPSS(BP_ℝ)` with `v̄_1..v̄_V` retained.
//!
//! Points carry many `v̄`-monomials, so pages are computed as explicit
//! subquotients with the cell machinery from [`crate::linalg`].

use std::collections::BTreeMap;

use crate::grading::TriDegree;
use crate::linalg::{evaluate_arrow, Cell, CellError, F2Map, F2Vec};
use crate::pages::{build_e2_bpr, BprGroup, Monomial, Page, PageLattice, PointData, Truncation, Window};

use super::{leibniz_image, page_length, supports_family, v2, ArrowMap, Differential, EngineError};

/// All pages of a `BP_ℝ` computation.
#[derive(Clone, Debug)]
pub struct BprRun {
    pub generators: u32,
    /// `E_3, E_7, …, E_{2^{V+1}−1}`.
    pub pages: Vec<PageLattice>,
    pub arrows: Vec<Vec<Differential>>,
    pub einfty: PageLattice,
}

fn basis_of(l: &PageLattice, td: TriDegree) -> &[Monomial] {
    match l.get(td) {
        Some(PointData::Bpr { basis, .. }) => basis,
        _ => &[],
    }
}

fn group_of(cell: &Cell) -> BprGroup {
    match cell {
        Cell::Integral { z } => BprGroup::Free { rank: z.ambient() as u32, index_log2: z.index_log2() as u32 },
        Cell::Mod2 { .. } => BprGroup::Torsion { dim: cell.order_log2() as u32 },
    }
}

fn snapshot(e2: &PageLattice, cells: &BTreeMap<TriDegree, Cell>, page: Page) -> PageLattice {
    let mut l = e2.with_page(page);
    for (td, cell) in cells {
        let basis = basis_of(e2, *td).to_vec();
        l.set(*td, PointData::Bpr { basis, group: group_of(cell) });
    }
    l
}

/// Run `HFPSS(BP_ℝ)` through pages `3, 7, …, 2^{V+1} − 1`. Filtration-zero
/// groups are computed in `ℤ/2^m`; `max_poly_degree` optionally caps the
/// `v̄`-degree of E₂ monomials. A capped run is the quotient by all
/// monomials of degree at least the cap: images past the cap vanish, so
/// top-degree classes linger as survivors and the closure check on them is
/// skipped.
pub fn run_bpr(window: &Window, v: u32, max_poly_degree: Option<i64>, m: u32) -> Result<BprRun, EngineError> {
    let e2 = build_e2_bpr(window, v, max_poly_degree, Truncation::new(0, m))?;
    let mut cells: BTreeMap<TriDegree, Cell> = e2
        .iter()
        .map(|(td, p)| {
            let dim = match p {
                PointData::Bpr { basis, .. } => basis.len(),
                PointData::En { .. } => unreachable!(),
            };
            let cell = if td.s == 0 { Cell::integral(dim, m) } else { Cell::torsion(dim) };
            (td, cell)
        })
        .collect();
    let mut pages = Vec::new();
    let mut all_arrows = Vec::new();
    for k in 1..=v {
        let r = page_length(k);
        pages.push(snapshot(&e2, &cells, Page::Finite(r)));
        let mut effects = Vec::new();
        for (td, cell) in &cells {
            if cell.is_zero() {
                continue;
            }
            let basis = basis_of(&e2, *td);
            let y = basis[0].u2sigma;
            let target = TriDegree::new(td.a() - 1, td.b(), td.s + i64::from(r));
            let inside = e2.padded.contains(target);
            if !supports_family(y, k) {
                // Below the family's valuation the classes have already
                // been resolved; an interior survivor here would need a
                // differential the Leibniz rule cannot express.
                if max_poly_degree.is_none()
                    && v2(y).is_some_and(|vy| vy < k - 1)
                    && e2.is_interior(*td)
                    && inside
                    && !cell.is_zero()
                {
                    if cells.get(&target).is_some_and(|c| !c.is_zero()) {
                        return Err(EngineError::PatternViolation {
                            page: r,
                            at: *td,
                            detail: format!("survivor with v₂(j) = {} faces a nonzero target {target}", v2(y).unwrap()),
                        });
                    }
                }
                continue;
            }
            if !inside {
                if e2.is_interior(*td) {
                    return Err(EngineError::WindowLeak { page: r, from: *td, to: target });
                }
                continue;
            }
            let Some(tcell) = cells.get(&target) else { continue };
            let tbasis = basis_of(&e2, target);
            let index: BTreeMap<&Monomial, usize> = tbasis.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut cols = Vec::with_capacity(basis.len());
            for mono in basis {
                let img = leibniz_image(mono, 0, k)?.expect("family supported");
                let col = match index.get(&img) {
                    Some(&i) => F2Vec::unit(tbasis.len(), i),
                    // beyond the polynomial-degree cap
                    None => F2Vec::zero(tbasis.len()),
                };
                cols.push(col);
            }
            let map = F2Map::from_columns(tbasis.len(), cols);
            let eff = evaluate_arrow(cell, tcell, &map).map_err(|e| cell_violation(r, *td, e))?;
            let nontrivial = match tcell {
                Cell::Mod2 { b, .. } => eff.new_boundaries.iter().any(|x| !b.contains(x)),
                Cell::Integral { .. } => false,
            };
            effects.push((*td, target, eff, nontrivial));
        }
        let mut arrows = Vec::new();
        for (src, tgt, eff, nontrivial) in effects {
            cells.insert(src, eff.source);
            cells
                .get_mut(&tgt)
                .expect("target present")
                .absorb(&eff.new_boundaries)
                .map_err(|e| cell_violation(r, tgt, e))?;
            if nontrivial {
                arrows.push(Differential {
                    r,
                    source: src,
                    target: tgt,
                    map: ArrowMap::MultiplyVbar { k },
                    image: leibniz_image(&basis_of(&e2, src)[0], 0, k)?,
                });
            }
        }
        all_arrows.push(arrows);
    }
    let einfty = snapshot(&e2, &cells, Page::Infinity);
    Ok(BprRun { generators: v, pages, arrows: all_arrows, einfty })
}

fn cell_violation(page: u32, at: TriDegree, e: CellError) -> EngineError {
    EngineError::PatternViolation { page, at, detail: format!("{e:?}") }
}
