//! Integer-stem charts of a page: one glyph per lattice point, one arrow per
//! differential. Output is byte-deterministic.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::Differential;
use crate::error::{Error, Result};
use crate::pages::{restrict_to_integer_stems, BprGroup, Page, PageLattice, PointData, Span};

pub const CHART_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(Format::Svg),
            "json" => Ok(Format::Json),
            _ => Err(Error::Usage(format!("unknown chart format '{s}' (svg|json)"))),
        }
    }
}

/// Finite pages serialize as their number, E∞ as `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChartPage {
    Finite(u32),
    Named(String),
}

impl From<Page> for ChartPage {
    fn from(p: Page) -> Self {
        match p {
            Page::Finite(r) => ChartPage::Finite(r),
            Page::Infinity => ChartPage::Named("inf".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChartPoint {
    pub a: i64,
    pub s: i64,
    pub kind: String,
    pub annot: String,
    pub monomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChartArrow {
    pub from: [i64; 2],
    pub to: [i64; 2],
    pub page: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDoc {
    pub version: u32,
    pub theory: String,
    pub height: u32,
    pub page: ChartPage,
    pub points: Vec<ChartPoint>,
    pub arrows: Vec<ChartArrow>,
}

fn point_fields(data: &PointData) -> (String, String, String) {
    match data {
        PointData::En { monomial, descriptor } => {
            (descriptor.kind().to_string(), descriptor.annotation(), monomial.to_string())
        }
        PointData::Bpr { basis, group } => {
            let (kind, annot) = match group {
                BprGroup::Free { rank, index_log2 } => ("free", format!("rank={rank};index=2^{index_log2}")),
                BprGroup::Torsion { dim } => ("tors", format!("dim={dim}")),
            };
            let mono = basis.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("+");
            (kind.to_string(), annot, mono)
        }
    }
}

/// The chart data for `stems × filtration`, points sorted by `(a, s)` and
/// arrows by `(page, from, to)`. Arrows are kept when both ends lie in the
/// region.
pub fn chart_document(
    lattice: &PageLattice,
    arrows: &[Differential],
    stems: Span,
    filtration: Span,
) -> Result<ChartDoc> {
    let w = &lattice.window;
    if !(w.stems.covers(&stems) && w.filtration.covers(&filtration) && w.sigma.contains(0)) {
        return Err(Error::RegionOutsideWindow(format!("stems {stems}, filtration {filtration} vs {w}")));
    }
    let inside = |a: i64, s: i64| stems.contains(a) && filtration.contains(s);
    let mut points: Vec<ChartPoint> = restrict_to_integer_stems(lattice)
        .into_iter()
        .filter(|p| inside(p.stem, p.s))
        .map(|p| {
            let (kind, annot, monomial) = point_fields(&p.data);
            ChartPoint { a: p.stem, s: p.s, kind, annot, monomial }
        })
        .collect();
    points.sort();
    let mut arrows: Vec<ChartArrow> = arrows
        .iter()
        .filter(|d| d.source.b() == 0 && inside(d.source.a(), d.source.s) && inside(d.target.a(), d.target.s))
        .map(|d| ChartArrow { from: [d.source.a(), d.source.s], to: [d.target.a(), d.target.s], page: d.r })
        .collect();
    arrows.sort_by_key(|x| (x.page, x.from, x.to));
    Ok(ChartDoc {
        version: CHART_VERSION,
        theory: lattice.theory.to_string(),
        height: lattice.height,
        page: lattice.page.into(),
        points,
        arrows,
    })
}

pub fn render(
    lattice: &PageLattice,
    arrows: &[Differential],
    stems: Span,
    filtration: Span,
    format: Format,
) -> Result<String> {
    let doc = chart_document(lattice, arrows, stems, filtration)?;
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
        Format::Svg => svg(&doc, stems, filtration),
    })
}

const UNIT: i64 = 24;
const MARGIN: i64 = 40;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn svg(doc: &ChartDoc, stems: Span, filt: Span) -> String {
    let width = 2 * MARGIN + (stems.len() - 1).max(0) * UNIT;
    let height = 2 * MARGIN + (filt.len() - 1).max(0) * UNIT;
    let x = |a: i64| MARGIN + (a - stems.lo) * UNIT;
    let y = |s: i64| height - MARGIN - (s - filt.lo) * UNIT;
    let page = match &doc.page {
        ChartPage::Finite(r) => format!("E{r}"),
        ChartPage::Named(n) => format!("E{n}"),
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" data-version="{}" data-theory="{}" data-height="{}" data-page="{page}">"#,
        doc.version, doc.theory, doc.height
    );
    let _ = writeln!(out, "<title>{} n={} {page}</title>", doc.theory, doc.height);
    out.push_str("<g class=\"axes\" stroke=\"#ccc\" stroke-width=\"0.5\" font-family=\"monospace\" font-size=\"9\">\n");
    for a in stems.iter().filter(|a| a.rem_euclid(4) == 0) {
        let _ = writeln!(out, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, x(a), y(filt.lo), y(filt.hi));
        let _ = writeln!(out, r#"<text x="{}" y="{}" stroke="none" fill="gray">{a}</text>"#, x(a) - 4, y(filt.lo) + 16);
    }
    for s in filt.iter().filter(|s| s.rem_euclid(4) == 0) {
        let _ = writeln!(out, r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}"/>"#, x(stems.lo), y(s), x(stems.hi));
        let _ = writeln!(out, r#"<text x="{}" y="{}" stroke="none" fill="gray">{s}</text>"#, x(stems.lo) - 24, y(s) + 3);
    }
    out.push_str("</g>\n<g class=\"arrows\" stroke=\"#b22\" stroke-width=\"1\">\n");
    for ar in &doc.arrows {
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" data-page="{}"/>"#,
            x(ar.from[0]),
            y(ar.from[1]),
            x(ar.to[0]),
            y(ar.to[1]),
            ar.page
        );
    }
    out.push_str("</g>\n<g class=\"points\">\n");
    for p in &doc.points {
        let data = format!(
            r#"data-a="{}" data-s="{}" data-kind="{}" data-annot="{}" data-monomial="{}""#,
            p.a,
            p.s,
            p.kind,
            escape(&p.annot),
            escape(&p.monomial)
        );
        let (cx, cy) = (x(p.a), y(p.s));
        let glyph = match p.kind.as_str() {
            "witt" | "free" => format!(r#"<rect x="{}" y="{}" width="8" height="8" fill="white" stroke="black" {data}/>"#, cx - 4, cy - 4),
            "witt-ideal" => format!(
                r#"<rect x="{}" y="{}" width="8" height="8" fill="white" stroke="black" stroke-dasharray="2,1" {data}/>"#,
                cx - 4,
                cy - 4
            ),
            "tors-ideal" => format!(r#"<circle cx="{cx}" cy="{cy}" r="3.5" fill="white" stroke="black" {data}/>"#),
            _ => format!(r#"<circle cx="{cx}" cy="{cy}" r="3.5" fill="black" {data}/>"#),
        };
        out.push_str(&glyph);
        out.push('\n');
        let label = match p.kind.as_str() {
            "witt" if p.annot != "2^0" => p.annot.clone(),
            "witt-ideal" | "tors-ideal" => p.annot.clone(),
            "tors" if p.annot != "k0=1" => p.annot.clone(),
            _ => String::new(),
        };
        if !label.is_empty() {
            let _ = writeln!(out, r#"<text x="{}" y="{}" font-family="monospace" font-size="7">{}</text>"#, cx + 5, cy - 5, escape(&label));
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
