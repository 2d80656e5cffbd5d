//! The on-disk page cache.
//!
//! Layout (little-endian):
//!
//! ```text
//! "ROSQ" | version u32 | theory u8 | height u32 | D u32 | M u32
//! | window 6×i64 | padded 6×i64 | poly-cap i64 (−1 = none) | sections u32
//! then per page: length u32 | page u32 (0xFFFFFFFF = ∞) | points u32
//!                | per point: a i64, b i64, s i64, tag u8, p u32, q u32
//! ```
//!
//! Monomials are not stored: every E₂ basis is recomputed from the
//! tri-degree. Arrows are not stored either.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::engine::{BprRun, SpectralRun};
use crate::error::{Error, Result};
use crate::grading::TriDegree;
use crate::pages::{BprGroup, ModuleDescriptor, Monomial, Page, PageLattice, PointData, Span, Theory, Truncation, Window};

pub const MAGIC: &[u8; 4] = b"ROSQ";
pub const FORMAT_VERSION: u32 = 1;
const INFINITY_TAG: u32 = 0xFFFF_FFFF;

/// Everything a `compute` run leaves behind: the materialized pages and E∞
/// (last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub theory: Theory,
    pub height: u32,
    pub truncation: Truncation,
    pub window: Window,
    pub padded: Window,
    pub poly_cap: Option<i64>,
    pub pages: Vec<PageLattice>,
}

impl CacheEntry {
    pub fn from_run(run: &SpectralRun) -> Self {
        let e = &run.einfty;
        CacheEntry {
            theory: Theory::En,
            height: run.height,
            truncation: run.truncation,
            window: e.window,
            padded: e.padded,
            poly_cap: None,
            pages: run.pages.iter().chain(std::iter::once(e)).cloned().collect(),
        }
    }

    pub fn from_bpr(run: &BprRun, poly_cap: Option<i64>) -> Self {
        let e = &run.einfty;
        CacheEntry {
            theory: Theory::Bpr,
            height: run.generators,
            truncation: e.truncation,
            window: e.window,
            padded: e.padded,
            poly_cap,
            pages: run.pages.iter().chain(std::iter::once(e)).cloned().collect(),
        }
    }

    pub fn einfty(&self) -> &PageLattice {
        self.pages.last().expect("a cache entry always holds E∞")
    }

    /// The page to show for `E_r`: the last materialized page at or below
    /// `r`, or E∞ past the final differential.
    pub fn page(&self, page: Page) -> Option<&PageLattice> {
        match page {
            Page::Infinity => Some(self.einfty()),
            Page::Finite(r) => {
                let last = self.pages.iter().rev().nth(1).map(|l| l.page);
                match last {
                    Some(Page::Finite(top)) if r > top => Some(self.einfty()),
                    _ => self.pages.iter().rev().find(|l| matches!(l.page, Page::Finite(p) if p <= r.max(3))),
                }
            }
        }
    }
}

fn put_span(out: &mut Vec<u8>, s: Span) {
    out.extend_from_slice(&s.lo.to_le_bytes());
    out.extend_from_slice(&s.hi.to_le_bytes());
}

fn put_window(out: &mut Vec<u8>, w: &Window) {
    put_span(out, w.stems);
    put_span(out, w.sigma);
    put_span(out, w.filtration);
}

fn point_tag(data: &PointData) -> (u8, u32, u32) {
    match data {
        PointData::En { descriptor, .. } => match *descriptor {
            ModuleDescriptor::Zero => (0, 0, 0),
            ModuleDescriptor::WittLevel { e } => (1, e, 0),
            ModuleDescriptor::WittIdeal { upto } => (2, upto, 0),
            ModuleDescriptor::TorsLevel { k0 } => (3, k0, 0),
            ModuleDescriptor::TorsIdeal { k0, upto } => (4, k0, upto),
        },
        PointData::Bpr { group, .. } => match *group {
            BprGroup::Free { rank, index_log2 } => (16, rank, index_log2),
            BprGroup::Torsion { dim } => (17, dim, 0),
        },
    }
}

pub fn serialize(entry: &CacheEntry) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.push(match entry.theory {
        Theory::En => 0,
        Theory::Bpr => 1,
    });
    for x in [entry.height, entry.truncation.series_deg, entry.truncation.witt_prec] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    put_window(&mut out, &entry.window);
    put_window(&mut out, &entry.padded);
    out.extend_from_slice(&entry.poly_cap.unwrap_or(-1).to_le_bytes());
    out.extend_from_slice(&(entry.pages.len() as u32).to_le_bytes());
    for l in &entry.pages {
        let mut body = Vec::new();
        let tag = match l.page {
            Page::Finite(r) => r,
            Page::Infinity => INFINITY_TAG,
        };
        body.extend_from_slice(&tag.to_le_bytes());
        body.extend_from_slice(&(l.len() as u32).to_le_bytes());
        for (td, data) in l.iter() {
            for x in [td.a(), td.b(), td.s] {
                body.extend_from_slice(&x.to_le_bytes());
            }
            let (t, p, q) = point_tag(data);
            body.push(t);
            body.extend_from_slice(&p.to_le_bytes());
            body.extend_from_slice(&q.to_le_bytes());
        }
        out.extend_from_slice(&(body.len() as u32).to_le_bytes());
        out.extend_from_slice(&body);
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.at.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Cache(format!("truncated at byte {}", self.at)))?;
        let s = &self.bytes[self.at..end];
        self.at = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn span(&mut self) -> Result<Span> {
        Ok(Span::new(self.i64()?, self.i64()?))
    }
    fn window(&mut self) -> Result<Window> {
        let w = Window { stems: self.span()?, sigma: self.span()?, filtration: self.span()? };
        w.validate()?;
        Ok(w)
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<CacheEntry> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Cache("not a rosq cache file".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Cache(format!("format version {version}, this build reads {FORMAT_VERSION}")));
    }
    let theory = match r.u8()? {
        0 => Theory::En,
        1 => Theory::Bpr,
        t => return Err(Error::Cache(format!("unknown theory tag {t}"))),
    };
    let height = r.u32()?;
    let truncation = Truncation::new(r.u32()?, r.u32()?);
    let window = r.window()?;
    let padded = r.window()?;
    let poly_cap = Some(r.i64()?).filter(|&c| c >= 0);
    let sections = r.u32()?;
    let mut pages = Vec::with_capacity(sections as usize);
    for _ in 0..sections {
        let len = r.u32()? as usize;
        let mut body = Reader { bytes: r.take(len)?, at: 0 };
        let page = match body.u32()? {
            INFINITY_TAG => Page::Infinity,
            p => Page::Finite(p),
        };
        let mut lattice = PageLattice::new(theory, height, page, window, padded, truncation);
        for _ in 0..body.u32()? {
            let td = TriDegree::new(body.i64()?, body.i64()?, body.i64()?);
            let (t, p, q) = (body.u8()?, body.u32()?, body.u32()?);
            let bad = || Error::Cache(format!("bad point record at {td}"));
            let data = match theory {
                Theory::En => {
                    let descriptor = match t {
                        1 => ModuleDescriptor::WittLevel { e: p },
                        2 => ModuleDescriptor::WittIdeal { upto: p },
                        3 => ModuleDescriptor::TorsLevel { k0: p },
                        4 => ModuleDescriptor::TorsIdeal { k0: p, upto: q },
                        _ => return Err(bad()),
                    };
                    PointData::En { monomial: Monomial::solve_en(td).ok_or_else(bad)?, descriptor }
                }
                Theory::Bpr => {
                    let group = match t {
                        16 => BprGroup::Free { rank: p, index_log2: q },
                        17 => BprGroup::Torsion { dim: p },
                        _ => return Err(bad()),
                    };
                    let basis = Monomial::solve_bpr(td, height, poly_cap);
                    if basis.is_empty() {
                        return Err(bad());
                    }
                    PointData::Bpr { basis, group }
                }
            };
            lattice.set(td, data);
        }
        if body.at != body.bytes.len() {
            return Err(Error::Cache(format!("trailing bytes in section for {page}")));
        }
        pages.push(lattice);
    }
    if r.at != bytes.len() {
        return Err(Error::Cache("trailing bytes after last section".into()));
    }
    if pages.last().map(|l| l.page) != Some(Page::Infinity) {
        return Err(Error::Cache("cache holds no E∞ section".into()));
    }
    Ok(CacheEntry { theory, height, truncation, window, padded, poly_cap, pages })
}

/// Write via a temporary file in the same directory and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::Usage(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn save(entry: &CacheEntry, path: &Path) -> Result<()> {
    write_atomic(path, &serialize(entry))
}

pub fn load(path: &Path) -> Result<CacheEntry> {
    let bytes = fs::read(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    deserialize(&bytes)
}

pub const CACHE_DIR_ENV: &str = "ROSQ_CACHE_DIR";

/// `$ROSQ_CACHE_DIR`, else `.rosq-cache` in the working directory.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map_or_else(|| PathBuf::from(".rosq-cache"), PathBuf::from)
}

/// A file name determined by the computation's parameters.
pub fn cache_file_name(
    theory: Theory,
    height: u32,
    t: Truncation,
    w: &Window,
    poly_cap: Option<i64>,
) -> String {
    let cap = poly_cap.map_or_else(String::new, |c| format!("-cap{c}"));
    format!(
        "{theory}-n{height}-D{}-M{}-a{}_{}-b{}_{}-s{}_{}{cap}.rosq",
        t.series_deg, t.witt_prec, w.stems.lo, w.stems.hi, w.sigma.lo, w.sigma.hi, w.filtration.lo, w.filtration.hi
    )
}

#[derive(Serialize)]
struct JsonPoint<'a> {
    a: i64,
    b: i64,
    s: i64,
    #[serde(flatten)]
    data: &'a PointData,
}

#[derive(Serialize)]
struct JsonPage<'a> {
    page: String,
    points: Vec<JsonPoint<'a>>,
}

#[derive(Serialize)]
struct JsonCache<'a> {
    format: &'static str,
    version: u32,
    theory: Theory,
    height: u32,
    series_deg: u32,
    witt_prec: u32,
    window: Window,
    padded: Window,
    poly_cap: Option<i64>,
    pages: Vec<JsonPage<'a>>,
}

/// The same content as JSON, for other tools.
pub fn export_json(entry: &CacheEntry) -> Result<String> {
    let doc = JsonCache {
        format: "rosq-cache",
        version: FORMAT_VERSION,
        theory: entry.theory,
        height: entry.height,
        series_deg: entry.truncation.series_deg,
        witt_prec: entry.truncation.witt_prec,
        window: entry.window,
        padded: entry.padded,
        poly_cap: entry.poly_cap,
        pages: entry
            .pages
            .iter()
            .map(|l| JsonPage {
                page: l.page.to_string(),
                points: l.iter().map(|(td, data)| JsonPoint { a: td.a(), b: td.b(), s: td.s, data }).collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}
