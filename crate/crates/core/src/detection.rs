//! Hurewicz detection: the `h_i`, `h_j²`, `g_k` dictionary in `HFPSS(BP_ℝ)`,
//! the comparison map to `HFPSS(E_n)` and the E∞ survival certificate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{page_length, SpectralRun};
use crate::error::{Error, Result};
use crate::grading::{degree_of_monomial, TriDegree};
use crate::pages::{Monomial, PointData, Theory, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "h_i")]
    H,
    #[serde(rename = "h_j^2")]
    HSquared,
    #[serde(rename = "g_k")]
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::H => "h_i",
            Family::HSquared => "h_j^2",
            Family::G => "g_k",
        })
    }
}

/// A detecting class: family and index, e.g. `h2^2` is `(HSquared, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DetectionClass {
    pub family: Family,
    pub index: u32,
}

impl DetectionClass {
    pub fn new(family: Family, index: u32) -> Result<Self> {
        if index == 0 || index > 12 {
            return Err(Error::Usage(format!("class index {index} out of range 1..=12")));
        }
        Ok(DetectionClass { family, index })
    }

    /// Adams bidegree `(s, t)`.
    pub fn adams_bidegree(&self) -> (i64, i64) {
        let i = self.index;
        match self.family {
            Family::H => (1, 1 << i),
            Family::HSquared => (2, 1 << (i + 1)),
            Family::G => (4, (1 << (i + 3)) + (1 << (i + 2))),
        }
    }

    pub fn expected_stem(&self) -> i64 {
        let (s, t) = self.adams_bidegree();
        t - s
    }

    /// The label under which the dictionary lists the `BP_ℝ` image.
    pub fn dictionary_label(&self) -> String {
        match self.family {
            Family::G => format!("h_{}^4", 2 * self.index),
            _ => self.to_string(),
        }
    }

    pub fn bpr_image(&self) -> Monomial {
        bpr_image(self.family, self.index)
    }

    /// Does the comparison map send this class somewhere nonzero at height `n`?
    pub fn in_range(&self, n: u32) -> bool {
        match self.family {
            Family::H | Family::HSquared => self.index <= n,
            Family::G => self.index + 1 <= n,
        }
    }
}

impl fmt::Display for DetectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::H => write!(f, "h{}", self.index),
            Family::HSquared => write!(f, "h{}^2", self.index),
            Family::G => write!(f, "g{}", self.index),
        }
    }
}

impl FromStr for DetectionClass {
    type Err = Error;

    /// Accepts `h3`, `h_3`, `h2^2`, `h2²`, `g1`, `g_1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("unknown class '{s}' (expected h<i>, h<j>^2 or g<k>)"));
        let t = s.trim();
        let (head, rest) = t.split_at(t.chars().next().ok_or_else(bad)?.len_utf8());
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let (digits, squared) = if let Some(d) = rest.strip_suffix("^2").or_else(|| rest.strip_suffix('²')) {
            (d, true)
        } else {
            (rest, false)
        };
        let index: u32 = digits.parse().map_err(|_| bad())?;
        let family = match (head, squared) {
            ("h", false) => Family::H,
            ("h", true) => Family::HSquared,
            ("g", false) => Family::G,
            _ => return Err(bad()),
        };
        DetectionClass::new(family, index)
    }
}

fn vbar_power(i: u32, e: i64) -> Vec<i64> {
    let mut v = vec![0; i as usize];
    v[i as usize - 1] = e;
    v
}

/// The detecting monomial in `HFPSS(BP_ℝ)`.
pub fn bpr_image(family: Family, index: u32) -> Monomial {
    let w = |i: u32| (1i64 << i) - 1;
    match family {
        Family::H => Monomial::bpr(vbar_power(index, 1), 0, w(index)),
        Family::HSquared => Monomial::bpr(vbar_power(index, 2), 0, 2 * w(index)),
        Family::G => Monomial::bpr(vbar_power(index + 1, 4), 1 << (index + 1), 4 * w(index)),
    }
}

/// `v̄_i ↦ ū_i ū^{2^i−1}` (i < n), `ū^{2^n−1}` (i = n), `0` (i > n),
/// extended multiplicatively with `u_{2σ}`, `a_σ` fixed. `None` is zero.
pub fn comparison_map(m: &Monomial, n: u32) -> Option<Monomial> {
    assert_eq!(m.theory, Theory::Bpr, "comparison map starts in BP_R");
    let mut out = Monomial::en(Vec::new(), 0, m.u2sigma, m.asigma);
    for (idx, &e) in m.series.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let i = idx as u32 + 1;
        if i > n {
            return None;
        }
        out.ubar += e * ((1i64 << i) - 1);
        if i < n {
            out = out.with_series_exp(i, e);
        }
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Detected,
    ZeroImage,
    Killed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Detected => "detected",
            Verdict::ZeroImage => "zero-image",
            Verdict::Killed => "killed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DetectionReport {
    pub family: Family,
    pub index: u32,
    pub class: String,
    pub height: u32,
    pub stem: i64,
    pub bpr_monomial: String,
    pub image_monomial: Option<String>,
    pub image_degree: Option<TriDegree>,
    pub verdict: Verdict,
    pub einfty_page_of_death: Option<u32>,
}

impl DetectionReport {
    /// Classes in range must be detected, out-of-range ones must map to
    /// zero, and a killed image is never acceptable.
    pub fn check_consistency(&self) -> Result<()> {
        let class = DetectionClass { family: self.family, index: self.index };
        let expected = if class.in_range(self.height) { Verdict::Detected } else { Verdict::ZeroImage };
        if self.verdict != expected {
            return Err(Error::TheoremViolation(format!(
                "{} at height {}: expected {expected}, found {}",
                self.class, self.height, self.verdict
            )));
        }
        Ok(())
    }
}

/// A window whose interior holds the image of `class` at height `n`.
pub fn detection_window(class: DetectionClass, n: u32) -> Window {
    let stem = class.expected_stem();
    let top = i64::from(page_length(n)).max(class.bpr_image().asigma + 1);
    Window::integer((stem - 2, stem + 2), (0, top)).expect("nonempty spans")
}

/// Decide whether the image of `class` survives to E∞ in `run`.
pub fn certify_detection(class: DetectionClass, run: &SpectralRun) -> Result<DetectionReport> {
    let n = run.height;
    let bpr = class.bpr_image();
    let image = comparison_map(&bpr, n);
    let mut report = DetectionReport {
        family: class.family,
        index: class.index,
        class: class.to_string(),
        height: n,
        stem: class.expected_stem(),
        bpr_monomial: bpr.to_string(),
        image_monomial: image.as_ref().map(|m| m.to_string()),
        image_degree: None,
        verdict: Verdict::ZeroImage,
        einfty_page_of_death: None,
    };
    let Some(image) = image else { return Ok(report) };
    let td = degree_of_monomial(&image, n)?;
    report.image_degree = Some(td);
    if !run.einfty.is_interior(td) {
        return Err(Error::WindowInsufficient(format!("image degree {td} not inside {}", run.window())));
    }
    let holds = |l: &crate::pages::PageLattice| match l.get(td) {
        Some(PointData::En { descriptor, .. }) => descriptor.contains_unit_multiple(&image.series),
        _ => false,
    };
    if !holds(&run.pages[0]) {
        return Err(Error::TheoremViolation(format!("image {image} of {class} is zero already at E2")));
    }
    if holds(&run.einfty) {
        report.verdict = Verdict::Detected;
    } else {
        report.verdict = Verdict::Killed;
        report.einfty_page_of_death = run
            .pages
            .iter()
            .zip(run.pages.iter().skip(1).chain(std::iter::once(&run.einfty)))
            .find(|(_, after)| !holds(after))
            .and_then(|(l, _)| match l.page {
                crate::pages::Page::Finite(r) => Some(r),
                crate::pages::Page::Infinity => None,
            });
    }
    Ok(report)
}
