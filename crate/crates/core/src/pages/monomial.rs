use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grading::{GradingError, TriDegree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    En,
    Bpr,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::En => "en",
            Theory::Bpr => "bpr",
        })
    }
}

/// An exponent vector over the E₂ generators.
///
/// `series` holds the exponents of `ū_1, …, ū_{n−1}` for `E_n` and of
/// `v̄_1, …, v̄_V` for `BP_ℝ`; trailing zeros are insignificant. `ubar` is
/// always zero for `BP_ℝ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Monomial {
    pub theory: Theory,
    pub series: Vec<i64>,
    pub ubar: i64,
    pub u2sigma: i64,
    pub asigma: i64,
}

impl Monomial {
    pub fn one(theory: Theory) -> Self {
        Monomial { theory, series: Vec::new(), ubar: 0, u2sigma: 0, asigma: 0 }
    }

    pub fn en(series: Vec<i64>, ubar: i64, u2sigma: i64, asigma: i64) -> Self {
        Monomial { theory: Theory::En, series, ubar, u2sigma, asigma }.normalized()
    }

    pub fn bpr(series: Vec<i64>, u2sigma: i64, asigma: i64) -> Self {
        Monomial { theory: Theory::Bpr, series, ubar: 0, u2sigma, asigma }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.series.last() == Some(&0) {
            self.series.pop();
        }
        self
    }

    /// Exponent of the `i`-th series generator (1-based).
    pub fn series_exp(&self, i: u32) -> i64 {
        self.series.get(i as usize - 1).copied().unwrap_or(0)
    }

    pub fn with_series_exp(mut self, i: u32, e: i64) -> Self {
        let idx = i as usize - 1;
        if self.series.len() <= idx {
            self.series.resize(idx + 1, 0);
        }
        self.series[idx] = e;
        self.normalized()
    }

    /// True when every series exponent is zero, i.e. this is the basis
    /// point of a lattice cell.
    pub fn is_basis_point(&self) -> bool {
        self.series.is_empty()
    }

    pub fn series_degree(&self) -> i64 {
        self.series.iter().sum()
    }

    pub(crate) fn validate(&self, height: u32) -> Result<(), GradingError> {
        for (i, &e) in self.series.iter().enumerate() {
            let name = match self.theory {
                Theory::En => format!("ubar{}", i + 1),
                Theory::Bpr => format!("vbar{}", i + 1),
            };
            if e < 0 {
                return Err(GradingError::NegativeExponent { generator: name, exponent: e });
            }
            if self.theory == Theory::En && e != 0 && i as u32 + 1 >= height {
                return Err(GradingError::IndexOutOfRange { index: i as u32 + 1, height });
            }
        }
        if self.asigma < 0 {
            return Err(GradingError::NegativeExponent {
                generator: "asigma".into(),
                exponent: self.asigma,
            });
        }
        if self.theory == Theory::Bpr && self.ubar != 0 {
            return Err(GradingError::UnknownGenerator("ubar in a BP_R monomial".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, GradingError> {
        if self.theory != other.theory {
            return Err(GradingError::TheoryMismatch { expected: self.theory, found: other.theory });
        }
        let len = self.series.len().max(other.series.len());
        let series = (0..len)
            .map(|i| {
                self.series.get(i).copied().unwrap_or(0) + other.series.get(i).copied().unwrap_or(0)
            })
            .collect();
        Ok(Monomial {
            theory: self.theory,
            series,
            ubar: self.ubar + other.ubar,
            u2sigma: self.u2sigma + other.u2sigma,
            asigma: self.asigma + other.asigma,
        }
        .normalized())
    }

    /// The unique `E_n` basis point `ū^x u_{2σ}^y a_σ^s` at a tri-degree.
    ///
    /// From `a = x + 2y`, `b = x − 2y − s`: `x = (a + b + s)/2` and
    /// `y = (a − b − s)/4`, so a point is occupied iff `s ≥ 0` and
    /// `a − b − s ≡ 0 (mod 4)`.
    pub fn solve_en(td: TriDegree) -> Option<Monomial> {
        if td.s < 0 {
            return None;
        }
        let (a, b, s) = (td.a(), td.b(), td.s);
        if (a - b - s).rem_euclid(4) != 0 {
            return None;
        }
        Some(Monomial::en(Vec::new(), (a + b + s) / 2, (a - b - s) / 4, s))
    }

    /// All `BP_ℝ` monomials at a tri-degree using `v̄_1..v̄_v` with at most
    /// `max_poly_degree` total polynomial degree (exclusive bound).
    pub fn solve_bpr(td: TriDegree, v: u32, max_poly_degree: Option<i64>) -> Vec<Monomial> {
        if td.s < 0 {
            return Vec::new();
        }
        let (a, b, s) = (td.a(), td.b(), td.s);
        // v̄-weight w (in units of ρ) and u_{2σ}-exponent y:
        // a = w + 2y, b = w − 2y − s.
        if (a + b + s).rem_euclid(2) != 0 {
            return Vec::new();
        }
        let w = (a + b + s) / 2;
        if w < 0 || (a - w).rem_euclid(2) != 0 {
            return Vec::new();
        }
        let y = (a - w) / 2;
        let weights: Vec<i64> = (1..=v).map(|i| (1i64 << i) - 1).collect();
        let mut out = Vec::new();
        let mut exps = vec![0i64; v as usize];
        partitions(w, &weights, weights.len(), &mut exps, &mut out);
        out.retain(|e| max_poly_degree.map_or(true, |d| e.iter().sum::<i64>() < d));
        out.sort();
        out.into_iter().map(|e| Monomial::bpr(e, y, s)).collect()
    }
}

fn partitions(rest: i64, weights: &[i64], upto: usize, exps: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if upto == 0 {
        if rest == 0 {
            out.push(exps.clone());
        }
        return;
    }
    let i = upto - 1;
    let w = weights[i];
    let max = rest / w;
    for e in 0..=max {
        exps[i] = e;
        partitions(rest - e * w, weights, i, exps, out);
    }
    exps[i] = 0;
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        let a = self.clone().normalized();
        let b = other.clone().normalized();
        a.theory == b.theory
            && a.series == b.series
            && a.ubar == b.ubar
            && a.u2sigma == b.u2sigma
            && a.asigma == b.asigma
    }
}

impl Eq for Monomial {}

impl Monomial {
    fn key(&self) -> (Theory, Vec<i64>, i64, i64, i64) {
        let m = self.clone().normalized();
        (m.theory, m.series, m.ubar, m.u2sigma, m.asigma)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl std::hash::Hash for Monomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for Monomial {
    /// `ubar1^2*ubar^5*u2sigma^-1*asigma^3`; the unit prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let push = |parts: &mut Vec<String>, name: String, e: i64| match e {
            0 => {}
            1 => parts.push(name),
            e => parts.push(format!("{name}^{e}")),
        };
        let prefix = match self.theory {
            Theory::En => "ubar",
            Theory::Bpr => "vbar",
        };
        for (i, &e) in self.series.iter().enumerate() {
            push(&mut parts, format!("{prefix}{}", i + 1), e);
        }
        push(&mut parts, "ubar".into(), self.ubar);
        push(&mut parts, "u2sigma".into(), self.u2sigma);
        push(&mut parts, "asigma".into(), self.asigma);
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::degree_of_monomial;

    #[test]
    fn display_forms() {
        assert_eq!(Monomial::one(Theory::En).to_string(), "1");
        assert_eq!(Monomial::en(vec![1, 0], 1, 0, 3).to_string(), "ubar1*ubar*asigma^3");
        assert_eq!(Monomial::en(vec![], 5, -3, 11).to_string(), "ubar^5*u2sigma^-3*asigma^11");
        assert_eq!(Monomial::bpr(vec![0, 4], 4, 4).to_string(), "vbar2^4*u2sigma^4*asigma^4");
    }

    #[test]
    fn trailing_zeros_are_insignificant() {
        assert_eq!(Monomial::en(vec![0, 0], 1, 0, 0), Monomial::en(vec![], 1, 0, 0));
    }

    #[test]
    fn solve_en_matches_degree() {
        for a in -10..10 {
            for b in -4..4 {
                for s in 0..12 {
                    let td = TriDegree::new(a, b, s);
                    if let Some(m) = Monomial::solve_en(td) {
                        assert_eq!(degree_of_monomial(&m, 3).unwrap(), td);
                    }
                }
            }
        }
        assert_eq!(
            Monomial::solve_en(TriDegree::new(1, -2, 3)).unwrap(),
            Monomial::en(vec![], 1, 0, 3)
        );
        assert!(Monomial::solve_en(TriDegree::new(0, 0, -1)).is_none());
    }

    #[test]
    fn solve_bpr_small() {
        let v1 = Monomial::solve_bpr(TriDegree::new(1, 1, 0), 3, None);
        assert_eq!(v1, vec![Monomial::bpr(vec![1], 0, 0)]);
        let a = Monomial::solve_bpr(TriDegree::new(0, -1, 1), 3, None);
        assert_eq!(a, vec![Monomial::bpr(vec![], 0, 1)]);
        assert!(Monomial::solve_bpr(TriDegree::new(0, -2, 1), 3, None).is_empty());
        // weight 3: v̄₁³ and v̄₂
        let w3 = Monomial::solve_bpr(TriDegree::new(3, 3, 0), 3, None);
        assert_eq!(w3.len(), 2);
        for m in &w3 {
            assert_eq!(degree_of_monomial(m, 0).unwrap(), TriDegree::new(3, 3, 0));
        }
        let capped = Monomial::solve_bpr(TriDegree::new(3, 3, 0), 3, Some(2));
        assert_eq!(capped, vec![Monomial::bpr(vec![0, 1], 0, 0)]);
    }
}
