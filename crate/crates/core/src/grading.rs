//! RO(C₂)-graded stems and the tri-degrees that address every lattice.
//!
//! A stem is `a + bσ`, stored as the pair `(a, b)`. A tri-degree adds the
//! cohomological filtration `s`. Differentials `d_r` lower the total stem
//! `a + b` by one and raise `s` by `r`; for the theories here they in fact
//! keep `b` fixed and lower `a` by one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pages::{Monomial, Theory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator ū_{index} does not exist at height {height}")]
    IndexOutOfRange { index: u32, height: u32 },
    #[error("negative exponent {exponent} on non-invertible generator {generator}")]
    NegativeExponent { generator: String, exponent: i64 },
    #[error("monomial of theory {found:?} used where {expected:?} was expected")]
    TheoryMismatch { expected: Theory, found: Theory },
}

/// An element `a + bσ` of RO(C₂).
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct RODegree {
    pub a: i64,
    pub b: i64,
}

impl RODegree {
    pub const ZERO: RODegree = RODegree { a: 0, b: 0 };
    /// The regular representation `1 + σ`.
    pub const RHO: RODegree = RODegree { a: 1, b: 1 };
    pub const SIGMA: RODegree = RODegree { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        RODegree { a, b }
    }

    /// Total (underlying) dimension `a + b`.
    pub fn total(self) -> i64 {
        self.a + self.b
    }

    pub fn is_integer(self) -> bool {
        self.b == 0
    }
}

impl Add for RODegree {
    type Output = RODegree;
    fn add(self, rhs: Self) -> Self {
        RODegree::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for RODegree {
    type Output = RODegree;
    fn sub(self, rhs: Self) -> Self {
        RODegree::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for RODegree {
    type Output = RODegree;
    fn neg(self) -> Self {
        RODegree::new(-self.a, -self.b)
    }
}

impl Mul<i64> for RODegree {
    type Output = RODegree;
    fn mul(self, k: i64) -> Self {
        RODegree::new(self.a * k, self.b * k)
    }
}

impl fmt::Display for RODegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}σ"),
            (a, b) if b < 0 => write!(f, "{a}-{}σ", -b),
            (a, b) => write!(f, "{a}+{b}σ"),
        }
    }
}

/// A stem together with a filtration.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct TriDegree {
    pub stem: RODegree,
    pub s: i64,
}

impl TriDegree {
    pub const fn new(a: i64, b: i64, s: i64) -> Self {
        TriDegree { stem: RODegree::new(a, b), s }
    }

    pub fn a(self) -> i64 {
        self.stem.a
    }

    pub fn b(self) -> i64 {
        self.stem.b
    }

    /// Negative filtration only appears as the result of an out-of-range
    /// subtraction; no class lives there.
    pub fn is_sentinel(self) -> bool {
        self.s < 0
    }

    /// Where `d_r` starting here must land, given the stem the target
    /// monomial carries.
    pub fn displaced(self, target_stem: RODegree, r: u32) -> TriDegree {
        TriDegree { stem: target_stem, s: self.s + i64::from(r) }
    }
}

impl Add for TriDegree {
    type Output = TriDegree;
    fn add(self, rhs: Self) -> Self {
        TriDegree { stem: self.stem + rhs.stem, s: self.s + rhs.s }
    }
}

impl Sub for TriDegree {
    type Output = TriDegree;
    fn sub(self, rhs: Self) -> Self {
        TriDegree { stem: self.stem - rhs.stem, s: self.s - rhs.s }
    }
}

impl Mul<i64> for TriDegree {
    type Output = TriDegree;
    fn mul(self, k: i64) -> Self {
        TriDegree { stem: self.stem * k, s: self.s * k }
    }
}

impl fmt::Display for TriDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, s={})", self.stem, self.s)
    }
}

/// Does `d_r` from `source` to `target` have the right shape?
pub fn is_valid_displacement(source: TriDegree, target: TriDegree, r: u32) -> bool {
    target.stem.total() == source.stem.total() - 1 && target.s == source.s + i64::from(r)
}

/// The ring generators of the two E₂ pages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `ū_i`, `1 ≤ i ≤ n − 1`.
    UbarI(u32),
    Ubar,
    U2Sigma,
    ASigma,
    /// `v̄_i`, `i ≥ 1`.
    VbarI(u32),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::UbarI(i) => write!(f, "ubar{i}"),
            Generator::Ubar => f.write_str("ubar"),
            Generator::U2Sigma => f.write_str("u2sigma"),
            Generator::ASigma => f.write_str("asigma"),
            Generator::VbarI(i) => write!(f, "vbar{i}"),
        }
    }
}

impl FromStr for Generator {
    type Err = GradingError;

    /// Accepts `ubar`, `ubar3`, `ubar_3`, `ū_3`, `u2sigma`, `u_2sigma`,
    /// `asigma`, `a_sigma`, `vbar2`, `v̄_2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| *c != '_' && *c != '{' && *c != '}').collect();
        let unknown = || GradingError::UnknownGenerator(s.to_string());
        let indexed = |rest: &str| -> Result<u32, GradingError> {
            let i: u32 = rest.parse().map_err(|_| unknown())?;
            if i == 0 {
                return Err(unknown());
            }
            Ok(i)
        };
        match t.as_str() {
            "ubar" | "ū" => Ok(Generator::Ubar),
            "u2sigma" | "u2σ" => Ok(Generator::U2Sigma),
            "asigma" | "aσ" => Ok(Generator::ASigma),
            _ => {
                if let Some(rest) = t.strip_prefix("ubar").or_else(|| t.strip_prefix('ū')) {
                    indexed(rest).map(Generator::UbarI)
                } else if let Some(rest) = t.strip_prefix("vbar").or_else(|| t.strip_prefix("v̄")) {
                    indexed(rest).map(Generator::VbarI)
                } else {
                    Err(unknown())
                }
            }
        }
    }
}

/// `(2^i − 1)ρ`, the stem of `v̄_i`.
pub fn vbar_stem(i: u32) -> RODegree {
    RODegree::RHO * ((1i64 << i) - 1)
}

pub fn degree_of_generator(generator: Generator, height: u32) -> Result<TriDegree, GradingError> {
    let td = match generator {
        Generator::UbarI(i) => {
            if i == 0 || i >= height {
                return Err(GradingError::IndexOutOfRange { index: i, height });
            }
            TriDegree::new(0, 0, 0)
        }
        Generator::Ubar => TriDegree::new(1, 1, 0),
        Generator::U2Sigma => TriDegree::new(2, -2, 0),
        Generator::ASigma => TriDegree::new(0, -1, 1),
        Generator::VbarI(i) => {
            if i == 0 {
                return Err(GradingError::UnknownGenerator("vbar0".into()));
            }
            TriDegree { stem: vbar_stem(i), s: 0 }
        }
    };
    Ok(td)
}

/// Sum of generator degrees weighted by exponents. `height` is `n` for an
/// `E_n` monomial and is ignored for `BP_ℝ`.
pub fn degree_of_monomial(m: &Monomial, height: u32) -> Result<TriDegree, GradingError> {
    m.validate(height)?;
    let mut td = TriDegree::default();
    let mut add = |g: Generator, e: i64| -> Result<(), GradingError> {
        if e != 0 {
            td = td + degree_of_generator(g, height)? * e;
        }
        Ok(())
    };
    for (i, &e) in m.series.iter().enumerate() {
        let i = i as u32 + 1;
        match m.theory {
            Theory::En => add(Generator::UbarI(i), e)?,
            Theory::Bpr => add(Generator::VbarI(i), e)?,
        }
    }
    add(Generator::Ubar, m.ubar)?;
    add(Generator::U2Sigma, m.u2sigma)?;
    add(Generator::ASigma, m.asigma)?;
    Ok(td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn generator_degrees() {
        let a = degree_of_generator(Generator::ASigma, 3).unwrap();
        assert_eq!(a, TriDegree::new(0, -1, 1));
        assert_eq!(degree_of_generator(Generator::UbarI(2), 3).unwrap(), TriDegree::new(0, 0, 0));
        assert_eq!(
            degree_of_generator(Generator::UbarI(3), 3),
            Err(GradingError::IndexOutOfRange { index: 3, height: 3 })
        );
        assert_eq!(degree_of_generator(Generator::U2Sigma, 1).unwrap(), TriDegree::new(2, -2, 0));
        assert_eq!(degree_of_generator(Generator::Ubar, 1).unwrap(), TriDegree::new(1, 1, 0));
        assert_eq!(degree_of_generator(Generator::VbarI(2), 1).unwrap(), TriDegree::new(3, 3, 0));
    }

    #[test]
    fn parse_generators() {
        assert_eq!("ū_2".parse::<Generator>().unwrap(), Generator::UbarI(2));
        assert_eq!("ubar".parse::<Generator>().unwrap(), Generator::Ubar);
        assert_eq!("a_sigma".parse::<Generator>().unwrap(), Generator::ASigma);
        assert_eq!("u_{2sigma}".parse::<Generator>().unwrap(), Generator::U2Sigma);
        assert_eq!("vbar_4".parse::<Generator>().unwrap(), Generator::VbarI(4));
        assert!("w7".parse::<Generator>().is_err());
        assert!("ubar0".parse::<Generator>().is_err());
    }

    #[test]
    fn monomial_degrees() {
        // ū₁ ū a_σ³
        let m = Monomial::en(vec![1, 0], 1, 0, 3);
        assert_eq!(degree_of_monomial(&m, 3).unwrap(), TriDegree::new(1, -2, 3));
        assert_eq!(degree_of_monomial(&Monomial::one(Theory::En), 2).unwrap(), TriDegree::default());
        // ū³ a_σ⁷ at n = 2
        let m = Monomial::en(vec![0], 3, 0, 7);
        assert_eq!(degree_of_monomial(&m, 2).unwrap(), TriDegree::new(3, -4, 7));
        let bad = Monomial::en(vec![0], 0, 0, -1);
        assert!(matches!(degree_of_monomial(&bad, 2), Err(GradingError::NegativeExponent { .. })));
        let bad = Monomial::en(vec![-1], 0, 0, 0);
        assert!(matches!(degree_of_monomial(&bad, 2), Err(GradingError::NegativeExponent { .. })));
        let bad = Monomial::en(vec![0, 0, 1], 0, 0, 0);
        assert!(matches!(degree_of_monomial(&bad, 3), Err(GradingError::IndexOutOfRange { .. })));
    }

    #[test]
    fn display() {
        assert_eq!(RODegree::new(2, -2).to_string(), "2-2σ");
        assert_eq!(RODegree::new(0, -1).to_string(), "-1σ");
        assert_eq!(RODegree::new(4, 0).to_string(), "4");
    }

    fn en_monomial(n: u32) -> impl Strategy<Value = Monomial> {
        (
            proptest::collection::vec(0i64..4, (n - 1) as usize),
            -6i64..6,
            -6i64..6,
            0i64..10,
        )
            .prop_map(|(s, x, y, c)| Monomial::en(s, x, y, c))
    }

    proptest! {
        #[test]
        fn degree_is_additive(m1 in en_monomial(3), m2 in en_monomial(3)) {
            let prod = m1.mul(&m2).unwrap();
            let lhs = degree_of_monomial(&prod, 3).unwrap();
            let rhs = degree_of_monomial(&m1, 3).unwrap() + degree_of_monomial(&m2, 3).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
