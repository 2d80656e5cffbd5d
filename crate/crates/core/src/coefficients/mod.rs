//! Exact coefficient rings: `𝔽_{2ⁿ}`, `W(𝔽_{2ⁿ})/2^M` and truncated power
//! series over either.
//!
//! Both fields are defined by fixed Conway polynomials (see
//! [`conway_polynomial`]), and the Witt ring uses the same polynomial with
//! integer coefficients as its monic lift, so every artifact built on top is
//! bit-reproducible.

mod field;
mod series;
mod witt;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub use field::{conway_polynomial, Gf, GaloisField};
pub use series::{graded_lex, monomials_of_degree, TruncatedSeries};
pub use witt::{witt_lift, witt_reduce, TruncatedWitt, Witt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoefficientError {
    #[error("extension degree {0} is out of range (1..=8)")]
    DegreeOutOfRange(u32),
    #[error("2-adic precision {0} is out of range (1..=62)")]
    PrecisionOutOfRange(u32),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("series truncations differ: {0} variables < {1} vs {2} variables < {3}")]
    TruncationMismatch(u32, u32, u32, u32),
}

/// A commutative ring whose elements know which ring they belong to.
pub trait Ring:
    Copy + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Do `self` and `other` belong to the same ring?
    fn same_ring(&self, other: &Self) -> bool;
}
