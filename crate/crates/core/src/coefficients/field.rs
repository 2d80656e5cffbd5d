use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{CoefficientError, Ring};

/// Conway polynomial of degree `n` over 𝔽₂ as a bit mask (bit `i` is the
/// coefficient of `xⁱ`).
///
/// | n | polynomial |
/// |---|---|
/// | 1 | x + 1 |
/// | 2 | x² + x + 1 |
/// | 3 | x³ + x + 1 |
/// | 4 | x⁴ + x + 1 |
/// | 5 | x⁵ + x² + 1 |
/// | 6 | x⁶ + x⁴ + x³ + x + 1 |
/// | 7 | x⁷ + x + 1 |
/// | 8 | x⁸ + x⁴ + x³ + x² + 1 |
pub fn conway_polynomial(n: u32) -> Result<u16, CoefficientError> {
    Ok(match n {
        1 => 0b11,
        2 => 0b111,
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b101_1011,
        7 => 0b1000_0011,
        8 => 0b1_0001_1101,
        _ => return Err(CoefficientError::DegreeOutOfRange(n)),
    })
}

/// The field `𝔽_{2ⁿ} = 𝔽₂[x]/(conway(n))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaloisField {
    n: u8,
    poly: u16,
}

impl GaloisField {
    pub fn new(n: u32) -> Result<Self, CoefficientError> {
        Ok(GaloisField { n: n as u8, poly: conway_polynomial(n)? })
    }

    pub fn degree(&self) -> u32 {
        u32::from(self.n)
    }

    pub fn order(&self) -> u32 {
        1 << self.n
    }

    pub fn polynomial(&self) -> u16 {
        self.poly
    }

    /// The element with coordinate bits `bits` in the basis `1, x, …, x^{n−1}`.
    pub fn element(&self, bits: u16) -> Gf {
        Gf { field: *self, bits: bits & self.mask() }
    }

    pub fn zero(&self) -> Gf {
        self.element(0)
    }

    pub fn one(&self) -> Gf {
        self.element(1)
    }

    /// The basis vector `x^j`.
    pub fn basis(&self, j: u32) -> Gf {
        debug_assert!(j < self.degree());
        self.element(1 << j)
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> + '_ {
        (0..self.order() as u16).map(move |b| self.element(b))
    }

    fn mask(&self) -> u16 {
        ((1u32 << self.n) - 1) as u16
    }
}

/// An element of some `𝔽_{2ⁿ}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf {
    field: GaloisField,
    bits: u16,
}

impl Gf {
    pub fn field(&self) -> GaloisField {
        self.field
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    /// Coordinate `j` in the polynomial basis.
    pub fn coord(&self, j: u32) -> bool {
        self.bits >> j & 1 == 1
    }

    pub fn pow(self, mut e: u64) -> Gf {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(self) -> Gf {
        self * self
    }

    pub fn inverse(self) -> Option<Gf> {
        if self.bits == 0 {
            None
        } else {
            Some(self.pow(u64::from(self.field.order()) - 2))
        }
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf{}({:#b})", self.field.order(), self.bits)
    }
}

impl Add for Gf {
    type Output = Gf;
    fn add(self, rhs: Gf) -> Gf {
        debug_assert_eq!(self.field, rhs.field);
        Gf { field: self.field, bits: self.bits ^ rhs.bits }
    }
}

impl Sub for Gf {
    type Output = Gf;
    fn sub(self, rhs: Gf) -> Gf {
        self + rhs
    }
}

impl Neg for Gf {
    type Output = Gf;
    fn neg(self) -> Gf {
        self
    }
}

impl Mul for Gf {
    type Output = Gf;
    fn mul(self, rhs: Gf) -> Gf {
        debug_assert_eq!(self.field, rhs.field);
        let n = u32::from(self.field.n);
        let mut prod: u32 = 0;
        for i in 0..n {
            if rhs.bits >> i & 1 == 1 {
                prod ^= u32::from(self.bits) << i;
            }
        }
        let poly = u32::from(self.field.poly);
        for deg in (n..2 * n).rev() {
            if prod >> deg & 1 == 1 {
                prod ^= poly << (deg - n);
            }
        }
        Gf { field: self.field, bits: prod as u16 }
    }
}

impl Ring for Gf {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        self.bits == 0
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.field == other.field
    }
}
