use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{conway_polynomial, CoefficientError, GaloisField, Gf, Ring};

/// `W(𝔽_{2ⁿ})/2^M = (ℤ/2^M)[x]/(f)` with `f` the Conway polynomial read
/// over the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedWitt {
    n: u8,
    m: u8,
    poly: u16,
}

impl TruncatedWitt {
    pub fn new(n: u32, m: u32) -> Result<Self, CoefficientError> {
        if m == 0 || m > 62 {
            return Err(CoefficientError::PrecisionOutOfRange(m));
        }
        Ok(TruncatedWitt { n: n as u8, m: m as u8, poly: conway_polynomial(n)? })
    }

    pub fn degree(&self) -> u32 {
        u32::from(self.n)
    }

    pub fn precision(&self) -> u32 {
        u32::from(self.m)
    }

    pub fn residue_field(&self) -> GaloisField {
        GaloisField::new(self.degree()).expect("validated on construction")
    }

    fn mask(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    /// The element `Σ coeffs[i] xⁱ`; missing coefficients are zero.
    pub fn element(&self, coeffs: &[i64]) -> Witt {
        let mut c = [0u64; 8];
        for (i, &v) in coeffs.iter().enumerate().take(self.degree() as usize) {
            c[i] = (v as u64) & self.mask();
        }
        Witt { ring: *self, c }
    }

    pub fn from_int(&self, v: i64) -> Witt {
        self.element(&[v])
    }

    pub fn zero(&self) -> Witt {
        self.from_int(0)
    }

    pub fn one(&self) -> Witt {
        self.from_int(1)
    }

    /// `x^j`, `j < n`.
    pub fn basis(&self, j: u32) -> Witt {
        let mut c = [0i64; 8];
        c[j as usize] = 1;
        self.element(&c)
    }
}

/// An element of some `W(𝔽_{2ⁿ})/2^M`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Witt {
    ring: TruncatedWitt,
    c: [u64; 8],
}

impl Witt {
    pub fn ring(&self) -> TruncatedWitt {
        self.ring
    }

    /// Coefficient of `x^j` in `[0, 2^M)`.
    pub fn coeff(&self, j: u32) -> u64 {
        self.c[j as usize]
    }

    /// 2-adic valuation; `M` for zero.
    pub fn valuation(&self) -> u32 {
        self.c[..self.ring.degree() as usize]
            .iter()
            .map(|&v| if v == 0 { self.ring.precision() } else { v.trailing_zeros() })
            .min()
            .unwrap_or(self.ring.precision())
    }

    pub fn scale(self, k: i64) -> Witt {
        self * self.ring.from_int(k)
    }
}

impl fmt::Debug for Witt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Witt{:?}", &self.c[..self.ring.degree() as usize])
    }
}

/// Reduction mod 2 onto the residue field.
pub fn witt_reduce(x: Witt) -> Gf {
    let mut bits = 0u16;
    for j in 0..x.ring.degree() {
        bits |= ((x.c[j as usize] & 1) as u16) << j;
    }
    x.ring.residue_field().element(bits)
}

/// The lift of a residue-field element with coordinates in `{0, 1}`.
pub fn witt_lift(g: Gf, ring: TruncatedWitt) -> Witt {
    let coeffs: Vec<i64> = (0..ring.degree()).map(|j| i64::from(g.coord(j))).collect();
    ring.element(&coeffs)
}

impl Add for Witt {
    type Output = Witt;
    fn add(self, rhs: Witt) -> Witt {
        debug_assert_eq!(self.ring, rhs.ring);
        let mask = self.ring.mask();
        let mut c = [0u64; 8];
        for i in 0..8 {
            c[i] = self.c[i].wrapping_add(rhs.c[i]) & mask;
        }
        Witt { ring: self.ring, c }
    }
}

impl Neg for Witt {
    type Output = Witt;
    fn neg(self) -> Witt {
        let mask = self.ring.mask();
        let mut c = [0u64; 8];
        for i in 0..8 {
            c[i] = self.c[i].wrapping_neg() & mask;
        }
        Witt { ring: self.ring, c }
    }
}

impl Sub for Witt {
    type Output = Witt;
    fn sub(self, rhs: Witt) -> Witt {
        self + (-rhs)
    }
}

impl Mul for Witt {
    type Output = Witt;
    fn mul(self, rhs: Witt) -> Witt {
        debug_assert_eq!(self.ring, rhs.ring);
        let n = self.ring.degree() as usize;
        let mask = self.ring.mask();
        let mut prod = [0u64; 16];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = prod[i + j].wrapping_add(self.c[i].wrapping_mul(rhs.c[j])) & mask;
            }
        }
        // xⁿ ≡ −(f − xⁿ)
        let poly = self.ring.poly;
        for deg in (n..2 * n.max(1) - 1).rev() {
            let top = prod[deg];
            if top == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..n {
                if poly >> i & 1 == 1 {
                    let k = deg - n + i;
                    prod[k] = prod[k].wrapping_sub(top) & mask;
                }
            }
        }
        let mut c = [0u64; 8];
        c[..n].copy_from_slice(&prod[..n]);
        Witt { ring: self.ring, c }
    }
}

impl Ring for Witt {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.ring == other.ring
    }
}
