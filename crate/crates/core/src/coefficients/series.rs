use std::collections::BTreeMap;

use super::{CoefficientError, Ring};

/// Exponent vectors of total degree exactly `d` in `vars` variables, in
/// lexicographically decreasing order (`ū_1^d` first).
pub fn monomials_of_degree(vars: u32, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = rest;
            out.push(cur.clone());
            return;
        }
        for e in (0..=rest).rev() {
            cur[i] = e;
            rec(i + 1, rest - e, cur, out);
        }
    }
    if vars == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; vars as usize], &mut out);
    out
}

/// All exponent vectors of total degree `< bound`, graded then
/// lexicographically decreasing.
pub fn graded_lex(vars: u32, bound: u32) -> Vec<Vec<u32>> {
    (0..bound).flat_map(|d| monomials_of_degree(vars, d)).collect()
}

/// A power series in `vars` variables truncated to total degree `< bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<R: Ring> {
    vars: u32,
    bound: u32,
    unit: R,
    terms: BTreeMap<Vec<u32>, R>,
}

impl<R: Ring> TruncatedSeries<R> {
    /// The zero series; `unit` fixes the coefficient ring.
    pub fn zero(vars: u32, bound: u32, unit: R) -> Self {
        TruncatedSeries { vars, bound, unit: unit.one_like(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: u32, bound: u32, c: R) -> Self {
        Self::zero(vars, bound, c).with_term(vec![0; vars as usize], c)
    }

    /// `c · x^exps`, or zero past the truncation.
    pub fn monomial(vars: u32, bound: u32, exps: Vec<u32>, c: R) -> Self {
        Self::zero(vars, bound, c).with_term(exps, c)
    }

    /// The variable `x_i` (1-based).
    pub fn variable(vars: u32, bound: u32, i: u32, unit: R) -> Self {
        let mut e = vec![0; vars as usize];
        e[i as usize - 1] = 1;
        Self::monomial(vars, bound, e, unit.one_like())
    }

    fn with_term(mut self, exps: Vec<u32>, c: R) -> Self {
        self.add_term(exps, c);
        self
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: R) {
        debug_assert_eq!(exps.len(), self.vars as usize);
        if exps.iter().sum::<u32>() >= self.bound {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(|| c.zero_like());
        *entry = *entry + c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> R {
        self.terms.get(exps).copied().unwrap_or_else(|| self.unit.zero_like())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R)> {
        self.terms.iter()
    }

    fn check(&self, other: &Self) -> Result<(), CoefficientError> {
        if self.vars != other.vars || self.bound != other.bound {
            return Err(CoefficientError::TruncationMismatch(
                self.vars,
                self.bound,
                other.vars,
                other.bound,
            ));
        }
        if !self.unit.same_ring(&other.unit) {
            return Err(CoefficientError::RingMismatch);
        }
        Ok(())
    }

    pub fn series_add(&self, other: &Self) -> Result<Self, CoefficientError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn series_neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    /// Product, truncated to total degree `< bound`.
    pub fn series_mul(&self, other: &Self) -> Result<Self, CoefficientError> {
        self.check(other)?;
        let mut out = Self::zero(self.vars, self.bound, self.unit);
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().sum();
            for (e2, c2) in &other.terms {
                if d1 + e2.iter().sum::<u32>() >= self.bound {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, *c1 * *c2);
            }
        }
        Ok(out)
    }

    /// Apply a ring map to every coefficient.
    pub fn map<S: Ring>(&self, unit: S, f: impl Fn(R) -> S) -> TruncatedSeries<S> {
        let mut out = TruncatedSeries::zero(self.vars, self.bound, unit);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(*c));
        }
        out
    }
}
