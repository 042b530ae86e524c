//! Truncated formal Laurent series over `Z/p^m`.
//!
//! A [`TruncSeries`] stores the coefficients of `x = Σ x_n t^n` on a half-open
//! window `[start, prec)`. Indices below `start` are zero, indices at or above
//! `prec` are unknown. An exact series (`prec == None`) is finitely supported
//! and every coefficient outside the stored window is zero.
//!
//! Values are kept in canonical form, so structural equality is equality of
//! coefficient functions together with precision:
//!
//! * the first stored coefficient is nonzero, or nothing is stored;
//! * a truncated zero has `start == prec`, the exact zero has `start == 0`;
//! * a truncated series stores exactly `prec - start` coefficients;
//! * an exact series has no trailing zeros.

use std::cmp::{max, min};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `p^m` accepted, so residue products fit comfortably in `u128`.
const MAX_ORDER: u64 = 1 << 40;

/// The coefficient ring `Z/p^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Modulus {
    p: u64,
    m: u32,
    order: u64,
}

impl Modulus {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadParams(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::BadParams("exponent m must be at least 1".into()));
        }
        let order = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::BadParams(format!("{p}^{m} exceeds the supported range")))?;
        Ok(Self { p, m, order })
    }

    /// The prime field `F_p`.
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p^m`, the number of residues.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn reduce(&self, c: i64) -> u64 {
        c.rem_euclid(self.order as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.order as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.order - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.order as u128) as u64
    }

    /// `p`-adic valuation of a residue; `m` for zero.
    pub fn valuation(&self, c: u64) -> u32 {
        if c == 0 {
            return self.m;
        }
        let mut v = 0;
        let mut c = c;
        while c.is_multiple_of(self.p) {
            c /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, c: u64) -> bool {
        !c.is_multiple_of(self.p)
    }

    pub fn check_same(&self, other: &Modulus) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: *self,
                right: *other,
            })
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.m)
    }
}

/// Trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Size of a series in the `p^{-v}` scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbsValue {
    /// The exact zero.
    Zero,
    /// `|x| = p^{-v}`.
    Exact(i64),
    /// Nothing nonzero is known: `|x| <= p^{-v}`.
    AtMost(i64),
}

impl AbsValue {
    /// A certified lower bound on the valuation, `None` meaning +infinity.
    pub fn valuation_bound(&self) -> Option<i64> {
        match *self {
            AbsValue::Zero => None,
            AbsValue::Exact(v) | AbsValue::AtMost(v) => Some(v),
        }
    }

    /// Certified `|x| <= p^{-v}`.
    pub fn is_at_most(&self, v: i64) -> bool {
        self.valuation_bound().is_none_or(|b| b >= v)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, AbsValue::AtMost(_))
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsValue::Zero => write!(f, "0"),
            AbsValue::Exact(v) => write!(f, "p^{}", -v),
            AbsValue::AtMost(v) => write!(f, "<= p^{}", -v),
        }
    }
}

/// A truncated formal Laurent series over `Z/p^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    ring: Modulus,
    start: i64,
    coeffs: Vec<u64>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(min(x, y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl TruncSeries {
    /// Builds a series from raw integer coefficients placed at `start, start+1, ...`.
    ///
    /// Residues are reduced mod `p^m`; indices between the last given
    /// coefficient and `prec` are zero.
    pub fn new(ring: Modulus, start: i64, coeffs: &[i64], prec: Option<i64>) -> Result<Self> {
        let end = start + coeffs.len() as i64;
        if let Some(p) = prec {
            if p < end {
                return Err(Error::MalformedInput(format!(
                    "precision O(t^{p}) is below the last given index {}",
                    end - 1
                )));
            }
        }
        let mut residues: Vec<u64> = coeffs.iter().map(|&c| ring.reduce(c)).collect();
        if let Some(p) = prec {
            residues.resize((p - start) as usize, 0);
        }
        Ok(Self::from_residues(ring, start, residues, prec))
    }

    /// Canonicalizes already-reduced residues. For truncated series the
    /// vector must cover `[start, prec)` exactly.
    pub(crate) fn from_residues(
        ring: Modulus,
        start: i64,
        mut coeffs: Vec<u64>,
        prec: Option<i64>,
    ) -> Self {
        debug_assert!(prec.is_none_or(|p| p - start == coeffs.len() as i64));
        match coeffs.iter().position(|&c| c != 0) {
            None => match prec {
                None => Self::zero(ring),
                Some(p) => Self::zero_to(ring, p),
            },
            Some(k) => {
                coeffs.drain(..k);
                if prec.is_none() {
                    while coeffs.last() == Some(&0) {
                        coeffs.pop();
                    }
                }
                Self {
                    ring,
                    start: start + k as i64,
                    coeffs,
                    prec,
                }
            }
        }
    }

    /// The exact zero.
    pub fn zero(ring: Modulus) -> Self {
        Self {
            ring,
            start: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    /// `O(t^prec)`: zero as far as anything is known.
    pub fn zero_to(ring: Modulus, prec: i64) -> Self {
        Self {
            ring,
            start: prec,
            coeffs: Vec::new(),
            prec: Some(prec),
        }
    }

    /// The exact monomial `c t^k`.
    pub fn monomial(ring: Modulus, c: i64, k: i64) -> Self {
        Self::from_residues(ring, k, vec![ring.reduce(c)], None)
    }

    /// `t^k`.
    pub fn t_pow(ring: Modulus, k: i64) -> Self {
        Self::monomial(ring, 1, k)
    }

    pub fn one(ring: Modulus) -> Self {
        Self::t_pow(ring, 0)
    }

    pub fn ring(&self) -> Modulus {
        self.ring
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// `None` for exact series.
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Coefficient at `i`, or `None` when it lies beyond the precision.
    pub fn coeff(&self, i: i64) -> Option<u64> {
        if let Some(p) = self.prec {
            if i >= p {
                return None;
            }
        }
        Some(self.coeff_or_zero(i))
    }

    fn coeff_or_zero(&self, i: i64) -> u64 {
        if i < self.start || i >= self.end() {
            0
        } else {
            self.coeffs[(i - self.start) as usize]
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec.is_none() && self.coeffs.is_empty()
    }

    /// No known coefficient is nonzero (exact zero or `O(t^k)`).
    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the first nonzero coefficient, if one is known.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Smallest index whose coefficient might be nonzero.
    pub(crate) fn support_lo(&self) -> i64 {
        self.start
    }

    /// Largest index whose coefficient might be nonzero; `None` when unbounded.
    pub(crate) fn support_hi(&self) -> Option<i64> {
        match self.prec {
            Some(_) => None,
            None => Some(self.end() - 1),
        }
    }

    /// Number of known coefficients in the window `[start, prec)`.
    pub fn known_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn abs_val(&self) -> AbsValue {
        match (self.coeffs.is_empty(), self.prec) {
            (false, _) => AbsValue::Exact(self.start),
            (true, None) => AbsValue::Zero,
            (true, Some(p)) => AbsValue::AtMost(p),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(self.combine(other, |r, a, b| r.add(a, b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(self.combine(other, |r, a, b| r.add(a, r.neg(b))))
    }

    fn combine(&self, other: &Self, op: impl Fn(&Modulus, u64, u64) -> u64) -> Self {
        let prec = min_prec(self.prec, other.prec);
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for s in [self, other] {
            if !s.is_exact_zero() {
                lo = min(lo, s.start);
                hi = max(hi, s.end());
            }
        }
        if lo == i64::MAX {
            return Self::zero(self.ring);
        }
        let hi = match prec {
            Some(p) => p,
            None => hi,
        };
        let coeffs = (lo..hi)
            .map(|i| op(&self.ring, self.coeff_or_zero(i), other.coeff_or_zero(i)))
            .collect();
        Self::from_residues(self.ring, lo, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|r, c| r.neg(c))
    }

    /// Multiplication by the integer `k`, coefficientwise mod `p^m`.
    pub fn int_mul(&self, k: i64) -> Self {
        let k = self.ring.reduce(k);
        self.map_coeffs(|r, c| r.mul(c, k))
    }

    fn map_coeffs(&self, f: impl Fn(&Modulus, u64) -> u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| f(&self.ring, c)).collect();
        Self::from_residues(self.ring, self.start, coeffs, self.prec)
    }

    /// The shift automorphism applied `k` times: `x ↦ t^k x`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        Self {
            ring: self.ring,
            start: self.start + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// Cauchy product. The result is known below
    /// `min(prec_x + start_y, prec_y + start_x)`.
    pub fn ring_mul(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(self.ring));
        }
        let r = self.ring;
        let start = self.start + other.start;
        let prec = min_prec(
            self.prec.map(|p| p + other.start),
            other.prec.map(|p| p + self.start),
        );
        let hi = match prec {
            Some(p) => p,
            None => self.end() + other.end() - 1,
        };
        let mut coeffs = vec![0u64; max(hi - start, 0) as usize];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let d = (i + j) as i64;
                if d >= hi - start {
                    break;
                }
                let slot = &mut coeffs[d as usize];
                *slot = r.add(*slot, r.mul(a, b));
            }
        }
        Ok(Self::from_residues(r, start, coeffs, prec))
    }

    /// Forgets every coefficient at index `>= prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        let new_prec = min_prec(self.prec, Some(prec)).unwrap();
        if self.prec == Some(new_prec) {
            return self.clone();
        }
        if new_prec <= self.start || self.is_exact_zero() {
            return Self::zero_to(self.ring, new_prec);
        }
        let coeffs = (self.start..new_prec).map(|i| self.coeff_or_zero(i)).collect();
        Self::from_residues(self.ring, self.start, coeffs, Some(new_prec))
    }

    /// Moves coefficients to another `Z/p^k` with the same `p`, using least
    /// nonnegative representatives (reduction when `k < m`, lifting when `k > m`).
    pub fn change_ring(&self, target: Modulus) -> Result<Self> {
        if target.p() != self.ring.p() {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: target,
            });
        }
        let coeffs = self.coeffs.iter().map(|&c| c % target.order()).collect();
        Ok(Self::from_residues(target, self.start, coeffs, self.prec))
    }

    /// True when `self - other` has no known nonzero coefficient.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero_to_prec())
    }

    /// Parses the series text grammar (see [`crate::text`]).
    pub fn parse(text: &str, ring: Modulus) -> Result<Self> {
        crate::text::parse_series(text, ring)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{}*t^{}", c, self.start + k as i64)?;
            first = false;
        }
        match self.prec {
            Some(p) => {
                if !first {
                    f.write_str(" + ")?;
                }
                write!(f, "O(t^{p})")
            }
            None if first => f.write_str("0"),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Modulus {
        Modulus::new(2, 1).unwrap()
    }

    #[test]
    fn modulus_rejects_composites_and_zero_exponent() {
        assert!(Modulus::new(4, 1).is_err());
        assert!(Modulus::new(1, 1).is_err());
        assert!(Modulus::new(3, 0).is_err());
        assert_eq!(Modulus::new(3, 2).unwrap().order(), 9);
    }

    #[test]
    fn construction_examples() {
        let x = TruncSeries::new(f2(), 0, &[1, 1], None).unwrap();
        assert_eq!(x.to_string(), "1*t^0 + 1*t^1");
        assert!(x.is_exact());

        let y = TruncSeries::new(f2(), 0, &[0, 1], Some(4)).unwrap();
        assert_eq!(y.start(), 1);
        assert_eq!(y.prec(), Some(4));
        assert_eq!(y.coeffs(), &[1, 0, 0]);

        let r9 = Modulus::new(3, 2).unwrap();
        let z = TruncSeries::new(r9, -1, &[9, 4], Some(2)).unwrap();
        assert_eq!(z.start(), 0);
        assert_eq!(z.coeffs(), &[4, 0]);
        assert_eq!(z.prec(), Some(2));

        assert!(matches!(
            TruncSeries::new(f2(), 0, &[1, 1, 1], Some(2)),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn add_examples() {
        let a = TruncSeries::new(f2(), 0, &[1, 1], None).unwrap();
        let b = TruncSeries::new(f2(), 1, &[1, 1], None).unwrap();
        assert_eq!(a.add(&b).unwrap(), TruncSeries::new(f2(), 0, &[1, 0, 1], None).unwrap());
        assert_eq!(a.add(&TruncSeries::zero(f2())).unwrap(), a);

        let x = TruncSeries::new(f2(), -2, &[1, 0, 1], Some(3)).unwrap();
        let s = x.add(&x.neg()).unwrap();
        assert_eq!(s, TruncSeries::zero_to(f2(), 3));

        let other = TruncSeries::one(Modulus::new(3, 1).unwrap());
        assert!(matches!(a.add(&other), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn int_mul_examples() {
        let r4 = Modulus::new(2, 2).unwrap();
        let x = TruncSeries::new(r4, 0, &[1, 3], None).unwrap();
        assert_eq!(x.int_mul(2), TruncSeries::new(r4, 0, &[2, 2], None).unwrap());
        let y = TruncSeries::new(r4, -1, &[3, 1, 2], Some(7)).unwrap();
        assert_eq!(y.int_mul(4), TruncSeries::zero_to(r4, 7));
        assert_eq!(TruncSeries::zero(r4).neg(), TruncSeries::zero(r4));
    }

    #[test]
    fn shift_examples() {
        let one = TruncSeries::one(f2());
        assert_eq!(one.shift(1), TruncSeries::t_pow(f2(), 1));
        let x = TruncSeries::new(f2(), -1, &[1, 1, 0, 1], Some(5)).unwrap();
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(3).shift(-3), x);
        assert_eq!(x.shift(3).prec(), Some(8));
    }

    #[test]
    fn ring_mul_examples() {
        let y = TruncSeries::new(f2(), -1, &[1, 0, 1], Some(4)).unwrap();
        assert_eq!(TruncSeries::one(f2()).ring_mul(&y).unwrap(), y);
        let a = TruncSeries::new(f2(), 0, &[1, 1], None).unwrap();
        assert_eq!(
            a.ring_mul(&a).unwrap(),
            TruncSeries::new(f2(), 0, &[1, 0, 1], None).unwrap()
        );
        assert_eq!(TruncSeries::t_pow(f2(), 2).ring_mul(&y).unwrap(), y.shift(2));
        // (1 + O(t^3)) * (t + O(t^2)): known below min(3 + 1, 2 + 0) = 2
        let u = TruncSeries::new(f2(), 0, &[1], Some(3)).unwrap();
        let v = TruncSeries::new(f2(), 1, &[1], Some(2)).unwrap();
        assert_eq!(u.ring_mul(&v).unwrap().prec(), Some(2));
    }

    #[test]
    fn abs_val_examples() {
        let x = TruncSeries::new(f2(), -2, &[1, 0, 1], None).unwrap();
        assert_eq!(x.abs_val(), AbsValue::Exact(-2));
        assert_eq!(TruncSeries::zero_to(f2(), 5).abs_val(), AbsValue::AtMost(5));
        assert_eq!(TruncSeries::zero(f2()).abs_val(), AbsValue::Zero);
    }

    #[test]
    fn truncate_and_change_ring() {
        let r4 = Modulus::new(2, 2).unwrap();
        let x = TruncSeries::new(r4, 0, &[3, 2, 1], None).unwrap();
        assert_eq!(x.truncate(2).to_string(), "3*t^0 + 2*t^1 + O(t^2)");
        assert_eq!(x.truncate(0), TruncSeries::zero_to(r4, 0));
        let red = x.change_ring(f2()).unwrap();
        assert_eq!(red.to_string(), "1*t^0 + 1*t^2");
        assert!(x.change_ring(Modulus::new(3, 1).unwrap()).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(TruncSeries::zero(f2()).to_string(), "0");
        assert_eq!(TruncSeries::zero_to(f2(), -3).to_string(), "O(t^-3)");
        let x = TruncSeries::new(f2(), -1, &[1, 0, 0, 1], Some(5)).unwrap();
        assert_eq!(x.to_string(), "1*t^-1 + 1*t^2 + O(t^5)");
    }
}
