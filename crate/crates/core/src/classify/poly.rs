//! Monic rational polynomials and the contractivity tests for the linear
//! blocks `(Q_v^d, companion of f)`: all roots in the open unit disk for the
//! real place, `|λ|_p < 1` for all roots at a prime `p`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::text::Cursor;

pub const POLY_GRAMMAR: &str = "poly := term ((\"+\" | \"-\") term)*   term := [RATIONAL [\"*\"]] \"x\" [\"^\" N] | RATIONAL\n\
(monic; RATIONAL is an integer or a/b; X may be written x or X)";

/// `x^d + a_{d-1} x^{d-1} + ... + a_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoly {
    /// `a_0, ..., a_{d-1}`.
    lower: Vec<BigRational>,
}

impl RationalPoly {
    /// From the non-leading coefficients `a_0, ..., a_{d-1}`.
    pub fn monic(lower: Vec<BigRational>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::DegreeZero);
        }
        Ok(Self { lower })
    }

    /// From integer non-leading coefficients `a_0, ..., a_{d-1}`.
    pub fn monic_int(lower: &[i64]) -> Result<Self> {
        Self::monic(lower.iter().map(|&a| BigRational::from_integer(a.into())).collect())
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    /// `a_0, ..., a_{d-1}`.
    pub fn lower_coeffs(&self) -> &[BigRational] {
        &self.lower
    }

    /// All coefficients `a_0, ..., a_d` with `a_d = 1`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let mut c = self.lower.clone();
        c.push(BigRational::one());
        c
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text);
        let mut terms: BTreeMap<usize, BigRational> = BTreeMap::new();
        let mut first = true;
        loop {
            cur.skip_ws();
            if cur.at_end() {
                if first {
                    return cur.err("empty polynomial");
                }
                break;
            }
            let negative = cur.eat("-");
            if !negative && !cur.eat("+") && !first {
                return cur.err("expected `+` or `-`");
            }
            first = false;
            cur.skip_ws();
            let coeff = if cur.rest().starts_with(|c: char| c.is_ascii_digit()) {
                let c = rational(&mut cur)?;
                cur.skip_ws();
                cur.eat("*");
                cur.skip_ws();
                Some(c)
            } else {
                None
            };
            let degree = if cur.eat("x") || cur.eat("X") {
                cur.skip_ws();
                if cur.eat("^") {
                    cur.skip_ws();
                    let n = cur.int()?;
                    if n < 0 {
                        return cur.err("negative exponent");
                    }
                    n as usize
                } else {
                    1
                }
            } else if coeff.is_some() {
                0
            } else {
                return cur.err("expected a coefficient or `x`");
            };
            let mut c = coeff.unwrap_or_else(BigRational::one);
            if negative {
                c = -c;
            }
            *terms.entry(degree).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        let Some((&d, lead)) = terms.iter().next_back() else {
            return Err(Error::DegreeZero);
        };
        if d == 0 {
            return Err(Error::DegreeZero);
        }
        if !lead.is_one() {
            return Err(Error::MalformedInput(format!(
                "polynomial must be monic, leading coefficient is {lead}"
            )));
        }
        let lower = (0..d)
            .map(|i| terms.get(&i).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        Self::monic(lower)
    }
}

fn rational(cur: &mut Cursor<'_>) -> Result<BigRational> {
    let num = cur.int()?;
    if cur.eat("/") {
        let den = cur.int()?;
        if den <= 0 {
            return cur.err("denominator must be positive");
        }
        return Ok(BigRational::new(num.into(), den.into()));
    }
    Ok(BigRational::from_integer(num.into()))
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        let mut first = true;
        for (i, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether every complex root of `f` lies strictly inside the unit circle,
/// decided in exact rational arithmetic.
///
/// With `f* (z) = z^d f(1/z)`, the polynomial `g = (a_d f - a_0 f*) / z` has
/// degree `d - 1`. If `|a_0| < |a_d|` then on `|z| = 1` we have
/// `|a_0 f*| < |a_d f|`, so by Rouché `z g` and `f` have the same number of
/// roots inside the disk and `f` is stable iff `g` is. If `|a_0| >= |a_d|`
/// the product of the roots has modulus at least one. Roots on the circle
/// are roots of `g` too and end in a failed comparison, so they count as
/// not contractive.
pub fn schur_cohn(f: &RationalPoly) -> bool {
    let mut c = f.coeffs();
    while c.len() > 1 {
        let d = c.len() - 1;
        let (a0, ad) = (c[0].clone(), c[d].clone());
        if a0.abs() >= ad.abs() {
            return false;
        }
        // (a_d f - a_0 f*)_i = a_d c_i - a_0 c_{d-i}; index 0 vanishes.
        let g: Vec<BigRational> = (1..=d).map(|i| &ad * &c[i] - &a0 * &c[d - i]).collect();
        let lead = g[d - 1].clone();
        c = g.into_iter().map(|x| x / &lead).collect();
    }
    true
}

fn p_valuation(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    Some(v)
}

/// `v_p` of a rational; `None` for zero.
pub fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    let num = p_valuation(x.numer(), p)? as i64;
    let den = p_valuation(x.denom(), p).unwrap_or(0) as i64;
    Some(num - den)
}

/// Whether every root of `f` in an algebraic closure of `Q_p` has `|λ|_p < 1`.
///
/// The Newton polygon of a monic `f` ends at `(d, 0)`; all of its slopes are
/// negative, which is to say all roots have positive valuation, exactly when
/// every point `(i, v_p(a_i))` with `i < d` lies strictly above the axis.
pub fn omega_p_contractive(f: &RationalPoly, p: u64) -> bool {
    f.lower
        .iter()
        .all(|a| rational_valuation(a, p).is_none_or(|v| v >= 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> RationalPoly {
        RationalPoly::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let f = poly("x^2 - 1/2*x + 1/8");
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "x^2 - 1/2*x + 1/8");
        assert_eq!(poly("X^3+2x-x^3+x^3").to_string(), "x^3 + 2*x");
        assert_eq!(poly("-3 + x").to_string(), "x - 3");
        assert_eq!(RationalPoly::parse("5"), Err(Error::DegreeZero));
        assert!(RationalPoly::parse("2*x^2 + 1").is_err());
        assert!(RationalPoly::parse("x^2 +").is_err());
        assert!(RationalPoly::parse("x^2 + 1/0").is_err());
    }

    #[test]
    fn schur_cohn_examples() {
        assert!(schur_cohn(&poly("x - 1/2")));
        assert!(!schur_cohn(&poly("x^2 - 3/2*x + 1/2")));
        assert!(!schur_cohn(&poly("x^2 + 1")));
        assert!(schur_cohn(&poly("x^2 - 1/2*x + 1/8")));
        assert!(!schur_cohn(&poly("x - 2")));
        assert!(schur_cohn(&poly("x^3")));
    }

    #[test]
    fn p_adic_examples() {
        assert!(omega_p_contractive(&poly("x^2 - 2"), 2));
        assert!(!omega_p_contractive(&poly("x - 1"), 3));
        assert!(!omega_p_contractive(&poly("x^2 - x"), 2));
        assert!(omega_p_contractive(&poly("x - 4/3"), 2));
        assert!(!omega_p_contractive(&poly("x - 1/2"), 2));
    }
}
