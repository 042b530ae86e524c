//! Text grammar for series.
//!
//! ```text
//! series := "0" | "O(t^" INT ")" | term (" + " term)* [" + O(t^" INT ")"]
//! term   := COEFF "*t^" INT | "t^" INT
//! ```
//!
//! Coefficients are decimal residues in `0..p^m`, powers strictly ascend, and
//! the `O`-term marks a truncated series. [`TruncSeries`]'s `Display` writes
//! this grammar with every coefficient spelled out.

use crate::error::{Error, Result};
use crate::series::{Modulus, TruncSeries};

pub const SERIES_GRAMMAR: &str = "series := \"0\" | \"O(t^\" INT \")\" | term (\" + \" term)* [\" + O(t^\" INT \")\"]\n\
term := COEFF \"*t^\" INT | \"t^\" INT   (COEFF decimal in 0..p^m-1, powers strictly ascending)";

pub(crate) struct Cursor<'a> {
    pub(crate) src: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    pub(crate) fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().unwrap().len_utf8();
        }
    }

    pub(crate) fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    pub(crate) fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        let digits_from = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_from {
            return self.err("expected an integer");
        }
        match self.src[start..end].parse::<i64>() {
            Ok(v) => {
                self.pos = end;
                Ok(v)
            }
            Err(_) => self.err("integer out of range"),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == self.pos {
            return self.err("expected a coefficient");
        }
        match self.src[self.pos..end].parse::<u64>() {
            Ok(v) => {
                self.pos = end;
                Ok(v)
            }
            Err(_) => self.err("coefficient out of range"),
        }
    }
}

pub(crate) fn parse_series(text: &str, ring: Modulus) -> Result<TruncSeries> {
    let mut cur = Cursor::new(text.trim());
    if cur.src == "0" {
        return Ok(TruncSeries::zero(ring));
    }
    let mut terms: Vec<(i64, u64)> = Vec::new();
    let mut prec = None;
    loop {
        cur.skip_ws();
        if cur.eat("O(t^") {
            let p = cur.int()?;
            cur.expect(")")?;
            if let Some(&(last, _)) = terms.last() {
                if p <= last {
                    return cur.err(format!("O(t^{p}) must exceed the last power {last}"));
                }
            }
            prec = Some(p);
            cur.skip_ws();
            if !cur.at_end() {
                return cur.err("the O-term must come last");
            }
            break;
        }
        let coeff = if cur.eat("t^") {
            1
        } else {
            let c = cur.uint()?;
            if c >= ring.order() {
                return cur.err(format!("coefficient {c} is not a residue mod {}", ring.order()));
            }
            cur.expect("*t^")?;
            c
        };
        let power = cur.int()?;
        if let Some(&(last, _)) = terms.last() {
            if power <= last {
                return cur.err("powers must be strictly ascending");
            }
        }
        terms.push((power, coeff));
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        cur.expect("+")?;
    }
    if terms.is_empty() {
        return match prec {
            Some(p) => Ok(TruncSeries::zero_to(ring, p)),
            None => cur.err("empty series"),
        };
    }
    let lo = terms[0].0;
    let hi = prec.unwrap_or(terms.last().unwrap().0 + 1);
    let mut coeffs = vec![0u64; (hi - lo) as usize];
    for (k, c) in terms {
        coeffs[(k - lo) as usize] = c;
    }
    Ok(TruncSeries::from_residues(ring, lo, coeffs, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_cases() {
        let f2 = Modulus::new(2, 1).unwrap();
        let x = parse_series("1*t^-1 + 1*t^2 + O(t^5)", f2).unwrap();
        assert_eq!(x.start(), -1);
        assert_eq!(x.prec(), Some(5));
        assert_eq!(x.coeffs(), &[1, 0, 0, 1, 0, 0]);
        assert_eq!(parse_series("t^0 + t^1", f2).unwrap().to_string(), "1*t^0 + 1*t^1");
        assert_eq!(parse_series("0", f2).unwrap(), TruncSeries::zero(f2));
        assert_eq!(parse_series("O(t^4)", f2).unwrap(), TruncSeries::zero_to(f2, 4));
        assert_eq!(parse_series("0*t^3 + O(t^4)", f2).unwrap(), TruncSeries::zero_to(f2, 4));
    }

    #[test]
    fn reports_positions() {
        let r4 = Modulus::new(2, 2).unwrap();
        match parse_series("1*t^2 + 1*t^1", r4) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 13),
            other => panic!("{other:?}"),
        }
        assert!(parse_series("5*t^0", r4).is_err());
        assert!(parse_series("1*t^0 + O(t^0)", r4).is_err());
        assert!(parse_series("O(t^3) + t^4", r4).is_err());
        assert!(parse_series("1 t^2", r4).is_err());
        assert!(parse_series("", r4).is_err());
    }
}
