use std::cmp::{max, min};
use std::collections::BTreeMap;

use super::{BitSeq, CocycleSpec, ParamSeq, QuadTerm, Tail};
use crate::error::{Error, Result};
use crate::series::{Modulus, TruncSeries};

/// `ω_n(x, y) = Σ_i x_i y_{i+n} t^i`.
///
/// A coefficient of the result is known when either factor is known to be
/// zero or both factors are known, so exact zeros in one argument extend the
/// precision contributed by the other.
pub fn eval_basis_omega(n: i64, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
    let ring = x.ring();
    ring.check_same(&y.ring())?;
    if x.is_exact_zero() || y.is_exact_zero() {
        return Ok(TruncSeries::zero(ring));
    }
    let lo = max(x.support_lo(), y.support_lo() - n);
    let hi = match (x.support_hi(), y.support_hi().map(|h| h - n)) {
        (Some(a), Some(b)) => Some(min(a, b)),
        (a, b) => a.or(b),
    };
    if hi.is_some_and(|h| h < lo) {
        return Ok(TruncSeries::zero(ring));
    }
    let mut coeffs = Vec::new();
    let mut prec = None;
    let mut i = lo;
    while hi.is_none_or(|h| i <= h) {
        match (x.coeff(i), y.coeff(i + n)) {
            (Some(0), _) | (_, Some(0)) => coeffs.push(0),
            (Some(a), Some(b)) => coeffs.push(ring.mul(a, b)),
            _ => {
                prec = Some(i);
                break;
            }
        }
        i += 1;
    }
    Ok(TruncSeries::from_residues(ring, lo, coeffs, prec))
}

fn floor_half(a: i64) -> i64 {
    a.div_euclid(2)
}

fn ceil_half(a: i64) -> i64 {
    -(-a).div_euclid(2)
}

/// Lowest degree at which `t^n ω_{2n}(x, y)` can be nonzero for some `n` in
/// `[from, to]`, or `None` if every such term vanishes identically.
fn eta_lowest_degree(from: i64, to: Option<i64>, x: &TruncSeries, y: &TruncSeries) -> Option<i64> {
    if x.is_exact_zero() || y.is_exact_zero() {
        return None;
    }
    let (lo_x, lo_y) = (x.support_lo(), y.support_lo());
    // t^n ω_{2n}(x, y) has support in degrees [max(lo_x + n, lo_y - n), ...]
    // and vanishes unless lo_x + 2n <= hi_y and lo_y - 2n <= hi_x.
    let mut n_lo = from;
    if let Some(hx) = x.support_hi() {
        n_lo = max(n_lo, ceil_half(lo_y - hx));
    }
    let mut n_hi = to;
    if let Some(hy) = y.support_hi() {
        let cap = floor_half(hy - lo_x);
        n_hi = Some(n_hi.map_or(cap, |t| min(t, cap)));
    }
    if n_hi.is_some_and(|h| h < n_lo) {
        return None;
    }
    let clamp = |n: i64| {
        let n = max(n, n_lo);
        n_hi.map_or(n, |h| min(n, h))
    };
    let degree = |n: i64| max(lo_x + n, lo_y - n);
    let mid = lo_y - lo_x;
    [clamp(floor_half(mid)), clamp(ceil_half(mid)), clamp(n_lo)]
        .into_iter()
        .map(degree)
        .min()
}

/// `η_s(x, y) = Σ_{n≥1} s_n t^n ω_{2n}(x, y)`.
///
/// When the bits beyond the window are unknown the result is truncated below
/// the first degree an unknown bit could reach.
pub fn eval_eta(s: &BitSeq, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
    let ring = x.ring();
    ring.check_same(&y.ring())?;
    let mut acc = TruncSeries::zero(ring);
    let len = s.len() as i64;
    for (i, &bit) in s.bits().iter().enumerate() {
        if bit {
            let n = i as i64 + 1;
            acc = acc.add(&eval_basis_omega(2 * n, x, y)?.shift(n))?;
        }
    }
    if s.tail() == Tail::Unknown {
        if let Some(d) = eta_lowest_degree(len + 1, None, x, y) {
            let first_any = eta_lowest_degree(1, None, x, y).unwrap_or(d);
            if d <= first_any && acc.prec().is_none_or(|p| p > d) {
                return Err(Error::WindowTooSmall {
                    lo: len + 1,
                    hi: len + 1,
                });
            }
            acc = acc.truncate(d);
        }
    }
    Ok(acc)
}

/// `ω_a(x, y) = Σ_n a_n ω_n(x, y)`.
///
/// With an unknown tail every index in `[lo_y - hi_x, hi_y - lo_x]` must lie
/// inside the parameter window; otherwise `WindowTooSmall` reports that range.
pub fn eval_param_omega(a: &ParamSeq, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
    let ring = x.ring();
    ring.check_same(&y.ring())?;
    ring.check_same(&a.ring())?;
    if x.is_exact_zero() || y.is_exact_zero() {
        return Ok(TruncSeries::zero(ring));
    }
    let need_lo = x.support_hi().map_or(i64::MIN, |hx| y.support_lo() - hx);
    let need_hi = y.support_hi().map_or(i64::MAX, |hy| hy - x.support_lo());
    let (lo, hi) = a.window();
    if a.tail() == Tail::Unknown && (need_lo < lo || need_hi > hi) {
        return Err(Error::WindowTooSmall {
            lo: need_lo,
            hi: need_hi,
        });
    }
    let mut acc = TruncSeries::zero(ring);
    for (n, an) in a.entries() {
        if n < need_lo || n > need_hi {
            continue;
        }
        acc = acc.add(&an.ring_mul(&eval_basis_omega(n, x, y)?)?)?;
    }
    Ok(acc)
}

/// `f(x) = Σ_k u_k ω_k(x, x)`.
pub fn quad_form(terms: &[QuadTerm], x: &TruncSeries) -> Result<TruncSeries> {
    let mut acc = TruncSeries::zero(x.ring());
    for QuadTerm { k, u } in terms {
        acc = acc.add(&u.ring_mul(&eval_basis_omega(*k, x, x)?)?)?;
    }
    Ok(acc)
}

/// `ω_f(x, y) = -Σ_k u_k (ω_k(x, y) + ω_k(y, x))`, the closed form of
/// `f(x) + f(y) - f(x + y)`.
pub fn eval_coboundary(terms: &[QuadTerm], x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
    x.ring().check_same(&y.ring())?;
    let mut acc = TruncSeries::zero(x.ring());
    for QuadTerm { k, u } in terms {
        let sym = eval_basis_omega(*k, x, y)?.add(&eval_basis_omega(*k, y, x)?)?;
        acc = acc.sub(&u.ring_mul(&sym)?)?;
    }
    Ok(acc)
}

/// `f(x) + f(y) - f(x + y)` computed from the quadratic form itself.
pub fn coboundary_via_form(
    terms: &[QuadTerm],
    x: &TruncSeries,
    y: &TruncSeries,
) -> Result<TruncSeries> {
    quad_form(terms, x)?
        .add(&quad_form(terms, y)?)?
        .sub(&quad_form(terms, &x.add(y)?)?)
}

/// Evaluates any cocycle description.
pub fn eval(spec: &CocycleSpec, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
    match spec {
        CocycleSpec::BasisOmega(n) => eval_basis_omega(*n, x, y),
        CocycleSpec::ParamOmega(a) => eval_param_omega(a, x, y),
        CocycleSpec::Eta(s) => eval_eta(s, x, y),
        CocycleSpec::QuadCoboundary(terms) => eval_coboundary(terms, x, y),
        CocycleSpec::Transformed { base, a, b, cob } => {
            let inner = eval(base, &b.ring_mul(x)?, &b.ring_mul(y)?)?;
            a.ring_mul(&inner)?.add(&eval_coboundary(cob, x, y)?)
        }
    }
}

/// `ω(x, y) - ω(y, x)`.
pub fn antisymmetrize(spec: &CocycleSpec, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
    eval(spec, x, y)?.sub(&eval(spec, y, x)?)
}

/// The parameters `a_m = ω(t^0, t^m)` of `ω` on the window `[lo, hi]`.
///
/// Entries beyond the window are left unknown.
pub fn b_map(spec: &CocycleSpec, ring: Modulus, lo: i64, hi: i64) -> Result<ParamSeq> {
    let one = TruncSeries::one(ring);
    let mut entries = BTreeMap::new();
    for m in lo..=hi {
        entries.insert(m, eval(spec, &one, &TruncSeries::t_pow(ring, m))?);
    }
    ParamSeq::new(ring, lo, hi, entries, Tail::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Modulus {
        Modulus::new(2, 1).unwrap()
    }

    fn s(text: &str, r: Modulus) -> TruncSeries {
        TruncSeries::parse(text, r).unwrap()
    }

    #[test]
    fn basis_omega_examples() {
        let r = f2();
        let x = s("1*t^0 + 1*t^1", r);
        let y = s("1*t^1 + 1*t^2", r);
        assert_eq!(eval_basis_omega(1, &x, &y).unwrap(), s("1*t^0 + 1*t^1", r));
        assert_eq!(eval_basis_omega(0, &x, &y).unwrap(), s("1*t^1", r));
        let z = TruncSeries::zero(r);
        assert_eq!(eval_basis_omega(3, &z, &y).unwrap(), z);
    }

    #[test]
    fn basis_omega_precision() {
        let r = f2();
        let x = s("1*t^0 + O(t^3)", r);
        let y = s("1*t^0 + 1*t^1 + O(t^4)", r);
        // x_i known for i < 3, y_{i+1} known for i < 3.
        assert_eq!(eval_basis_omega(1, &x, &y).unwrap(), s("1*t^0 + O(t^3)", r));
        // Exact y: support limits the result.
        let e = s("1*t^2", r);
        assert_eq!(eval_basis_omega(0, &x, &e).unwrap(), s("0", r));
        let x2 = s("1*t^0 + 1*t^2 + O(t^3)", r);
        assert_eq!(eval_basis_omega(0, &x2, &e).unwrap(), s("1*t^2", r));
    }

    #[test]
    fn eta_example() {
        let r = f2();
        let one = TruncSeries::one(r);
        let eta1 = BitSeq::from_bits("1").unwrap();
        assert_eq!(eval_eta(&eta1, &one, &TruncSeries::t_pow(r, 2)).unwrap(), s("1*t^1", r));
        assert_eq!(eval_eta(&eta1, &TruncSeries::t_pow(r, 2), &one).unwrap(), s("0", r));
    }

    #[test]
    fn eta_unknown_tail_truncates() {
        let r = f2();
        let one = TruncSeries::one(r);
        let bits = BitSeq::new(vec![true, false], Tail::Unknown).unwrap();
        // n = 3 reaches t^0 ω_6(1, t^6) at degree 3.
        let y = s("1*t^2 + 1*t^6", r);
        let v = eval_eta(&bits, &one, &y).unwrap();
        assert_eq!(v, s("1*t^1 + O(t^3)", r));
        // Only unknown bits contribute.
        let only = s("1*t^6", r);
        assert!(matches!(
            eval_eta(&bits, &one, &only),
            Err(Error::WindowTooSmall { .. })
        ));
        // Nothing reaches an unknown bit.
        let near = s("1*t^2", r);
        assert_eq!(eval_eta(&bits, &one, &near).unwrap(), s("1*t^1", r));
    }

    #[test]
    fn coboundary_forms_agree() {
        let r = Modulus::new(3, 2).unwrap();
        let terms = vec![
            QuadTerm::new(0, s("1*t^0 + 4*t^1", r)),
            QuadTerm::new(2, s("2*t^-1", r)),
        ];
        let x = s("1*t^-1 + 5*t^0 + 2*t^3", r);
        let y = s("7*t^0 + 1*t^2", r);
        assert_eq!(
            eval_coboundary(&terms, &x, &y).unwrap(),
            coboundary_via_form(&terms, &x, &y).unwrap()
        );
    }

    #[test]
    fn param_window_checks() {
        let r = f2();
        let mut e = BTreeMap::new();
        e.insert(1, TruncSeries::one(r));
        let a = ParamSeq::new(r, -2, 2, e, Tail::Unknown).unwrap();
        let one = TruncSeries::one(r);
        let t1 = TruncSeries::t_pow(r, 1);
        assert_eq!(eval_param_omega(&a, &one, &t1).unwrap(), one);
        let far = TruncSeries::t_pow(r, 5);
        assert_eq!(
            eval_param_omega(&a, &one, &far),
            Err(Error::WindowTooSmall { lo: 5, hi: 5 })
        );
    }

    #[test]
    fn b_map_of_basis() {
        let r = f2();
        let b = b_map(&CocycleSpec::BasisOmega(2), r, -3, 3).unwrap();
        for m in -3..=3 {
            let want = if m == 2 { TruncSeries::one(r) } else { TruncSeries::zero(r) };
            assert_eq!(b.get(m).unwrap(), want);
        }
        assert_eq!(b.get(4), None);
    }
}
