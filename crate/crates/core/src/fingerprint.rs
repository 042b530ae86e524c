//! Recovering the bit sequence `s` from a cocycle of the form
//! `a · η_s(b x, b y) + β` with units `a, b` and a coboundary `β`.
//!
//! Probe with `δ_m = ω(t^0, t^{2m}) - ω(t^{2m}, t^0)`. Coboundaries are
//! symmetric and drop out of `δ`. For plain `η_s` one gets
//! `δ_m = s_m t^m + (higher terms)`, and the transform by `a, b` multiplies
//! `δ_m` by a series of valuation `c = val(a) + val(b)` after the substitution
//! `x ↦ b x`; equivariance turns `b = t^{val b} u` into an overall shift, and
//! the unit `u` does not change the leading term. So with
//! `v_m = val(δ_m)`:
//!
//! * `v_m - m = c` when `s_m = 1`;
//! * `v_m - m >= c + 1` when `s_m = 0`.
//!
//! The offset `c` is unknown to a black-box caller but the same for every
//! `m`, so it is taken as the least `v_m - m` observed. A zero bit is only
//! reported when the precision of `δ_m` certifies `v_m - m >= c + 1`.

use rand::Rng;
use serde::Serialize;

use crate::cocycle::{antisymmetrize, BitSeq, CocycleSpec, Report, Tail};
use crate::error::{Error, Result};
use crate::random;
use crate::series::{Modulus, TruncSeries};

/// Extra indices allocated past `m + c` when no budget is given.
const PLANNER_SLACK: i64 = 2;

/// What is known about `v_m = val(δ_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DeltaEntry {
    Exact { m: i64, v: i64 },
    /// `v_m > bound`.
    Bound { m: i64, bound: i64 },
}

impl DeltaEntry {
    pub fn m(&self) -> i64 {
        match *self {
            DeltaEntry::Exact { m, .. } | DeltaEntry::Bound { m, .. } => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaProfile {
    pub window: i64,
    pub entries: Vec<DeltaEntry>,
}

/// Computes `δ_m` for `m = 1..=window`.
///
/// `budget` caps the absolute index up to which `δ_m` is read; beyond it only
/// a bound is recorded. Without a budget each `δ_m` is read through index
/// `m + c + 1` plus some slack, where `c` is the offset implied by the
/// transform layers of `spec`.
pub fn delta_profile(
    spec: &CocycleSpec,
    ring: Modulus,
    window: i64,
    budget: Option<i64>,
) -> Result<DeltaProfile> {
    if window < 1 {
        return Err(Error::BadParams(format!("window must be at least 1, got {window}")));
    }
    let hint = spec.unit_offset().unwrap_or(0);
    let one = TruncSeries::one(ring);
    let mut entries = Vec::with_capacity(window as usize);
    for m in 1..=window {
        let cap = budget.unwrap_or(m + hint + 1 + PLANNER_SLACK);
        let d = antisymmetrize(spec, &one, &TruncSeries::t_pow(ring, 2 * m))?;
        let entry = match d.valuation() {
            Some(v) if v < cap => DeltaEntry::Exact { m, v },
            _ => {
                let known = d.prec().map_or(cap, |p| p.min(cap));
                DeltaEntry::Bound { m, bound: known - 1 }
            }
        };
        entries.push(entry);
    }
    Ok(DeltaProfile { window, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ok,
    AbelianCandidate,
    InsufficientPrecision { m: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovery {
    /// The common offset `c`; `None` when no `δ_m` was nonzero.
    pub c: Option<i64>,
    /// The recovered window; `None` when precision ran out.
    pub bits: Option<BitSeq>,
    pub status: Status,
}

/// Reads `c` and `s_1..s_M` off a profile.
pub fn recover_bits(profile: &DeltaProfile) -> Recovery {
    let c = profile
        .entries
        .iter()
        .filter_map(|e| match *e {
            DeltaEntry::Exact { m, v } => Some(v - m),
            DeltaEntry::Bound { .. } => None,
        })
        .min();
    let Some(c) = c else {
        let zeros = vec![false; profile.entries.len().max(1)];
        return Recovery {
            c: None,
            bits: Some(BitSeq::new(zeros, Tail::Zero).expect("nonempty")),
            status: Status::AbelianCandidate,
        };
    };
    let mut bits = Vec::with_capacity(profile.entries.len());
    for e in &profile.entries {
        let bit = match *e {
            DeltaEntry::Exact { m, v } => v - m == c,
            DeltaEntry::Bound { m, bound } => {
                // v_m > bound must rule out v_m - m = c.
                if bound < m + c {
                    return Recovery {
                        c: Some(c),
                        bits: None,
                        status: Status::InsufficientPrecision { m },
                    };
                }
                false
            }
        };
        bits.push(bit);
    }
    Recovery {
        c: Some(c),
        bits: Some(BitSeq::new(bits, Tail::Zero).expect("nonempty")),
        status: Status::Ok,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WindowVerdict {
    /// The recovered windows differ, so the extensions are not isomorphic.
    Distinct,
    /// The windows agree; nothing is claimed beyond them.
    SameWindow,
}

/// Compares the bit windows of two cocycles.
pub fn equivalent_on_window(
    spec1: &CocycleSpec,
    spec2: &CocycleSpec,
    ring: Modulus,
    window: i64,
    budget: Option<i64>,
) -> Result<WindowVerdict> {
    let mut windows = Vec::with_capacity(2);
    for spec in [spec1, spec2] {
        let rec = recover_bits(&delta_profile(spec, ring, window, budget)?);
        match (rec.status, rec.bits) {
            (Status::InsufficientPrecision { m }, _) => {
                return Err(Error::InsufficientPrecision(format!(
                    "bit {m} of {spec} is not certified"
                )))
            }
            (_, Some(bits)) => windows.push(bits),
            (_, None) => unreachable!("recovered bits are present unless precision ran out"),
        }
    }
    Ok(if windows[0] == windows[1] {
        WindowVerdict::SameWindow
    } else {
        WindowVerdict::Distinct
    })
}

/// Cross-checks a recovery with random probes `x = unit`, `y = t^{2m}·unit`:
/// `val(δ(x, y)) - m` must equal `c` exactly on the set bits and exceed it
/// on the others.
pub fn probe_check<R: Rng>(
    spec: &CocycleSpec,
    ring: Modulus,
    recovery: &Recovery,
    samples: usize,
    rng: &mut R,
) -> Result<Report> {
    let mut report = Report::default();
    let (Some(c), Some(bits)) = (recovery.c, recovery.bits.as_ref()) else {
        return Ok(report);
    };
    let window = bits.len() as i64;
    for _ in 0..samples {
        let m = rng.gen_range(1..=window);
        let x = random::unit_series(rng, ring, 0, 4);
        let y = random::unit_series(rng, ring, 2 * m, 4);
        let d = antisymmetrize(spec, &x, &y)?;
        let bit = bits.bit(m as usize) == Some(true);
        let ok = match d.valuation() {
            Some(v) => (v - m == c) == bit,
            None => !bit && d.prec().is_none_or(|p| p > m + c),
        };
        report.record_outcome(
            ok,
            || vec![x.to_string(), y.to_string()],
            || (d.to_string(), format!("s_{m} = {}, c = {c}", u8::from(bit))),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{parse_spec, QuadTerm};

    fn f2() -> Modulus {
        Modulus::new(2, 1).unwrap()
    }

    #[test]
    fn plain_eta_profile() {
        let r = f2();
        let p = delta_profile(&CocycleSpec::eta("100").unwrap(), r, 3, Some(6)).unwrap();
        assert_eq!(p.entries[0], DeltaEntry::Exact { m: 1, v: 1 });
        assert_eq!(p.entries[1], DeltaEntry::Bound { m: 2, bound: 5 });
        let rec = recover_bits(&p);
        assert_eq!(rec.c, Some(0));
        assert_eq!(rec.bits.unwrap().to_bit_string(), "100");
        assert_eq!(rec.status, Status::Ok);
    }

    #[test]
    fn abelian_and_offsets() {
        let r = f2();
        let rec = recover_bits(&delta_profile(&CocycleSpec::eta("000").unwrap(), r, 3, None).unwrap());
        assert_eq!(rec.status, Status::AbelianCandidate);

        let spec = parse_spec("xform(eta:1101;a=t^1 + t^2;b=t^1;cob=0:t^0)", r).unwrap();
        let rec = recover_bits(&delta_profile(&spec, r, 4, None).unwrap());
        assert_eq!(rec.c, Some(2));
        assert_eq!(rec.bits.unwrap().to_bit_string(), "1101");
    }

    #[test]
    fn tight_budget_is_flagged() {
        let r = f2();
        // With c = 3, bit 2 is read at index 5 and needs a budget above it.
        for bits in ["10", "11"] {
            let spec = parse_spec(&format!("xform(eta:{bits};a=t^3;b=t^0)"), r).unwrap();
            let rec = recover_bits(&delta_profile(&spec, r, 2, Some(5)).unwrap());
            assert_eq!(rec.status, Status::InsufficientPrecision { m: 2 });
            let rec = recover_bits(&delta_profile(&spec, r, 2, Some(6)).unwrap());
            assert_eq!(rec.bits.unwrap().to_bit_string(), bits);
        }
    }

    #[test]
    fn window_comparison() {
        let r = f2();
        let e10 = CocycleSpec::eta("10").unwrap();
        let e01 = CocycleSpec::eta("01").unwrap();
        assert_eq!(equivalent_on_window(&e10, &e01, r, 2, None).unwrap(), WindowVerdict::Distinct);
        let t = CocycleSpec::transformed(
            e10.clone(),
            TruncSeries::parse("t^0 + t^1", r).unwrap(),
            TruncSeries::parse("t^0 + t^3", r).unwrap(),
            vec![QuadTerm::new(1, TruncSeries::one(r))],
        )
        .unwrap();
        assert_eq!(equivalent_on_window(&e10, &t, r, 2, None).unwrap(), WindowVerdict::SameWindow);
    }

    #[test]
    fn random_probes_agree() {
        let r = f2();
        let spec = parse_spec("xform(eta:1011;a=t^0 + t^1;b=t^0 + t^1)", r).unwrap();
        let rec = recover_bits(&delta_profile(&spec, r, 4, None).unwrap());
        let report = probe_check(&spec, r, &rec, 40, &mut random::rng(7)).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
