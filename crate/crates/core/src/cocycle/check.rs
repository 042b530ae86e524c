use std::ops::RangeInclusive;

use serde::Serialize;

use super::BiMap;
use crate::error::Result;
use crate::series::TruncSeries;

/// Witnesses kept per report; `failed` still counts every failure.
const MAX_WITNESSES: usize = 8;

/// A failing input together with both sides of the violated identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of checking an identity over a batch of inputs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checked: usize,
    pub failed: usize,
    pub witnesses: Vec<Witness>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Records one comparison. Sides that failed to evaluate count as a failure.
    pub fn record(
        &mut self,
        inputs: &[&TruncSeries],
        lhs: Result<TruncSeries>,
        rhs: Result<TruncSeries>,
    ) {
        let ok = match (&lhs, &rhs) {
            (Ok(l), Ok(r)) => l.agrees_with(r).unwrap_or(false),
            _ => false,
        };
        let show = |v: &Result<TruncSeries>| match v {
            Ok(s) => s.to_string(),
            Err(e) => format!("error: {e}"),
        };
        self.record_outcome(
            ok,
            || inputs.iter().map(|s| s.to_string()).collect(),
            || (show(&lhs), show(&rhs)),
        );
    }

    /// Records one comparison whose verdict is already known; the closures
    /// render the witness only when it is kept.
    pub fn record_outcome(
        &mut self,
        ok: bool,
        inputs: impl FnOnce() -> Vec<String>,
        sides: impl FnOnce() -> (String, String),
    ) {
        self.checked += 1;
        if ok {
            return;
        }
        self.failed += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            let (lhs, rhs) = sides();
            self.witnesses.push(Witness {
                inputs: inputs(),
                lhs,
                rhs,
            });
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.failed += other.failed;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
    }
}

/// Checks `ω(y, z) + ω(x, y + z) = ω(x + y, z) + ω(x, y)` on each triple,
/// comparing both sides up to their common precision.
pub fn check_cocycle_identity<M: BiMap + ?Sized>(
    map: &M,
    triples: &[(TruncSeries, TruncSeries, TruncSeries)],
) -> Report {
    let mut report = Report::default();
    for (x, y, z) in triples {
        let lhs = (|| map.apply(y, z)?.add(&map.apply(x, &y.add(z)?)?))();
        let rhs = (|| map.apply(&x.add(y)?, z)?.add(&map.apply(x, y)?))();
        report.record(&[x, y, z], lhs, rhs);
    }
    report
}

/// Checks `t^k ω(x, y) = ω(t^k x, t^k y)` on each pair for every `k` in `ks`.
pub fn check_equivariance<M: BiMap + ?Sized>(
    map: &M,
    pairs: &[(TruncSeries, TruncSeries)],
    ks: RangeInclusive<i64>,
) -> Report {
    let mut report = Report::default();
    for (x, y) in pairs {
        let base = map.apply(x, y);
        for k in ks.clone() {
            let lhs = base.clone().map(|v| v.shift(k));
            let rhs = map.apply(&x.shift(k), &y.shift(k));
            report.record(&[x, y], lhs, rhs);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{eval_basis_omega, CocycleSpec};
    use crate::series::Modulus;

    #[test]
    fn controls() {
        let r = Modulus::new(2, 1).unwrap();
        let x = TruncSeries::parse("1*t^0 + 1*t^1", r).unwrap();
        let y = TruncSeries::parse("1*t^0", r).unwrap();
        let z = TruncSeries::parse("1*t^1", r).unwrap();
        let triples = vec![(x.clone(), y.clone(), z.clone())];
        assert!(check_cocycle_identity(&CocycleSpec::BasisOmega(1), &triples).passed());
        let non_bilinear =
            |a: &TruncSeries, b: &TruncSeries| eval_basis_omega(0, &a.add(b)?, &a.add(b)?);
        let bad = check_cocycle_identity(&non_bilinear, &triples);
        assert_eq!(bad.failed, 1);
        assert_eq!(bad.witnesses[0].inputs.len(), 3);

        let pairs = vec![(x, y)];
        assert!(check_equivariance(&CocycleSpec::BasisOmega(1), &pairs, -2..=2).passed());
        let product = |a: &TruncSeries, b: &TruncSeries| a.ring_mul(b);
        let rep = check_equivariance(&product, &pairs, -2..=2);
        assert_eq!(rep.checked, 5);
        assert!(!rep.passed());
    }
}
