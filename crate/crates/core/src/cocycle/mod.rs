//! Continuous equivariant biadditive 2-cocycles `A × A → A` for
//! `A = Z/p^m((t))` with the shift automorphism and trivial action.
//!
//! Every cocycle here is a closed description ([`CocycleSpec`]) that can be
//! evaluated on truncated series with sharp precision tracking:
//!
//! * `ω_n(x, y) = Σ_i x_i y_{i+n} t^i`, the basis cocycles;
//! * `ω_a = Σ_n a_n ω_n` for a parameter sequence `a` ([`ParamSeq`]);
//! * `η_s = Σ_{n≥1} s_n t^n ω_{2n}` for a bit sequence `s` ([`BitSeq`]);
//! * quadratic coboundaries `f(x) + f(y) - f(x + y)` with `f(x) = Σ_k u_k ω_k(x, x)`;
//! * transforms `a · ω(b x, b y) + β` of any of the above by units `a, b` and
//!   a quadratic coboundary `β`.

mod check;
mod eval;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::series::{Modulus, TruncSeries};

pub use check::{check_cocycle_identity, check_equivariance, Report, Witness};
pub use eval::{
    antisymmetrize, b_map, coboundary_via_form, eval, eval_basis_omega, eval_coboundary,
    eval_eta, eval_param_omega, quad_form,
};
pub use text::{parse_param_json, parse_spec, param_to_json, SPEC_GRAMMAR};

/// What is assumed about entries outside a finite window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Entries beyond the window are zero.
    Zero,
    /// Entries beyond the window exist but are not known.
    Unknown,
}

/// A window `s_1..s_L` of a sequence in `{0,1}^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSeq {
    bits: Vec<bool>,
    tail: Tail,
}

impl BitSeq {
    pub fn new(bits: Vec<bool>, tail: Tail) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::MalformedInput("bit window must be nonempty".into()));
        }
        Ok(Self { bits, tail })
    }

    /// Finitely supported sequence from a string such as `"1101"`.
    pub fn from_bits(text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::MalformedInput(format!("`{c}` is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits, Tail::Zero)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `s_n` for `n >= 1`; `None` when unknown.
    pub fn bit(&self, n: usize) -> Option<bool> {
        assert!(n >= 1, "bits are indexed from 1");
        match self.bits.get(n - 1) {
            Some(&b) => Some(b),
            None => match self.tail {
                Tail::Zero => Some(false),
                Tail::Unknown => None,
            },
        }
    }

    /// `n₀ = min { n : s_n ≠ 0 }` within the window.
    pub fn first_set(&self) -> Option<usize> {
        self.bits.iter().position(|&b| b).map(|i| i + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.tail == Tail::Zero && self.first_set().is_none()
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// A two-sided parameter sequence `(a_n)` on the window `[lo, hi]`.
///
/// Membership of the full sequence in the space of sequences with
/// `a_n → 0` and `t^n a_{-n} → 0` is asymptotic; only decay on the stored
/// window can be checked ([`ParamSeq::check_decay`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamSeq {
    ring: Modulus,
    lo: i64,
    hi: i64,
    entries: BTreeMap<i64, TruncSeries>,
    tail: Tail,
}

impl ParamSeq {
    pub fn new(
        ring: Modulus,
        lo: i64,
        hi: i64,
        entries: BTreeMap<i64, TruncSeries>,
        tail: Tail,
    ) -> Result<Self> {
        if lo > hi {
            return Err(Error::MalformedInput(format!("empty window [{lo}, {hi}]")));
        }
        for (&n, a) in &entries {
            if n < lo || n > hi {
                return Err(Error::MalformedInput(format!(
                    "entry a_{n} lies outside the window [{lo}, {hi}]"
                )));
            }
            if a.ring() != ring {
                return Err(Error::RingMismatch {
                    left: ring,
                    right: a.ring(),
                });
            }
        }
        let entries = entries.into_iter().filter(|(_, a)| !a.is_exact_zero()).collect();
        Ok(Self {
            ring,
            lo,
            hi,
            entries,
            tail,
        })
    }

    pub fn ring(&self) -> Modulus {
        self.ring
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Nonzero entries in ascending index order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, &TruncSeries)> {
        self.entries.iter().map(|(&n, a)| (n, a))
    }

    /// `a_n`, or `None` outside the window when the tail is unknown.
    pub fn get(&self, n: i64) -> Option<TruncSeries> {
        if n < self.lo || n > self.hi {
            return match self.tail {
                Tail::Zero => Some(TruncSeries::zero(self.ring)),
                Tail::Unknown => None,
            };
        }
        Some(
            self.entries
                .get(&n)
                .cloned()
                .unwrap_or_else(|| TruncSeries::zero(self.ring)),
        )
    }

    /// Checks on the stored window that `|a_n|` and `|t^n a_{-n}|` are
    /// non-increasing for `n >= from`.
    pub fn check_decay(&self, from: i64) -> Result<()> {
        let bound = |a: &TruncSeries, shift: i64| a.abs_val().valuation_bound().map(|v| v + shift);
        let check = |seq: Vec<(i64, Option<i64>)>, what: &str| -> Result<()> {
            for w in seq.windows(2) {
                let (n, prev) = w[0];
                let (_, next) = w[1];
                let ok = match (prev, next) {
                    (_, None) => true,
                    (None, Some(_)) => false,
                    (Some(a), Some(b)) => b >= a,
                };
                if !ok {
                    return Err(Error::MalformedInput(format!(
                        "{what} grows after index {n}"
                    )));
                }
            }
            Ok(())
        };
        let pos = (from.max(self.lo)..=self.hi)
            .map(|n| (n, bound(&self.get(n).unwrap(), 0)))
            .collect();
        check(pos, "|a_n|")?;
        let neg = (from.max(-self.hi)..=-self.lo)
            .map(|n| (n, bound(&self.get(-n).unwrap(), n)))
            .collect();
        check(neg, "|t^n a_-n|")
    }
}

/// One term `u_k ω_k(x, x)` of a quadratic form `f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadTerm {
    pub k: i64,
    pub u: TruncSeries,
}

impl QuadTerm {
    pub fn new(k: i64, u: TruncSeries) -> Self {
        Self { k, u }
    }
}

/// A closed description of an equivariant biadditive 2-cocycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CocycleSpec {
    BasisOmega(i64),
    ParamOmega(ParamSeq),
    Eta(BitSeq),
    /// The coboundary of `f(x) = Σ u_k ω_k(x, x)`.
    QuadCoboundary(Vec<QuadTerm>),
    /// `(x, y) ↦ a · base(b x, b y) + cob(x, y)`.
    Transformed {
        base: Box<CocycleSpec>,
        a: TruncSeries,
        b: TruncSeries,
        cob: Vec<QuadTerm>,
    },
}

impl CocycleSpec {
    pub fn eta(bits: &str) -> Result<Self> {
        Ok(CocycleSpec::Eta(BitSeq::from_bits(bits)?))
    }

    /// Builds a transform, checking that `a` and `b` are units up to a power of `t`.
    pub fn transformed(
        base: CocycleSpec,
        a: TruncSeries,
        b: TruncSeries,
        cob: Vec<QuadTerm>,
    ) -> Result<Self> {
        for (name, u) in [("a", &a), ("b", &b)] {
            let lead = u.coeffs().first().copied();
            match lead {
                Some(c) if u.ring().is_unit(c) => {}
                _ => {
                    return Err(Error::MalformedInput(format!(
                        "{name} = {u} is not a unit times a power of t"
                    )))
                }
            }
        }
        Ok(CocycleSpec::Transformed {
            base: Box::new(base),
            a,
            b,
            cob,
        })
    }

    /// `self + ω_f` written as a transform with trivial units.
    pub fn plus_coboundary(&self, ring: Modulus, fterms: Vec<QuadTerm>) -> Self {
        CocycleSpec::Transformed {
            base: Box::new(self.clone()),
            a: TruncSeries::one(ring),
            b: TruncSeries::one(ring),
            cob: fterms,
        }
    }

    /// The underlying `η_s` when this is `η_s` or a (nested) transform of it.
    pub fn eta_core(&self) -> Option<&BitSeq> {
        match self {
            CocycleSpec::Eta(s) => Some(s),
            CocycleSpec::Transformed { base, .. } => base.eta_core(),
            _ => None,
        }
    }

    /// Sum of the valuations of the `a` and `b` units over all transform
    /// layers; zero for plain cocycles.
    pub fn unit_offset(&self) -> Option<i64> {
        match self {
            CocycleSpec::Transformed { base, a, b, .. } => {
                Some(a.valuation()? + b.valuation()? + base.unit_offset()?)
            }
            _ => Some(0),
        }
    }
}

/// Anything that can be evaluated like a cocycle.
pub trait BiMap {
    fn apply(&self, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries>;
}

impl BiMap for CocycleSpec {
    fn apply(&self, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
        eval(self, x, y)
    }
}

impl<F> BiMap for F
where
    F: Fn(&TruncSeries, &TruncSeries) -> Result<TruncSeries>,
{
    fn apply(&self, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
        self(x, y)
    }
}

impl fmt::Display for CocycleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_spec(self, f)
    }
}
