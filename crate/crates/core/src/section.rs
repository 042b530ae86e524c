//! Equivariant continuous sections of surjections `q: G → H` of contraction
//! groups, built by digit expansion.
//!
//! `H` is always a shift group `Z/p^k((t))` with compact open subgroup
//! `U = Z/p^k[[t]]`, so `β^n(U) = t^n U` and membership is a coefficient
//! read. Given representatives `h_0 = e, h_1, ..., h_{ℓ-1}` of `U / β(U)` and
//! lifts `g_j` with `q(g_j) = h_j`, every `h` of level `m` has unique digits
//! `j_m, j_{m+1}, ...` with
//!
//! ```text
//! h ∈ β^m(h_{j_m}) ··· β^n(h_{j_n}) β^{n+1}(U)
//! ```
//!
//! and `σ(h)` is the limit of `s_n(h) = α^m(g_{j_m}) ··· α^n(g_{j_n})`,
//! multiplied left to right. The partial product `s_n(h)` differs from
//! `σ(h)` by an element of `α^{n+1}(V)`.

use std::fmt;
use std::sync::Arc;

use crate::cocycle::{CocycleSpec, Report};
use crate::error::{Error, Result};
use crate::extension::{ExtElement, Extension};
use crate::series::{Modulus, TruncSeries};

/// A group with a contractive automorphism, as the domain of a section.
pub trait ShiftGroup {
    type Elem: Clone + fmt::Display;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem>;
    /// The automorphism applied `k` times.
    fn shift(&self, x: &Self::Elem, k: i64) -> Self::Elem;
    /// Equality up to the precision both sides carry.
    fn agrees(&self, x: &Self::Elem, y: &Self::Elem) -> Result<bool>;
    /// Membership in the compact open subgroup `V`.
    fn in_unit_ball(&self, x: &Self::Elem) -> bool;
}

/// `Z/p^m((t))` under addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesGroup {
    pub ring: Modulus,
}

impl ShiftGroup for SeriesGroup {
    type Elem = TruncSeries;

    fn identity(&self) -> TruncSeries {
        TruncSeries::zero(self.ring)
    }

    fn mul(&self, x: &TruncSeries, y: &TruncSeries) -> Result<TruncSeries> {
        x.add(y)
    }

    fn inv(&self, x: &TruncSeries) -> Result<TruncSeries> {
        Ok(x.neg())
    }

    fn shift(&self, x: &TruncSeries, k: i64) -> TruncSeries {
        x.shift(k)
    }

    fn agrees(&self, x: &TruncSeries, y: &TruncSeries) -> Result<bool> {
        x.agrees_with(y)
    }

    fn in_unit_ball(&self, x: &TruncSeries) -> bool {
        x.start() >= 0
    }
}

/// `A ×_ω A` with `V` the product of unit balls. `V` is a subgroup because
/// `|ω(x, y)| <= |x|` for every cocycle in the family.
#[derive(Debug, Clone)]
pub struct ExtGroup {
    pub ext: Arc<Extension>,
}

impl ShiftGroup for ExtGroup {
    type Elem = ExtElement;

    fn identity(&self) -> ExtElement {
        self.ext.identity()
    }

    fn mul(&self, x: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
        x.mul(y)
    }

    fn inv(&self, x: &ExtElement) -> Result<ExtElement> {
        x.inv()
    }

    fn shift(&self, x: &ExtElement, k: i64) -> ExtElement {
        x.alpha(k)
    }

    fn agrees(&self, x: &ExtElement, y: &ExtElement) -> Result<bool> {
        x.agrees_with(y)
    }

    fn in_unit_ball(&self, x: &ExtElement) -> bool {
        x.a().start() >= 0 && x.g().start() >= 0
    }
}

pub type Projection<E> = Arc<dyn Fn(&E) -> Result<TruncSeries> + Send + Sync>;

/// Everything the digit expansion needs: `G`, `H`, `q`, representatives and
/// lifts.
#[derive(Clone)]
pub struct SectionContext<G: ShiftGroup> {
    group: G,
    h_ring: Modulus,
    q: Projection<G::Elem>,
    reps: Vec<TruncSeries>,
    lifts: Vec<G::Elem>,
}

/// A partial section value `s_n(h)` and the index `n` it is certified through.
#[derive(Debug, Clone)]
pub struct PartialSection<E> {
    pub value: E,
    pub through: i64,
}

/// Least nonnegative representatives `c t^0`, `c = 0..p^k`.
fn constant_reps(ring: Modulus) -> Vec<TruncSeries> {
    (0..ring.order())
        .map(|c| TruncSeries::monomial(ring, c as i64, 0))
        .collect()
}

/// `q: Z/p^m((t)) → Z/p^k((t))`, reduction of coefficients mod `p^k`.
pub fn make_mod_reduction_ctx(p: u64, m: u32, k: u32) -> Result<SectionContext<SeriesGroup>> {
    if k < 1 || k > m {
        return Err(Error::BadParams(format!("need 1 <= k <= m, got k={k}, m={m}")));
    }
    let g_ring = Modulus::new(p, m).map_err(|e| Error::BadParams(e.to_string()))?;
    let h_ring = Modulus::new(p, k).map_err(|e| Error::BadParams(e.to_string()))?;
    let reps = constant_reps(h_ring);
    let lifts = reps
        .iter()
        .map(|h| h.change_ring(g_ring))
        .collect::<Result<Vec<_>>>()?;
    SectionContext::new(
        SeriesGroup { ring: g_ring },
        h_ring,
        Arc::new(move |g: &TruncSeries| g.change_ring(h_ring)),
        reps,
        lifts,
    )
}

/// `q = pr₂: A ×_ω A → A` over `F_p((t))` with lifts `(0, c t^0)`.
pub fn make_ext_projection_ctx(spec: CocycleSpec, p: u64) -> Result<SectionContext<ExtGroup>> {
    let ring = Modulus::prime_field(p).map_err(|e| Error::BadParams(e.to_string()))?;
    let ext = Extension::new(spec, ring);
    let reps = constant_reps(ring);
    let lifts = reps
        .iter()
        .map(|h| ext.sigma(h.clone()))
        .collect::<Result<Vec<_>>>()?;
    SectionContext::new(
        ExtGroup { ext },
        ring,
        Arc::new(|u: &ExtElement| Ok(u.g().clone())),
        reps,
        lifts,
    )
}

impl<G: ShiftGroup> SectionContext<G> {
    /// Builds a context, checking `h_0 = e`, `g_0 = e`, `q(g_j) = h_j`,
    /// `g_j ∈ V`, and that the representatives form a transversal of
    /// `U / β(U)` by enumerating all cosets.
    pub fn new(
        group: G,
        h_ring: Modulus,
        q: Projection<G::Elem>,
        reps: Vec<TruncSeries>,
        lifts: Vec<G::Elem>,
    ) -> Result<Self> {
        let ctx = Self::new_unchecked(group, h_ring, q, reps, lifts);
        ctx.validate()?;
        Ok(ctx)
    }

    /// Builds a context without any checks, e.g. to exercise a deliberately
    /// broken lift table.
    pub fn new_unchecked(
        group: G,
        h_ring: Modulus,
        q: Projection<G::Elem>,
        reps: Vec<TruncSeries>,
        lifts: Vec<G::Elem>,
    ) -> Self {
        Self {
            group,
            h_ring,
            q,
            reps,
            lifts,
        }
    }

    /// The same context with another lift table, checked.
    pub fn with_lifts(&self, lifts: Vec<G::Elem>) -> Result<Self>
    where
        G: Clone,
    {
        Self::new(
            self.group.clone(),
            self.h_ring,
            Arc::clone(&self.q),
            self.reps.clone(),
            lifts,
        )
    }

    /// The same context with another lift table, unchecked.
    pub fn with_lifts_unchecked(&self, lifts: Vec<G::Elem>) -> Self
    where
        G: Clone,
    {
        Self::new_unchecked(
            self.group.clone(),
            self.h_ring,
            Arc::clone(&self.q),
            self.reps.clone(),
            lifts,
        )
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadParams(msg));
        if self.reps.len() != self.lifts.len() {
            return bad(format!(
                "{} representatives but {} lifts",
                self.reps.len(),
                self.lifts.len()
            ));
        }
        if self.reps.first().is_none_or(|h| !h.is_exact_zero()) {
            return bad("the first representative must be the identity".into());
        }
        let g0 = &self.lifts[0];
        if !self.group.agrees(g0, &self.group.identity())? {
            return bad(format!("the first lift must be the identity, got {g0}"));
        }
        for (h, g) in self.reps.iter().zip(&self.lifts) {
            if h.ring() != self.h_ring || !h.is_exact() || h.start() < 0 {
                return bad(format!("representative {h} is not an exact element of U"));
            }
            if (self.q)(g)? != *h {
                return bad(format!("q({g}) is not {h}"));
            }
            if !self.group.in_unit_ball(g) {
                return bad(format!("lift {g} is not in V"));
            }
        }
        // Cosets of tU in U are determined by the constant coefficient.
        let index = self.h_ring.order();
        for c in 0..index {
            let hits = self.reps.iter().filter(|h| h.coeff(0) == Some(c)).count();
            if hits != 1 {
                return bad(format!(
                    "coset {c} + tU contains {hits} representatives, expected 1"
                ));
            }
        }
        if self.reps.len() as u64 != index {
            return bad(format!("ℓ = {} but [U : β(U)] = {index}", self.reps.len()));
        }
        Ok(())
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn h_ring(&self) -> Modulus {
        self.h_ring
    }

    /// `ℓ = [U : β(U)]`.
    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[TruncSeries] {
        &self.reps
    }

    pub fn lifts(&self) -> &[G::Elem] {
        &self.lifts
    }

    pub fn project(&self, g: &G::Elem) -> Result<TruncSeries> {
        (self.q)(g)
    }

    /// Returns the level `m` of `h` (largest `n` with `h ∈ β^n(U)`, or `0` for
    /// `h = e`) and the digits `j_m, ..., j_upto`.
    pub fn digit_expand(&self, h: &TruncSeries, upto: i64) -> Result<(i64, Vec<usize>)> {
        self.h_ring.check_same(&h.ring())?;
        if h.prec().is_some_and(|p| p <= upto) {
            return Err(Error::InsufficientPrecision(format!(
                "{h} is not known through t^{upto}"
            )));
        }
        let level = if h.is_exact_zero() { 0 } else { h.start() };
        let mut digits = Vec::new();
        let mut z = h.clone();
        for k in level..=upto {
            let mut found = None;
            for (j, hj) in self.reps.iter().enumerate() {
                let rest = z.sub(&hj.shift(k))?;
                if rest.start() > k || rest.is_exact_zero() {
                    if let Some((prev, _)) = found {
                        return Err(Error::BadParams(format!(
                            "digits {prev} and {j} both fit at t^{k}"
                        )));
                    }
                    found = Some((j, rest));
                }
            }
            let Some((j, rest)) = found else {
                return Err(Error::BadParams(format!("no representative fits {z} at t^{k}")));
            };
            digits.push(j);
            z = rest;
        }
        Ok((level, digits))
    }

    /// `s_upto(h) = α^m(g_{j_m}) ··· α^upto(g_{j_upto})`, certified through `upto`.
    pub fn build_section(&self, h: &TruncSeries, upto: i64) -> Result<PartialSection<G::Elem>> {
        let (level, digits) = self.digit_expand(h, upto)?;
        let mut value = self.group.identity();
        for (i, &j) in digits.iter().enumerate() {
            let factor = self.group.shift(&self.lifts[j], level + i as i64);
            value = self.group.mul(&value, &factor)?;
        }
        Ok(PartialSection {
            value,
            through: upto,
        })
    }

    /// Checks `q∘σ = id`, `σ∘β = α∘σ` and `σ(e) = e` on the samples at depth `upto`.
    pub fn verify_section(&self, samples: &[TruncSeries], upto: i64) -> Report {
        let mut report = Report::default();
        let e = TruncSeries::zero(self.h_ring);
        let sigma_e = self.build_section(&e, upto);
        let ok = sigma_e
            .as_ref()
            .is_ok_and(|s| self.group.agrees(&s.value, &self.group.identity()).unwrap_or(false));
        report.record_outcome(
            ok,
            || vec![e.to_string()],
            || (show(&sigma_e), self.group.identity().to_string()),
        );
        for h in samples {
            let s = self.build_section(h, upto);
            let lhs = s
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|s| self.project(&s.value))
                .map(|v| v.truncate(upto + 1));
            let rhs = h.truncate(upto + 1);
            let ok = lhs.as_ref().is_ok_and(|l| *l == rhs);
            report.record_outcome(
                ok,
                || vec![h.to_string()],
                || (show_series(&lhs), rhs.to_string()),
            );

            let shifted = self.build_section(&h.shift(1), upto + 1);
            let ok = match (&shifted, &s) {
                (Ok(a), Ok(b)) => self
                    .group
                    .agrees(&a.value, &self.group.shift(&b.value, 1))
                    .unwrap_or(false),
                _ => false,
            };
            report.record_outcome(
                ok,
                || vec![h.to_string()],
                || {
                    let alpha = s
                        .as_ref()
                        .map(|b| self.group.shift(&b.value, 1).to_string())
                        .unwrap_or_else(|e| format!("error: {e}"));
                    (show(&shifted), alpha)
                },
            );
        }
        report
    }
}

fn show<E: fmt::Display>(v: &Result<PartialSection<E>>) -> String {
    match v {
        Ok(s) => s.value.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn show_series(v: &Result<TruncSeries>) -> String {
    match v {
        Ok(s) => s.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_reduction_digits() {
        let ctx = make_mod_reduction_ctx(2, 2, 1).unwrap();
        assert_eq!(ctx.index(), 2);
        let h = TruncSeries::parse("t^0 + t^3", ctx.h_ring()).unwrap();
        assert_eq!(ctx.digit_expand(&h, 3).unwrap(), (0, vec![1, 0, 0, 1]));
        let s = ctx.build_section(&h, 5).unwrap();
        assert_eq!(s.value.to_string(), "1*t^0 + 1*t^3");
        assert_eq!(s.value.ring(), Modulus::new(2, 2).unwrap());
        assert_eq!(make_mod_reduction_ctx(2, 3, 2).unwrap().index(), 4);
        assert!(make_mod_reduction_ctx(2, 1, 2).is_err());
        assert!(make_mod_reduction_ctx(2, 1, 0).is_err());
    }

    #[test]
    fn identity_and_precision() {
        let ctx = make_mod_reduction_ctx(3, 1, 1).unwrap();
        let e = TruncSeries::zero(ctx.h_ring());
        assert_eq!(ctx.digit_expand(&e, 2).unwrap(), (0, vec![0, 0, 0]));
        let h = TruncSeries::parse("2*t^-1 + O(t^2)", ctx.h_ring()).unwrap();
        assert!(matches!(ctx.digit_expand(&h, 2), Err(Error::InsufficientPrecision(_))));
        assert_eq!(ctx.digit_expand(&h, 1).unwrap(), (-1, vec![2, 0, 0]));
        let deep = TruncSeries::t_pow(ctx.h_ring(), 9);
        assert_eq!(ctx.digit_expand(&deep, 4).unwrap(), (9, vec![]));
    }

    #[test]
    fn ext_projection_round_trip() {
        let ctx = make_ext_projection_ctx(CocycleSpec::eta("1").unwrap(), 2).unwrap();
        assert_eq!(ctx.index(), 2);
        let h = TruncSeries::parse("t^0 + t^2", ctx.h_ring()).unwrap();
        let s = ctx.build_section(&h, 4).unwrap();
        // (0, 1)(0, t^2) = (η(1, t^2), 1 + t^2) = (t, 1 + t^2).
        assert_eq!(s.value.to_string(), "(1*t^1 ; 1*t^0 + 1*t^2)");
        assert!(ctx.verify_section(&[h], 6).passed());
    }

    #[test]
    fn broken_lifts_are_caught() {
        let ctx = make_mod_reduction_ctx(2, 2, 1).unwrap();
        let g_ring = ctx.group().ring;
        let bad = vec![TruncSeries::zero(g_ring), TruncSeries::monomial(g_ring, 2, 0)];
        assert!(ctx.with_lifts(bad.clone()).is_err());
        let broken = ctx.with_lifts_unchecked(bad);
        let h = TruncSeries::parse("t^0", ctx.h_ring()).unwrap();
        let report = broken.verify_section(&[h], 3);
        assert!(!report.passed());
        let other = vec![TruncSeries::zero(g_ring), TruncSeries::monomial(g_ring, 3, 0)];
        assert!(ctx.with_lifts(other).is_ok());
    }
}
