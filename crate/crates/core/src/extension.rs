//! Central extensions `A ×_ω A` of `A = Z/p^m((t))` by itself with trivial
//! action: `(a₁, g₁)(a₂, g₂) = (a₁ + a₂ + ω(g₁, g₂), g₁ + g₂)`.
//!
//! The automorphism is the shift on both coordinates. It is a group
//! automorphism because every cocycle here is shift-equivariant.

use std::fmt;
use std::sync::Arc;

use crate::cocycle::{antisymmetrize, eval, quad_form, CocycleSpec, QuadTerm, Report};
use crate::error::{Error, Result};
use crate::series::{Modulus, TruncSeries};
use crate::text::Cursor;

/// The group `A ×_ω A` for a fixed cocycle and coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Extension {
    spec: CocycleSpec,
    ring: Modulus,
}

impl Extension {
    pub fn new(spec: CocycleSpec, ring: Modulus) -> Arc<Self> {
        Arc::new(Self { spec, ring })
    }

    pub fn spec(&self) -> &CocycleSpec {
        &self.spec
    }

    pub fn ring(&self) -> Modulus {
        self.ring
    }

    pub fn element(self: &Arc<Self>, a: TruncSeries, g: TruncSeries) -> Result<ExtElement> {
        self.ring.check_same(&a.ring())?;
        self.ring.check_same(&g.ring())?;
        Ok(ExtElement {
            a,
            g,
            ext: Arc::clone(self),
        })
    }

    pub fn identity(self: &Arc<Self>) -> ExtElement {
        let z = TruncSeries::zero(self.ring);
        ExtElement {
            a: z.clone(),
            g: z,
            ext: Arc::clone(self),
        }
    }

    /// `ι(a) = (a, 0)`.
    pub fn iota(self: &Arc<Self>, a: TruncSeries) -> Result<ExtElement> {
        self.element(a, TruncSeries::zero(self.ring))
    }

    /// `(0, g)`, the set-theoretic section whose defect is `ω`.
    pub fn sigma(self: &Arc<Self>, g: TruncSeries) -> Result<ExtElement> {
        self.element(TruncSeries::zero(self.ring), g)
    }

    /// Parses `(<series> ; <series>)`.
    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<ExtElement> {
        let mut cur = Cursor::new(text.trim());
        cur.expect("(")?;
        let inner = cur.rest();
        let Some(close) = inner.rfind(')') else {
            return cur.err("expected `)`");
        };
        if !inner[close + 1..].trim().is_empty() {
            cur.pos += close + 1;
            return cur.err("trailing input after `)`");
        }
        let Some((a, g)) = inner[..close].split_once(';') else {
            return cur.err("expected `<series> ; <series>`");
        };
        self.element(
            TruncSeries::parse(a, self.ring)?,
            TruncSeries::parse(g, self.ring)?,
        )
    }
}

/// An element `(a, g)` of an [`Extension`].
#[derive(Debug, Clone)]
pub struct ExtElement {
    a: TruncSeries,
    g: TruncSeries,
    ext: Arc<Extension>,
}

impl PartialEq for ExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.g == other.g && self.same_ext(other)
    }
}

impl Eq for ExtElement {}

impl ExtElement {
    pub fn a(&self) -> &TruncSeries {
        &self.a
    }

    pub fn g(&self) -> &TruncSeries {
        &self.g
    }

    pub fn extension(&self) -> &Arc<Extension> {
        &self.ext
    }

    fn same_ext(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ext, &other.ext) || self.ext == other.ext
    }

    fn check_ext(&self, other: &Self) -> Result<()> {
        if self.same_ext(other) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    fn with(&self, a: TruncSeries, g: TruncSeries) -> Self {
        Self {
            a,
            g,
            ext: Arc::clone(&self.ext),
        }
    }

    /// `(a₁ + a₂ + ω(g₁, g₂), g₁ + g₂)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ext(other)?;
        let w = eval(&self.ext.spec, &self.g, &other.g)?;
        Ok(self.with(self.a.add(&other.a)?.add(&w)?, self.g.add(&other.g)?))
    }

    /// `(-a - ω(g, -g), -g)`.
    pub fn inv(&self) -> Result<Self> {
        let neg_g = self.g.neg();
        let w = eval(&self.ext.spec, &self.g, &neg_g)?;
        Ok(self.with(self.a.neg().sub(&w)?, neg_g))
    }

    /// The contractive automorphism applied `k` times.
    pub fn alpha(&self, k: i64) -> Self {
        self.with(self.a.shift(k), self.g.shift(k))
    }

    /// `u v u⁻¹ v⁻¹`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.mul(&self.inv()?)?.mul(&other.inv()?)
    }

    /// Both coordinates agree up to their shared precision.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        self.check_ext(other)?;
        Ok(self.a.agrees_with(&other.a)? && self.g.agrees_with(&other.g)?)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero_to_prec() && self.g.is_zero_to_prec()
    }

    /// Whether every coordinate is known exactly.
    pub fn is_exact(&self) -> bool {
        self.a.is_exact() && self.g.is_exact()
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ; {})", self.a, self.g)
    }
}

/// Result of testing whether an element is central.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterVerdict {
    /// `ω(g, t^j) = ω(t^j, g)` at every probe, up to available precision.
    Pass,
    /// `δ = ω(g, t^j) - ω(t^j, g)` is nonzero at probe `j`.
    Fail { probe: i64, witness: TruncSeries },
}

/// The probe degree `2 n₀ + val(g)` at which a non-central element of an
/// `η_s`-extension is certain to show a nonzero commutator.
pub fn guaranteed_probe(u: &ExtElement) -> Option<i64> {
    let n0 = u.ext.spec.eta_core()?.first_set()? as i64;
    Some(2 * n0 + u.g.valuation()?)
}

/// Compares `ω(g_u, t^j)` with `ω(t^j, g_u)` for each probe degree `j`.
///
/// An element `(a, g)` commutes with `(b, t^j)` exactly when these agree,
/// so a nonzero difference is a witness that `u` is not central.
pub fn center_test(u: &ExtElement, probes: &[i64]) -> Result<CenterVerdict> {
    let ring = u.ext.ring;
    for &j in probes {
        let d = antisymmetrize(&u.ext.spec, &u.g, &TruncSeries::t_pow(ring, j))?;
        if !d.is_zero_to_prec() {
            return Ok(CenterVerdict::Fail {
                probe: j,
                witness: d,
            });
        }
    }
    Ok(CenterVerdict::Pass)
}

/// Maps `u` in `A ×_ω A` to `A ×_{ω + ω_f} A` by `(a, g) ↦ (a - f(g), g)`,
/// where `ω_f(x, y) = f(x) + f(y) - f(x + y)`.
pub fn equivalence_map(fterms: &[QuadTerm], u: &ExtElement) -> Result<ExtElement> {
    let ring = u.ext.ring;
    let target = Extension::new(u.ext.spec.plus_coboundary(ring, fterms.to_vec()), ring);
    target.element(u.a.sub(&quad_form(fterms, &u.g)?)?, u.g.clone())
}

/// Checks that commutators lie in `A × {0}` and that triple commutators are
/// trivial on the sampled triples.
pub fn nilpotency_probe(samples: &[(ExtElement, ExtElement, ExtElement)]) -> Report {
    let mut report = Report::default();
    for (u, v, w) in samples {
        let inputs = || vec![u.to_string(), v.to_string(), w.to_string()];
        match u.commutator(v) {
            Ok(c) => {
                report.record_outcome(c.g.is_zero_to_prec(), inputs, || {
                    (c.to_string(), "(a ; 0)".into())
                });
                let c3 = c.commutator(w);
                let ok = c3.as_ref().is_ok_and(|e| e.is_identity());
                report.record_outcome(ok, inputs, || {
                    let lhs = match &c3 {
                        Ok(e) => e.to_string(),
                        Err(e) => format!("error: {e}"),
                    };
                    (lhs, u.ext.identity().to_string())
                });
            }
            Err(e) => report.record_outcome(false, inputs, || (format!("error: {e}"), String::new())),
        }
    }
    report
}
