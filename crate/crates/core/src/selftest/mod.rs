//! The property suite behind `contraction selftest` and the acceptance tests.
//!
//! Each `criterion_*` function draws its inputs from the given seed, runs the
//! check exactly (no tolerances except where a floating-point oracle is
//! involved) and reports a single pass/fail outcome.

pub mod oracle;

use std::fmt;

use num::{BigInt, BigRational, BigUint, One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::classify::{
    composition_data, element_order, iso_test, omega_p_contractive, primary_decompose,
    schur_cohn, theta_x, NuEntry, NuTable, RationalPoly,
};
use crate::cocycle::{
    b_map, check_cocycle_identity, check_equivariance, eval, eval_basis_omega, eval_eta,
    eval_param_omega, CocycleSpec, Report, Tail,
};
use crate::extension::{center_test, guaranteed_probe, nilpotency_probe, CenterVerdict, Extension};
use crate::fingerprint::{delta_profile, equivalent_on_window, recover_bits, Status, WindowVerdict};
use crate::random::{self, SeededRng};
use crate::section::{make_ext_projection_ctx, make_mod_reduction_ctx};
use crate::series::{Modulus, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {verdict}: {} ({})", self.id, self.name, self.detail)
    }
}

/// Counts checks and keeps the first failure for the report line.
#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn report(&mut self, label: &str, r: &Report) {
        self.checked += r.checked;
        self.failed += r.failed;
        if r.failed > 0 && self.first.is_none() {
            let w = &r.witnesses[0];
            self.first = Some(format!(
                "{label}: inputs {:?}, lhs {}, rhs {}",
                w.inputs, w.lhs, w.rhs
            ));
        }
    }

    fn outcome(self, id: u8, name: &'static str) -> CriterionOutcome {
        let detail = match &self.first {
            None => format!("{} checks", self.checked),
            Some(f) => format!("{}/{} failed; first: {f}", self.failed, self.checked),
        };
        CriterionOutcome {
            id,
            name,
            passed: self.failed == 0 && self.checked > 0,
            detail,
        }
    }
}

fn field(p: u64) -> Modulus {
    Modulus::prime_field(p).expect("p is prime")
}

/// One representative of each kind of cocycle description.
fn spec_variants(rng: &mut SeededRng, ring: Modulus) -> Vec<(&'static str, CocycleSpec)> {
    let n = rng.gen_range(-3..=3);
    let param = random::param_seq(rng, ring, -4, 4, Tail::Zero);
    let s = random::nonzero_bits(rng, 6);
    let cob = loop {
        let t = random::quad_terms(rng, ring, 3);
        if !t.is_empty() {
            break t;
        }
    };
    let xs = random::nonzero_bits(rng, 6);
    let xform = random::transformed_eta(rng, ring, xs, 2, 3);
    vec![
        ("basis", CocycleSpec::BasisOmega(n)),
        ("param", CocycleSpec::ParamOmega(param)),
        ("eta", CocycleSpec::Eta(s)),
        ("coboundary", CocycleSpec::QuadCoboundary(cob)),
        ("transformed", xform),
    ]
}

/// Exact series on `[-4, 6]`, with one in four truncated instead.
fn sample_series(rng: &mut SeededRng, ring: Modulus) -> TruncSeries {
    let lo = rng.gen_range(-4..=2);
    if rng.gen_ratio(1, 4) {
        let len = rng.gen_range(1..=8);
        random::truncated_series(rng, ring, lo, lo + len)
    } else {
        let len = rng.gen_range(0..=6);
        random::series(rng, ring, lo, lo + len)
    }
}

/// Cocycle identity and shift equivariance for every kind of cocycle.
pub fn criterion_1(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    for p in [2, 3, 5] {
        let ring = field(p);
        for (label, spec) in spec_variants(&mut rng, ring) {
            let triples: Vec<_> = (0..1000)
                .map(|_| {
                    (
                        sample_series(&mut rng, ring),
                        sample_series(&mut rng, ring),
                        sample_series(&mut rng, ring),
                    )
                })
                .collect();
            let pairs: Vec<_> = triples.iter().map(|(x, y, _)| (x.clone(), y.clone())).collect();
            let tag = format!("p={p} {label} {spec}");
            tally.report(&tag, &check_cocycle_identity(&spec, &triples));
            tally.report(&tag, &check_equivariance(&spec, &pairs, -5..=5));
        }
    }
    tally.outcome(1, "cocycle identity and equivariance")
}

/// `|ω_n(x, y)| <= |x|` and `|η_s(x, y)| <= p^{-n₀} |x|`, with values
/// cross-checked against dense evaluation.
pub fn criterion_2(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    for i in 0..1000 {
        let ring = field([2, 3, 5][i % 3]);
        let x = random::nonzero_series(&mut rng, ring, -5, 5);
        let y = random::nonzero_series(&mut rng, ring, -5, 5);
        let n = rng.gen_range(-6..=6);
        let w = eval_basis_omega(n, &x, &y).unwrap();
        tally.check(w == oracle::basis_omega(n, &x, &y), || format!("ω_{n}({x}, {y}) = {w}"));
        tally.check(w.is_exact_zero() || w.start() >= x.start(), || {
            format!("|ω_{n}({x}, {y})| = |{w}| exceeds |x|")
        });

        let s = random::nonzero_bits(&mut rng, 6);
        let n0 = s.first_set().unwrap() as i64;
        let e = eval_eta(&s, &x, &y).unwrap();
        tally.check(e == oracle::eta(&s, &x, &y), || {
            format!("η_{}({x}, {y}) = {e}", s.to_bit_string())
        });
        tally.check(e.is_exact_zero() || e.start() >= x.start() + n0, || {
            format!("|η_{}({x}, {y})| = |{e}| exceeds p^-{n0}|x|", s.to_bit_string())
        });
    }
    tally.outcome(2, "ultrametric bounds")
}

/// `B(ω_a) = a` on a window and `ω_{B(ω)} = ω` on inputs the window covers.
pub fn criterion_3(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    for i in 0..100 {
        let ring = field([2, 3, 5][i % 3]);
        let a = random::param_seq(&mut rng, ring, -8, 8, Tail::Unknown);
        let b = b_map(&CocycleSpec::ParamOmega(a.clone()), ring, -8, 8);
        let ok = b.as_ref().is_ok_and(|b| (-8..=8).all(|m| b.get(m) == a.get(m)));
        tally.check(ok, || format!("b_map(ω_a) differs from a = {}", crate::cocycle::param_to_json(&a)));
    }
    for p in [2, 3, 5] {
        let ring = field(p);
        for (label, spec) in spec_variants(&mut rng, ring) {
            let b = match b_map(&spec, ring, -8, 8) {
                Ok(b) => b,
                Err(e) => {
                    tally.check(false, || format!("b_map({spec}): {e}"));
                    continue;
                }
            };
            let one = TruncSeries::one(ring);
            for m in -8..=8 {
                let tm = TruncSeries::t_pow(ring, m);
                let (l, r) = (eval_param_omega(&b, &one, &tm), eval(&spec, &one, &tm));
                tally.check(l.is_ok() && l == r, || format!("{label}: at (t^0, t^{m}) {l:?} vs {r:?}"));
            }
            for _ in 0..50 {
                let x = random::series(&mut rng, ring, -3, 3);
                let y = random::series(&mut rng, ring, -3, 3);
                let (l, r) = (eval_param_omega(&b, &x, &y), eval(&spec, &x, &y));
                tally.check(l.is_ok() && l == r, || format!("{label}: at ({x}, {y}) {l:?} vs {r:?}"));
            }
        }
    }
    tally.outcome(3, "parameter map round trip")
}

fn random_element(
    rng: &mut SeededRng,
    ext: &std::sync::Arc<Extension>,
    lo: i64,
    hi: i64,
) -> crate::extension::ExtElement {
    let ring = ext.ring();
    ext.element(random::series(rng, ring, lo, hi), random::series(rng, ring, lo, hi))
        .unwrap()
}

/// Group axioms of `A ×_η A`, central commutators, nilpotency class two.
pub fn criterion_4(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    for i in 0..10 {
        let ring = field([2, 3][i % 2]);
        let ext = Extension::new(CocycleSpec::Eta(random::bits(&mut rng, 6)), ring);
        let e = ext.identity();
        for _ in 0..500 {
            let u = random_element(&mut rng, &ext, -3, 5);
            let v = random_element(&mut rng, &ext, -3, 5);
            let w = random_element(&mut rng, &ext, -3, 5);
            let assoc = u.mul(&v).and_then(|uv| uv.mul(&w));
            let assoc2 = v.mul(&w).and_then(|vw| u.mul(&vw));
            tally.check(assoc.is_ok() && assoc == assoc2, || {
                format!("({u})({v})({w}) not associative")
            });
            tally.check(e.mul(&u).as_ref() == Ok(&u) && u.mul(&e).as_ref() == Ok(&u), || {
                format!("identity fails on {u}")
            });
            let inv = u.inv().unwrap();
            tally.check(
                u.mul(&inv).unwrap().is_identity() && inv.mul(&u).unwrap().is_identity(),
                || format!("inverse of {u} is wrong: {inv}"),
            );
        }
        let samples: Vec<_> = (0..200)
            .map(|_| {
                (
                    random_element(&mut rng, &ext, -3, 5),
                    random_element(&mut rng, &ext, -3, 5),
                    random_element(&mut rng, &ext, -3, 5),
                )
            })
            .collect();
        tally.report(&ext.spec().to_string(), &nilpotency_probe(&samples));
    }
    tally.outcome(4, "extension group axioms and nilpotency")
}

/// Non-kernel elements of `A ×_{η_s} A` fail the center test at the
/// predicted probe when `s ≠ 0`; kernel elements always pass; everything
/// passes when `s = 0`.
pub fn criterion_5(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    let probes: Vec<i64> = (-6..=20).collect();
    for i in 0..20 {
        let ring = field([2, 3][i % 2]);
        let ext = Extension::new(CocycleSpec::Eta(random::nonzero_bits(&mut rng, 8)), ring);
        let zero_ext = Extension::new(CocycleSpec::eta("00000000").unwrap(), ring);
        for _ in 0..20 {
            let a = random::series(&mut rng, ring, -3, 5);
            let g = random::nonzero_series(&mut rng, ring, -3, 5);
            let u = ext.element(a.clone(), g.clone()).unwrap();
            let j = guaranteed_probe(&u).unwrap();
            let verdict = center_test(&u, &[j]);
            tally.check(matches!(verdict, Ok(CenterVerdict::Fail { probe, .. }) if probe == j), || {
                format!("{u} in {} passed the probe t^{j}: {verdict:?}", ext.spec())
            });
            let k = ext.iota(a.clone()).unwrap();
            tally.check(center_test(&k, &probes) == Ok(CenterVerdict::Pass), || {
                format!("kernel element {k} failed")
            });
            let z = zero_ext.element(a, g).unwrap();
            tally.check(center_test(&z, &probes) == Ok(CenterVerdict::Pass), || {
                format!("{z} failed in the abelian extension")
            });
        }
    }
    tally.outcome(5, "center dichotomy")
}

/// The 16-bit window of `s` is recovered from `a · η_s(b x, b y) + β`.
pub fn criterion_6(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    let mut draws: Vec<(Modulus, CocycleSpec, String)> = Vec::new();
    let mut recovered: Vec<Option<String>> = Vec::new();
    for i in 0..200 {
        let ring = field([2, 3][i % 2]);
        let s = random::bits(&mut rng, 16);
        let spec = random::transformed_eta(&mut rng, ring, s.clone(), 3, 3);
        let rec = delta_profile(&spec, ring, 16, None).map(|p| recover_bits(&p));
        let bits = rec
            .as_ref()
            .ok()
            .and_then(|r| r.bits.as_ref().map(|b| b.to_bit_string()));
        let ok = match &rec {
            Ok(r) => {
                bits.as_deref() == Some(s.to_bit_string().as_str())
                    && (r.status == Status::Ok || (r.status == Status::AbelianCandidate && s.is_zero()))
            }
            Err(_) => false,
        };
        tally.check(ok, || format!("{spec}: recovered {rec:?}"));
        draws.push((ring, spec, s.to_bit_string()));
        recovered.push(bits);
    }
    for i in 0..draws.len() {
        for j in i + 1..draws.len() {
            if draws[i].2 != draws[j].2 && draws[i].0 == draws[j].0 {
                tally.check(recovered[i] != recovered[j], || {
                    format!("{} and {} not told apart", draws[i].1, draws[j].1)
                });
            }
        }
    }
    for pair in draws.windows(3) {
        let (a, b) = (&pair[0], &pair[2]);
        let verdict = equivalent_on_window(&a.1, &b.1, a.0, 16, None);
        let want = if a.2 == b.2 {
            WindowVerdict::SameWindow
        } else {
            WindowVerdict::Distinct
        };
        tally.check(verdict == Ok(want), || format!("{} vs {}: {verdict:?}", a.1, b.1));
    }
    tally.outcome(6, "bit recovery under transforms")
}

fn section_samples(rng: &mut SeededRng, ring: Modulus, depth: i64) -> Vec<TruncSeries> {
    (0..100)
        .map(|i| {
            let lo = rng.gen_range(-3..=6);
            if i % 4 == 3 {
                let extra = rng.gen_range(0..4);
                random::truncated_series(rng, ring, lo, depth + 2 + extra)
            } else {
                let len = rng.gen_range(0..=20);
                random::series(rng, ring, lo, lo + len)
            }
        })
        .collect()
}

/// `q∘σ = id`, `σ∘β = α∘σ` and `σ(e) = e` for the named contexts.
pub fn criterion_7(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    let depth = 24;
    for (p, m, k) in [(2, 2, 1), (3, 2, 1)] {
        let ctx = make_mod_reduction_ctx(p, m, k).unwrap();
        let samples = section_samples(&mut rng, ctx.h_ring(), depth);
        tally.report(&format!("modred:{p},{m},{k}"), &ctx.verify_section(&samples, depth));
    }
    for bits in ["1", "101"] {
        let ctx = make_ext_projection_ctx(CocycleSpec::eta(bits).unwrap(), 2).unwrap();
        let samples = section_samples(&mut rng, ctx.h_ring(), depth);
        tally.report(&format!("extproj:eta:{bits}"), &ctx.verify_section(&samples, depth));
    }
    tally.outcome(7, "equivariant sections")
}

/// Torsion tables, composition lengths and `Δ = p^ℓ`.
pub fn criterion_8(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    let t = |o: &[u64]| primary_decompose(o).unwrap();
    tally.check(!iso_test(&t(&[4]), &t(&[2, 2])), || "{4} and {2,2} identified".into());
    tally.check(iso_test(&t(&[6]), &t(&[2, 3])), || "{6} and {2,3} distinguished".into());
    tally.check(iso_test(&t(&[12, 5]), &t(&[3, 4, 5])), || "{12,5} and {3,4,5} distinguished".into());
    for p in [2u64, 3, 5] {
        for m in 1..=4u32 {
            let c = composition_data(p, m).unwrap();
            tally.check(
                c.length == m as u64
                    && c.delta == BigUint::from(p).pow(m)
                    && c.chain == (0..=m).rev().collect::<Vec<_>>(),
                || format!("composition_data({p}, {m}) = {c:?}"),
            );
        }
    }
    for _ in 0..100 {
        let p = *[2u64, 3, 5, 7].choose(&mut rng).unwrap();
        let entries: Vec<_> = (0..rng.gen_range(1..=4))
            .map(|_| NuEntry {
                p,
                n: rng.gen_range(1..=5),
                nu: rng.gen_range(0..=3),
            })
            .collect();
        let table = NuTable::from_entries(entries).unwrap();
        let want = BigUint::from(p).pow(table.length() as u32);
        tally.check(table.delta() == want, || format!("Δ({table}) = {} ≠ p^ℓ", table.delta()));
        // Regrouping the cyclic factors must not change the table.
        let mut orders: Vec<u64> = table
            .entries()
            .iter()
            .flat_map(|e| std::iter::repeat_n(p.pow(e.n), e.nu as usize))
            .collect();
        orders.shuffle(&mut rng);
        tally.check(primary_decompose(&orders) == Ok(table.clone()), || {
            format!("decomposing {orders:?} does not give {table}")
        });
    }
    tally.outcome(8, "classification invariants")
}

fn small_rational(rng: &mut SeededRng) -> BigRational {
    let num: i64 = rng.gen_range(-12..=12);
    let den: i64 = rng.gen_range(1..=9);
    BigRational::new(num.into(), den.into())
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A random monic polynomial of degree 1..=4 with coefficients low to high.
fn random_rational_poly(rng: &mut SeededRng, i: usize) -> Vec<BigRational> {
    let d = rng.gen_range(1..=4);
    if i.is_multiple_of(2) {
        let mut c: Vec<BigRational> = (0..d).map(|_| small_rational(rng)).collect();
        c.push(BigRational::one());
        return c;
    }
    // Products of linear factors x - k/7 and quadratics x^2 + b x + c.
    let mut c = vec![BigRational::one()];
    let mut deg = 0;
    while deg < d {
        if d - deg >= 2 && rng.gen_bool(0.4) {
            let b = small_rational(rng);
            let q = small_rational(rng);
            c = poly_mul(&c, &[q, b, BigRational::one()]);
            deg += 2;
        } else {
            let k = loop {
                let k: i64 = rng.gen_range(-14..=14);
                if k.abs() != 7 {
                    break k;
                }
            };
            c = poly_mul(&c, &[BigRational::new((-k).into(), 7.into()), BigRational::one()]);
            deg += 1;
        }
    }
    c
}

/// Exact Schur–Cohn against numeric roots; the valuation criterion at `p`
/// against nilpotency of the companion matrix mod `p`.
pub fn criterion_9(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    let mut i = 0;
    let mut accepted = 0;
    while accepted < 500 {
        let c = random_rational_poly(&mut rng, i);
        i += 1;
        let lower = c[..c.len() - 1].to_vec();
        let moduli: Vec<f64> = oracle::roots(&lower).iter().map(|z| z.norm()).collect();
        if moduli.iter().any(|r| (r - 1.0).abs() <= 1e-9) {
            continue;
        }
        accepted += 1;
        let f = RationalPoly::monic(lower).unwrap();
        let numeric = moduli.iter().all(|&r| r < 1.0);
        tally.check(schur_cohn(&f) == numeric, || {
            format!("{f}: schur-cohn {} vs root moduli {moduli:?}", schur_cohn(&f))
        });
    }
    for i in 0..500 {
        let p = [2u64, 3, 5][i % 3];
        let d = rng.gen_range(1..=5);
        let lower: Vec<i64> = (0..d)
            .map(|_| {
                if i % 2 == 0 {
                    p as i64 * rng.gen_range(-6..=6) + i64::from(rng.gen_ratio(1, 6))
                } else {
                    rng.gen_range(-20..=20)
                }
            })
            .collect();
        let f = RationalPoly::monic_int(&lower).unwrap();
        let exact = omega_p_contractive(&f, p);
        let oracle = oracle::companion_nilpotent_mod_p(&lower, p);
        tally.check(exact == oracle, || format!("{f} at p={p}: {exact} vs companion {oracle}"));
    }
    tally.outcome(9, "linear contractivity tests")
}

/// `θ_x` is additive, equivariant and sends `t^0` to `x`; orders match
/// `p^k x = 0 ≠ p^{k-1} x`.
pub fn criterion_10(seed: u64) -> CriterionOutcome {
    let mut rng = random::rng(seed);
    let mut tally = Tally::default();
    for i in 0..20 {
        let ring = Modulus::new([2, 3][i % 2], 2).unwrap();
        let x = random::nonzero_series(&mut rng, ring, -2, 4);
        let x = if i % 4 < 2 { x.int_mul(ring.p() as i64) } else { x };
        let x = if x.is_exact_zero() { TruncSeries::monomial(ring, ring.p() as i64, 1) } else { x };
        let k = element_order(&x).unwrap();
        let pk = BigInt::from(ring.p()).pow(k);
        let order_ok = x.int_mul(i64::try_from(pk.clone()).unwrap()).is_exact_zero()
            && (k == 0 || !x.int_mul(ring.p().pow(k - 1) as i64).is_exact_zero());
        tally.check(order_ok, || format!("element_order({x}) = p^{k}"));
        let zr = Modulus::new(ring.p(), k).unwrap();
        tally.check(theta_x(&x, &TruncSeries::one(zr)) == Ok(x.clone()), || {
            format!("θ_x(t^0) ≠ x for x = {x}")
        });
        for _ in 0..200 {
            let z = random::series(&mut rng, zr, -3, 5);
            let w = random::series(&mut rng, zr, -3, 5);
            let tz = theta_x(&x, &z).unwrap();
            let tw = theta_x(&x, &w).unwrap();
            tally.check(tz == oracle::theta(&x, &z), || format!("θ_{x}({z}) = {tz}"));
            tally.check(theta_x(&x, &z.add(&w).unwrap()) == tz.add(&tw), || {
                format!("θ_{x} not additive on {z}, {w}")
            });
            let j = rng.gen_range(-4..=4);
            tally.check(theta_x(&x, &z.shift(j)) == Ok(tz.shift(j)), || {
                format!("θ_{x} not equivariant on {z}, shift {j}")
            });
            tally.check(element_order(&tz).is_ok_and(|kz| kz <= k), || {
                format!("θ_{x}({z}) = {tz} leaves ⟨x⟩_α")
            });
        }
    }
    tally.outcome(10, "theta morphisms")
}

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    let criteria: [fn(u64) -> CriterionOutcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    criteria
        .iter()
        .enumerate()
        .map(|(i, c)| c(seed.wrapping_add(i as u64)))
        .collect()
}
