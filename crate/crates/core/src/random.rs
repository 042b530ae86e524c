//! Seeded generators for test inputs. Every draw is reproducible from the
//! seed passed to [`rng`].

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{BitSeq, CocycleSpec, ParamSeq, QuadTerm, Tail};
use crate::series::{Modulus, TruncSeries};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn residue<R: Rng>(rng: &mut R, ring: Modulus) -> u64 {
    rng.gen_range(0..ring.order())
}

fn unit<R: Rng>(rng: &mut R, ring: Modulus) -> u64 {
    loop {
        let c = residue(rng, ring);
        if ring.is_unit(c) {
            return c;
        }
    }
}

fn build(ring: Modulus, start: i64, coeffs: Vec<u64>, prec: Option<i64>) -> TruncSeries {
    let coeffs: Vec<i64> = coeffs.into_iter().map(|c| c as i64).collect();
    TruncSeries::new(ring, start, &coeffs, prec).expect("generated series is well formed")
}

/// An exact series with support in `[lo, hi]`; may be zero.
pub fn series<R: Rng>(rng: &mut R, ring: Modulus, lo: i64, hi: i64) -> TruncSeries {
    let coeffs = (lo..=hi).map(|_| residue(rng, ring)).collect();
    build(ring, lo, coeffs, None)
}

/// An exact nonzero series with support in `[lo, hi]`.
pub fn nonzero_series<R: Rng>(rng: &mut R, ring: Modulus, lo: i64, hi: i64) -> TruncSeries {
    loop {
        let s = series(rng, ring, lo, hi);
        if !s.is_exact_zero() {
            return s;
        }
    }
}

/// A series known on `[lo, prec)` and truncated at `prec`.
pub fn truncated_series<R: Rng>(rng: &mut R, ring: Modulus, lo: i64, prec: i64) -> TruncSeries {
    let coeffs = (lo..prec).map(|_| residue(rng, ring)).collect();
    build(ring, lo, coeffs, Some(prec))
}

/// An exact series `c t^val + ...` with unit `c` and at most `len` terms.
pub fn unit_series<R: Rng>(rng: &mut R, ring: Modulus, val: i64, len: usize) -> TruncSeries {
    let mut coeffs = vec![unit(rng, ring)];
    coeffs.extend((1..len.max(1)).map(|_| residue(rng, ring)));
    build(ring, val, coeffs, None)
}

/// A uniformly random bit window of length `len` with zero tail.
pub fn bits<R: Rng>(rng: &mut R, len: usize) -> BitSeq {
    BitSeq::new((0..len).map(|_| rng.gen_bool(0.5)).collect(), Tail::Zero)
        .expect("bit window is nonempty")
}

/// A random bit window with at least one set bit.
pub fn nonzero_bits<R: Rng>(rng: &mut R, len: usize) -> BitSeq {
    loop {
        let s = bits(rng, len);
        if s.first_set().is_some() {
            return s;
        }
    }
}

/// A random parameter sequence on `[lo, hi]` with short exact entries.
pub fn param_seq<R: Rng>(rng: &mut R, ring: Modulus, lo: i64, hi: i64, tail: Tail) -> ParamSeq {
    let mut entries = BTreeMap::new();
    for n in lo..=hi {
        if rng.gen_bool(0.6) {
            let v = rng.gen_range(-2..=2);
            entries.insert(n, series(rng, ring, v, v + 2));
        }
    }
    ParamSeq::new(ring, lo, hi, entries, tail).expect("entries lie in the window")
}

/// Up to `max_terms` quadratic-form terms with indices in `[-3, 3]`.
pub fn quad_terms<R: Rng>(rng: &mut R, ring: Modulus, max_terms: usize) -> Vec<QuadTerm> {
    let count = rng.gen_range(0..=max_terms);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(-3..=3);
            let v = rng.gen_range(-1..=2);
            QuadTerm::new(k, nonzero_series(rng, ring, v, v + 2))
        })
        .collect()
}

/// `a · η_s(b x, b y) + cob` with random units of valuation in `[0, max_val]`.
pub fn transformed_eta<R: Rng>(
    rng: &mut R,
    ring: Modulus,
    s: BitSeq,
    max_val: i64,
    max_cob: usize,
) -> CocycleSpec {
    let va = rng.gen_range(0..=max_val);
    let vb = rng.gen_range(0..=max_val);
    let la = rng.gen_range(1..=3);
    let lb = rng.gen_range(1..=3);
    let a = unit_series(rng, ring, va, la);
    let b = unit_series(rng, ring, vb, lb);
    let cob = quad_terms(rng, ring, max_cob);
    CocycleSpec::transformed(CocycleSpec::Eta(s), a, b, cob).expect("a and b are units")
}
