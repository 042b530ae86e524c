use contraction_groups::cocycle::{self, BitSeq, CocycleSpec, QuadTerm};
use contraction_groups::extension::{equivalence_map, Extension};
use contraction_groups::section::{make_ext_projection_ctx, make_mod_reduction_ctx};
use contraction_groups::{random, Modulus, TruncSeries};
use proptest::prelude::*;

fn ring() -> impl Strategy<Value = Modulus> {
    (prop::sample::select(vec![2u64, 3, 5]), 1u32..=3).prop_map(|(p, m)| Modulus::new(p, m).unwrap())
}

/// Exact or truncated series with support in `[-6, 10)`.
fn series_in(ring: Modulus) -> impl Strategy<Value = TruncSeries> {
    (
        -6i64..4,
        prop::collection::vec(0..ring.order() as i64, 0..7),
        prop::option::of(0i64..4),
    )
        .prop_map(move |(start, coeffs, gap)| {
            let prec = gap.map(|g| start + coeffs.len() as i64 + g);
            TruncSeries::new(ring, start, &coeffs, prec).unwrap()
        })
}

fn exact_in(ring: Modulus) -> impl Strategy<Value = TruncSeries> {
    (-6i64..4, prop::collection::vec(0..ring.order() as i64, 0..7))
        .prop_map(move |(start, coeffs)| TruncSeries::new(ring, start, &coeffs, None).unwrap())
}

fn ring_and_pair() -> impl Strategy<Value = (Modulus, TruncSeries, TruncSeries)> {
    ring().prop_flat_map(|r| (Just(r), series_in(r), series_in(r)))
}

fn ring_and_exact_pair() -> impl Strategy<Value = (Modulus, TruncSeries, TruncSeries)> {
    ring().prop_flat_map(|r| (Just(r), exact_in(r), exact_in(r)))
}

proptest! {
    #[test]
    fn text_round_trip((r, x, _) in ring_and_pair()) {
        prop_assert_eq!(TruncSeries::parse(&x.to_string(), r).unwrap(), x);
    }

    #[test]
    fn ultrametric((_, x, y) in ring_and_exact_pair()) {
        let s = x.add(&y).unwrap();
        if let Some(v) = s.valuation() {
            let bound = [x.valuation(), y.valuation()].into_iter().flatten().min().unwrap();
            prop_assert!(v >= bound);
        }
    }

    #[test]
    fn add_and_mul_commute_with_truncation((_, x, y) in ring_and_exact_pair(), p in -4i64..10) {
        let xt = x.truncate(p);
        let sum = xt.add(&y).unwrap();
        prop_assert!(sum.agrees_with(&x.add(&y).unwrap()).unwrap());
        let prod = xt.ring_mul(&y).unwrap();
        prop_assert!(prod.agrees_with(&x.ring_mul(&y).unwrap()).unwrap());
    }

    #[test]
    fn group_laws((_, x, y) in ring_and_pair()) {
        prop_assert!(x.add(&x.neg()).unwrap().is_zero_to_prec());
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.shift(3).shift(-3), x.clone());
        prop_assert_eq!(x.int_mul(2), x.add(&x).unwrap());
    }

    #[test]
    fn eta_is_bilinear_and_shift_equivariant(
        seed in any::<u64>(),
        (r, x, y) in ring_and_exact_pair(),
        k in -4i64..5,
    ) {
        let mut rng = random::rng(seed);
        let s = random::bits(&mut rng, 5);
        let spec = CocycleSpec::Eta(s);
        let w = cocycle::eval(&spec, &x, &y).unwrap();
        let shifted = cocycle::eval(&spec, &x.shift(k), &y.shift(k)).unwrap();
        prop_assert_eq!(shifted, w.shift(k));
        let z = random::series(&mut rng, r, -3, 4);
        let lhs = cocycle::eval(&spec, &x.add(&z).unwrap(), &y).unwrap();
        let rhs = w.add(&cocycle::eval(&spec, &z, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn equivalence_map_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = Modulus::new(2, 2).unwrap();
        let s = random::nonzero_bits(&mut rng, 4);
        let spec = random::transformed_eta(&mut rng, r, s, 1, 2);
        let fterms: Vec<QuadTerm> = random::quad_terms(&mut rng, r, 3);
        let ext = Extension::new(spec, r);
        let draw = |rng: &mut random::SeededRng| {
            ext.element(random::series(rng, r, -2, 4), random::series(rng, r, -2, 4)).unwrap()
        };
        let (u, v) = (draw(&mut rng), draw(&mut rng));
        let lhs = equivalence_map(&fterms, &u.mul(&v).unwrap()).unwrap();
        let rhs = equivalence_map(&fterms, &u).unwrap().mul(&equivalence_map(&fterms, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mod_reduction_section(seed in any::<u64>(), k in 1u32..=2) {
        let ctx = make_mod_reduction_ctx(3, 2, k).unwrap();
        let mut rng = random::rng(seed);
        let samples: Vec<_> = (0..4).map(|_| random::series(&mut rng, ctx.h_ring(), -2, 8)).collect();
        let report = ctx.verify_section(&samples, 12);
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn ext_projection_section(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = random::nonzero_bits(&mut rng, 3);
        let ctx = make_ext_projection_ctx(CocycleSpec::Eta(s), 2).unwrap();
        let samples: Vec<_> = (0..4).map(|_| random::series(&mut rng, ctx.h_ring(), -2, 8)).collect();
        let report = ctx.verify_section(&samples, 12);
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn bit_strings_round_trip(bits in prop::collection::vec(any::<bool>(), 1..20)) {
        let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let s = BitSeq::from_bits(&text).unwrap();
        prop_assert_eq!(s.to_bit_string(), text);
        prop_assert_eq!(s.first_set().is_none(), s.is_zero());
    }
}
