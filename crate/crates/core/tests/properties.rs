use cpv::distance::{bottleneck_distance, interleaving_distance_bruteforce, matching_within};
use cpv::ellipsoid::{cz_index, ellipsoid_barcode, ellipsoid_spectrum, EllipsoidParams};
use cpv::invariants::{
    boundary_depth, covering_number, spectral_invariant, translate_barcode,
    translated_point_lower_bound, ShClass,
};
use cpv::io::{barcode_from_json, barcode_to_json, module_from_json, module_to_json};
use cpv::oracle::{brute_force_bottleneck, brute_force_covering, in_ellipsoid_spectrum};
use cpv::persistence::{decompose, module_from_barcode, validate_module, Parity};
use cpv::random::{perturb_barcode, random_barcode, random_module, random_spectrum, ModuleShape};
use cpv::scalar::{int, rat, Rational};
use cpv::{Barcode, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn barcode(seed: u64, points: usize, bars: usize, truncate: bool) -> Barcode {
    let mut r = rng(seed);
    let s = random_spectrum(&mut r, points);
    random_barcode(&mut r, &s, bars, truncate)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let b = barcode(seed, 6, 8, true);
        prop_assert_eq!(barcode_from_json(&barcode_to_json(&b)).unwrap(), b.clone());
        let m = module_from_barcode(&b.promote_truncated(), 2).unwrap();
        prop_assert_eq!(module_from_json(&module_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn round_trip_through_the_canonical_module(seed in any::<u64>(), density in 1usize..4) {
        let b = barcode(seed, 6, 8, false);
        let m = module_from_barcode(&b, density).unwrap();
        prop_assert!(validate_module(&m).is_empty());
        prop_assert_eq!(decompose(&m).unwrap(), b);
    }

    #[test]
    fn bar_counts_match_dimensions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_spectrum(&mut r, 4);
        let shape = ModuleShape { density: 1, max_sample_dim: 3, total_budget: None };
        let m = random_module(&mut r, &s, &shape);
        let b = decompose(&m).unwrap();
        prop_assert!(b.off_spectrum_endpoints().is_empty());
        for (sample, dims) in m.samples().iter().zip(m.dims()) {
            prop_assert_eq!(&b.graded_count_over(sample), dims);
        }
    }

    #[test]
    fn parity_summands_decompose_independently(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_spectrum(&mut r, 4);
        let shape = ModuleShape { density: 2, max_sample_dim: 3, total_budget: None };
        let m = random_module(&mut r, &s, &shape);
        let whole = decompose(&m).unwrap();
        for parity in Parity::BOTH {
            let part = decompose(&m.parity_part(parity)).unwrap();
            let from_whole = whole.bars().iter().filter(|b| b.parity == parity).count();
            prop_assert_eq!(part.len(), from_whole);
        }
    }

    #[test]
    fn bottleneck_matches_exhaustive_matching(seed in any::<u64>(), graded in any::<bool>()) {
        let (b1, b2) = (barcode(seed, 5, 5, true), barcode(seed ^ 0x9e37, 5, 5, true));
        let (d, m) = bottleneck_distance(&b1, &b2, graded);
        prop_assert_eq!(d.clone(), brute_force_bottleneck(&b1, &b2, graded));
        prop_assert!(m.is_bijection_for(&b1, &b2));
        if d.is_finite() {
            prop_assert_eq!(m.cost, d);
        }
    }

    #[test]
    fn feasibility_is_monotone(seed in any::<u64>(), extra in 0i64..8) {
        let (b1, b2) = (barcode(seed, 5, 5, false), barcode(seed.rotate_left(7), 5, 5, false));
        let (d, _) = bottleneck_distance(&b1, &b2, false);
        if let Scalar::Finite(d) = d {
            let larger = Scalar::Finite(&d + rat(extra, 4));
            prop_assert!(matching_within(&b1, &b2, &larger, false).is_some());
        }
    }

    #[test]
    fn perturbations_are_stable(seed in any::<u64>(), quarters in 0i64..9) {
        let b = barcode(seed, 6, 6, true);
        let delta = rat(quarters, 4);
        let moved = perturb_barcode(&b, &delta, &mut rng(seed.wrapping_add(1)));
        let (d, _) = bottleneck_distance(&b, &moved, false);
        prop_assert!(d <= Scalar::Finite(delta.clone()));
        let depth_change = Scalar::Finite(boundary_depth(&b)).abs_diff(&Scalar::Finite(boundary_depth(&moved)));
        prop_assert!(depth_change <= &d + &d);
    }

    #[test]
    fn translation_raises_spectral_invariants(seed in any::<u64>(), num in 1i64..40, den in 1i64..8) {
        let b = barcode(seed, 6, 6, false);
        let t = rat(num, den);
        let moved = translate_barcode(&b, &t);
        let class = ShClass::of(&b);
        for k in class.pi_span().len()..class.len() {
            let before = spectral_invariant(&b, k).unwrap();
            let after = spectral_invariant(&moved, k).unwrap();
            prop_assert_eq!(after.clone(), before.shift(&t));
            prop_assert!(after > before);
        }
        prop_assert_eq!(translate_barcode(&moved, &-t), b);
    }

    #[test]
    fn greedy_covering_is_optimal(raw in proptest::collection::vec(0i64..60, 0..9), delta in 1i64..16) {
        let points: Vec<Rational> = raw.iter().map(|&k| rat(k, 4)).collect();
        let delta = rat(delta, 4);
        prop_assert_eq!(covering_number(&points, &delta).unwrap().count, brute_force_covering(&points, &delta));
    }

    #[test]
    fn lower_bound_is_nonincreasing_in_delta(seed in any::<u64>(), a in 1i64..12, b in 1i64..12) {
        let bc = barcode(seed, 6, 8, true);
        let (small, large) = (rat(a.min(b), 2), rat(a.max(b), 2));
        prop_assert!(
            translated_point_lower_bound(&bc, &small).unwrap() >= translated_point_lower_bound(&bc, &large).unwrap()
        );
    }

    #[test]
    fn ellipsoid_spectra_are_reeb_periods(
        a in proptest::collection::vec((1i64..7, 1i64..4), 1..4),
        t in 1i64..12,
    ) {
        let factors: Vec<Rational> = a.iter().map(|&(p, q)| rat(p, q)).collect();
        let p = EllipsoidParams::new(factors.clone(), int(t)).unwrap();
        let s = ellipsoid_spectrum(&p);
        for x in s.points() {
            prop_assert!(in_ellipsoid_spectrum(x, &factors, &int(t)));
        }
        // every multiple k/12 on the horizon that the oracle accepts is present
        for k in 0..=12 * t {
            let x = rat(k, 12);
            prop_assert_eq!(s.contains(&x), in_ellipsoid_spectrum(&x, &factors, &int(t)));
        }
        let b = ellipsoid_barcode(&p);
        prop_assert!(b.off_spectrum_endpoints().is_empty());
        for bar in b.bars() {
            if let Scalar::Finite(birth) = &bar.birth {
                let mid = match bar.nominal_death() {
                    Scalar::Finite(d) => (birth + d) / int(2),
                    _ => unreachable!(),
                };
                prop_assert_eq!(cz_index(&mid, &p).unwrap().parity, bar.parity);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interleaving_equals_bottleneck(seed in any::<u64>(), graded in any::<bool>()) {
        let mut r = rng(seed);
        let shape = ModuleShape { density: 1, max_sample_dim: 2, total_budget: None };
        let (s1, s2) = (random_spectrum(&mut r, 3), random_spectrum(&mut r, 3));
        let m1 = random_module(&mut r, &s1, &shape);
        let m2 = random_module(&mut r, &s2, &shape);
        let di = interleaving_distance_bruteforce(&m1, &m2, graded).unwrap();
        let (db, _) = bottleneck_distance(&decompose(&m1).unwrap(), &decompose(&m2).unwrap(), graded);
        prop_assert_eq!(di, db);
    }
}
