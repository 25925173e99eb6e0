mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use troplin::json;
use troplin::{decompose_chip_firing, Divisor, LinearSystem, PlFunction, Point};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// A random fixture with a random invariant divisor of degree at most 4.
fn invariant_system(r: &mut common::Rng8) -> LinearSystem {
    let fxs = common::all();
    loop {
        let fx = &fxs[r.gen_range(0..fxs.len())];
        let d = common::invariant_divisor(r, &fx.group, 2);
        if d.degree() <= 4 {
            return LinearSystem::new(fx.curve.clone(), d, Some(fx.group.clone())).unwrap();
        }
    }
}

/// Every subset of `points`, smallest first.
fn subsets(points: &[Point]) -> impl Iterator<Item = Vec<Point>> + '_ {
    (0u32..1 << points.len()).map(move |m| (0..points.len()).filter(|i| m >> i & 1 == 1).map(|i| points[i].clone()).collect())
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn invariant_part_is_a_semimodule(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let sys = invariant_system(&mut r);
        let gens = sys.enumerate_sk().unwrap();
        let f = common::invariant_element(&mut r, &sys, &gens);
        let g = common::invariant_element(&mut r, &sys, &gens);
        prop_assert!(sys.in_rk(&f.trop_add(&g).unwrap()).unwrap());
        prop_assert!(sys.in_rk(&f.trop_scale(&common::constant(&mut r))).unwrap());
    }

    #[test]
    fn translating_the_divisor_translates_the_system(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let sys = invariant_system(&mut r);
        let h = common::invariant_move(&mut r, sys.group());
        let Ok(div_h) = h.principal_divisor() else { return Ok(()) };
        let shifted = sys.with_divisor(sys.divisor() + &div_h).unwrap();
        let gens = sys.enumerate_sk().unwrap();
        for f in [common::invariant_element(&mut r, &sys, &gens), common::function(&mut r, sys.curve())] {
            let Ok(fh) = f.add(&h) else { continue };
            if let (Ok(a), Ok(b)) = (shifted.in_rk(&f), sys.in_rk(&fh)) {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn decomposition_round_trips(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let fxs = common::all();
        let c = &fxs[r.gen_range(0..fxs.len())].curve;
        let f = common::function(&mut r, c);
        let d = decompose_chip_firing(&f).unwrap();
        prop_assert_eq!(d.reconstruct(c).unwrap(), f);
    }

    #[test]
    fn membership_in_s_agrees_with_subset_search(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let sys = invariant_system(&mut r);
        let c = sys.curve();
        let plain = LinearSystem::new(c.clone(), sys.divisor().clone(), None).unwrap();
        let gens = plain.enumerate_s().unwrap();
        let f = common::invariant_element(&mut r, &plain, &gens);
        let e = plain.effective_divisor(&f).unwrap();
        let smooth: Vec<Point> = e.support().filter(|p| c.is_smooth(p)).cloned().collect();
        prop_assume!(smooth.len() <= 12);
        let cut = subsets(&smooth).any(|a| c.is_cut_set(&a).unwrap());
        prop_assert_eq!(plain.in_s(&f).unwrap(), !cut);
    }

    #[test]
    fn membership_in_sk_agrees_with_subset_search(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let sys = invariant_system(&mut r);
        let gens = sys.enumerate_sk().unwrap();
        let f = common::invariant_element(&mut r, &sys, &gens);
        let e = sys.effective_divisor(&f).unwrap();
        let q = sys.quotient();
        let target = q.target();
        let g_prime: BTreeSet<Point> =
            q.remodel().vertex_points.iter().map(|p| q.map_point(p)).collect();
        // Points of supp φ_*(E) off G', whose whole fiber lies in supp E.
        let mut candidates: Vec<Point> = e
            .support()
            .map(|p| q.map_point(p))
            .filter(|a| !g_prime.contains(a))
            .filter(|a| q.fiber(a).iter().all(|x| e.at(x) > 0))
            .collect();
        candidates.sort();
        candidates.dedup();
        prop_assume!(candidates.len() <= 12);
        let cut = subsets(&candidates).any(|a| target.is_cut_set(&a).unwrap());
        prop_assert_eq!(sys.in_sk(&f).unwrap(), !cut);
    }

    #[test]
    fn enumerated_slopes_are_bounded_by_the_degree(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let fxs = common::all();
        let c = &fxs[r.gen_range(0..fxs.len())].curve;
        let d = common::effective_divisor(&mut r, c, 3);
        let sys = LinearSystem::new(c.clone(), d.clone(), None).unwrap();
        for f in sys.enumerate_s().unwrap().functions {
            prop_assert!(f.max_abs_slope() <= d.degree());
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let fxs = common::all();
        let fx = &fxs[r.gen_range(0..fxs.len())];
        let c = &fx.curve;
        prop_assert_eq!(&json::curve_from_json(&json::curve_to_json(c), "c").unwrap(), &**c);
        let d: Divisor = common::divisor(&mut r, c);
        prop_assert_eq!(json::divisor_from_json(c, &json::divisor_to_json(c, &d), "d").unwrap(), d);
        let f: PlFunction = common::function(&mut r, c);
        prop_assert_eq!(json::function_from_json(c, &json::function_to_json(&f), "f").unwrap(), f);
    }
}
