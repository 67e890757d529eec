//! Property tests: random families are drawn from a proptest-chosen seed and
//! every fast routine is compared against its brute-force counterpart.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use matpart::augment::{find_covering, Coverage};
use matpart::brute::{
    brute_coverings, brute_cowaves, brute_find_covering, brute_find_packing, EnumerationBudget,
};
use matpart::feasible::{
    hat_family, normalize, packing_feasible, quotient, Feasibility, Feasible, FeasibleFamily,
    Packability, PackingRoute,
};
use matpart::gen::{random_family, GenConfig};
use matpart::partition::seed_feasibility;
use matpart::tight::{
    is_tight, largest_cowave_avoiding, never_in_cover, one_more_cover, OneMoreCover,
};
use matpart::{ElementSet, MatroidFamily};

fn family(seed: u64, max_elements: usize, max_members: usize) -> MatroidFamily {
    let cfg = GenConfig {
        max_elements,
        max_members,
        ..GenConfig::default()
    };
    random_family(&mut ChaCha8Rng::seed_from_u64(seed), &cfg)
}

fn budget() -> EnumerationBudget {
    EnumerationBudget::default().unlimited_results()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn covering_matches_brute_force(seed in any::<u64>()) {
        let fam = family(seed, 7, 3);
        let fast = find_covering(&fam).unwrap();
        prop_assert_eq!(fast.is_covered(), brute_find_covering(&fam, &budget()).unwrap().is_some());
        match fast {
            Coverage::Covered(a) => prop_assert!(a.is_valid(&fam)),
            Coverage::Uncoverable(c) => prop_assert!(c.verify(&fam)),
        }
    }

    #[test]
    fn packing_routes_agree_with_brute_force(seed in any::<u64>()) {
        let fam = family(seed, 6, 2);
        let ff = FeasibleFamily::seed(&fam).unwrap();
        let expected = brute_find_packing(&fam, &budget()).unwrap().is_some();
        let mut routes = vec![PackingRoute::Hat];
        if fam.len() == 2 {
            routes.push(PackingRoute::Dual);
        }
        for route in routes {
            match packing_feasible(&ff, route).unwrap() {
                Packability::Packed(p) => prop_assert!(expected && p.is_valid(&fam), "{:?}", route),
                Packability::Unpackable(c) => prop_assert!(!expected && c.verify(&ff), "{:?}", route),
            }
        }
    }

    #[test]
    fn hat_encoding_round_trips(seed in any::<u64>()) {
        let fam = family(seed, 4, 3);
        let Feasibility::Feasible(f) = seed_feasibility(&fam).unwrap() else { return Ok(()) };
        let hat = hat_family(&fam).unwrap();
        for e in fam.ground().iter() {
            for i in 0..fam.len() {
                prop_assert_eq!(hat.decode_element(hat.encode_element(e, i)), (e, i));
            }
            prop_assert_eq!(hat.project(hat.fibre(e)), ElementSet::singleton(e));
        }
        let back = hat.decode(&hat.encode(&f.ff).unwrap(), &fam).unwrap();
        prop_assert_eq!(back.pairs(), f.ff.pairs());
    }

    #[test]
    fn quotient_lives_off_the_lower_sets(seed in any::<u64>()) {
        let fam = family(seed, 6, 3);
        let Feasibility::Feasible(f) = seed_feasibility(&fam).unwrap() else { return Ok(()) };
        let f = normalize(&f).unwrap();
        let q = quotient(&f.ff).unwrap();
        prop_assert_eq!(q.ground(), fam.ground() - f.ff.lower_union());
        prop_assert_eq!(q.len(), fam.len());
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let fam = family(seed, 7, 3);
        let Feasibility::Feasible(f) = seed_feasibility(&fam).unwrap() else { return Ok(()) };
        let once = normalize(&f).unwrap();
        let twice = normalize(&once).unwrap();
        prop_assert!(once.verify() && once.ff.extends(&f.ff));
        prop_assert_eq!(once.ff.pairs(), twice.ff.pairs());
    }

    #[test]
    fn largest_cowave_matches_brute_force(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let fam = family(seed, 6, 3);
        let elems: Vec<_> = fam.ground().iter().collect();
        if elems.is_empty() {
            return Ok(());
        }
        let e = elems[pick.index(elems.len())];
        let union = brute_cowaves(&fam, &budget())
            .unwrap()
            .into_iter()
            .filter(|w| !w.contains(e))
            .fold(ElementSet::empty(), |acc, w| acc | w);
        let w = largest_cowave_avoiding(&fam, e).unwrap();
        prop_assert_eq!(w.set, union);
        prop_assert!(w.verify(&fam));
    }

    #[test]
    fn one_more_cover_dichotomy(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let fam = family(seed, 6, 3);
        let elems: Vec<_> = fam.ground().iter().collect();
        if elems.is_empty() {
            return Ok(());
        }
        let e = elems[pick.index(elems.len())];
        let rest = fam.restrict(fam.ground().without(e)).unwrap();
        if !find_covering(&rest).unwrap().is_covered() {
            return Ok(());
        }
        let coverable = brute_find_covering(&fam, &budget()).unwrap().is_some();
        match one_more_cover(&fam, e).unwrap() {
            OneMoreCover::Covering(a) => prop_assert!(coverable && a.is_valid(&fam)),
            OneMoreCover::Tight(t) => {
                prop_assert!(!coverable && !t.set.contains(e));
                prop_assert!(t.verify(&fam));
                prop_assert!(fam.matroids().all(|m| m.spans(t.set, e)));
            }
        }
    }

    #[test]
    fn never_in_cover_matches_brute_force(
        seed in any::<u64>(),
        pick in any::<prop::sample::Index>(),
        member in any::<prop::sample::Index>(),
    ) {
        let fam = family(seed, 6, 3);
        let elems: Vec<_> = fam.ground().iter().collect();
        if elems.is_empty() || fam.is_empty() {
            return Ok(());
        }
        let coverings = brute_coverings(&fam, &budget()).unwrap();
        if coverings.is_empty() {
            return Ok(());
        }
        let e = elems[pick.index(elems.len())];
        let j = member.index(fam.len());
        let never = !coverings.iter().any(|c| c.parts[j].contains(e));
        match never_in_cover(&fam, e, j).unwrap() {
            None => prop_assert!(!never),
            Some(t) => {
                prop_assert!(never);
                prop_assert!(is_tight(&fam, t.set).unwrap().is_some());
                prop_assert!(fam.matroid(j).spans(t.set, e) && !t.set.contains(e));
            }
        }
    }

    #[test]
    fn feasible_check_agrees_with_new(seed in any::<u64>()) {
        let fam = family(seed, 6, 3);
        let ff = FeasibleFamily::seed(&fam).unwrap();
        let checked = matches!(Feasible::check(ff.clone(), PackingRoute::Hat).unwrap(), Feasibility::Feasible(_));
        prop_assert_eq!(checked, Feasible::new(ff).is_ok());
    }
}
