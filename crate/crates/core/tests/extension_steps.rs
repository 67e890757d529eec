use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matpart::feasible::{
    cospan_element, cover_element, eliminate_largest_tight, normalize, span_element, CospanRoute,
    Feasibility, Feasible,
};
use matpart::gen::{random_family, GenConfig};
use matpart::partition::seed_feasibility;
use matpart::Role;

#[test]
fn random_walks_stay_feasible() {
    let cfg = GenConfig {
        max_elements: 7,
        ..GenConfig::default()
    };
    let mut calls = 0;
    for seed in 0..400u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = random_family(&mut rng, &cfg);
        let Feasibility::Feasible(mut cur) = seed_feasibility(&fam).unwrap() else {
            continue;
        };
        let elems: Vec<_> = fam.ground().iter().collect();
        if elems.is_empty() {
            continue;
        }
        for _ in 0..6 {
            let e = elems[rng.gen_range(0..elems.len())];
            let j = rng.gen_range(0..fam.len());
            let next: Feasible = match rng.gen_range(0..5) {
                0 => cover_element(&cur, e),
                1 => normalize(&cur),
                2 => eliminate_largest_tight(&cur),
                _ => match fam.role(j) {
                    Role::Finitary => span_element(&cur, e, j),
                    Role::Cofinitary => {
                        let route = if fam.len() == 2 {
                            CospanRoute::Compare
                        } else {
                            CospanRoute::Hat
                        };
                        cospan_element(&cur, e, j, route)
                    }
                },
            }
            .unwrap_or_else(|err| panic!("seed {seed}: {err}"));
            assert!(next.verify() && next.ff.extends(&cur.ff), "seed {seed}");
            cur = next;
            calls += 1;
        }
    }
    eprintln!("{calls} calls");
}
