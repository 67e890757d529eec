use matpart::brute::{
    brute_find_covering, brute_find_packing, brute_find_partitioning, EnumerationBudget,
};
use matpart::gen::{random_family, GenConfig};
use matpart::partition::{synthesize_partition, Synthesis, SynthesisOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn synthesis_matches_brute_force() {
    let cfg = GenConfig::default();
    let budget = EnumerationBudget::default();
    let mut yes = 0;
    for seed in 0..300u64 {
        let fam = random_family(&mut ChaCha8Rng::seed_from_u64(seed), &cfg);
        let cov = brute_find_covering(&fam, &budget).unwrap().is_some();
        let pack = brute_find_packing(&fam, &budget).unwrap().is_some();
        let part = brute_find_partitioning(&fam, &budget).unwrap().is_some();
        assert_eq!(cov && pack, part, "seed {seed}");
        let got = synthesize_partition(&fam, SynthesisOptions::default())
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        match got {
            Synthesis::Partition(a) => {
                assert!(part && a.is_valid(&fam), "seed {seed}");
                yes += 1;
            }
            Synthesis::Absent(o) => assert!(!part && o.verify(&fam), "seed {seed}"),
        }
    }
    eprintln!("{yes} partitionable");
}

#[test]
fn reduction_route_agrees() {
    let cfg = GenConfig {
        max_elements: 6,
        ..GenConfig::default()
    };
    for seed in 0..100u64 {
        let fam = random_family(&mut ChaCha8Rng::seed_from_u64(seed), &cfg);
        let direct = synthesize_partition(&fam, SynthesisOptions::default()).unwrap();
        let reduced = synthesize_partition(
            &fam,
            SynthesisOptions {
                use_reduction: true,
                ..Default::default()
            },
        )
        .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(
            direct.partition().is_some(),
            reduced.partition().is_some(),
            "seed {seed}"
        );
        if let Some(a) = reduced.partition() {
            assert!(a.is_valid(&fam));
        }
    }
}
