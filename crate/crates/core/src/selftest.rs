//! Randomised and exhaustive self-checks against the brute-force oracles.
//!
//! Each trial draws one family from its own ChaCha stream, so reports are
//! identical for a given seed regardless of how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::augment::{find_covering, Coverage};
use crate::brute::{
    brute_find_covering, brute_find_packing, brute_find_partitioning, brute_is_tight, check_axioms,
    EnumerationBudget,
};
use crate::error::Result;
use crate::family::{MatroidFamily, Member, Role};
use crate::feasible::{packing_feasible, FeasibleFamily, Packability, PackingRoute};
use crate::gen::{random_family, GenConfig};
use crate::partition::{synthesize_partition, Synthesis, SynthesisOptions};
use crate::set::ElementSet;
use crate::tight::{is_tight, largest_tight_set};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestOptions {
    pub max_elements: usize,
    pub trials: usize,
    pub seed: u64,
    /// Replace the first member's oracle with a broken one in every trial.
    pub corrupt_oracle: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            max_elements: 7,
            trials: 500,
            seed: 0,
            corrupt_oracle: false,
        }
    }
}

pub const CHECKS: [&str; 9] = [
    "independence axioms",
    "partition existence",
    "covering agreement",
    "packing agreement",
    "synthesis agreement",
    "reduction equivalence",
    "role invariance",
    "tight-set agreement",
    "tight-set lattice closure",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub runs: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub trials: usize,
    pub max_elements: usize,
    pub corrupt_oracle: bool,
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
    /// The first failures, in trial order.
    pub failures: Vec<Failure>,
}

const REPORTED_FAILURES: usize = 20;

/// The family drawn for `trial`.
pub fn trial_family(opts: &SelftestOptions, trial: usize) -> MatroidFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(trial as u64);
    let cfg = GenConfig {
        max_elements: opts.max_elements.min(8),
        ..GenConfig::default()
    };
    let fam = random_family(&mut rng, &cfg);
    if !opts.corrupt_oracle {
        return fam;
    }
    let mut members = fam.members().to_vec();
    members[0] = Member::new(
        members[0]
            .matroid
            .corrupted_for_testing(ElementSet::empty()),
        members[0].role,
    );
    MatroidFamily::new(fam.ground(), members).expect("same ground")
}

pub fn run_selftest(opts: &SelftestOptions) -> SelftestReport {
    let outcomes: Vec<Vec<(&'static str, Option<String>)>> = (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let fam = trial_family(opts, t);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(t as u64 | 1 << 63);
            run_trial(&fam, &mut rng)
        })
        .collect();
    let mut checks: Vec<CheckSummary> = CHECKS
        .iter()
        .map(|&name| CheckSummary {
            name,
            runs: 0,
            failures: 0,
        })
        .collect();
    let mut failures = Vec::new();
    for (trial, results) in outcomes.into_iter().enumerate() {
        for (check, outcome) in results {
            let c = checks
                .iter_mut()
                .find(|c| c.name == check)
                .expect("known check");
            c.runs += 1;
            if let Some(detail) = outcome {
                c.failures += 1;
                if failures.len() < REPORTED_FAILURES {
                    failures.push(Failure {
                        trial,
                        check,
                        detail,
                    });
                }
            }
        }
    }
    SelftestReport {
        seed: opts.seed,
        trials: opts.trials,
        max_elements: opts.max_elements,
        corrupt_oracle: opts.corrupt_oracle,
        passed: checks.iter().all(|c| c.failures == 0),
        checks,
        failures,
    }
}

fn run_trial(fam: &MatroidFamily, rng: &mut ChaCha8Rng) -> Vec<(&'static str, Option<String>)> {
    let mut out = Vec::new();
    let mut record = |name: &'static str, r: Result<Option<String>>| {
        out.push((name, r.unwrap_or_else(|e| Some(format!("error: {e}")))));
    };
    let axioms = fam
        .matroids()
        .enumerate()
        .find_map(|(i, m)| check_axioms(m).err().map(|e| format!("member {i}: {e}")));
    let sound = axioms.is_none();
    record(CHECKS[0], Ok(axioms));
    if !sound {
        // nothing below is meaningful on a broken oracle
        return out;
    }
    let budget = EnumerationBudget::default();
    let brute = (|| -> Result<(bool, bool, bool)> {
        Ok((
            brute_find_covering(fam, &budget)?.is_some(),
            brute_find_packing(fam, &budget)?.is_some(),
            brute_find_partitioning(fam, &budget)?.is_some(),
        ))
    })();
    let (cov, pack, part) = match brute {
        Ok(v) => v,
        Err(e) => {
            record(CHECKS[1], Err(e));
            return out;
        }
    };
    record(
        CHECKS[1],
        Ok(((cov && pack) != part)
            .then(|| format!("covering {cov}, packing {pack}, partitioning {part}"))),
    );
    record(CHECKS[2], check_covering(fam, cov));
    record(CHECKS[3], check_packing(fam, pack));
    record(
        CHECKS[4],
        check_synthesis(fam, part, SynthesisOptions::default()),
    );
    record(
        CHECKS[5],
        check_synthesis(
            fam,
            part,
            SynthesisOptions {
                use_reduction: true,
                ..Default::default()
            },
        ),
    );
    let roles: Vec<Role> = (0..fam.len())
        .map(|_| {
            if rng.gen_bool(0.5) {
                Role::Finitary
            } else {
                Role::Cofinitary
            }
        })
        .collect();
    record(
        CHECKS[6],
        fam.with_roles(&roles)
            .and_then(|f| check_synthesis(&f, part, SynthesisOptions::default())),
    );
    if cov && fam.ground().len() <= 6 && fam.len() <= 3 {
        record(CHECKS[7], check_tight_agreement(fam, &budget));
        record(CHECKS[8], check_lattice(fam, &budget));
    }
    out
}

fn check_covering(fam: &MatroidFamily, expected: bool) -> Result<Option<String>> {
    Ok(match find_covering(fam)? {
        Coverage::Covered(a) if !expected => {
            Some(format!("found {:?} but brute force finds none", a.parts))
        }
        Coverage::Covered(a) if !a.is_valid(fam) => {
            Some("returned covering fails verification".into())
        }
        Coverage::Uncoverable(c) if expected => Some(format!("claims uncoverable via {c:?}")),
        Coverage::Uncoverable(c) if !c.verify(fam) => Some("certificate fails verification".into()),
        _ => None,
    })
}

fn check_packing(fam: &MatroidFamily, expected: bool) -> Result<Option<String>> {
    let seed = FeasibleFamily::seed(fam)?;
    let mut routes = vec![PackingRoute::Hat];
    if fam.len() == 2 {
        routes.push(PackingRoute::Dual);
    }
    for route in routes {
        let bad = match packing_feasible(&seed, route)? {
            Packability::Packed(p) if !expected || !p.is_valid(fam) => true,
            Packability::Unpackable(c) if expected || !c.verify(&seed) => true,
            _ => false,
        };
        if bad {
            return Ok(Some(format!(
                "{} route disagrees with brute force ({expected})",
                route.as_str()
            )));
        }
    }
    Ok(None)
}

fn check_synthesis(
    fam: &MatroidFamily,
    expected: bool,
    opts: SynthesisOptions,
) -> Result<Option<String>> {
    Ok(match synthesize_partition(fam, opts)? {
        Synthesis::Partition(a) if !expected || !a.is_valid(fam) => Some(format!(
            "returned {:?}, brute force says {expected}",
            a.parts
        )),
        Synthesis::Absent(o) if expected || !o.verify(fam) => Some(format!(
            "returned absent {o:?}, brute force says {expected}"
        )),
        _ => None,
    })
}

fn check_tight_agreement(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
) -> Result<Option<String>> {
    for x in fam.ground().subsets() {
        let fast = is_tight(fam, x)?.is_some();
        if fast != brute_is_tight(fam, x, budget)? {
            return Ok(Some(format!("rank-sum test says {fast} on {x:?}")));
        }
    }
    Ok(None)
}

fn check_lattice(fam: &MatroidFamily, budget: &EnumerationBudget) -> Result<Option<String>> {
    let mut tight = Vec::new();
    for x in fam.ground().subsets() {
        if brute_is_tight(fam, x, budget)? {
            tight.push(x);
        }
    }
    for &a in &tight {
        for &b in &tight {
            if !tight.contains(&(a | b)) || !tight.contains(&(a & b)) {
                return Ok(Some(format!("{a:?} and {b:?} break closure")));
            }
        }
    }
    let union = tight.iter().fold(ElementSet::empty(), |acc, &t| acc | t);
    let largest = largest_tight_set(fam)?.set;
    Ok((largest != union)
        .then(|| format!("largest tight set {largest:?}, union of tight sets {union:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_reproducible() {
        let opts = SelftestOptions {
            trials: 40,
            max_elements: 5,
            ..Default::default()
        };
        let a = run_selftest(&opts);
        assert!(a.passed, "{:?}", a.failures);
        assert_eq!(a, run_selftest(&opts));
    }

    #[test]
    fn empty_ground_is_vacuous() {
        let r = run_selftest(&SelftestOptions {
            max_elements: 0,
            trials: 10,
            ..Default::default()
        });
        assert!(r.passed);
    }

    #[test]
    fn corrupted_oracle_is_reported() {
        let r = run_selftest(&SelftestOptions {
            trials: 5,
            corrupt_oracle: true,
            ..Default::default()
        });
        assert!(!r.passed);
        assert!(r.failures.iter().all(|f| f.check == "independence axioms"));
    }
}
