//! Exhaustive enumeration on small instances.
//!
//! Everything here is deliberately naive: independence and spanning are read
//! straight off the oracles, and no result of the matroid-union machinery is
//! used. These functions are the ground truth for the rest of the crate.

use std::time::{Duration, Instant};

use crate::assignment::{Assignment, Mode};
use crate::error::{Error, Result};
use crate::family::MatroidFamily;
use crate::matroid::Matroid;
use crate::set::{Element, ElementSet};

/// Hard limits for exhaustive enumeration. Instances over budget are refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_elements: usize,
    /// Limit for enumerations over all subsets of subsets (tight-set lattices).
    pub max_lattice_elements: usize,
    pub max_members: usize,
    /// Maximum length of a returned list.
    pub max_results: usize,
    pub timeout: Option<Duration>,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_elements: 8,
            max_lattice_elements: 7,
            max_members: 4,
            max_results: 100_000,
            timeout: Some(Duration::from_secs(60)),
        }
    }
}

impl EnumerationBudget {
    pub fn unlimited_results(self) -> Self {
        EnumerationBudget {
            max_results: usize::MAX,
            ..self
        }
    }

    fn admit(&self, fam: &MatroidFamily, lattice: bool) -> Result<Clock> {
        let limit = if lattice {
            self.max_lattice_elements
        } else {
            self.max_elements
        };
        if fam.ground().len() > limit {
            return Err(Error::Budget(format!(
                "{} elements exceed the limit of {limit}",
                fam.ground().len()
            )));
        }
        if fam.len() > self.max_members {
            return Err(Error::Budget(format!(
                "{} members exceed the limit of {}",
                fam.len(),
                self.max_members
            )));
        }
        Ok(Clock {
            start: Instant::now(),
            timeout: self.timeout,
            ticks: 0,
        })
    }
}

struct Clock {
    start: Instant,
    timeout: Option<Duration>,
    ticks: u32,
}

impl Clock {
    fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(4096) {
            if let Some(t) = self.timeout {
                if self.start.elapsed() > t {
                    return Err(Error::Budget(format!("enumeration exceeded {t:?}")));
                }
            }
        }
        Ok(())
    }
}

/// Per-member independence and spanning tables over subsets of `E`.
struct Tables {
    elems: Vec<Element>,
    /// `indep[i][mask]`, masks over positions in `elems`.
    indep: Vec<Vec<bool>>,
    spanning: Vec<Vec<bool>>,
}

impl Tables {
    fn new(fam: &MatroidFamily) -> Tables {
        let elems: Vec<Element> = fam.ground().iter().collect();
        let n = elems.len();
        let mut indep = Vec::with_capacity(fam.len());
        let mut spanning = Vec::with_capacity(fam.len());
        for m in fam.matroids() {
            let ind: Vec<bool> = (0..1usize << n)
                .map(|mask| m.is_independent(to_set(&elems, mask)))
                .collect();
            // spanning iff it contains an independent set of full size
            let full = (0..1usize << n)
                .filter(|&s| ind[s])
                .map(|s| s.count_ones())
                .max()
                .unwrap_or(0);
            let sp = (0..1usize << n)
                .map(|mask| {
                    let mut sub = mask;
                    loop {
                        if ind[sub] && sub.count_ones() == full {
                            return true;
                        }
                        if sub == 0 {
                            return false;
                        }
                        sub = (sub - 1) & mask;
                    }
                })
                .collect();
            indep.push(ind);
            spanning.push(sp);
        }
        Tables {
            elems,
            indep,
            spanning,
        }
    }

    fn full(&self) -> usize {
        (1usize << self.elems.len()) - 1
    }

    fn set(&self, mask: usize) -> ElementSet {
        to_set(&self.elems, mask)
    }
}

fn to_set(elems: &[Element], mask: usize) -> ElementSet {
    elems
        .iter()
        .enumerate()
        .filter(|&(p, _)| mask >> p & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}

fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

fn push(out: &mut Vec<Assignment>, budget: &EnumerationBudget, a: Assignment) -> Result<()> {
    if out.len() >= budget.max_results {
        return Err(Error::Budget(format!(
            "more than {} results",
            budget.max_results
        )));
    }
    out.push(a);
    Ok(())
}

/// All coverings: tuples of independent sets whose union is `E`.
pub fn brute_coverings(fam: &MatroidFamily, budget: &EnumerationBudget) -> Result<Vec<Assignment>> {
    let mut clock = budget.admit(fam, false)?;
    let t = Tables::new(fam);
    let k = fam.len();
    let mut out = Vec::new();
    let mut parts = vec![0usize; k];
    // max number of elements each suffix of members can still cover
    let mut cap = vec![0u32; k + 1];
    for i in (0..k).rev() {
        let r = (0..=t.full())
            .filter(|&s| t.indep[i][s])
            .map(|s| s.count_ones())
            .max()
            .unwrap_or(0);
        cap[i] = cap[i + 1] + r;
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        covered: usize,
        t: &Tables,
        cap: &[u32],
        parts: &mut Vec<usize>,
        out: &mut Vec<Assignment>,
        budget: &EnumerationBudget,
        clock: &mut Clock,
    ) -> Result<()> {
        clock.tick()?;
        let missing = (t.full() & !covered).count_ones();
        if missing > cap[i] {
            return Ok(());
        }
        if i == parts.len() {
            if missing == 0 {
                let a = Assignment::new(Mode::Covering, parts.iter().map(|&m| t.set(m)).collect());
                push(out, budget, a)?;
            }
            return Ok(());
        }
        for s in 0..=t.full() {
            if t.indep[i][s] {
                parts[i] = s;
                go(i + 1, covered | s, t, cap, parts, out, budget, clock)?;
            }
        }
        Ok(())
    }
    go(0, 0, &t, &cap, &mut parts, &mut out, budget, &mut clock)?;
    Ok(out)
}

/// All packings: tuples of pairwise disjoint spanning sets.
pub fn brute_packings(fam: &MatroidFamily, budget: &EnumerationBudget) -> Result<Vec<Assignment>> {
    list_disjoint(fam, budget, Mode::Packing)
}

/// All partitionings: tuples of bases partitioning `E`.
pub fn brute_partitionings(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
) -> Result<Vec<Assignment>> {
    list_disjoint(fam, budget, Mode::Partitioning)
}

fn list_disjoint(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
    mode: Mode,
) -> Result<Vec<Assignment>> {
    let mut clock = budget.admit(fam, false)?;
    let t = Tables::new(fam);
    let mut out = Vec::new();
    let mut parts = vec![0usize; fam.len()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        free: usize,
        mode: Mode,
        t: &Tables,
        parts: &mut Vec<usize>,
        out: &mut Vec<Assignment>,
        budget: &EnumerationBudget,
        clock: &mut Clock,
    ) -> Result<()> {
        clock.tick()?;
        if i == parts.len() {
            if mode == Mode::Packing || free == 0 {
                let a = Assignment::new(mode, parts.iter().map(|&m| t.set(m)).collect());
                push(out, budget, a)?;
            }
            return Ok(());
        }
        for s in submasks(free) {
            let ok = t.spanning[i][s] && (mode == Mode::Packing || t.indep[i][s]);
            if ok {
                parts[i] = s;
                go(i + 1, free & !s, mode, t, parts, out, budget, clock)?;
            }
        }
        Ok(())
    }
    go(
        0,
        t.full(),
        mode,
        &t,
        &mut parts,
        &mut out,
        budget,
        &mut clock,
    )?;
    out.sort_by(|a, b| a.parts.cmp(&b.parts));
    Ok(out)
}

/// Assigns each element to exactly one member and keeps the classes
/// acceptable; returns the first complete assignment found.
fn assign_each(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
    class_ok_partial: impl Fn(usize, usize, &Tables) -> bool,
    class_ok_final: impl Fn(usize, usize, &Tables) -> bool,
    mode: Mode,
) -> Result<Option<Assignment>> {
    let mut clock = budget.admit(fam, false)?;
    let t = Tables::new(fam);
    let mut classes = vec![0usize; fam.len()];
    if search(
        0,
        &t,
        &mut classes,
        &class_ok_partial,
        &class_ok_final,
        &mut clock,
    )? {
        Ok(Some(Assignment::new(
            mode,
            classes.iter().map(|&m| t.set(m)).collect(),
        )))
    } else {
        Ok(None)
    }
}

type ClassCheck<'a> = &'a dyn Fn(usize, usize, &Tables) -> bool;

fn search(
    p: usize,
    t: &Tables,
    classes: &mut Vec<usize>,
    partial: ClassCheck,
    fin: ClassCheck,
    clock: &mut Clock,
) -> Result<bool> {
    clock.tick()?;
    if p == t.elems.len() {
        return Ok((0..classes.len()).all(|i| fin(i, classes[i], t)));
    }
    for i in 0..classes.len() {
        let with = classes[i] | 1 << p;
        if partial(i, with, t) {
            let old = classes[i];
            classes[i] = with;
            if search(p + 1, t, classes, partial, fin, clock)? {
                return Ok(true);
            }
            classes[i] = old;
        }
    }
    Ok(false)
}

/// Some covering, found by assigning each element to one member.
///
/// Subsets of independent sets are independent, so a covering exists iff a
/// disjoint one does.
pub fn brute_find_covering(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
) -> Result<Option<Assignment>> {
    assign_each(
        fam,
        budget,
        |i, m, t| t.indep[i][m],
        |_, _, _| true,
        Mode::Covering,
    )
}

/// Some packing whose parts partition `E`.
///
/// Supersets of spanning sets are spanning, so leftover elements can always
/// be thrown into any part of a packing.
pub fn brute_find_packing(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
) -> Result<Option<Assignment>> {
    if fam.is_empty() {
        // only the empty packing, which is always valid
        return Ok(Some(Assignment::new(Mode::Packing, vec![])));
    }
    assign_each(
        fam,
        budget,
        |_, _, _| true,
        |i, m, t| t.spanning[i][m],
        Mode::Packing,
    )
}

pub fn brute_find_partitioning(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
) -> Result<Option<Assignment>> {
    assign_each(
        fam,
        budget,
        |i, m, t| t.indep[i][m],
        |i, m, t| t.spanning[i][m],
        Mode::Partitioning,
    )
}

/// Whether `M ↾ X` has a covering and every covering of it has all parts spanning `X`.
///
/// Enumerates coverings of `X` literally and stops at the first one with a
/// non-spanning part.
pub fn brute_is_tight(
    fam: &MatroidFamily,
    x: ElementSet,
    budget: &EnumerationBudget,
) -> Result<bool> {
    fam.check_subset(x)?;
    let sub = fam.restrict(x)?;
    let mut clock = budget.admit(&sub, true)?;
    let t = Tables::new(&sub);
    let k = sub.len();
    let mut cap = vec![0u32; k + 1];
    for i in (0..k).rev() {
        let r = (0..=t.full())
            .filter(|&s| t.indep[i][s])
            .map(|s| s.count_ones())
            .max()
            .unwrap_or(0);
        cap[i] = cap[i + 1] + r;
    }
    // Some(false) once a covering with a non-spanning part appears
    fn go(
        i: usize,
        covered: usize,
        all_spanning: bool,
        t: &Tables,
        cap: &[u32],
        found: &mut bool,
        clock: &mut Clock,
    ) -> Result<Option<bool>> {
        clock.tick()?;
        let missing = (t.full() & !covered).count_ones();
        if missing > cap[i] {
            return Ok(None);
        }
        if i == cap.len() - 1 {
            if missing == 0 {
                *found = true;
                if !all_spanning {
                    return Ok(Some(false));
                }
            }
            return Ok(None);
        }
        for s in 0..=t.full() {
            if t.indep[i][s] {
                let span = all_spanning && t.spanning[i][s];
                if let Some(v) = go(i + 1, covered | s, span, t, cap, found, clock)? {
                    return Ok(Some(v));
                }
            }
        }
        Ok(None)
    }
    let mut found = false;
    match go(0, 0, true, &t, &cap, &mut found, &mut clock)? {
        Some(v) => Ok(v),
        None => Ok(found),
    }
}

/// Every tight subset of `E`, in increasing mask order of the ground.
pub fn brute_tight_sets(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
) -> Result<Vec<ElementSet>> {
    budget.admit(fam, true)?;
    let mut out = Vec::new();
    for x in fam.ground().subsets() {
        if brute_is_tight(fam, x, budget)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// Every cowave: `W` such that `M . W` admits a covering.
///
/// Independence in `M . W` is read off ranks of `M`: `S ⊆ W` is independent
/// iff `r(S ∪ (E \ W)) = |S| + r(E \ W)`, using the greedy rank only.
pub fn brute_cowaves(fam: &MatroidFamily, budget: &EnumerationBudget) -> Result<Vec<ElementSet>> {
    let mut clock = budget.admit(fam, true)?;
    let mut out = Vec::new();
    for w in fam.ground().subsets() {
        let outside = fam.ground() - w;
        let elems: Vec<Element> = w.iter().collect();
        let indep = fam
            .matroids()
            .map(|m| {
                let base = m.rank_greedy(outside);
                (0..1usize << elems.len())
                    .map(|mask| {
                        let s = to_set(&elems, mask);
                        m.rank_greedy(s | outside) == s.len() + base
                    })
                    .collect()
            })
            .collect();
        let t = Tables {
            elems,
            indep,
            spanning: vec![],
        };
        let mut classes = vec![0usize; fam.len()];
        if search(
            0,
            &t,
            &mut classes,
            &|i, m, t| t.indep[i][m],
            &|_, _, _| true,
            &mut clock,
        )? {
            out.push(w);
        }
    }
    Ok(out)
}

/// Checks the independence axioms exhaustively; returns the first violation.
pub fn check_axioms(m: &Matroid) -> std::result::Result<(), String> {
    let ground = m.ground();
    if ground.len() > 10 {
        return Err(format!(
            "ground of {} elements is too large to check",
            ground.len()
        ));
    }
    if !m.is_independent(ElementSet::empty()) {
        return Err("the empty set is dependent".into());
    }
    let indep: Vec<ElementSet> = ground.subsets().filter(|&s| m.is_independent(s)).collect();
    for &s in &indep {
        for x in s {
            if !m.is_independent(s.without(x)) {
                return Err(format!(
                    "{s:?} is independent but {:?} is not",
                    s.without(x)
                ));
            }
        }
    }
    for &a in &indep {
        for &b in &indep {
            if a.len() < b.len() && !(b - a).iter().any(|x| m.is_independent(a.with(x))) {
                return Err(format!("{a:?} cannot be augmented from {b:?}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(r: usize, n: usize) -> Matroid {
        Matroid::uniform(ElementSet::range(n), r).unwrap()
    }

    fn k4() -> Matroid {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let list: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (i, u, v))
            .collect();
        Matroid::graphic(4, &list).unwrap()
    }

    fn fam(ms: Vec<Matroid>) -> MatroidFamily {
        MatroidFamily::of(ms[0].ground(), ms).unwrap()
    }

    fn b() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    #[test]
    fn coverings_examples() {
        let c = brute_coverings(&fam(vec![u(1, 2), u(1, 2)]), &b()).unwrap();
        let parts: Vec<_> = c.iter().map(|a| a.parts.clone()).collect();
        assert_eq!(parts.len(), 2);
        assert!(parts.contains(&vec![set![0], set![1]]) && parts.contains(&vec![set![1], set![0]]));
        assert!(brute_coverings(&fam(vec![u(1, 3), u(1, 3)]), &b())
            .unwrap()
            .is_empty());
        let empty = MatroidFamily::of(ElementSet::empty(), vec![]).unwrap();
        assert_eq!(brute_coverings(&empty, &b()).unwrap().len(), 1);
    }

    #[test]
    fn packings_examples() {
        let k = fam(vec![k4(), k4()]);
        let p = brute_packings(&k, &b()).unwrap();
        assert!(!p.is_empty() && p.iter().all(|a| a.is_valid(&k)));
        let f = fam(vec![Matroid::free(set![0]), Matroid::free(set![0])]);
        assert!(brute_packings(&f, &b()).unwrap().is_empty());
        let z = fam(vec![Matroid::zero(set![0])]);
        assert_eq!(brute_packings(&z, &b()).unwrap()[0].parts, vec![set![]]);
    }

    #[test]
    fn partitionings_examples() {
        assert_eq!(
            brute_partitionings(&fam(vec![u(1, 2), u(1, 2)]), &b())
                .unwrap()
                .len(),
            2
        );
        let k = fam(vec![k4(), k4()]);
        let p = brute_partitionings(&k, &b()).unwrap();
        assert!(!p.is_empty() && p.iter().all(|a| a.is_valid(&k)));
        let empty = MatroidFamily::of(ElementSet::empty(), vec![u(0, 0)]).unwrap();
        assert_eq!(brute_partitionings(&empty, &b()).unwrap().len(), 1);
    }

    #[test]
    fn existence_matches_listing() {
        let cases = vec![
            fam(vec![u(1, 2), u(1, 2)]),
            fam(vec![u(1, 3), u(1, 3)]),
            fam(vec![k4(), k4()]),
            fam(vec![u(2, 4), u(1, 4), u(1, 4)]),
            fam(vec![Matroid::free(set![0]), Matroid::free(set![0])]),
        ];
        for f in cases {
            assert_eq!(
                brute_find_covering(&f, &b()).unwrap().is_some(),
                !brute_coverings(&f, &b()).unwrap().is_empty()
            );
            assert_eq!(
                brute_find_packing(&f, &b()).unwrap().is_some(),
                !brute_packings(&f, &b()).unwrap().is_empty()
            );
            assert_eq!(
                brute_find_partitioning(&f, &b()).unwrap().is_some(),
                !brute_partitionings(&f, &b()).unwrap().is_empty()
            );
        }
    }

    #[test]
    fn tight_examples() {
        let f = fam(vec![u(1, 2), u(1, 2)]);
        assert!(brute_is_tight(&f, set![0, 1], &b()).unwrap());
        let g = fam(vec![u(1, 2), Matroid::free(set![0, 1])]);
        assert!(!brute_is_tight(&g, set![0, 1], &b()).unwrap());
        assert!(brute_is_tight(&g, set![], &b()).unwrap());
    }

    #[test]
    fn cowave_examples() {
        let f = fam(vec![u(1, 3), u(1, 3)]);
        assert!(!brute_cowaves(&f, &b()).unwrap().contains(&set![2]));
        let g = fam(vec![Matroid::free(set![0, 1]), Matroid::free(set![0, 1])]);
        assert!(brute_cowaves(&g, &b()).unwrap().contains(&set![1]));
    }

    #[test]
    fn budget_is_enforced() {
        let f = fam(vec![u(1, 9), u(8, 9)]);
        assert!(matches!(brute_coverings(&f, &b()), Err(Error::Budget(_))));
        let tiny = EnumerationBudget {
            max_results: 1,
            ..b()
        };
        assert!(matches!(
            brute_coverings(&fam(vec![u(1, 2), u(1, 2)]), &tiny),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn axioms_hold_for_builtin_kinds() {
        for m in [
            k4(),
            k4().dual(),
            u(2, 4),
            k4().minor(set![0], set![5]).unwrap(),
        ] {
            check_axioms(&m).unwrap();
        }
    }
}
