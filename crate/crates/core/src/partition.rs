//! Base partitionings: the element-by-element recursion and the reduction to
//! three members.

use crate::assignment::{Assignment, Mode, Report};
use crate::augment::UncoverableCertificate;
use crate::brute::{brute_coverings, brute_packings, EnumerationBudget};
use crate::error::{ensure, input, precondition, Error, Result};
use crate::family::{MatroidFamily, Member, Role};
use crate::feasible::{
    cospan_element, cover_element, normalize, span_element, CospanRoute, Feasibility, Feasible,
    FeasibleFamily, PackingRoute, UnpackableCertificate,
};
use crate::matroid::Matroid;
use crate::set::{Element, ElementSet, MAX_ELEMENTS};

/// Checks `a` against its mode; see [`Assignment::verify`].
pub fn verify(fam: &MatroidFamily, a: &Assignment) -> Report {
    a.verify(fam)
}

/// Bookkeeping for the three-member family on `E × K`.
///
/// Element `(e, i)` has index `i * stride + e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    pub stride: usize,
    pub base: ElementSet,
    /// Role of each original member; decides which of the first two reduced
    /// members holds its copy.
    pub roles: Vec<Role>,
}

impl ReductionMap {
    pub fn encode(&self, e: Element, i: usize) -> Element {
        i * self.stride + e
    }

    pub fn decode(&self, x: Element) -> (Element, usize) {
        (x % self.stride, x / self.stride)
    }

    pub fn members(&self) -> usize {
        self.roles.len()
    }

    pub fn slice(&self, i: usize) -> ElementSet {
        self.lift(self.base, i)
    }

    pub fn fibre(&self, e: Element) -> ElementSet {
        (0..self.members()).map(|i| self.encode(e, i)).collect()
    }

    pub fn lift(&self, x: ElementSet, i: usize) -> ElementSet {
        x.iter().map(|e| self.encode(e, i)).collect()
    }

    pub fn project(&self, x: ElementSet) -> ElementSet {
        x.iter().map(|y| y % self.stride).collect()
    }

    fn holder(&self, i: usize) -> usize {
        match self.roles[i] {
            Role::Finitary => 0,
            Role::Cofinitary => 1,
        }
    }

    /// Translates an assignment of the original family to the reduced one.
    ///
    /// Coverings put `(e, i)` into the third part for every `i` other than the
    /// least member `i_e` whose part contains `e`. Packings and partitionings
    /// give the third part everything the first two do not use.
    pub fn forward(&self, a: &Assignment) -> Result<Assignment> {
        if a.parts.len() != self.members() {
            return input(format!(
                "{} parts given for {} members",
                a.parts.len(),
                self.members()
            ));
        }
        let mut parts = vec![ElementSet::empty(); 3];
        for (i, &p) in a.parts.iter().enumerate() {
            parts[self.holder(i)] |= self.lift(p & self.base, i);
        }
        let all = (0..self.members()).fold(ElementSet::empty(), |acc, i| acc | self.slice(i));
        parts[2] = match a.mode {
            Mode::Covering => {
                let mut third = ElementSet::empty();
                for e in self.base {
                    let fibre = self.fibre(e);
                    match a.parts.iter().position(|p| p.contains(e)) {
                        Some(ie) => third |= fibre.without(self.encode(e, ie)),
                        None => third |= fibre,
                    }
                }
                third
            }
            Mode::Packing | Mode::Partitioning => all - parts[0] - parts[1],
        };
        Ok(Assignment::new(a.mode, parts))
    }

    /// Translates an assignment of the reduced family back by slice projection.
    pub fn backward(&self, a: &Assignment) -> Result<Assignment> {
        if a.parts.len() != 3 {
            return input(format!(
                "reduced assignments have 3 parts, found {}",
                a.parts.len()
            ));
        }
        let parts = (0..self.members())
            .map(|i| self.project(a.parts[self.holder(i)] & self.slice(i)))
            .collect();
        Ok(Assignment::new(a.mode, parts))
    }
}

/// The three-member family on `E × K` with the same covering, packing and
/// partitioning existence as `fam`.
///
/// Member 0 holds a copy of every finitary `M_i` on its slice `E × {i}`,
/// member 1 a copy of every cofinitary one, with all other slices loops.
/// Member 2 is the direct sum over `e` of the rank `|K| - 1` uniform matroid
/// on the fibre `{e} × K`, whose only circuit is the whole fibre.
pub fn reduce_to_three(fam: &MatroidFamily) -> Result<(MatroidFamily, ReductionMap)> {
    let base = fam.ground();
    let k = fam.len();
    if k == 0 && !base.is_empty() {
        return precondition("cannot reduce a family with no members on a non-empty ground set");
    }
    let stride = base.bound();
    if stride * k > MAX_ELEMENTS {
        return input(format!(
            "reduced family needs {} element indices, above the cap of {MAX_ELEMENTS}",
            stride * k
        ));
    }
    let map = ReductionMap {
        stride,
        base,
        roles: (0..k).map(|i| fam.role(i)).collect(),
    };
    let all = (0..k).fold(ElementSet::empty(), |acc, i| acc | map.slice(i));
    let holder_sum = |which: usize| -> Result<Matroid> {
        let mut parts = Vec::new();
        let mut loops = ElementSet::empty();
        for i in 0..k {
            if map.holder(i) == which {
                let pairs: Vec<_> = base.iter().map(|e| (map.encode(e, i), e)).collect();
                parts.push(fam.matroid(i).relabel(&pairs)?);
            } else {
                loops |= map.slice(i);
            }
        }
        parts.push(Matroid::zero(loops));
        Matroid::direct_sum(parts)
    };
    let mut fibres: Vec<Matroid> = base
        .iter()
        .map(|e| Matroid::uniform(map.fibre(e), k - 1))
        .collect::<Result<_>>()?;
    fibres.push(Matroid::zero(ElementSet::empty()));
    let members = vec![
        Member::new(holder_sum(0)?, Role::Finitary),
        Member::new(holder_sum(1)?, Role::Cofinitary),
        Member::new(Matroid::direct_sum(fibres)?, Role::Cofinitary),
    ];
    Ok((MatroidFamily::new(all, members)?, map))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SynthesisOptions {
    /// Solve the three-member reduction and translate back.
    pub use_reduction: bool,
    pub cospan_route: CospanRoute,
}

/// Why no base partitioning exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    Uncoverable(UncoverableCertificate),
    Unpackable(UnpackableCertificate),
}

impl Obstruction {
    /// Re-checks the certificate against the seed family of `fam`.
    pub fn verify(&self, fam: &MatroidFamily) -> bool {
        match self {
            Obstruction::Uncoverable(c) => c.verify(fam),
            Obstruction::Unpackable(c) => FeasibleFamily::seed(fam)
                .map(|s| c.verify(&s))
                .unwrap_or(false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Synthesis {
    Partition(Assignment),
    Absent(Obstruction),
}

impl Synthesis {
    pub fn partition(&self) -> Option<&Assignment> {
        match self {
            Synthesis::Partition(a) => Some(a),
            Synthesis::Absent(_) => None,
        }
    }
}

/// Decides covering and packing existence on the seed family.
pub fn seed_feasibility(fam: &MatroidFamily) -> Result<Feasibility> {
    Feasible::check(FeasibleFamily::seed(fam)?, PackingRoute::auto(fam.len()))
}

/// Builds a base partitioning, or returns the certificate ruling one out.
///
/// Starting from `⟨∅, E⟩`, each element in ground order is covered, then
/// spanned by the lower set of every finitary member, then cospanned by the
/// complement of the upper set of every cofinitary member, and finally the
/// upper sets are trimmed against the other lower sets. Every step is
/// checked to be a feasible extension that never revokes a decision.
pub fn synthesize_partition(fam: &MatroidFamily, opts: SynthesisOptions) -> Result<Synthesis> {
    if opts.use_reduction {
        return synthesize_reduced(fam, opts);
    }
    let mut cur = match seed_feasibility(fam)? {
        Feasibility::Feasible(f) => f,
        Feasibility::NotCoverable(c) => return Ok(Synthesis::Absent(Obstruction::Uncoverable(c))),
        Feasibility::NotPackable(c) => return Ok(Synthesis::Absent(Obstruction::Unpackable(c))),
    };
    let k = fam.len();
    for e in fam.ground() {
        let before = cur.clone();
        cur = cover_element(&cur, e)?;
        for i in (0..k).filter(|&i| fam.role(i) == Role::Finitary) {
            cur = span_element(&cur, e, i)?;
        }
        for i in (0..k).filter(|&i| fam.role(i) == Role::Cofinitary) {
            cur = cospan_element(&cur, e, i, opts.cospan_route)?;
        }
        cur = normalize(&cur)?;
        check_step(fam, &before, &cur, e)?;
    }
    let lower = cur.ff.lower();
    ensure(lower == cur.ff.upper(), || {
        "lower and upper sets did not meet".into()
    })?;
    let out = Assignment::new(Mode::Partitioning, lower.to_vec());
    let report = out.verify(fam);
    ensure(report.is_valid(), || {
        format!(
            "synthesised partitioning fails verification: {:?}",
            report.violations
        )
    })?;
    Ok(Synthesis::Partition(out))
}

fn check_step(fam: &MatroidFamily, before: &Feasible, after: &Feasible, e: Element) -> Result<()> {
    let ground = fam.ground();
    let (lo, hi) = (after.ff.lower(), after.ff.upper());
    ensure(after.ff.extends(&before.ff), || {
        format!("step for {e} revoked an earlier decision")
    })?;
    ensure(after.verify(), || format!("step for {e} lost feasibility"))?;
    ensure(lo.iter().any(|l| l.contains(e)), || {
        format!("{e} is not in any lower set")
    })?;
    for i in 0..fam.len() {
        let m = fam.matroid(i);
        let ok = match fam.role(i) {
            Role::Finitary => m.spans(lo[i], e),
            Role::Cofinitary => m.dual().spans(ground - hi[i], e),
        };
        ensure(ok, || {
            format!("step for {e} missed its span condition on member {i}")
        })?;
        for (j, &l) in lo.iter().enumerate() {
            ensure(i == j || hi[i].is_disjoint(&l), || {
                format!("upper set {i} meets lower set {j}")
            })?;
        }
    }
    Ok(())
}

fn synthesize_reduced(fam: &MatroidFamily, opts: SynthesisOptions) -> Result<Synthesis> {
    if fam.is_empty() && !fam.ground().is_empty() {
        // nothing to reduce; the direct route returns the certificate
        return synthesize_partition(
            fam,
            SynthesisOptions {
                use_reduction: false,
                ..opts
            },
        );
    }
    let (reduced, map) = reduce_to_three(fam)?;
    let inner = synthesize_partition(
        &reduced,
        SynthesisOptions {
            use_reduction: false,
            ..opts
        },
    )?;
    match inner {
        Synthesis::Partition(a) => {
            let back = map.backward(&a)?;
            let report = back.verify(fam);
            ensure(report.is_valid(), || {
                format!(
                    "translated partitioning fails verification: {:?}",
                    report.violations
                )
            })?;
            Ok(Synthesis::Partition(back))
        }
        Synthesis::Absent(_) => match seed_feasibility(fam)? {
            Feasibility::NotCoverable(c) => Ok(Synthesis::Absent(Obstruction::Uncoverable(c))),
            Feasibility::NotPackable(c) => Ok(Synthesis::Absent(Obstruction::Unpackable(c))),
            Feasibility::Feasible(_) => Err(Error::Internal(
                "reduced family has no partitioning but the original is feasible".into(),
            )),
        },
    }
}

/// Counts from an exhaustive check that packings, coverings and
/// partitionings coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortcutReport {
    pub coverings: usize,
    pub packings: usize,
    /// Coverings or packings that are not partitionings.
    pub counterexamples: Vec<Assignment>,
}

impl ShortcutReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Exhaustively checks that, for a finite family with both a packing and a
/// covering, every packing and every covering is already a partitioning.
pub fn finite_shortcut_check(
    fam: &MatroidFamily,
    budget: &EnumerationBudget,
) -> Result<ShortcutReport> {
    let coverings = brute_coverings(fam, budget)?;
    let packings = brute_packings(fam, budget)?;
    if coverings.is_empty() || packings.is_empty() {
        return precondition("the family needs both a covering and a packing");
    }
    let counterexamples = coverings
        .iter()
        .chain(&packings)
        .filter(|a| !a.with_mode(Mode::Partitioning).is_valid(fam))
        .cloned()
        .collect();
    Ok(ShortcutReport {
        coverings: coverings.len(),
        packings: packings.len(),
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{brute_find_covering, brute_find_packing, brute_find_partitioning};

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

    fn exists(f: &MatroidFamily) -> [bool; 3] {
        let b = EnumerationBudget::default();
        [
            brute_find_covering(f, &b).unwrap().is_some(),
            brute_find_packing(f, &b).unwrap().is_some(),
            brute_find_partitioning(f, &b).unwrap().is_some(),
        ]
    }

    #[test]
    fn verify_examples() {
        let f = fam(vec![k4(), k4()]);
        let a = Assignment::new(Mode::Partitioning, vec![set![0, 3, 5], set![1, 2, 4]]);
        assert!(verify(&f, &a).is_valid());
        assert!(verify(&f, &a.with_mode(Mode::Covering)).is_valid());
        assert!(!verify(&f, &Assignment::new(Mode::Packing, vec![set![0], set![1]])).is_valid());
    }

    #[test]
    fn reduction_examples() {
        let f = fam(vec![u(1, 2), u(1, 2)]);
        let (r, map) = reduce_to_three(&f).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.ground().len(), 4);
        assert_eq!(exists(&f), exists(&r));
        assert_eq!(exists(&r), [true; 3]);

        let g = MatroidFamily::of(set![0], vec![Matroid::free(set![0])]).unwrap();
        let (rg, _) = reduce_to_three(&g).unwrap();
        assert!(rg.matroid(2).is_loop(0));
        assert_eq!(exists(&g), exists(&rg));

        let cov = Assignment::new(Mode::Covering, vec![set![0], set![1]]);
        let fwd = map.forward(&cov).unwrap();
        assert!(fwd.is_valid(&r));
        // i_a = 0 and i_b = 1, so the third part is {(a,1), (b,0)}
        assert_eq!(fwd.parts[2], set![map.encode(0, 1), map.encode(1, 0)]);
        assert_eq!(map.backward(&fwd).unwrap(), cov);
    }

    #[test]
    fn reduction_refuses_empty_member_list() {
        let f = MatroidFamily::of(set![0], vec![]).unwrap();
        assert!(matches!(reduce_to_three(&f), Err(Error::Precondition(_))));
    }

    #[test]
    fn synthesis_examples() {
        let f = fam(vec![k4(), k4()]);
        for use_reduction in [false, true] {
            let s = synthesize_partition(
                &f,
                SynthesisOptions {
                    use_reduction,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(s.partition().unwrap().is_valid(&f));
        }

        let g = fam(vec![u(1, 3), u(1, 3)]);
        match synthesize_partition(&g, SynthesisOptions::default()).unwrap() {
            Synthesis::Absent(Obstruction::Uncoverable(c)) => {
                assert_eq!((c.witness, c.element), (set![0, 1], 2));
                assert!(c.verify(&g));
            }
            other => panic!("{other:?}"),
        }

        let empty = MatroidFamily::of(ElementSet::empty(), vec![u(0, 0), u(0, 0)]).unwrap();
        let s = synthesize_partition(&empty, SynthesisOptions::default()).unwrap();
        assert_eq!(s.partition().unwrap().parts, vec![set![], set![]]);
    }

    #[test]
    fn matching_in_k22() {
        // edges e1=(u0,v0) e2=(u0,v1) e3=(u1,v0) e4=(u1,v1)
        let left = Matroid::partition(&[(set![0, 1], 1), (set![2, 3], 1)]).unwrap();
        let right = Matroid::partition(&[(set![0, 2], 1), (set![1, 3], 1)]).unwrap();
        let f = fam(vec![left.clone(), right.dual()])
            .with_roles(&[Role::Finitary, Role::Cofinitary])
            .unwrap();
        let s = synthesize_partition(&f, SynthesisOptions::default()).unwrap();
        let p = s.partition().unwrap().parts[0];
        assert!(left.is_base(p) && right.is_base(p));
    }

    #[test]
    fn shortcut_examples() {
        let b = EnumerationBudget::default();
        assert!(finite_shortcut_check(&fam(vec![k4(), k4()]), &b)
            .unwrap()
            .holds());
        let r = finite_shortcut_check(&fam(vec![u(1, 2), u(1, 2)]), &b).unwrap();
        assert_eq!((r.coverings, r.packings), (2, 2));
        let empty = MatroidFamily::of(ElementSet::empty(), vec![]).unwrap();
        assert!(finite_shortcut_check(&empty, &b).unwrap().holds());
    }
}
