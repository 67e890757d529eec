//! Augmenting paths for matroid union.
//!
//! Given pairwise disjoint independent sets `(I_i)` and an uncovered element
//! `e`, either a shortest path in the exchange digraph lets `e` join the union
//! with every other span unchanged, or the elements reachable from `e` form a
//! set `X` such that each `I_i ∩ X` spans `X + e`. Over a finite ground set
//! the second case rules out any covering of `X + e`: the ranks of `X` sum to
//! `|X|` while every member spans `e` from `X`.

use std::collections::VecDeque;

use crate::assignment::{Assignment, Mode};
use crate::error::{ensure, internal, precondition, Result};
use crate::family::MatroidFamily;
use crate::matroid::Matroid;
use crate::set::{Element, ElementSet, MAX_ELEMENTS};

/// Pairwise disjoint sets `(I_i : i ∈ K)` with `I_i` independent in `M_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DisjointFamily {
    pub parts: Vec<ElementSet>,
}

impl DisjointFamily {
    pub fn empty(members: usize) -> DisjointFamily {
        DisjointFamily {
            parts: vec![ElementSet::empty(); members],
        }
    }

    pub fn new(parts: Vec<ElementSet>) -> DisjointFamily {
        DisjointFamily { parts }
    }

    pub fn union(&self) -> ElementSet {
        self.parts.iter().fold(ElementSet::empty(), |a, &p| a | p)
    }

    /// Index of the part containing `x`.
    pub fn owner(&self, x: Element) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(x))
    }

    /// Checks arity, containment in the ground set, independence and disjointness.
    pub fn validate(&self, fam: &MatroidFamily) -> Result<()> {
        if self.parts.len() != fam.len() {
            return precondition(format!(
                "disjoint family has {} parts for {} members",
                self.parts.len(),
                fam.len()
            ));
        }
        let mut seen = ElementSet::empty();
        for (i, &p) in self.parts.iter().enumerate() {
            if !p.is_subset(&fam.ground()) {
                return precondition(format!("part {i} leaves the ground set"));
            }
            if !fam.matroid(i).is_independent(p) {
                return precondition(format!("part {i} is dependent"));
            }
            if !p.is_disjoint(&seen) {
                return precondition(format!("part {i} meets an earlier part"));
            }
            seen |= p;
        }
        Ok(())
    }

    pub fn into_covering(self) -> Assignment {
        Assignment::new(Mode::Covering, self.parts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcTarget {
    Member(usize),
    Element(Element),
}

/// Arc of the exchange digraph, labelled by the member that induced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExchangeArc {
    pub from: Element,
    pub to: ArcTarget,
    pub member: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeDigraph {
    /// Sorted by source element, then member, then target.
    pub arcs: Vec<ExchangeArc>,
}

impl ExchangeDigraph {
    pub fn out_arcs(&self, x: Element) -> impl Iterator<Item = &ExchangeArc> {
        self.arcs.iter().filter(move |a| a.from == x)
    }

    pub fn has_arc(&self, from: Element, to: ArcTarget) -> bool {
        self.arcs.iter().any(|a| a.from == from && a.to == to)
    }
}

/// Out-arcs of `x` induced by member `i`: `Ok(None)` is the arc `(x, i)`,
/// `Ok(Some(c))` lists the targets `C(x, I_i) - x`.
fn member_arcs(m: &Matroid, part: ElementSet, x: Element) -> Option<ElementSet> {
    if m.is_independent(part.with(x)) {
        None
    } else {
        Some(m.circuit_unchecked(x, part).without(x))
    }
}

pub fn build_exchange_digraph(
    fam: &MatroidFamily,
    family: &DisjointFamily,
) -> Result<ExchangeDigraph> {
    family.validate(fam)?;
    let mut arcs = Vec::new();
    for x in fam.ground() {
        for (i, &part) in family.parts.iter().enumerate() {
            if part.contains(x) {
                continue;
            }
            match member_arcs(fam.matroid(i), part, x) {
                None => arcs.push(ExchangeArc {
                    from: x,
                    to: ArcTarget::Member(i),
                    member: i,
                }),
                Some(targets) => arcs.extend(targets.iter().map(|y| ExchangeArc {
                    from: x,
                    to: ArcTarget::Element(y),
                    member: i,
                })),
            }
        }
    }
    Ok(ExchangeDigraph { arcs })
}

/// Result of a breadth-first search from a set of sources.
struct Search {
    reached: ElementSet,
    /// Element path `x_0 .. x_n`, the member owning each `x_{m+1}`, and the final member `k`.
    path: Option<(Vec<Element>, Vec<usize>, usize)>,
}

/// Breadth-first search in the exchange digraph, built lazily.
///
/// Vertices are dequeued in distance order and arcs scanned by member index,
/// then element order, so the first arc into `K` ends a shortest path and the
/// predecessor choice is deterministic. A shortest path has no jumping arcs.
fn search(
    fam: &MatroidFamily,
    family: &DisjointFamily,
    sources: ElementSet,
    stop_at_member: bool,
) -> Search {
    let mut pred = [(usize::MAX, usize::MAX); MAX_ELEMENTS];
    let mut reached = sources;
    let mut queue: VecDeque<Element> = sources.iter().collect();
    while let Some(x) = queue.pop_front() {
        for (i, &part) in family.parts.iter().enumerate() {
            if part.contains(x) {
                continue;
            }
            match member_arcs(fam.matroid(i), part, x) {
                None => {
                    if stop_at_member {
                        let mut path = vec![x];
                        let mut owners = Vec::new();
                        let mut cur = x;
                        while !sources.contains(cur) {
                            let (p, label) = pred[cur];
                            owners.push(label);
                            path.push(p);
                            cur = p;
                        }
                        path.reverse();
                        owners.reverse();
                        return Search {
                            reached,
                            path: Some((path, owners, i)),
                        };
                    }
                }
                Some(targets) => {
                    for y in targets - reached {
                        reached.insert(y);
                        pred[y] = (x, i);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    Search {
        reached,
        path: None,
    }
}

/// Outcome of [`augment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugmentOutcome {
    /// `(J_i)` covers `∪I_i + e`; member `k` gained `f` and `span(J_k - f) = span(I_k)`.
    Primal {
        family: DisjointFamily,
        member: usize,
        added: Element,
    },
    /// `X ⊆ ∪I_i` with `I_i ∩ X` spanning `X + e` in every member.
    Dual { witness: ElementSet },
}

/// `(I ∪ {e_0..e_n}) \ {f_0..f_n}`, checked to be independent with the same span as `I`.
pub fn simultaneous_exchange(
    m: &Matroid,
    i: ElementSet,
    adds: &[Element],
    removes: &[Element],
) -> Result<ElementSet> {
    m.check_subset(i)?;
    if adds.len() != removes.len() {
        return precondition("simultaneous_exchange: add and remove lists differ in length");
    }
    if !m.is_independent(i) {
        return precondition("simultaneous_exchange: base set is dependent");
    }
    let span = m.span(i);
    let mut circuits = Vec::with_capacity(adds.len());
    for (idx, (&e, &f)) in adds.iter().zip(removes).enumerate() {
        m.check_subset(ElementSet::singleton(e))?;
        if i.contains(e) || !span.contains(e) {
            return precondition(format!(
                "simultaneous_exchange: element {e} is not in span(I) \\ I"
            ));
        }
        let c = m.circuit_unchecked(e, i);
        if !c.contains(f) || f == e {
            return precondition(format!(
                "simultaneous_exchange: {f} is not in the fundamental circuit of {e}"
            ));
        }
        if let Some(l) = circuits.iter().position(|c: &ElementSet| c.contains(f)) {
            return precondition(format!(
                "simultaneous_exchange: removal {idx} lies in the circuit of earlier addition {l}"
            ));
        }
        circuits.push(c);
    }
    let out = (i | adds.iter().collect::<ElementSet>()) - removes.iter().collect::<ElementSet>();
    ensure(
        m.is_independent(out) && out.len() == i.len() && out.is_subset(&span),
        || format!("simultaneous exchange on {i:?} produced {out:?} with a different span"),
    )?;
    Ok(out)
}

/// Either lets `e` join the union of `family` along a shortest augmenting
/// path, or returns the set reachable from `e` as a dual witness.
pub fn augment(fam: &MatroidFamily, family: &DisjointFamily, e: Element) -> Result<AugmentOutcome> {
    family.validate(fam)?;
    fam.check_subset(ElementSet::singleton(e))?;
    if family.union().contains(e) {
        return precondition(format!("augment: element {e} is already covered"));
    }
    let found = search(fam, family, ElementSet::singleton(e), true);
    let outcome = match found.path {
        None => AugmentOutcome::Dual {
            witness: found.reached.without(e),
        },
        Some((path, owners, k)) => {
            let mut parts = family.parts.clone();
            for (i, part) in parts.iter_mut().enumerate() {
                let mut adds = Vec::new();
                let mut removes = Vec::new();
                for (m, &owner) in owners.iter().enumerate() {
                    if owner == i {
                        adds.push(path[m]);
                        removes.push(path[m + 1]);
                    }
                }
                if !adds.is_empty() {
                    *part =
                        simultaneous_exchange(fam.matroid(i), family.parts[i], &adds, &removes)?;
                }
            }
            let f = *path.last().expect("path starts at e");
            parts[k].insert(f);
            AugmentOutcome::Primal {
                family: DisjointFamily::new(parts),
                member: k,
                added: f,
            }
        }
    };
    ensure(verify_outcome(fam, family, e, &outcome), || {
        format!("augment certificate for element {e} failed re-verification: {outcome:?}")
    })?;
    Ok(outcome)
}

/// Re-checks the invariants of an [`AugmentOutcome`] with independent span computations.
pub fn verify_outcome(
    fam: &MatroidFamily,
    before: &DisjointFamily,
    e: Element,
    outcome: &AugmentOutcome,
) -> bool {
    match outcome {
        AugmentOutcome::Primal {
            family,
            member,
            added,
        } => {
            let k = *member;
            if family.parts.len() != fam.len()
                || k >= fam.len()
                || !family.parts[k].contains(*added)
            {
                return false;
            }
            if family.validate(fam).is_err() || family.union() != before.union().with(e) {
                return false;
            }
            (0..fam.len()).all(|i| {
                let m = fam.matroid(i);
                let j = if i == k {
                    family.parts[i].without(*added)
                } else {
                    family.parts[i]
                };
                m.span(j) == m.span(before.parts[i])
            })
        }
        AugmentOutcome::Dual { witness } => {
            let x = *witness;
            if !x.is_subset(&before.union()) || x.contains(e) {
                return false;
            }
            let target = x.with(e);
            (0..fam.len()).all(|i| {
                let m = fam.matroid(i);
                target.is_subset(&m.span(before.parts[i] & x))
            })
        }
    }
}

/// Proof that no covering exists: `Σ_i rank_i(X) = |X|` and every member spans `element` from `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UncoverableCertificate {
    pub witness: ElementSet,
    pub element: Element,
}

impl UncoverableCertificate {
    pub fn verify(&self, fam: &MatroidFamily) -> bool {
        let x = self.witness;
        let e = self.element;
        x.is_subset(&fam.ground())
            && fam.ground().contains(e)
            && !x.contains(e)
            && fam.rank_sum(x) == x.len()
            && fam.matroids().all(|m| m.spans(x, e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coverage {
    /// A disjoint covering.
    Covered(Assignment),
    Uncoverable(UncoverableCertificate),
}

impl Coverage {
    pub fn covering(&self) -> Option<&Assignment> {
        match self {
            Coverage::Covered(a) => Some(a),
            Coverage::Uncoverable(_) => None,
        }
    }

    pub fn is_covered(&self) -> bool {
        matches!(self, Coverage::Covered(_))
    }
}

/// Grows a disjoint family element by element in ground order.
///
/// Stops at the first element that cannot be added and reports its dual witness.
pub fn find_covering(fam: &MatroidFamily) -> Result<Coverage> {
    let mut family = DisjointFamily::empty(fam.len());
    for e in fam.ground() {
        match augment(fam, &family, e)? {
            AugmentOutcome::Primal { family: next, .. } => family = next,
            AugmentOutcome::Dual { witness } => {
                let cert = UncoverableCertificate {
                    witness,
                    element: e,
                };
                ensure(cert.verify(fam), || {
                    format!("uncoverability certificate {cert:?} is invalid")
                })?;
                return Ok(Coverage::Uncoverable(cert));
            }
        }
    }
    let covering = family.into_covering();
    ensure(covering.is_valid(fam), || {
        "find_covering produced an invalid covering".into()
    })?;
    Ok(Coverage::Covered(covering))
}

/// A maximum-size disjoint independent family, grown greedily in ground order.
///
/// Returns the family and the elements it leaves uncovered.
pub fn max_disjoint_family(fam: &MatroidFamily) -> Result<(DisjointFamily, ElementSet)> {
    let mut family = DisjointFamily::empty(fam.len());
    let mut uncovered = ElementSet::empty();
    for e in fam.ground() {
        match augment(fam, &family, e)? {
            AugmentOutcome::Primal { family: next, .. } => family = next,
            AugmentOutcome::Dual { .. } => uncovered.insert(e),
        }
    }
    Ok((family, uncovered))
}

/// Elements reachable from `sources` in the exchange digraph of `family`.
///
/// It is an error for a member vertex to be reachable, which cannot happen
/// when `family` is maximum and `sources` are uncovered.
pub fn reachable_from(
    fam: &MatroidFamily,
    family: &DisjointFamily,
    sources: ElementSet,
) -> Result<ElementSet> {
    let s = search(fam, family, sources, true);
    if s.path.is_some() {
        return internal("reachability search found an augmenting path from a maximum family");
    }
    Ok(s.reached)
}

/// A covering with `e ∈ R_j`, if one exists.
///
/// `e` is declared a loop in every other member before searching, so any
/// covering found must put `e` in part `j`.
pub fn coverable_forcing(fam: &MatroidFamily, e: Element, j: usize) -> Result<Option<Assignment>> {
    fam.check_subset(ElementSet::singleton(e))?;
    if j >= fam.len() {
        return precondition(format!("member index {j} out of range"));
    }
    let forced = fam.loop_except(e, j)?;
    match find_covering(&forced)? {
        Coverage::Covered(a) => {
            ensure(a.parts[j].contains(e) && a.is_valid(fam), || {
                "forced covering does not place the element in the requested part".into()
            })?;
            Ok(Some(a))
        }
        Coverage::Uncoverable(_) => Ok(None),
    }
}
