//! Tight sets and cowaves.
//!
//! `X` is tight when `M ↾ X` admits a covering and every covering of it has
//! all parts spanning `X`. Over finite ground sets this is equivalent to
//! `M ↾ X` being coverable with `Σ_i rank_i(X) = |X|`: equality forces every
//! covering to consist of disjoint bases, and a strict excess leaves room to
//! drop an element from some part while still covering.
//!
//! `W` is a cowave when the contraction-onto family `M . W` admits a covering.

use crate::assignment::{Assignment, Mode};
use crate::augment::{
    self, find_covering, max_disjoint_family, reachable_from, AugmentOutcome, Coverage,
    DisjointFamily,
};
use crate::error::{ensure, input, precondition, Result};
use crate::family::MatroidFamily;
use crate::set::{Element, ElementSet, MAX_ELEMENTS};

/// Evidence that a set is tight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightCertificate {
    pub set: ElementSet,
    /// A disjoint covering of `M ↾ set`; each part is a base of its restriction.
    pub covering: Assignment,
    /// `rank_i(set)` for every member.
    pub ranks: Vec<usize>,
}

impl TightCertificate {
    /// Checks the rank identity and the covering against fresh oracle queries.
    pub fn verify(&self, fam: &MatroidFamily) -> bool {
        let x = self.set;
        if !x.is_subset(&fam.ground()) || self.ranks.len() != fam.len() {
            return false;
        }
        let ranks_ok = (0..fam.len()).all(|i| fam.matroid(i).rank(x) == self.ranks[i]);
        if !ranks_ok || self.ranks.iter().sum::<usize>() != x.len() {
            return false;
        }
        let Ok(restricted) = fam.restrict(x) else {
            return false;
        };
        self.covering
            .with_mode(Mode::Covering)
            .is_valid(&restricted)
            && (0..fam.len()).all(|i| fam.matroid(i).rank(self.covering.parts[i]) == self.ranks[i])
    }
}

/// Evidence that `M . set` admits a covering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CowaveWitness {
    pub set: ElementSet,
    pub covering: Assignment,
}

impl CowaveWitness {
    pub fn verify(&self, fam: &MatroidFamily) -> bool {
        match fam.contract_onto(self.set) {
            Ok(c) => self.covering.with_mode(Mode::Covering).is_valid(&c),
            Err(_) => false,
        }
    }
}

/// A tight-set certificate for `x`, or `None` if `x` is not tight.
pub fn is_tight(fam: &MatroidFamily, x: ElementSet) -> Result<Option<TightCertificate>> {
    if !x.is_subset(&fam.ground()) {
        return input(format!("set {x:?} is not inside the ground set"));
    }
    let ranks: Vec<usize> = fam.matroids().map(|m| m.rank(x)).collect();
    if ranks.iter().sum::<usize>() != x.len() {
        return Ok(None);
    }
    let restricted = fam.restrict(x)?;
    match find_covering(&restricted)? {
        Coverage::Uncoverable(_) => Ok(None),
        Coverage::Covered(covering) => {
            let cert = TightCertificate {
                set: x,
                covering,
                ranks,
            };
            ensure(cert.verify(fam), || {
                format!("tight certificate for {x:?} failed re-verification")
            })?;
            Ok(Some(cert))
        }
    }
}

fn fresh_index(ground: ElementSet) -> Result<Element> {
    match (0..MAX_ELEMENTS).find(|&i| !ground.contains(i)) {
        Some(i) => Ok(i),
        None => input(format!(
            "no free element index below the cap of {MAX_ELEMENTS}"
        )),
    }
}

/// The largest tight set, with its certificate.
///
/// `x` lies in a tight set iff adding a parallel clone of `x` to every member
/// makes the family uncoverable. Starting from one disjoint covering of `E`,
/// a single augmentation from the clone decides this for each `x`.
pub fn largest_tight_set(fam: &MatroidFamily) -> Result<TightCertificate> {
    let covering = match find_covering(fam)? {
        Coverage::Covered(c) => c,
        Coverage::Uncoverable(_) => {
            return precondition("largest_tight_set: the family admits no covering");
        }
    };
    let base = DisjointFamily::new(covering.parts);
    let clone = fresh_index(fam.ground())?;
    let mut tight = ElementSet::empty();
    for x in fam.ground() {
        let cloned = fam.map(fam.ground().with(clone), |_, m| m.parallel_clone(x, clone))?;
        if let AugmentOutcome::Dual { .. } = augment::augment(&cloned, &base, clone)? {
            tight.insert(x);
        }
    }
    match is_tight(fam, tight)? {
        Some(cert) => Ok(cert),
        None => crate::error::internal(format!("union of tight sets {tight:?} is not tight")),
    }
}

/// A covering of `M . w`, if `w` is a cowave.
pub fn is_cowave(fam: &MatroidFamily, w: ElementSet) -> Result<Option<CowaveWitness>> {
    fam.check_subset(w)?;
    match find_covering(&fam.contract_onto(w)?)? {
        Coverage::Covered(covering) => Ok(Some(CowaveWitness { set: w, covering })),
        Coverage::Uncoverable(_) => Ok(None),
    }
}

/// The union of all cowaves avoiding `e`.
///
/// Cowaves of `M` avoiding `e` are exactly the cowaves of `N = M / e`. For a
/// maximum disjoint independent family of `N`, the set `X*` reachable from its
/// uncovered elements is the smallest minimiser of the union rank formula, so
/// `W = (E - e) \ X*` is the largest cowave of `N`, covered by the parts
/// restricted to `W`. This reaches the fixpoint of repeatedly discarding
/// unreachable parts in one pass.
pub fn largest_cowave_avoiding(fam: &MatroidFamily, e: Element) -> Result<CowaveWitness> {
    fam.check_subset(ElementSet::singleton(e))?;
    let n = fam.contract(ElementSet::singleton(e))?;
    let (family, uncovered) = max_disjoint_family(&n)?;
    let reached = reachable_from(&n, &family, uncovered)?;
    let w = n.ground() - reached;
    let parts = family.parts.iter().map(|&p| p & w).collect();
    let witness = CowaveWitness {
        set: w,
        covering: Assignment::new(Mode::Covering, parts),
    };
    ensure(witness.verify(fam), || {
        format!("cowave witness for {w:?} failed re-verification")
    })?;
    Ok(witness)
}

/// Result of [`one_more_cover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OneMoreCover {
    Covering(Assignment),
    /// A tight `X ⊆ E - e` spanning `e` in every member.
    Tight(TightCertificate),
}

/// Either a covering of `E`, or a tight set avoiding `e` that spans `e` in every member.
pub fn one_more_cover(fam: &MatroidFamily, e: Element) -> Result<OneMoreCover> {
    fam.check_subset(ElementSet::singleton(e))?;
    let rest = fam.ground().without(e);
    if !find_covering(&fam.restrict(rest)?)?.is_covered() {
        return precondition(format!("one_more_cover: E - {e} admits no covering"));
    }
    if let Coverage::Covered(c) = find_covering(fam)? {
        return Ok(OneMoreCover::Covering(c));
    }
    let w = largest_cowave_avoiding(fam, e)?;
    let x = rest - w.set;
    let cert = match is_tight(fam, x)? {
        Some(c) => c,
        None => {
            return crate::error::internal(format!(
                "complement {x:?} of the largest cowave is not tight"
            ))
        }
    };
    ensure(fam.matroids().all(|m| m.spans(x, e)), || {
        format!("tight set {x:?} does not span element {e} in every member")
    })?;
    Ok(OneMoreCover::Tight(cert))
}

/// A tight `X` with `e ∈ span_j(X) \ X` when no covering puts `e` in part `j`.
pub fn never_in_cover(
    fam: &MatroidFamily,
    e: Element,
    j: usize,
) -> Result<Option<TightCertificate>> {
    fam.check_subset(ElementSet::singleton(e))?;
    if j >= fam.len() {
        return precondition(format!("member index {j} out of range"));
    }
    if !find_covering(fam)?.is_covered() {
        return precondition("never_in_cover: the family admits no covering");
    }
    if augment::coverable_forcing(fam, e, j)?.is_some() {
        return Ok(None);
    }
    let forced = fam.loop_except(e, j)?;
    match one_more_cover(&forced, e)? {
        OneMoreCover::Covering(_) => crate::error::internal(
            "forced family is uncoverable yet one_more_cover found a covering",
        ),
        OneMoreCover::Tight(t) => {
            let cert = is_tight(fam, t.set)?;
            ensure(
                cert.is_some() && !t.set.contains(e) && fam.matroid(j).spans(t.set, e),
                || format!("never_in_cover witness {:?} is invalid", t.set),
            )?;
            Ok(cert)
        }
    }
}

/// Extends a covering `q` of the tight set `x` to a covering of `E`.
pub fn extend_covering_through_tight(
    fam: &MatroidFamily,
    x: ElementSet,
    q: &Assignment,
) -> Result<Assignment> {
    if is_tight(fam, x)?.is_none() {
        return precondition(format!("extend_covering_through_tight: {x:?} is not tight"));
    }
    if !q.with_mode(Mode::Covering).is_valid(&fam.restrict(x)?) {
        return precondition("extend_covering_through_tight: not a covering of the tight set");
    }
    let rest = match find_covering(&fam.contract(x)?)? {
        Coverage::Covered(c) => c,
        Coverage::Uncoverable(_) => {
            return precondition("extend_covering_through_tight: the family admits no covering");
        }
    };
    let parts = q
        .parts
        .iter()
        .zip(&rest.parts)
        .map(|(&a, &b)| a | b)
        .collect();
    let out = Assignment::new(Mode::Covering, parts);
    ensure(out.is_valid(fam), || "extended covering is invalid".into())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matroid;

    fn u(r: usize, n: usize) -> Matroid {
        Matroid::uniform(ElementSet::range(n), r).unwrap()
    }

    fn fam(ms: Vec<Matroid>) -> MatroidFamily {
        MatroidFamily::of(ms[0].ground(), ms).unwrap()
    }

    #[test]
    fn is_tight_examples() {
        assert!(is_tight(&fam(vec![u(1, 2), u(1, 2)]), set![0, 1])
            .unwrap()
            .is_some());
        assert!(
            is_tight(&fam(vec![u(1, 2), Matroid::free(set![0, 1])]), set![0, 1])
                .unwrap()
                .is_none()
        );
        let empty = is_tight(&fam(vec![u(1, 3), u(2, 3)]), set![])
            .unwrap()
            .unwrap();
        assert_eq!(empty.ranks, vec![0, 0]);
        assert!(is_tight(&fam(vec![u(1, 2)]), set![5]).is_err());
    }

    #[test]
    fn largest_tight_examples() {
        assert_eq!(
            largest_tight_set(&fam(vec![u(1, 2), u(1, 2)])).unwrap().set,
            set![0, 1]
        );
        assert_eq!(
            largest_tight_set(&fam(vec![u(1, 2), Matroid::free(set![0, 1])]))
                .unwrap()
                .set,
            set![]
        );
        assert_eq!(
            largest_tight_set(&fam(vec![u(2, 3), u(1, 3)])).unwrap().set,
            set![0, 1, 2]
        );
        assert!(matches!(
            largest_tight_set(&fam(vec![u(1, 3), u(1, 3)])),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn cowave_examples() {
        let f = fam(vec![u(1, 3), u(1, 3)]);
        assert!(is_cowave(&f, set![]).unwrap().is_some());
        assert!(is_cowave(&f, set![2]).unwrap().is_none());
        let ff = fam(vec![Matroid::free(set![0]), Matroid::free(set![0])]);
        let w = is_cowave(&ff, set![0]).unwrap().unwrap();
        assert_eq!(w.covering.parts, vec![set![0], set![]]);
    }

    #[test]
    fn largest_cowave_examples() {
        let f = fam(vec![Matroid::free(set![0, 1]), Matroid::free(set![0, 1])]);
        assert_eq!(largest_cowave_avoiding(&f, 0).unwrap().set, set![1]);
        assert_eq!(
            largest_cowave_avoiding(&fam(vec![u(1, 3), u(1, 3)]), 2)
                .unwrap()
                .set,
            set![]
        );
        let single = fam(vec![Matroid::free(set![0])]);
        assert_eq!(largest_cowave_avoiding(&single, 0).unwrap().set, set![]);
    }

    #[test]
    fn one_more_cover_examples() {
        match one_more_cover(&fam(vec![u(1, 2), u(1, 2)]), 1).unwrap() {
            OneMoreCover::Covering(c) => assert_eq!(c.parts, vec![set![0], set![1]]),
            other => panic!("{other:?}"),
        }
        let f = fam(vec![u(1, 3), u(1, 3)]);
        match one_more_cover(&f, 2).unwrap() {
            OneMoreCover::Tight(t) => {
                assert_eq!(t.set, set![0, 1]);
                assert!(f.matroid(0).spans(set![0], 2) && f.matroid(1).spans(set![1], 2));
            }
            other => panic!("{other:?}"),
        }
        let ff = fam(vec![Matroid::free(set![0]), Matroid::free(set![0])]);
        match one_more_cover(&ff, 0).unwrap() {
            OneMoreCover::Covering(c) => assert_eq!(c.parts, vec![set![0], set![]]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn never_in_cover_examples() {
        let m0 = Matroid::free(set![0, 1]).declare_loops(set![1]).unwrap();
        let f = fam(vec![m0, Matroid::free(set![0, 1])]);
        assert_eq!(never_in_cover(&f, 1, 0).unwrap().unwrap().set, set![]);
        assert!(never_in_cover(&fam(vec![u(1, 2), u(1, 2)]), 0, 0)
            .unwrap()
            .is_none());
        assert!(never_in_cover(&fam(vec![Matroid::free(set![0])]), 0, 0)
            .unwrap()
            .is_none());
    }

    #[test]
    fn extend_through_tight_examples() {
        let f = fam(vec![u(1, 2), u(1, 2)]);
        let q = Assignment::new(Mode::Covering, vec![set![1], set![0]]);
        assert_eq!(
            extend_covering_through_tight(&f, set![0, 1], &q)
                .unwrap()
                .parts,
            q.parts
        );

        let f = fam(vec![u(2, 3), u(1, 3)]);
        let q = Assignment::new(Mode::Covering, vec![set![0, 1], set![2]]);
        assert_eq!(
            extend_covering_through_tight(&f, set![0, 1, 2], &q)
                .unwrap()
                .parts,
            q.parts
        );

        let empty = Assignment::new(Mode::Covering, vec![set![], set![]]);
        let c = extend_covering_through_tight(&f, set![], &empty).unwrap();
        assert!(c.is_valid(&f));
    }
}
