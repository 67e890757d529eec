//! Finite matroid oracles.
//!
//! A [`Matroid`] is an immutable independence oracle over a ground set of
//! element indices. Rank, span, circuits and bases are all derived from it.
//! Every kind also has a direct rank routine; [`Matroid::rank_greedy`] is the
//! generic independence-only path and the two are cross-checked in tests.

use std::fmt;
use std::sync::Arc;

use crate::error::{input, precondition, Result};
use crate::set::{Element, ElementSet, MAX_ELEMENTS};

#[derive(Clone)]
pub struct Matroid {
    node: Arc<Node>,
}

struct Node {
    ground: ElementSet,
    full_rank: usize,
    kind: Kind,
}

enum Kind {
    Uniform {
        rank: usize,
    },
    Graphic {
        vertices: usize,
        /// Endpoints indexed by element; unused slots are never queried.
        ends: Vec<(u16, u16)>,
    },
    Partition {
        blocks: Vec<(ElementSet, usize)>,
    },
    LinearGf2 {
        /// Column vectors indexed by element.
        columns: Vec<u64>,
    },
    Free,
    Zero,
    Dual(Matroid),
    /// Deletion is implicit in the ground set.
    Minor {
        inner: Matroid,
        /// Greedy base of the contracted set, fixed at construction.
        contract_base: ElementSet,
    },
    DirectSum(Vec<Matroid>),
    Looped {
        inner: Matroid,
        loops: ElementSet,
    },
    ParallelClone {
        inner: Matroid,
        original: Element,
        clone: Element,
    },
    Relabeled {
        inner: Matroid,
        /// Inner element for each outer element, indexed by outer element.
        to_inner: Vec<Element>,
    },
    /// Flips the answer for exactly one subset. Fault injection only.
    Corrupted {
        inner: Matroid,
        flipped: ElementSet,
    },
}

impl Matroid {
    fn build(ground: ElementSet, kind: Kind) -> Matroid {
        let mut node = Node {
            ground,
            full_rank: 0,
            kind,
        };
        node.full_rank = node.rank(ground);
        Matroid {
            node: Arc::new(node),
        }
    }

    /// `U_{rank,|ground|}`: a set is independent iff it has at most `rank` elements.
    pub fn uniform(ground: ElementSet, rank: usize) -> Result<Matroid> {
        if rank > ground.len() {
            return input(format!(
                "uniform rank {rank} exceeds ground size {}",
                ground.len()
            ));
        }
        Ok(Self::build(ground, Kind::Uniform { rank }))
    }

    /// Cycle matroid of a multigraph. Self-loops are matroid loops.
    pub fn graphic(vertices: usize, edges: &[(Element, usize, usize)]) -> Result<Matroid> {
        if vertices > u16::MAX as usize {
            return input("too many vertices");
        }
        let mut ground = ElementSet::empty();
        let bound = edges.iter().map(|e| e.0 + 1).max().unwrap_or(0);
        let mut ends = vec![(0u16, 0u16); bound];
        for &(e, u, v) in edges {
            check_index(e)?;
            if ground.contains(e) {
                return input(format!("edge element {e} listed twice"));
            }
            if u >= vertices || v >= vertices {
                return input(format!(
                    "edge element {e} has an endpoint outside the vertex list"
                ));
            }
            ground.insert(e);
            ends[e] = (u as u16, v as u16);
        }
        Ok(Self::build(ground, Kind::Graphic { vertices, ends }))
    }

    /// Partition matroid: at most `capacity` elements from each block.
    pub fn partition(blocks: &[(ElementSet, usize)]) -> Result<Matroid> {
        let mut ground = ElementSet::empty();
        for (b, _) in blocks {
            if !b.is_disjoint(&ground) {
                return input("partition blocks overlap");
            }
            check_set(*b)?;
            ground |= *b;
        }
        Ok(Self::build(
            ground,
            Kind::Partition {
                blocks: blocks.to_vec(),
            },
        ))
    }

    /// Column matroid over GF(2); each column is a bit vector of at most 64 rows.
    pub fn linear_gf2(columns: &[(Element, u64)]) -> Result<Matroid> {
        let mut ground = ElementSet::empty();
        let bound = columns.iter().map(|c| c.0 + 1).max().unwrap_or(0);
        let mut cols = vec![0u64; bound];
        for &(e, v) in columns {
            check_index(e)?;
            if ground.contains(e) {
                return input(format!("column for element {e} listed twice"));
            }
            ground.insert(e);
            cols[e] = v;
        }
        Ok(Self::build(ground, Kind::LinearGf2 { columns: cols }))
    }

    /// Every subset is independent.
    pub fn free(ground: ElementSet) -> Matroid {
        Self::build(ground, Kind::Free)
    }

    /// Every element is a loop.
    pub fn zero(ground: ElementSet) -> Matroid {
        Self::build(ground, Kind::Zero)
    }

    /// Bases of the dual are the complements of the bases.
    pub fn dual(&self) -> Matroid {
        Self::build(self.ground(), Kind::Dual(self.clone()))
    }

    /// `(M / contract) \ delete`, on `ground \ (contract ∪ delete)`.
    pub fn minor(&self, contract: ElementSet, delete: ElementSet) -> Result<Matroid> {
        if !contract.is_disjoint(&delete) {
            return input("minor: contract and delete sets overlap");
        }
        if !(contract | delete).is_subset(&self.ground()) {
            return input("minor: contract/delete set not inside the ground set");
        }
        if contract.is_empty() && delete.is_empty() {
            return Ok(self.clone());
        }
        let contract_base = self.extend_to_base_within(ElementSet::empty(), contract)?;
        Ok(Self::build(
            self.ground() - contract - delete,
            Kind::Minor {
                inner: self.clone(),
                contract_base,
            },
        ))
    }

    /// `M ↾ x`.
    pub fn restrict(&self, x: ElementSet) -> Result<Matroid> {
        if !x.is_subset(&self.ground()) {
            return input("restrict: set not inside the ground set");
        }
        self.minor(ElementSet::empty(), self.ground() - x)
    }

    /// `M / x`.
    pub fn contract(&self, x: ElementSet) -> Result<Matroid> {
        self.minor(x, ElementSet::empty())
    }

    /// `M \ x`.
    pub fn delete(&self, x: ElementSet) -> Result<Matroid> {
        self.minor(ElementSet::empty(), x)
    }

    /// `M . x`, the contraction of the complement of `x`.
    pub fn contract_onto(&self, x: ElementSet) -> Result<Matroid> {
        if !x.is_subset(&self.ground()) {
            return input("contract_onto: set not inside the ground set");
        }
        self.minor(self.ground() - x, ElementSet::empty())
    }

    /// `(M \ x) ⊕ (x, {∅})` on the same ground set.
    pub fn declare_loops(&self, x: ElementSet) -> Result<Matroid> {
        if !x.is_subset(&self.ground()) {
            return input("declare_loops: set not inside the ground set");
        }
        if x.is_empty() {
            return Ok(self.clone());
        }
        Ok(Self::build(
            self.ground(),
            Kind::Looped {
                inner: self.clone(),
                loops: x,
            },
        ))
    }

    /// Componentwise independence over pairwise disjoint grounds.
    pub fn direct_sum(parts: Vec<Matroid>) -> Result<Matroid> {
        let mut ground = ElementSet::empty();
        for p in &parts {
            if !p.ground().is_disjoint(&ground) {
                return input("direct_sum: ground sets overlap");
            }
            ground |= p.ground();
        }
        Ok(Self::build(ground, Kind::DirectSum(parts)))
    }

    /// Adds `clone` as an element parallel to `original`.
    ///
    /// The pair `{original, clone}` is a circuit unless `original` is a loop, in
    /// which case `clone` is a loop as well.
    pub fn parallel_clone(&self, original: Element, clone: Element) -> Result<Matroid> {
        if !self.ground().contains(original) {
            return input(format!(
                "parallel_clone: element {original} not in the ground set"
            ));
        }
        check_index(clone)?;
        if self.ground().contains(clone) {
            return input(format!(
                "parallel_clone: identifier {clone} already in the ground set"
            ));
        }
        Ok(Self::build(
            self.ground().with(clone),
            Kind::ParallelClone {
                inner: self.clone(),
                original,
                clone,
            },
        ))
    }

    /// Isomorphic copy under the bijection given as `(outer, inner)` pairs.
    pub fn relabel(&self, pairs: &[(Element, Element)]) -> Result<Matroid> {
        let mut ground = ElementSet::empty();
        let mut image = ElementSet::empty();
        let bound = pairs.iter().map(|p| p.0 + 1).max().unwrap_or(0);
        let mut to_inner = vec![usize::MAX; bound];
        for &(outer, inner) in pairs {
            check_index(outer)?;
            if ground.contains(outer) || image.contains(inner) {
                return input("relabel: map is not injective");
            }
            ground.insert(outer);
            image.insert(inner);
            to_inner[outer] = inner;
        }
        if image != self.ground() {
            return input("relabel: map does not cover the ground set exactly");
        }
        Ok(Self::build(
            ground,
            Kind::Relabeled {
                inner: self.clone(),
                to_inner,
            },
        ))
    }

    /// A broken oracle that flips the independence answer for `flipped`.
    /// Only meant for fault-injection tests of the verification machinery.
    #[doc(hidden)]
    pub fn corrupted_for_testing(&self, flipped: ElementSet) -> Matroid {
        Self::build(
            self.ground(),
            Kind::Corrupted {
                inner: self.clone(),
                flipped,
            },
        )
    }

    pub fn ground(&self) -> ElementSet {
        self.node.ground
    }

    pub fn full_rank(&self) -> usize {
        self.node.full_rank
    }

    /// Short description of the oracle's kind.
    pub fn kind_name(&self) -> &'static str {
        match &self.node.kind {
            Kind::Uniform { .. } => "uniform",
            Kind::Graphic { .. } => "graphic",
            Kind::Partition { .. } => "partition",
            Kind::LinearGf2 { .. } => "linear_gf2",
            Kind::Free => "free",
            Kind::Zero => "zero",
            Kind::Dual(_) => "dual",
            Kind::Minor { .. } => "minor",
            Kind::DirectSum(_) => "direct_sum",
            Kind::Looped { .. } => "looped",
            Kind::ParallelClone { .. } => "parallel_clone",
            Kind::Relabeled { .. } => "relabeled",
            Kind::Corrupted { .. } => "corrupted",
        }
    }

    /// Independence test. `s` must be a subset of the ground set.
    #[inline]
    pub fn is_independent(&self, s: ElementSet) -> bool {
        debug_assert!(
            s.is_subset(&self.ground()),
            "{s:?} not inside ground {:?}",
            self.ground()
        );
        self.node.is_independent(s)
    }

    /// Checked independence test.
    pub fn try_is_independent(&self, s: ElementSet) -> Result<bool> {
        self.check_subset(s)?;
        Ok(self.node.is_independent(s))
    }

    pub fn check_subset(&self, s: ElementSet) -> Result<()> {
        match (s - self.ground()).first() {
            None => Ok(()),
            Some(e) => input(format!("element {e} is not in the ground set")),
        }
    }

    /// Rank of `x`, using the kind-specific routine.
    #[inline]
    pub fn rank(&self, x: ElementSet) -> usize {
        debug_assert!(x.is_subset(&self.ground()));
        self.node.rank(x)
    }

    /// Rank of `x` from the independence predicate alone, greedily in canonical order.
    pub fn rank_greedy(&self, x: ElementSet) -> usize {
        let mut acc = ElementSet::empty();
        for e in x {
            if self.is_independent(acc.with(e)) {
                acc.insert(e);
            }
        }
        acc.len()
    }

    pub fn is_loop(&self, e: Element) -> bool {
        !self.is_independent(ElementSet::singleton(e))
    }

    /// `{ e : rank(x + e) = rank(x) }`.
    pub fn span(&self, x: ElementSet) -> ElementSet {
        let r = self.rank(x);
        let mut out = x;
        for e in self.ground() - x {
            if self.rank(x.with(e)) == r {
                out.insert(e);
            }
        }
        out
    }

    pub fn spans(&self, x: ElementSet, e: Element) -> bool {
        x.contains(e) || self.rank(x.with(e)) == self.rank(x)
    }

    pub fn is_spanning(&self, x: ElementSet) -> bool {
        self.rank(x) == self.full_rank()
    }

    pub fn is_base(&self, x: ElementSet) -> bool {
        x.len() == self.full_rank() && self.is_independent(x)
    }

    /// The unique circuit inside `i + e`, for independent `i` spanning `e ∉ i`.
    ///
    /// Elements of `i` are dropped one at a time in canonical order while the
    /// remainder stays dependent.
    pub fn fundamental_circuit(&self, e: Element, i: ElementSet) -> Result<ElementSet> {
        self.check_subset(i.with(e))?;
        if i.contains(e) {
            return precondition(format!(
                "fundamental_circuit: element {e} already in the set"
            ));
        }
        if !self.is_independent(i) {
            return precondition("fundamental_circuit: base set is dependent");
        }
        if self.is_independent(i.with(e)) {
            return precondition(format!("fundamental_circuit: element {e} is not spanned"));
        }
        Ok(self.circuit_unchecked(e, i))
    }

    /// [`Self::fundamental_circuit`] without precondition checks.
    pub(crate) fn circuit_unchecked(&self, e: Element, i: ElementSet) -> ElementSet {
        let mut c = i.with(e);
        for f in i {
            let smaller = c.without(f);
            if !self.is_independent(smaller) {
                c = smaller;
            }
        }
        c
    }

    /// Greedy extension of independent `i` to a maximal independent subset of `x`.
    pub fn extend_to_base_within(&self, i: ElementSet, x: ElementSet) -> Result<ElementSet> {
        self.check_subset(x)?;
        if !i.is_subset(&x) {
            return precondition("extend_to_base_within: start set not inside the target set");
        }
        if !self.is_independent(i) {
            return precondition("extend_to_base_within: start set is dependent");
        }
        let mut b = i;
        for e in x - i {
            if self.is_independent(b.with(e)) {
                b.insert(e);
            }
        }
        Ok(b)
    }
}

impl Node {
    fn is_independent(&self, s: ElementSet) -> bool {
        match &self.kind {
            Kind::Uniform { rank } => s.len() <= *rank,
            Kind::Free => true,
            Kind::Zero => s.is_empty(),
            Kind::Graphic { vertices, ends } => graphic_rank(*vertices, ends, s, true) == s.len(),
            Kind::LinearGf2 { columns } => gf2_rank(columns, s, true) == s.len(),
            Kind::Partition { blocks } => blocks.iter().all(|(b, cap)| (s & *b).len() <= *cap),
            Kind::Dual(m) => m.rank(m.ground() - s) == m.full_rank(),
            Kind::Minor {
                inner,
                contract_base,
                ..
            } => inner.is_independent(s | *contract_base),
            Kind::DirectSum(parts) => parts.iter().all(|p| p.is_independent(s & p.ground())),
            Kind::Looped { inner, loops } => s.is_disjoint(loops) && inner.is_independent(s),
            Kind::ParallelClone {
                inner,
                original,
                clone,
            } => {
                if s.contains(*clone) {
                    !s.contains(*original)
                        && inner.is_independent(s.without(*clone).with(*original))
                } else {
                    inner.is_independent(s)
                }
            }
            Kind::Relabeled { inner, to_inner } => inner.is_independent(map_set(to_inner, s)),
            Kind::Corrupted { inner, flipped } => inner.is_independent(s) != (s == *flipped),
        }
    }

    fn rank(&self, x: ElementSet) -> usize {
        match &self.kind {
            Kind::Uniform { rank } => x.len().min(*rank),
            Kind::Free => x.len(),
            Kind::Zero => 0,
            Kind::Graphic { vertices, ends } => graphic_rank(*vertices, ends, x, false),
            Kind::LinearGf2 { columns } => gf2_rank(columns, x, false),
            Kind::Partition { blocks } => {
                blocks.iter().map(|(b, cap)| (x & *b).len().min(*cap)).sum()
            }
            Kind::Dual(m) => x.len() + m.rank(m.ground() - x) - m.full_rank(),
            Kind::Minor {
                inner,
                contract_base,
                ..
            } => inner.rank(x | *contract_base) - contract_base.len(),
            Kind::DirectSum(parts) => parts.iter().map(|p| p.rank(x & p.ground())).sum(),
            Kind::Looped { inner, loops } => inner.rank(x - *loops),
            Kind::ParallelClone {
                inner,
                original,
                clone,
            } => {
                if x.contains(*clone) {
                    inner.rank(x.without(*clone).with(*original))
                } else {
                    inner.rank(x)
                }
            }
            Kind::Relabeled { inner, to_inner } => inner.rank(map_set(to_inner, x)),
            Kind::Corrupted { .. } => {
                let mut acc = ElementSet::empty();
                for e in x {
                    if self.is_independent(acc.with(e)) {
                        acc.insert(e);
                    }
                }
                acc.len()
            }
        }
    }
}

#[inline]
fn map_set(to_inner: &[Element], s: ElementSet) -> ElementSet {
    s.iter().map(|e| to_inner[e]).collect()
}

fn graphic_rank(vertices: usize, ends: &[(u16, u16)], s: ElementSet, stop_on_cycle: bool) -> usize {
    let mut parent: Vec<u16> = (0..vertices as u16).collect();
    fn find(parent: &mut [u16], mut v: u16) -> u16 {
        while parent[v as usize] != v {
            let p = parent[v as usize];
            parent[v as usize] = parent[p as usize];
            v = p;
        }
        v
    }
    let mut rank = 0;
    for e in s {
        let (u, v) = ends[e];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            if stop_on_cycle {
                return usize::MAX;
            }
        } else {
            parent[ru as usize] = rv;
            rank += 1;
        }
    }
    rank
}

fn gf2_rank(columns: &[u64], s: ElementSet, stop_on_dependence: bool) -> usize {
    // basis[b] holds a vector whose highest set bit is b
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for e in s {
        let mut v = columns[e];
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
        if v == 0 && stop_on_dependence {
            return usize::MAX;
        }
    }
    rank
}

fn check_index(e: Element) -> Result<()> {
    if e >= MAX_ELEMENTS {
        return input(format!(
            "element index {e} exceeds the cap of {MAX_ELEMENTS}"
        ));
    }
    Ok(())
}

fn check_set(s: ElementSet) -> Result<()> {
    check_index(s.bound().saturating_sub(1))
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("kind", &self.kind_name())
            .field("ground", &self.ground())
            .field("rank", &self.full_rank())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K4 on vertices 1..4 (stored 0..3); edge ij is element index per `K4_EDGES`.
    pub(crate) const K4_EDGES: [(usize, usize); 6] =
        [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

    fn k4() -> Matroid {
        let edges: Vec<_> = K4_EDGES
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (i, u - 1, v - 1))
            .collect();
        Matroid::graphic(4, &edges).unwrap()
    }

    fn edge(u: usize, v: usize) -> Element {
        K4_EDGES
            .iter()
            .position(|&p| p == (u.min(v), u.max(v)))
            .unwrap()
    }

    fn edges(list: &[(usize, usize)]) -> ElementSet {
        list.iter().map(|&(u, v)| edge(u, v)).collect()
    }

    /// Independent cycle check on an edge set, used as an oracle for graphic answers.
    fn has_cycle(list: &[(usize, usize)]) -> bool {
        // a forest on V vertices with c components has V - c edges
        let mut verts: Vec<usize> = list.iter().flat_map(|&(u, v)| [u, v]).collect();
        verts.sort();
        verts.dedup();
        let mut comp: Vec<usize> = verts.clone();
        for &(u, v) in list {
            let (cu, cv) = (
                comp[verts.iter().position(|&x| x == u).unwrap()],
                comp[verts.iter().position(|&x| x == v).unwrap()],
            );
            for c in comp.iter_mut() {
                if *c == cu {
                    *c = cv;
                }
            }
        }
        let mut roots = comp.clone();
        roots.sort();
        roots.dedup();
        list.len() > verts.len() - roots.len()
    }

    #[test]
    fn uniform_independence() {
        let m = Matroid::uniform(set![0, 1], 1).unwrap();
        assert!(m.is_independent(set![0]));
        assert!(!m.is_independent(set![0, 1]));
        assert!(Matroid::uniform(set![0], 2).is_err());
    }

    #[test]
    fn graphic_triangle_is_dependent() {
        let tri = [(1, 2), (2, 3), (1, 3)];
        assert!(has_cycle(&tri));
        assert!(!k4().is_independent(edges(&tri)));
        assert!(k4().is_independent(edges(&[(1, 2), (2, 3), (3, 4)])));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matroid::free(set![0, 1, 2]).rank(set![0, 1]), 2);
        assert_eq!(Matroid::zero(set![0, 1]).rank(set![0, 1]), 0);
        // spanning trees of K4 have 3 edges; brute force over all subsets
        let m = k4();
        let brute = m
            .ground()
            .subsets()
            .filter(|s| m.is_independent(*s))
            .map(|s| s.len())
            .max();
        assert_eq!(brute, Some(3));
        assert_eq!(m.rank(m.ground()), 3);
    }

    #[test]
    fn fundamental_circuit_examples() {
        let u12 = Matroid::uniform(set![0, 1], 1).unwrap();
        assert_eq!(u12.fundamental_circuit(1, set![0]).unwrap(), set![0, 1]);

        let c = k4()
            .fundamental_circuit(edge(1, 3), edges(&[(1, 2), (2, 3), (3, 4)]))
            .unwrap();
        assert_eq!(c, edges(&[(1, 2), (2, 3), (1, 3)]));
        assert!(has_cycle(&[(1, 2), (2, 3), (1, 3)]));

        let u23 = Matroid::uniform(set![0, 1, 2], 2).unwrap();
        assert_eq!(
            u23.fundamental_circuit(2, set![0, 1]).unwrap(),
            set![0, 1, 2]
        );
    }

    #[test]
    fn fundamental_circuit_preconditions() {
        let u23 = Matroid::uniform(set![0, 1, 2], 2).unwrap();
        assert!(matches!(
            u23.fundamental_circuit(0, set![0, 1]),
            Err(crate::Error::Precondition(_))
        ));
        assert!(matches!(
            u23.fundamental_circuit(2, set![0]),
            Err(crate::Error::Precondition(_))
        ));
        let u13 = Matroid::uniform(set![0, 1, 2], 1).unwrap();
        assert!(matches!(
            u13.fundamental_circuit(2, set![0, 1]),
            Err(crate::Error::Precondition(_))
        ));
        assert!(matches!(
            u13.fundamental_circuit(9, set![0]),
            Err(crate::Error::Input(_))
        ));
    }

    #[test]
    fn span_examples() {
        assert_eq!(Matroid::zero(set![0, 1]).span(set![]), set![0, 1]);
        assert_eq!(
            Matroid::uniform(set![0, 1, 2], 1).unwrap().span(set![0]),
            set![0, 1, 2]
        );
        assert_eq!(
            k4().span(edges(&[(1, 2), (2, 3)])),
            edges(&[(1, 2), (2, 3), (1, 3)])
        );
    }

    #[test]
    fn extend_to_base_examples() {
        let free = Matroid::free(set![0, 1]);
        assert_eq!(
            free.extend_to_base_within(set![], set![0, 1]).unwrap(),
            set![0, 1]
        );
        let u23 = Matroid::uniform(set![0, 1, 2], 2).unwrap();
        let b = u23.extend_to_base_within(set![1], set![0, 1, 2]).unwrap();
        assert_eq!(b, set![0, 1]);
        // brute maximality: no element of the target can be added
        assert!((set![0, 1, 2] - b)
            .iter()
            .all(|e| !u23.is_independent(b.with(e))));
        let base = k4().extend_to_base_within(set![], k4().ground()).unwrap();
        assert_eq!(
            k4().extend_to_base_within(base, k4().ground()).unwrap(),
            base
        );
        assert!(u23
            .extend_to_base_within(set![0, 1, 2], set![0, 1, 2])
            .is_err());
    }

    #[test]
    fn dual_examples() {
        let free = Matroid::free(set![0, 1]);
        let d = free.dual();
        for s in free.ground().subsets() {
            assert_eq!(d.is_independent(s), s.is_empty());
        }
        let u13 = Matroid::uniform(set![0, 1, 2], 1).unwrap();
        let u23 = Matroid::uniform(set![0, 1, 2], 2).unwrap();
        for s in u13.ground().subsets() {
            assert_eq!(u13.dual().is_independent(s), u23.is_independent(s));
        }
        let m = k4();
        let dd = m.dual().dual();
        assert_eq!(m.ground().subsets().count(), 64);
        for s in m.ground().subsets() {
            assert_eq!(dd.is_independent(s), m.is_independent(s));
        }
    }

    #[test]
    fn minor_examples() {
        let m = k4().minor(edges(&[(1, 2)]), set![]).unwrap();
        assert!(!m.is_independent(edges(&[(2, 3), (1, 3)])));
        assert!(m.is_independent(edges(&[(2, 3), (3, 4)])));

        let id = k4().minor(set![], set![]).unwrap();
        for s in k4().ground().subsets() {
            assert_eq!(id.is_independent(s), k4().is_independent(s));
        }

        let u23 = Matroid::uniform(set![0, 1, 2], 2).unwrap();
        let c = u23.minor(set![0], set![]).unwrap();
        let u12 = Matroid::uniform(set![1, 2], 1).unwrap();
        assert_eq!(c.ground(), set![1, 2]);
        for s in c.ground().subsets() {
            assert_eq!(c.is_independent(s), u12.is_independent(s));
        }
        assert!(u23.minor(set![0], set![0, 1]).is_err());
    }

    #[test]
    fn declare_loops_examples() {
        let m = Matroid::free(set![0, 1]).declare_loops(set![1]).unwrap();
        assert!(!m.is_independent(set![1]));
        assert!(m.is_independent(set![0]));
        let same = k4().declare_loops(set![]).unwrap();
        assert_eq!(same.full_rank(), 3);
        let l = k4().declare_loops(edges(&[(1, 2)])).unwrap();
        assert_eq!(l.rank(l.ground()), 3);
        assert_eq!(l.ground(), k4().ground());
    }

    #[test]
    fn direct_sum_examples() {
        let s = Matroid::direct_sum(vec![Matroid::free(set![0]), Matroid::zero(set![1])]).unwrap();
        assert!(s.is_independent(set![0]));
        assert!(!s.is_independent(set![1]));
        let empty = Matroid::direct_sum(vec![]).unwrap();
        assert_eq!(empty.ground(), set![]);
        assert!(empty.is_independent(set![]));
        let u = Matroid::direct_sum(vec![
            Matroid::uniform(set![0, 1], 1).unwrap(),
            Matroid::uniform(set![2, 3], 1).unwrap(),
        ])
        .unwrap();
        let brute = u
            .ground()
            .subsets()
            .filter(|s| u.is_independent(*s))
            .map(|s| s.len())
            .max();
        assert_eq!(brute, Some(2));
        assert_eq!(u.rank(u.ground()), 2);
        assert!(
            Matroid::direct_sum(vec![Matroid::free(set![0]), Matroid::free(set![0, 1])]).is_err()
        );
    }

    #[test]
    fn parallel_clone_examples() {
        let m = Matroid::free(set![0]).parallel_clone(0, 1).unwrap();
        assert!(!m.is_independent(set![0, 1]));
        assert!(m.is_independent(set![1]));
        let z = Matroid::zero(set![0]).parallel_clone(0, 1).unwrap();
        assert!(!z.is_independent(set![1]));
        let u = Matroid::uniform(set![0, 1, 2], 2)
            .unwrap()
            .parallel_clone(0, 3)
            .unwrap();
        let brute = u
            .ground()
            .subsets()
            .filter(|s| u.is_independent(*s))
            .map(|s| s.len())
            .max();
        assert_eq!(brute, Some(2));
        assert!(!u.is_independent(set![1, 2, 3]));
        assert!(u.is_independent(set![1, 3]));
        assert!(Matroid::free(set![0]).parallel_clone(0, 0).is_err());
        assert!(Matroid::free(set![0]).parallel_clone(1, 2).is_err());
    }

    #[test]
    fn relabel_copies_structure() {
        let u = Matroid::uniform(set![0, 1, 2], 2).unwrap();
        let r = u.relabel(&[(10, 0), (11, 1), (12, 2)]).unwrap();
        assert_eq!(r.ground(), set![10, 11, 12]);
        assert!(r.is_independent(set![10, 12]));
        assert!(!r.is_independent(set![10, 11, 12]));
        assert!(u.relabel(&[(10, 0), (11, 1)]).is_err());
    }

    #[test]
    fn linear_gf2_rank() {
        // columns 01, 10, 11 over GF(2): rank 2, the three together dependent
        let m = Matroid::linear_gf2(&[(0, 0b01), (1, 0b10), (2, 0b11), (3, 0)]).unwrap();
        assert_eq!(m.full_rank(), 2);
        assert!(!m.is_independent(set![0, 1, 2]));
        assert!(m.is_loop(3));
        assert!(m.is_independent(set![0, 2]));
    }

    #[test]
    fn partition_capacities() {
        let m = Matroid::partition(&[(set![0, 1], 1), (set![2, 3, 4], 2)]).unwrap();
        assert_eq!(m.full_rank(), 3);
        assert!(!m.is_independent(set![0, 1]));
        assert!(m.is_independent(set![0, 2, 3]));
        assert!(Matroid::partition(&[(set![0, 1], 1), (set![1], 1)]).is_err());
    }

    #[test]
    fn fast_rank_matches_greedy() {
        let ms = vec![
            k4(),
            k4().dual(),
            k4().minor(set![0], set![5]).unwrap(),
            k4().declare_loops(set![1, 2]).unwrap(),
            k4().parallel_clone(3, 9).unwrap(),
            Matroid::partition(&[(set![0, 1], 1), (set![2, 3, 4], 2)])
                .unwrap()
                .dual(),
        ];
        for m in ms {
            for s in m.ground().subsets() {
                assert_eq!(m.rank(s), m.rank_greedy(s), "{m:?} on {s:?}");
            }
        }
    }
}
