//! Feasible families `⟨I_i, S_i⟩` and their extensions.
//!
//! A feasible family pins `I_i ⊆ B_i ⊆ S_i` for a base partitioning still to
//! be found. Each extension step grows some `I_i` or shrinks some `S_i` while
//! keeping a compatible covering and a compatible packing in existence; both
//! are carried along as certificates in [`Feasible`].

use crate::assignment::{Assignment, Mode};
use crate::augment::{find_covering, Coverage, UncoverableCertificate};
use crate::error::{ensure, input, internal, precondition, Error, FeasibilityBullet, Result};
use crate::family::{MatroidFamily, Member, Role};
use crate::matroid::Matroid;
use crate::set::{Element, ElementSet, MAX_ELEMENTS};
use crate::tight::{extend_covering_through_tight, is_tight, largest_tight_set, never_in_cover};

/// Pairs `(⟨I_i, S_i⟩ : i ∈ K)` satisfying the structural conditions:
/// `I_i ⊆ S_i ⊆ E`, `I_i` independent and `S_i` spanning in `M_i`, the `I_i`
/// pairwise disjoint, and the `S_i` covering `E`.
#[derive(Debug, Clone)]
pub struct FeasibleFamily {
    family: MatroidFamily,
    lower: Vec<ElementSet>,
    upper: Vec<ElementSet>,
}

/// Validates the structural conditions and builds the family.
///
/// Whether a compatible covering or packing exists is checked separately.
pub fn make_feasible(
    family: &MatroidFamily,
    pairs: &[(ElementSet, ElementSet)],
) -> Result<FeasibleFamily> {
    if pairs.len() != family.len() {
        return input(format!(
            "{} pairs given for {} members",
            pairs.len(),
            family.len()
        ));
    }
    let e = family.ground();
    let fail = |bullet, index| Err(Error::Validation { bullet, index });
    for (i, &(lo, hi)) in pairs.iter().enumerate() {
        if !lo.is_subset(&hi) || !hi.is_subset(&e) {
            return fail(FeasibilityBullet::Sandwich, i);
        }
        if !family.matroid(i).is_independent(lo) {
            return fail(FeasibilityBullet::LowerIndependent, i);
        }
        if !family.matroid(i).is_spanning(hi) {
            return fail(FeasibilityBullet::UpperSpanning, i);
        }
    }
    let mut seen = ElementSet::empty();
    for (i, &(lo, _)) in pairs.iter().enumerate() {
        if !lo.is_disjoint(&seen) {
            return fail(FeasibilityBullet::LowerDisjoint, i);
        }
        seen |= lo;
    }
    let covered = pairs.iter().fold(ElementSet::empty(), |a, p| a | p.1);
    if let Some(x) = (e - covered).first() {
        return fail(FeasibilityBullet::UpperCovers, x);
    }
    Ok(FeasibleFamily {
        family: family.clone(),
        lower: pairs.iter().map(|p| p.0).collect(),
        upper: pairs.iter().map(|p| p.1).collect(),
    })
}

impl FeasibleFamily {
    /// `⟨∅, E⟩` for every member.
    pub fn seed(family: &MatroidFamily) -> Result<FeasibleFamily> {
        let pairs = vec![(ElementSet::empty(), family.ground()); family.len()];
        make_feasible(family, &pairs)
    }

    pub fn family(&self) -> &MatroidFamily {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[ElementSet] {
        &self.lower
    }

    pub fn upper(&self) -> &[ElementSet] {
        &self.upper
    }

    pub fn pairs(&self) -> Vec<(ElementSet, ElementSet)> {
        self.lower
            .iter()
            .copied()
            .zip(self.upper.iter().copied())
            .collect()
    }

    pub fn lower_union(&self) -> ElementSet {
        self.lower.iter().fold(ElementSet::empty(), |a, &p| a | p)
    }

    /// `I_i ⊆ I_i' ⊆ S_i' ⊆ S_i` for every member, with `self` as the primed family.
    pub fn extends(&self, older: &FeasibleFamily) -> bool {
        self.len() == older.len()
            && (0..self.len()).all(|i| {
                older.lower[i].is_subset(&self.lower[i])
                    && self.lower[i].is_subset(&self.upper[i])
                    && self.upper[i].is_subset(&older.upper[i])
            })
    }

    /// `I_i ⊆ A_i ⊆ S_i` for every member.
    pub fn is_compatible(&self, a: &Assignment) -> bool {
        a.parts.len() == self.len()
            && (0..self.len()).all(|i| {
                self.lower[i].is_subset(&a.parts[i]) && a.parts[i].is_subset(&self.upper[i])
            })
    }

    fn with_pairs(&self, pairs: &[(ElementSet, ElementSet)]) -> Result<FeasibleFamily> {
        make_feasible(&self.family, pairs)
    }

    fn with_lower_added(&self, j: usize, x: Element) -> Result<FeasibleFamily> {
        let mut pairs = self.pairs();
        pairs[j].0.insert(x);
        self.with_pairs(&pairs)
    }
}

/// `M(F)`: each `M_i` with `I_i` contracted, the other `I_j` deleted, and the
/// remaining elements outside `S_i` declared loops, on `E \ ∪_j I_j`.
pub fn quotient(ff: &FeasibleFamily) -> Result<MatroidFamily> {
    let all = ff.lower_union();
    let ground = ff.family.ground() - all;
    ff.family.map(ground, |i, m| {
        let lo = ff.lower[i];
        m.minor(lo, all - lo)?.declare_loops(ground - ff.upper[i])
    })
}

/// An `F`-compatible covering, or an uncoverability certificate for the quotient.
pub fn covering_feasible(ff: &FeasibleFamily) -> Result<Coverage> {
    let q = quotient(ff)?;
    Ok(match find_covering(&q)? {
        Coverage::Covered(c) => {
            let parts = c
                .parts
                .iter()
                .zip(&ff.lower)
                .map(|(&r, &lo)| r | lo)
                .collect();
            let lifted = Assignment::new(Mode::Covering, parts);
            ensure(
                lifted.is_valid(&ff.family) && ff.is_compatible(&lifted),
                || "lifted quotient covering is not a compatible covering".into(),
            )?;
            Coverage::Covered(lifted)
        }
        Coverage::Uncoverable(cert) => Coverage::Uncoverable(cert),
    })
}

/// How packing questions are translated into covering questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PackingRoute {
    /// Two members only: `(R_0, R_1)` covers `M*` iff `(E \ R_0, E \ R_1)` packs `M`.
    Dual,
    /// Any number of members, through the auxiliary family on `E × K`.
    Hat,
}

impl PackingRoute {
    pub fn auto(members: usize) -> PackingRoute {
        if members == 2 {
            PackingRoute::Dual
        } else {
            PackingRoute::Hat
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PackingRoute::Dual => "dual",
            PackingRoute::Hat => "hat",
        }
    }
}

/// Packing analogue of [`UncoverableCertificate`], stated in the translated family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnpackableCertificate {
    pub route: PackingRoute,
    /// Certificate against the quotient of the translated feasible family.
    pub translated: UncoverableCertificate,
    /// Slice stride of the hat encoding (`(e, i)` is element `i * stride + e`).
    pub stride: usize,
}

impl UnpackableCertificate {
    /// Rebuilds the translated family and checks the certificate against it.
    pub fn verify(&self, ff: &FeasibleFamily) -> bool {
        let translated = match self.route {
            PackingRoute::Dual => dual_encode(ff).map(|d| d.0),
            PackingRoute::Hat => hat_family(ff.family()).and_then(|h| {
                if h.stride != self.stride {
                    return input("stride mismatch");
                }
                h.encode(ff)
            }),
        };
        match translated.and_then(|t| quotient(&t)) {
            Ok(q) => self.translated.verify(&q),
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Packability {
    Packed(Assignment),
    Unpackable(UnpackableCertificate),
}

/// `⟨E \ S_i, E \ I_i⟩` over the dual family, for two members.
fn dual_encode(ff: &FeasibleFamily) -> Result<(FeasibleFamily, MatroidFamily)> {
    if ff.len() != 2 {
        return precondition(format!(
            "the dual route needs exactly two members, found {}",
            ff.len()
        ));
    }
    let e = ff.family.ground();
    let dual = ff.family.dual();
    let pairs: Vec<_> = ff
        .pairs()
        .iter()
        .map(|&(lo, hi)| (e - hi, e - lo))
        .collect();
    let dff = make_feasible(&dual, &pairs)
        .map_err(|err| Error::Internal(format!("dual encoding invalid: {err}")))?;
    Ok((dff, dual))
}

fn complement_parts(e: ElementSet, a: &Assignment, mode: Mode) -> Assignment {
    Assignment::new(mode, a.parts.iter().map(|&p| e - p).collect())
}

/// An `F`-compatible packing, or a certificate that none exists.
pub fn packing_feasible(ff: &FeasibleFamily, route: PackingRoute) -> Result<Packability> {
    let e = ff.family.ground();
    let (outcome, stride) = match route {
        PackingRoute::Dual => {
            let (dff, _) = dual_encode(ff)?;
            let out = match covering_feasible(&dff)? {
                Coverage::Covered(c) => Ok(complement_parts(e, &c, Mode::Packing)),
                Coverage::Uncoverable(cert) => Err(cert),
            };
            (out, 0)
        }
        PackingRoute::Hat => {
            let hat = hat_family(&ff.family)?;
            let hff = hat.encode(ff)?;
            let out = match covering_feasible(&hff)? {
                Coverage::Covered(c) => {
                    let parts = (0..ff.len())
                        .map(|i| e - hat.project(c.parts[i] & hat.slice(i)))
                        .collect();
                    Ok(Assignment::new(Mode::Packing, parts))
                }
                Coverage::Uncoverable(cert) => Err(cert),
            };
            (out, hat.stride)
        }
    };
    match outcome {
        Ok(p) => {
            ensure(p.is_valid(&ff.family) && ff.is_compatible(&p), || {
                format!("{} route produced an invalid packing", route.as_str())
            })?;
            Ok(Packability::Packed(p))
        }
        Err(translated) => Ok(Packability::Unpackable(UnpackableCertificate {
            route,
            translated,
            stride,
        })),
    }
}

/// The auxiliary family on `E × K` with one extra member.
///
/// Member `i < |K|` is a copy of `M_i*` on the slice `E × {i}` with every
/// other slice made of loops; member `|K|` allows at most one element from
/// each fibre `{e} × K`. Element `(e, i)` has index `i * stride + e`.
#[derive(Debug, Clone)]
pub struct HatFamily {
    pub family: MatroidFamily,
    pub stride: usize,
    pub members: usize,
    pub base: ElementSet,
}

pub fn hat_family(fam: &MatroidFamily) -> Result<HatFamily> {
    let base = fam.ground();
    let stride = base.bound();
    let k = fam.len();
    if stride * k > MAX_ELEMENTS {
        return input(format!(
            "auxiliary family needs {} element indices, above the cap of {MAX_ELEMENTS}",
            stride * k
        ));
    }
    let mut hat = HatFamily {
        family: MatroidFamily::of(ElementSet::empty(), vec![])?,
        stride,
        members: k,
        base,
    };
    let all = (0..k).fold(ElementSet::empty(), |a, i| a | hat.slice(i));
    let mut members = Vec::with_capacity(k + 1);
    for i in 0..k {
        let pairs: Vec<_> = base.iter().map(|e| (hat.encode_element(e, i), e)).collect();
        let copy = fam.matroid(i).dual().relabel(&pairs)?;
        let m = Matroid::direct_sum(vec![copy, Matroid::zero(all - hat.slice(i))])?;
        members.push(Member::new(m, fam.role(i).flipped()));
    }
    let fibres: Vec<_> = base.iter().map(|e| (hat.fibre(e), 1)).collect();
    members.push(Member::new(Matroid::partition(&fibres)?, Role::Finitary));
    hat.family = MatroidFamily::new(all, members)?;
    Ok(hat)
}

impl HatFamily {
    pub fn encode_element(&self, e: Element, i: usize) -> Element {
        i * self.stride + e
    }

    pub fn decode_element(&self, x: Element) -> (Element, usize) {
        (x % self.stride, x / self.stride)
    }

    /// `E × {i}`.
    pub fn slice(&self, i: usize) -> ElementSet {
        self.lift(self.base, i)
    }

    /// `{e} × K`.
    pub fn fibre(&self, e: Element) -> ElementSet {
        (0..self.members)
            .map(|i| self.encode_element(e, i))
            .collect()
    }

    /// `X × {i}`.
    pub fn lift(&self, x: ElementSet, i: usize) -> ElementSet {
        x.iter().map(|e| self.encode_element(e, i)).collect()
    }

    /// Projection to the first coordinate.
    pub fn project(&self, x: ElementSet) -> ElementSet {
        x.iter().map(|y| y % self.stride).collect()
    }

    /// `Î_i = (E \ S_i) × {i}`, `Ŝ_i = (E \ I_i) × {i}`, `Î_K = ∅`, `Ŝ_K = E × K`.
    pub fn encode(&self, ff: &FeasibleFamily) -> Result<FeasibleFamily> {
        let e = self.base;
        let mut pairs: Vec<_> = ff
            .pairs()
            .iter()
            .enumerate()
            .map(|(i, &(lo, hi))| (self.lift(e - hi, i), self.lift(e - lo, i)))
            .collect();
        pairs.push((ElementSet::empty(), self.family.ground()));
        make_feasible(&self.family, &pairs)
            .map_err(|err| Error::Internal(format!("hat encoding invalid: {err}")))
    }

    /// `⟨proj((E×{i}) \ Ŝ_i), proj((E×{i}) \ Î_i)⟩` for `i ∈ K`.
    pub fn decode(&self, hff: &FeasibleFamily, fam: &MatroidFamily) -> Result<FeasibleFamily> {
        let pairs: Vec<_> = (0..self.members)
            .map(|i| {
                let s = self.slice(i);
                (
                    self.project(s - hff.upper()[i]),
                    self.project(s - hff.lower()[i]),
                )
            })
            .collect();
        make_feasible(fam, &pairs)
    }

    /// Hat covering built from a packing of the original family.
    fn covering_from_packing(&self, p: &Assignment) -> Assignment {
        let mut parts: Vec<_> = (0..self.members)
            .map(|i| self.lift(self.base - p.parts[i], i))
            .collect();
        parts
            .push((0..self.members).fold(ElementSet::empty(), |a, i| a | self.lift(p.parts[i], i)));
        Assignment::new(Mode::Covering, parts)
    }

    /// Hat packing built from a covering of the original family.
    fn packing_from_covering(&self, r: &Assignment) -> Assignment {
        let mut parts: Vec<_> = (0..self.members)
            .map(|i| self.lift(self.base - r.parts[i], i))
            .collect();
        let mut transversal = ElementSet::empty();
        for e in self.base {
            if let Some(i) = r.parts.iter().position(|p| p.contains(e)) {
                transversal.insert(self.encode_element(e, i));
            }
        }
        parts.push(transversal);
        Assignment::new(Mode::Packing, parts)
    }

    /// Original covering from a hat packing.
    fn covering_from_packing_hat(&self, p: &Assignment) -> Assignment {
        let parts = (0..self.members)
            .map(|i| self.base - self.project(p.parts[i] & self.slice(i)))
            .collect();
        Assignment::new(Mode::Covering, parts)
    }

    /// Original packing from a hat covering.
    fn packing_from_covering_hat(&self, r: &Assignment) -> Assignment {
        let parts = (0..self.members)
            .map(|i| self.base - self.project(r.parts[i] & self.slice(i)))
            .collect();
        Assignment::new(Mode::Packing, parts)
    }
}

/// A feasible family together with a compatible covering and packing.
#[derive(Debug, Clone)]
pub struct Feasible {
    pub ff: FeasibleFamily,
    pub covering: Assignment,
    pub packing: Assignment,
}

/// Result of checking both feasibility conditions.
#[derive(Debug, Clone)]
pub enum Feasibility {
    Feasible(Feasible),
    NotCoverable(UncoverableCertificate),
    NotPackable(UnpackableCertificate),
}

impl Feasible {
    /// Computes both certificates.
    pub fn check(ff: FeasibleFamily, route: PackingRoute) -> Result<Feasibility> {
        let covering = match covering_feasible(&ff)? {
            Coverage::Covered(c) => c,
            Coverage::Uncoverable(cert) => return Ok(Feasibility::NotCoverable(cert)),
        };
        let packing = match packing_feasible(&ff, route)? {
            Packability::Packed(p) => p,
            Packability::Unpackable(cert) => return Ok(Feasibility::NotPackable(cert)),
        };
        Ok(Feasibility::Feasible(Feasible {
            ff,
            covering,
            packing,
        }))
    }

    /// Like [`Feasible::check`], with infeasibility as a precondition error.
    pub fn new(ff: FeasibleFamily) -> Result<Feasible> {
        let route = PackingRoute::auto(ff.len());
        match Feasible::check(ff, route)? {
            Feasibility::Feasible(f) => Ok(f),
            Feasibility::NotCoverable(_) => {
                precondition("the feasible family admits no compatible covering")
            }
            Feasibility::NotPackable(_) => {
                precondition("the feasible family admits no compatible packing")
            }
        }
    }

    /// Re-checks structure and both certificates against the oracles.
    pub fn verify(&self) -> bool {
        let fam = self.ff.family();
        make_feasible(fam, &self.ff.pairs()).is_ok()
            && self.covering.with_mode(Mode::Covering).is_valid(fam)
            && self.ff.is_compatible(&self.covering)
            && self.packing.with_mode(Mode::Packing).is_valid(fam)
            && self.ff.is_compatible(&self.packing)
    }

    pub fn family(&self) -> &MatroidFamily {
        self.ff.family()
    }

    fn require_valid(&self, op: &str) -> Result<()> {
        if self.verify() {
            Ok(())
        } else {
            precondition(format!("{op}: input is not a certified feasible family"))
        }
    }

    /// Checks that `self` is a certified feasible extension of `older`.
    fn finish(self, older: &Feasible, op: &str) -> Result<Feasible> {
        ensure(self.verify() && self.ff.extends(&older.ff), || {
            format!("{op} did not produce a certified feasible extension")
        })?;
        Ok(self)
    }

    /// Shrinks each packing part to a base containing `I_i`.
    fn with_base_packing(&self) -> Result<Feasible> {
        let fam = self.family();
        let parts = (0..fam.len())
            .map(|i| {
                fam.matroid(i)
                    .extend_to_base_within(self.ff.lower()[i], self.packing.parts[i])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Feasible {
            packing: Assignment::new(Mode::Packing, parts),
            ..self.clone()
        })
    }
}

fn wrap_internal(op: &str) -> impl Fn(Error) -> Error + '_ {
    move |err| match err {
        Error::Validation { .. } => Error::Internal(format!("{op}: {err}")),
        other => other,
    }
}

/// `S_i' = S_i \ ∪_{j≠i} I_j`.
pub fn normalize(f: &Feasible) -> Result<Feasible> {
    f.require_valid("normalize")?;
    let lower = f.ff.lower();
    let all = f.ff.lower_union();
    let pairs: Vec<_> =
        f.ff.pairs()
            .iter()
            .map(|&(lo, hi)| (lo, hi - (all - lo)))
            .collect();
    let ff =
        f.ff.with_pairs(&pairs)
            .map_err(wrap_internal("normalize"))?;
    let covering = Assignment::new(
        Mode::Covering,
        f.covering
            .parts
            .iter()
            .zip(lower)
            .map(|(&r, &lo)| r - (all - lo))
            .collect(),
    );
    Feasible {
        ff,
        covering,
        packing: f.packing.clone(),
    }
    .finish(f, "normalize")
}

/// Adds a covering `r` of the quotient-tight set `x` to the lower sets.
///
/// The new covering extends `r` through `x` in the quotient; the new packing
/// is `(P_i \ X) ∪ I_i'`, spanning because `I_i'` spans `X ∩ S_i`.
pub fn eliminate_tight(f: &Feasible, x: ElementSet, r: &Assignment) -> Result<Feasible> {
    f.require_valid("eliminate_tight")?;
    let fam = f.family();
    let q = quotient(&f.ff)?;
    if is_tight(&q, x)?.is_none() {
        return precondition(format!(
            "eliminate_tight: {x:?} is not tight in the quotient"
        ));
    }
    let extended = extend_covering_through_tight(&q, x, r)?;
    let pairs: Vec<_> =
        f.ff.pairs()
            .iter()
            .zip(&r.parts)
            .map(|(&(lo, hi), &ri)| (lo | ri, hi))
            .collect();
    let ff =
        f.ff.with_pairs(&pairs)
            .map_err(wrap_internal("eliminate_tight"))?;
    let covering = Assignment::new(
        Mode::Covering,
        extended
            .parts
            .iter()
            .zip(f.ff.lower())
            .map(|(&qi, &lo)| qi | lo)
            .collect(),
    );
    let packing = Assignment::new(
        Mode::Packing,
        f.packing
            .parts
            .iter()
            .zip(ff.lower())
            .map(|(&p, &lo)| (p - x) | lo)
            .collect(),
    );
    ensure(
        (0..fam.len())
            .all(|i| (x & f.ff.upper()[i]).is_subset(&fam.matroid(i).span(ff.lower()[i]))),
        || format!("lower sets do not span the eliminated tight set {x:?}"),
    )?;
    Feasible {
        ff,
        covering,
        packing,
    }
    .finish(f, "eliminate_tight")
}

/// Eliminates the largest quotient-tight set, leaving no non-empty tight set.
pub fn eliminate_largest_tight(f: &Feasible) -> Result<Feasible> {
    f.require_valid("eliminate_largest_tight")?;
    let q = quotient(&f.ff)?;
    let t = largest_tight_set(&q)?;
    if t.set.is_empty() {
        return Ok(f.clone());
    }
    let out = eliminate_tight(f, t.set, &t.covering)?;
    let left = largest_tight_set(&quotient(&out.ff)?)?;
    ensure(left.set.is_empty(), || {
        format!("tight set {:?} survived elimination", left.set)
    })?;
    Ok(out)
}

/// Extends `f` so that `e` lies in some lower set.
pub fn cover_element(f: &Feasible, e: Element) -> Result<Feasible> {
    f.require_valid("cover_element")?;
    let fam = f.family();
    fam.check_subset(ElementSet::singleton(e))?;
    if f.ff.lower_union().contains(e) {
        return Ok(f.clone());
    }
    let g = eliminate_largest_tight(f)?;
    if g.ff.lower_union().contains(e) {
        return g.finish(f, "cover_element");
    }
    let mut g = g.with_base_packing()?;
    if !g.packing.union().contains(e) {
        let q = quotient(&g.ff)?;
        let j = (0..fam.len())
            .find(|&j| !q.matroid(j).is_loop(e))
            .ok_or_else(|| {
                Error::Internal(format!("element {e} is a loop in every quotient member"))
            })?;
        let pj = g.packing.parts[j];
        let circuit = fam.matroid(j).circuit_unchecked(e, pj);
        let out = (circuit.without(e) - g.ff.lower()[j])
            .first()
            .ok_or_else(|| {
                Error::Internal(format!(
                    "fundamental circuit of {e} lies inside the lower set"
                ))
            })?;
        g.packing.parts[j] = pj.with(e).without(out);
    }
    let j = g
        .packing
        .parts
        .iter()
        .position(|p| p.contains(e))
        .expect("e was placed in the packing");
    let ff =
        g.ff.with_lower_added(j, e)
            .map_err(wrap_internal("cover_element"))?;
    let covering = match covering_feasible(&ff)? {
        Coverage::Covered(c) => c,
        Coverage::Uncoverable(_) => {
            return internal(format!(
                "adding {e} to lower set {j} lost covering feasibility"
            ));
        }
    };
    Feasible {
        ff,
        covering,
        packing: g.packing,
    }
    .finish(f, "cover_element")
}

/// Extends the lower sets so that `I_j'` spans `e` in `M_j`.
///
/// Carries a compatible packing `P` and a set `I ⊆ P_j \ I_j` with
/// `e ∈ span(I ∪ I_j)`. Each round either moves one element of `I` into `I_j`
/// or, when that breaks covering feasibility, eliminates a quotient-tight set
/// spanning it and replaces `I` by a strictly smaller set.
pub fn span_element(f: &Feasible, e: Element, j: usize) -> Result<Feasible> {
    f.require_valid("span_element")?;
    let fam = f.family();
    fam.check_subset(ElementSet::singleton(e))?;
    if j >= fam.len() {
        return precondition(format!("member index {j} out of range"));
    }
    if fam.role(j) != Role::Finitary {
        return precondition(format!("span_element: member {j} is not tagged finitary"));
    }
    let m = fam.matroid(j);
    if m.spans(f.ff.lower()[j], e) {
        return Ok(f.clone());
    }
    let mut cur = f.with_base_packing()?;
    let pj = cur.packing.parts[j];
    let mut pending = if pj.contains(e) {
        ElementSet::singleton(e)
    } else {
        m.circuit_unchecked(e, pj).without(e) - cur.ff.lower()[j]
    };
    while let Some(x) = pending.first() {
        let tried = cur
            .ff
            .with_lower_added(j, x)
            .map_err(wrap_internal("span_element"))?;
        if let Coverage::Covered(covering) = covering_feasible(&tried)? {
            cur = Feasible {
                ff: tried,
                covering,
                packing: cur.packing,
            };
            pending.remove(x);
            continue;
        }
        let q = quotient(&cur.ff)?;
        let t = never_in_cover(&q, x, j)?.ok_or_else(|| {
            Error::Internal(format!("no tight obstruction found for element {x}"))
        })?;
        ensure(!t.set.contains(x) && q.matroid(j).spans(t.set, x), || {
            format!("tight set {:?} does not span {x} in the quotient", t.set)
        })?;
        let next = eliminate_tight(&cur, t.set, &t.covering)?;
        let lower = next.ff.lower()[j];
        let mut kept = ElementSet::empty();
        for g in pending - t.set {
            if m.is_independent(lower | kept.with(g)) {
                kept.insert(g);
            }
        }
        ensure(kept.len() < pending.len(), || {
            format!("span descent did not shrink: {pending:?} -> {kept:?}")
        })?;
        ensure(
            kept.is_subset(&(next.packing.parts[j] - lower)) && m.spans(lower | kept, e),
            || "span descent lost its invariant".into(),
        )?;
        cur = next;
        pending = kept;
    }
    ensure(m.spans(cur.ff.lower()[j], e), || {
        format!("lower set {j} does not span {e}")
    })?;
    cur.finish(f, "span_element")
}

/// How [`cospan_element`] dualises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CospanRoute {
    /// Direct dual for two members, the auxiliary family otherwise.
    #[default]
    Auto,
    Dual,
    Hat,
    /// Runs both routes (two members only), checks both, returns the dual result.
    Compare,
}

/// Shrinks the upper sets so that `E \ S_j'` spans `e` in `M_j*`.
pub fn cospan_element(f: &Feasible, e: Element, j: usize, route: CospanRoute) -> Result<Feasible> {
    f.require_valid("cospan_element")?;
    let fam = f.family();
    fam.check_subset(ElementSet::singleton(e))?;
    if j >= fam.len() {
        return precondition(format!("member index {j} out of range"));
    }
    if fam.role(j) != Role::Cofinitary {
        return precondition(format!(
            "cospan_element: member {j} is not tagged cofinitary"
        ));
    }
    let ground = fam.ground();
    let dual_j = fam.matroid(j).dual();
    if dual_j.spans(ground - f.ff.upper()[j], e) {
        return Ok(f.clone());
    }
    let out = match route {
        CospanRoute::Auto if fam.len() == 2 => cospan_dual(f, e, j)?,
        CospanRoute::Auto | CospanRoute::Hat => cospan_hat(f, e, j)?,
        CospanRoute::Dual => cospan_dual(f, e, j)?,
        CospanRoute::Compare => {
            let via_hat = cospan_hat(f, e, j)?;
            let via_dual = cospan_dual(f, e, j)?;
            for g in [&via_hat, &via_dual] {
                ensure(
                    g.ff.lower() == f.ff.lower() && dual_j.spans(ground - g.ff.upper()[j], e),
                    || "cospan routes disagree on validity".into(),
                )?;
            }
            via_dual
        }
    };
    ensure(
        out.ff.lower() == f.ff.lower() && dual_j.spans(ground - out.ff.upper()[j], e),
        || format!("upper set {j} does not cospan {e}"),
    )?;
    out.finish(f, "cospan_element")
}

fn cospan_dual(f: &Feasible, e: Element, j: usize) -> Result<Feasible> {
    let ground = f.family().ground();
    let (dff, _) = dual_encode(&f.ff)?;
    let dual = Feasible {
        ff: dff,
        covering: complement_parts(ground, &f.packing, Mode::Covering),
        packing: complement_parts(ground, &f.covering, Mode::Packing),
    };
    ensure(dual.verify(), || {
        "dual encoding lost its certificates".into()
    })?;
    let done = span_element(&dual, e, j)?;
    let pairs: Vec<_> = done
        .ff
        .pairs()
        .iter()
        .map(|&(lo, hi)| (ground - hi, ground - lo))
        .collect();
    let ff = make_feasible(f.family(), &pairs).map_err(wrap_internal("cospan_element"))?;
    Ok(Feasible {
        ff,
        covering: complement_parts(ground, &done.packing, Mode::Covering),
        packing: complement_parts(ground, &done.covering, Mode::Packing),
    })
}

fn cospan_hat(f: &Feasible, e: Element, j: usize) -> Result<Feasible> {
    let hat = hat_family(f.family())?;
    let encoded = Feasible {
        ff: hat.encode(&f.ff)?,
        covering: hat.covering_from_packing(&f.packing),
        packing: hat.packing_from_covering(&f.covering),
    };
    ensure(encoded.verify(), || {
        "hat encoding lost its certificates".into()
    })?;
    let done = span_element(&encoded, hat.encode_element(e, j), j)?;
    let ff = hat
        .decode(&done.ff, f.family())
        .map_err(wrap_internal("cospan_element"))?;
    Ok(Feasible {
        ff,
        covering: hat.covering_from_packing_hat(&done.packing),
        packing: hat.packing_from_covering_hat(&done.covering),
    })
}
