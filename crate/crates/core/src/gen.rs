//! Seeded random instances for property tests and the self-test suite.
//!
//! About half of the generated families have a planted base partitioning:
//! each member is built around a chosen block so that the block is a base.
//! The rest mix planted and unconstrained members, which gives a healthy
//! share of instances with no covering or no packing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::family::{MatroidFamily, Member, Role};
use crate::matroid::Matroid;
use crate::set::{Element, ElementSet, MAX_ELEMENTS};

/// Matroid kinds the generators draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KindChoice {
    Uniform,
    Graphic,
    Partition,
    LinearGf2,
    Free,
    Zero,
    Dual,
    Minor,
}

impl KindChoice {
    pub const ALL: [KindChoice; 8] = [
        KindChoice::Uniform,
        KindChoice::Graphic,
        KindChoice::Partition,
        KindChoice::LinearGf2,
        KindChoice::Free,
        KindChoice::Zero,
        KindChoice::Dual,
        KindChoice::Minor,
    ];
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub max_elements: usize,
    pub max_members: usize,
    pub kinds: Vec<KindChoice>,
    pub random_roles: bool,
    /// Chance that every member is built around a planted partition block.
    pub planted: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_elements: 8,
            max_members: 4,
            kinds: KindChoice::ALL.to_vec(),
            random_roles: true,
            planted: 0.5,
        }
    }
}

/// Hidden elements used by minors live above every ground index in use.
struct Fresh(Element);

impl Fresh {
    fn take(&mut self, count: usize) -> Option<ElementSet> {
        if self.0 + count > MAX_ELEMENTS {
            return None;
        }
        let s = (self.0..self.0 + count).collect();
        self.0 += count;
        Some(s)
    }
}

/// Random family on `{0, …, n-1}` with `n ≤ max_elements`.
pub fn random_family<R: Rng>(rng: &mut R, cfg: &GenConfig) -> MatroidFamily {
    let n = rng.gen_range(0..=cfg.max_elements);
    let k = rng.gen_range(1..=cfg.max_members.max(1));
    let ground = ElementSet::range(n);
    let mut fresh = Fresh(n.max(16));
    let blocks = random_blocks(rng, ground, k);
    let all_planted = rng.gen_bool(cfg.planted);
    let members = (0..k)
        .map(|i| {
            let m = if all_planted || rng.gen_bool(0.5) {
                planted(rng, ground, blocks[i], &cfg.kinds, &mut fresh, 2)
            } else {
                wild(rng, ground, &cfg.kinds, &mut fresh, 2)
            };
            let role = if cfg.random_roles && rng.gen_bool(0.5) {
                Role::Cofinitary
            } else {
                Role::Finitary
            };
            Member::new(m, role)
        })
        .collect();
    MatroidFamily::new(ground, members).expect("generated members share the ground set")
}

/// Splits `ground` into `k` blocks, some possibly empty.
pub fn random_blocks<R: Rng>(rng: &mut R, ground: ElementSet, k: usize) -> Vec<ElementSet> {
    let mut blocks = vec![ElementSet::empty(); k];
    for e in ground {
        blocks[rng.gen_range(0..k)].insert(e);
    }
    blocks
}

fn pick<R: Rng>(rng: &mut R, kinds: &[KindChoice]) -> KindChoice {
    *kinds.choose(rng).unwrap_or(&KindChoice::Uniform)
}

/// A random matroid on `ground` in which `base` is a base.
pub fn planted_matroid<R: Rng>(
    rng: &mut R,
    ground: ElementSet,
    base: ElementSet,
    kinds: &[KindChoice],
) -> Matroid {
    let mut fresh = Fresh(ground.bound().max(16));
    planted(rng, ground, base, kinds, &mut fresh, 2)
}

fn planted<R: Rng>(
    rng: &mut R,
    ground: ElementSet,
    base: ElementSet,
    kinds: &[KindChoice],
    fresh: &mut Fresh,
    depth: usize,
) -> Matroid {
    let rest = ground - base;
    let leaf_kinds: Vec<_> = kinds
        .iter()
        .copied()
        .filter(|k| !matches!(k, KindChoice::Dual | KindChoice::Minor))
        .collect();
    let kind = if depth == 0 {
        pick(rng, &leaf_kinds)
    } else {
        pick(rng, kinds)
    };
    let m = match kind {
        KindChoice::Uniform => Matroid::uniform(ground, base.len()).ok(),
        KindChoice::Free if rest.is_empty() => Some(Matroid::free(ground)),
        KindChoice::Zero if base.is_empty() => Some(Matroid::zero(ground)),
        KindChoice::Graphic => Some(planted_graphic(rng, base, rest)),
        KindChoice::Partition => Some(planted_partition(rng, base, rest)),
        KindChoice::LinearGf2 => Some(planted_linear(rng, base, rest)),
        KindChoice::Dual => Some(planted(rng, ground, rest, kinds, fresh, depth - 1).dual()),
        KindChoice::Minor => {
            let c = rng.gen_range(0..=2);
            let d = rng.gen_range(0..=2);
            match (fresh.take(c), fresh.take(d)) {
                (Some(cs), Some(ds)) => {
                    let inner = planted(rng, ground | cs | ds, base | cs, kinds, fresh, depth - 1);
                    inner.minor(cs, ds).ok()
                }
                _ => None,
            }
        }
        KindChoice::Free | KindChoice::Zero => None,
    };
    m.unwrap_or_else(|| Matroid::uniform(ground, base.len()).expect("base fits in ground"))
}

/// Forest on `base` with every other edge closing a cycle inside a component.
fn planted_graphic<R: Rng>(rng: &mut R, base: ElementSet, rest: ElementSet) -> Matroid {
    let extra = rng.gen_range(1..=2);
    let vertices = base.len() + extra;
    let mut comp: Vec<usize> = (0..vertices).collect();
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    // attach each tree edge to a vertex that is not yet in the same tree
    for (t, e) in base.iter().enumerate() {
        let v = order[t + extra];
        let u = order[rng.gen_range(0..t + extra)];
        let (cu, cv) = (comp[u], comp[v]);
        for c in comp.iter_mut() {
            if *c == cv {
                *c = cu;
            }
        }
        edges.push((e, u, v));
    }
    for e in rest {
        let u = rng.gen_range(0..vertices);
        let same: Vec<usize> = (0..vertices).filter(|&w| comp[w] == comp[u]).collect();
        let v = *same.choose(rng).expect("u is in its own component");
        edges.push((e, u, v));
    }
    Matroid::graphic(vertices, &edges).expect("generated edges are valid")
}

fn planted_partition<R: Rng>(rng: &mut R, base: ElementSet, rest: ElementSet) -> Matroid {
    let count = rng.gen_range(1..=3);
    let mut blocks = vec![ElementSet::empty(); count];
    for e in base | rest {
        blocks[rng.gen_range(0..count)].insert(e);
    }
    let spec: Vec<_> = blocks.into_iter().map(|b| (b, (b & base).len())).collect();
    Matroid::partition(&spec).expect("blocks are disjoint")
}

fn planted_linear<R: Rng>(rng: &mut R, base: ElementSet, rest: ElementSet) -> Matroid {
    let r = base.len();
    let mut cols: Vec<(Element, u64)> = base
        .iter()
        .enumerate()
        .map(|(i, e)| (e, 1u64 << i))
        .collect();
    let mask = if r == 0 { 0 } else { (1u64 << r) - 1 };
    for e in rest {
        cols.push((e, rng.gen::<u64>() & mask));
    }
    Matroid::linear_gf2(&cols).expect("columns are distinct elements")
}

/// A random matroid on `ground` with no planted structure.
pub fn random_matroid<R: Rng>(rng: &mut R, ground: ElementSet, kinds: &[KindChoice]) -> Matroid {
    let mut fresh = Fresh(ground.bound().max(16));
    wild(rng, ground, kinds, &mut fresh, 2)
}

fn wild<R: Rng>(
    rng: &mut R,
    ground: ElementSet,
    kinds: &[KindChoice],
    fresh: &mut Fresh,
    depth: usize,
) -> Matroid {
    let leaf_kinds: Vec<_> = kinds
        .iter()
        .copied()
        .filter(|k| !matches!(k, KindChoice::Dual | KindChoice::Minor))
        .collect();
    let kind = if depth == 0 {
        pick(rng, &leaf_kinds)
    } else {
        pick(rng, kinds)
    };
    let n = ground.len();
    let m = match kind {
        KindChoice::Uniform => Matroid::uniform(ground, rng.gen_range(0..=n)).ok(),
        KindChoice::Free => Some(Matroid::free(ground)),
        KindChoice::Zero => Some(Matroid::zero(ground)),
        KindChoice::Graphic => {
            let vertices = rng.gen_range(1..=5);
            let edges: Vec<_> = ground
                .iter()
                .map(|e| (e, rng.gen_range(0..vertices), rng.gen_range(0..vertices)))
                .collect();
            Matroid::graphic(vertices, &edges).ok()
        }
        KindChoice::Partition => {
            let count = rng.gen_range(1..=3);
            let mut blocks = vec![ElementSet::empty(); count];
            for e in ground {
                blocks[rng.gen_range(0..count)].insert(e);
            }
            let spec: Vec<_> = blocks
                .into_iter()
                .map(|b| (b, rng.gen_range(0..=b.len())))
                .collect();
            Matroid::partition(&spec).ok()
        }
        KindChoice::LinearGf2 => {
            let rows = rng.gen_range(1..=4);
            let cols: Vec<_> = ground
                .iter()
                .map(|e| (e, rng.gen::<u64>() & ((1 << rows) - 1)))
                .collect();
            Matroid::linear_gf2(&cols).ok()
        }
        KindChoice::Dual => Some(wild(rng, ground, kinds, fresh, depth - 1).dual()),
        KindChoice::Minor => {
            let c = rng.gen_range(0..=2);
            let d = rng.gen_range(0..=2);
            match (fresh.take(c), fresh.take(d)) {
                (Some(cs), Some(ds)) => wild(rng, ground | cs | ds, kinds, fresh, depth - 1)
                    .minor(cs, ds)
                    .ok(),
                _ => None,
            }
        }
    };
    m.unwrap_or_else(|| Matroid::free(ground))
}

/// Random connected simple graph on `vertices` vertices with at most
/// `max_edges` edges, as `(u, v)` pairs indexed by element.
pub fn random_connected_graph<R: Rng>(
    rng: &mut R,
    vertices: usize,
    max_edges: usize,
) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..vertices)
        .map(|t| (order[rng.gen_range(0..t)], order[t]))
        .collect();
    let mut others: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .filter(|&(u, v)| !edges.contains(&(u, v)) && !edges.contains(&(v, u)))
        .collect();
    others.shuffle(rng);
    let room = max_edges.saturating_sub(edges.len());
    let add = rng.gen_range(0..=room.min(others.len()));
    edges.extend(others.into_iter().take(add));
    edges.shuffle(rng);
    edges
}

/// Random bipartite graph between `left` and `right` vertices, as `(l, r)`
/// pairs indexed by element.
pub fn random_bipartite<R: Rng>(
    rng: &mut R,
    left: usize,
    right: usize,
    max_edges: usize,
) -> Vec<(usize, usize)> {
    let mut all: Vec<(usize, usize)> = (0..left)
        .flat_map(|l| (0..right).map(move |r| (l, r)))
        .collect();
    all.shuffle(rng);
    let count = rng.gen_range(0..=max_edges.min(all.len()));
    all.truncate(count);
    all.sort_unstable();
    all
}

/// Partition matroid allowing one edge at each vertex on one side.
pub fn side_matroid(edges: &[(usize, usize)], vertices: usize, left: bool) -> Matroid {
    let blocks: Vec<(ElementSet, usize)> = (0..vertices)
        .map(|v| {
            let b = edges
                .iter()
                .enumerate()
                .filter(|(_, &(l, r))| if left { l == v } else { r == v })
                .map(|(e, _)| e)
                .collect();
            (b, 1)
        })
        .collect();
    Matroid::partition(&blocks).expect("edge blocks are disjoint")
}
