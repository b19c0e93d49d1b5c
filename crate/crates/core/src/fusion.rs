//! Greedy community fusion.
//!
//! Starting from connected communities, the smallest community is merged
//! into its neighbour with the largest edge cut (among neighbours the merge
//! keeps under `max_part_size`) until `k` communities remain. Merging two
//! connected communities that share at least one edge yields a connected
//! community, so every output block of a connected graph is connected.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::leiden::{leiden_communities, LeidenConfig};
use crate::partition::Partition;

#[derive(Debug, Clone)]
pub struct FusionConfig {
    /// Number of output blocks.
    pub k: usize,
    /// Balance slack: blocks aim for at most `(n / k)(1 + alpha)` nodes.
    pub alpha: f64,
    /// Community size cap as a fraction of the block size bound.
    pub beta: f64,
    /// Modularity resolution used for the initial communities.
    pub resolution: f64,
    pub seed: u64,
}

impl FusionConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            alpha: 0.05,
            beta: 0.5,
            resolution: 1.0,
            seed: 42,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `⌈(n / k)(1 + alpha)⌉`.
    pub fn max_part_size(&self, n: usize) -> usize {
        ceil_tolerant(n as f64 / self.k as f64 * (1.0 + self.alpha))
    }

    /// `⌈beta · max_part_size⌉`, at least 1.
    pub fn community_cap(&self, n: usize) -> usize {
        ceil_tolerant(self.beta * self.max_part_size(n) as f64).max(1)
    }

    fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "beta must lie in (0, 1], got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

// Products like 20 * 1.05 land a hair above the integer they denote.
fn ceil_tolerant(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Fusion bookkeeping: community sizes, pairwise edge cuts between active
/// communities, and a lazily invalidated min-heap on `(size, id)`.
#[derive(Debug, Clone)]
pub struct CutState {
    sizes: Vec<usize>,
    links: Vec<BTreeMap<usize, usize>>,
    active: Vec<bool>,
    active_count: usize,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
    // Union-find over the initial ids; a root is always the id its
    // community is active under.
    parent: Vec<usize>,
}

impl CutState {
    /// Community `b` starts as block `b` of `p`. Empty blocks are inactive.
    pub fn new(g: &Graph, p: &Partition) -> Result<Self> {
        p.check_covers(g)?;
        let count = p.block_count();
        let sizes = p.sizes().to_vec();
        let mut links = vec![BTreeMap::new(); count];
        for (u, v) in g.edges() {
            let (a, b) = (p.block_of(u), p.block_of(v));
            if a != b {
                *links[a].entry(b).or_insert(0) += 1;
                *links[b].entry(a).or_insert(0) += 1;
            }
        }
        let active: Vec<bool> = sizes.iter().map(|&s| s > 0).collect();
        let heap = (0..count)
            .filter(|&c| active[c])
            .map(|c| Reverse((sizes[c], c)))
            .collect();
        Ok(Self {
            active_count: active.iter().filter(|&&a| a).count(),
            sizes,
            links,
            active,
            heap,
            parent: (0..count).collect(),
        })
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    pub fn is_active(&self, c: usize) -> bool {
        self.active.get(c).copied().unwrap_or(false)
    }

    pub fn active_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.active.len()).filter(|&c| self.active[c])
    }

    pub fn size(&self, c: usize) -> usize {
        self.sizes[c]
    }

    /// Edges between two active communities; zero when not adjacent.
    pub fn cut(&self, a: usize, b: usize) -> usize {
        self.links[a].get(&b).copied().unwrap_or(0)
    }

    /// Every adjacent pair `(a, b)` with `a < b` and its cut, ascending.
    pub fn pair_cuts(&self) -> Vec<((usize, usize), usize)> {
        self.active_ids()
            .flat_map(|a| self.links[a].range(a + 1..).map(move |(&b, &count)| ((a, b), count)))
            .collect()
    }

    fn check_active(&self, c: usize) -> Result<()> {
        if self.is_active(c) {
            Ok(())
        } else {
            Err(Error::InactiveCommunity(c))
        }
    }

    /// Smallest active community, ties broken by lowest id.
    pub fn smallest(&mut self) -> Option<usize> {
        while let Some(&Reverse((size, c))) = self.heap.peek() {
            if self.active[c] && self.sizes[c] == size {
                return Some(c);
            }
            self.heap.pop();
        }
        None
    }

    /// Merges `a` and `b`; the union keeps the smaller id, which is returned.
    pub fn merge(&mut self, a: usize, b: usize) -> Result<usize> {
        self.check_active(a)?;
        self.check_active(b)?;
        if a == b {
            return Err(Error::InvalidConfig(format!("cannot merge community {a} with itself")));
        }
        let (kept, gone) = (a.min(b), a.max(b));
        let gone_links = std::mem::take(&mut self.links[gone]);
        for (&w, &count) in &gone_links {
            if w == kept {
                continue;
            }
            self.links[w].remove(&gone);
            *self.links[w].entry(kept).or_insert(0) += count;
            *self.links[kept].entry(w).or_insert(0) += count;
        }
        self.links[kept].remove(&gone);

        self.sizes[kept] += self.sizes[gone];
        self.sizes[gone] = 0;
        self.active[gone] = false;
        self.active_count -= 1;
        self.parent[gone] = kept;
        self.heap.push(Reverse((self.sizes[kept], kept)));
        Ok(kept)
    }

    /// Active community that absorbed initial community `c`.
    pub fn community_of(&self, mut c: usize) -> usize {
        while self.parent[c] != c {
            c = self.parent[c];
        }
        c
    }

    /// Current community of every node, given the partition the state was
    /// built from.
    pub fn labels(&self, initial: &Partition) -> Vec<usize> {
        let resolved: Vec<usize> = (0..self.parent.len()).map(|c| self.community_of(c)).collect();
        initial.labels().iter().map(|&b| resolved[b]).collect()
    }
}

/// Active communities sharing at least one edge with `c`, ascending.
pub fn neighbors(state: &CutState, c: usize) -> Result<Vec<usize>> {
    state.check_active(c)?;
    Ok(state.links[c].keys().copied().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeBranch {
    /// The merge stays strictly below `max_part_size`.
    LargestCut,
    /// No neighbour fits; merged into the smallest neighbour.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborPick {
    pub community: usize,
    pub branch: MergeBranch,
}

/// Among neighbours `c` with `size(c) + size(v) < max_part_size`, the one
/// with the largest cut to `v`; if none fits, the smallest neighbour. Ties go
/// to the lowest id.
pub fn largest_edge_cut_neighbor(state: &CutState, v: usize, max_part_size: usize) -> Result<NeighborPick> {
    state.check_active(v)?;
    let size_v = state.sizes[v];
    let mut best_fit: Option<(usize, usize)> = None;
    let mut smallest: Option<(usize, usize)> = None;
    for (&c, &cut) in &state.links[v] {
        let size_c = state.sizes[c];
        if size_c + size_v < max_part_size && best_fit.is_none_or(|(_, best)| cut > best) {
            best_fit = Some((c, cut));
        }
        if smallest.is_none_or(|(_, s)| size_c < s) {
            smallest = Some((c, size_c));
        }
    }
    match (best_fit, smallest) {
        (Some((c, _)), _) => Ok(NeighborPick {
            community: c,
            branch: MergeBranch::LargestCut,
        }),
        (None, Some((c, _))) => Ok(NeighborPick {
            community: c,
            branch: MergeBranch::Fallback,
        }),
        (None, None) => Err(Error::NoNeighbor(v)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeStep {
    /// The smallest community at this step.
    pub absorbed: usize,
    /// The neighbour it was merged with.
    pub into: usize,
    /// Id of the union (the smaller of the two).
    pub kept: usize,
    /// Edges between the two before merging.
    pub cut: usize,
    pub merged_size: usize,
    pub branch: MergeBranch,
}

#[derive(Debug, Clone, Default)]
pub struct FusionTrace {
    pub max_part_size: usize,
    pub steps: Vec<MergeStep>,
}

impl FusionTrace {
    pub fn fallback_merges(&self) -> usize {
        self.steps.iter().filter(|s| s.branch == MergeBranch::Fallback).count()
    }
}

/// Fuses connected blocks of `initial` down to `cfg.k` blocks.
pub fn fuse(g: &Graph, initial: &Partition, cfg: &FusionConfig) -> Result<Partition> {
    fuse_traced(g, initial, cfg).map(|(p, _)| p)
}

/// [`fuse`], also returning every merge taken.
pub fn fuse_traced(g: &Graph, initial: &Partition, cfg: &FusionConfig) -> Result<(Partition, FusionTrace)> {
    fuse_observed(g, initial, cfg, |_, _| {})
}

/// [`fuse_traced`] calling `observe` with the state after every merge.
pub fn fuse_observed(
    g: &Graph,
    initial: &Partition,
    cfg: &FusionConfig,
    mut observe: impl FnMut(&CutState, &MergeStep),
) -> Result<(Partition, FusionTrace)> {
    cfg.validate()?;
    initial.check_covers(g)?;
    let components = g.connected_components();
    if components.count > 1 {
        return Err(Error::DisconnectedGraph {
            components: components.count,
        });
    }
    let initial = initial.compacted();
    if initial.block_count() < cfg.k {
        return Err(Error::TooFewBlocks {
            found: initial.block_count(),
            k: cfg.k,
        });
    }
    check_blocks_connected(g, &initial)?;

    let max_part_size = cfg.max_part_size(g.node_count());
    let mut trace = FusionTrace {
        max_part_size,
        steps: Vec::with_capacity(initial.block_count() - cfg.k),
    };
    let mut state = CutState::new(g, &initial)?;
    while state.active_count() > cfg.k {
        let v = state.smallest().expect("active communities remain");
        let pick = largest_edge_cut_neighbor(&state, v, max_part_size)?;
        let cut = state.cut(v, pick.community);
        debug_assert!(cut >= 1);
        let kept = state.merge(v, pick.community)?;
        let step = MergeStep {
            absorbed: v,
            into: pick.community,
            kept,
            cut,
            merged_size: state.size(kept),
            branch: pick.branch,
        };
        if step.branch == MergeBranch::Fallback {
            log::info!(
                "fallback merge: community {v} into {} gives {} nodes (bound {max_part_size})",
                pick.community,
                step.merged_size
            );
        }
        observe(&state, &step);
        trace.steps.push(step);
    }

    Ok((Partition::from_labels(&state.labels(&initial)), trace))
}

fn check_blocks_connected(g: &Graph, p: &Partition) -> Result<()> {
    let split = g.components_where(p.labels());
    if split.count == p.block_count() {
        return Ok(());
    }
    let mut seen = vec![Vec::new(); p.block_count()];
    for (v, &c) in split.labels.iter().enumerate() {
        let pieces = &mut seen[p.block_of(v)];
        if !pieces.contains(&c) {
            pieces.push(c);
        }
    }
    let (block, pieces) = seen
        .iter()
        .enumerate()
        .find(|(_, pieces)| pieces.len() > 1)
        .expect("component count exceeds block count");
    Err(Error::DisconnectedBlock {
        block,
        components: pieces.len(),
    })
}

/// Refines `p` so that every block is one connected component of an
/// original block. New ids follow each component's smallest node.
pub fn split_into_components(g: &Graph, p: &Partition) -> Result<Partition> {
    p.check_covers(g)?;
    let split = g.components_where(p.labels());
    Partition::new(split.labels, split.count)
}

/// Splits an arbitrary partition into connected pieces and fuses them back
/// to `cfg.k` blocks.
pub fn repair_and_fuse(g: &Graph, p: &Partition, cfg: &FusionConfig) -> Result<Partition> {
    let pieces = split_into_components(g, p)?;
    if pieces.block_count() < cfg.k {
        return Err(Error::TooFewBlocks {
            found: pieces.block_count(),
            k: cfg.k,
        });
    }
    fuse(g, &pieces, cfg)
}

/// Leiden communities capped at `⌈beta · max_part_size⌉`, fused to `k`
/// blocks.
pub fn lf_partition(g: &Graph, cfg: &FusionConfig) -> Result<Partition> {
    cfg.validate()?;
    let n = g.node_count();
    if n < cfg.k {
        return Err(Error::InvalidConfig(format!(
            "k = {} exceeds the node count {n}",
            cfg.k
        )));
    }
    let communities = initial_communities(g, cfg)?;
    fuse(g, &communities, cfg)
}

/// The Leiden stage of [`lf_partition`].
pub fn initial_communities(g: &Graph, cfg: &FusionConfig) -> Result<Partition> {
    cfg.validate()?;
    let mut leiden = LeidenConfig::new(cfg.community_cap(g.node_count())).with_seed(cfg.seed);
    leiden.resolution = cfg.resolution;
    let communities = leiden_communities(g, &leiden)?;
    if communities.block_count() < cfg.k {
        return Err(Error::TooFewCommunities {
            found: communities.block_count(),
            k: cfg.k,
        });
    }
    Ok(communities)
}
