//! Size-capped Leiden community detection on unweighted graphs.
//!
//! Quality is standard modularity with resolution `γ`:
//!
//! ```text
//! Q = Σ_c [ e_c / m − γ · (K_c / 2m)² ]
//! ```
//!
//! where `e_c` counts edges inside community `c` and `K_c` sums its degrees.
//! Every phase (local moving, refinement, aggregation) treats the community
//! size cap as a hard constraint: a move that would push a community above
//! `max_community_size` original nodes is never taken.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Temperature of the randomized merge choice in the refinement phase.
const REFINE_THETA: f64 = 0.01;

/// Minimum score improvement (in edge units) for a local move.
const MOVE_EPSILON: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct LeidenConfig {
    pub resolution: f64,
    /// Upper bound on the number of nodes in any community.
    pub max_community_size: usize,
    pub seed: u64,
    pub max_passes: usize,
    /// A pass improving modularity by less than this ends the run.
    pub min_gain: f64,
}

impl LeidenConfig {
    pub fn new(max_community_size: usize) -> Self {
        Self {
            resolution: 1.0,
            max_community_size,
            seed: 0,
            max_passes: 10,
            min_gain: 1e-9,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_resolution(mut self, resolution: f64) -> Self {
        self.resolution = resolution;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_community_size < 1 {
            return Err(Error::InvalidConfig("max community size must be at least 1".into()));
        }
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "resolution must be positive, got {}",
                self.resolution
            )));
        }
        if self.max_passes < 1 {
            return Err(Error::InvalidConfig("max_passes must be at least 1".into()));
        }
        Ok(())
    }
}

/// Destination of a single-node move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveTarget {
    Block(usize),
    /// A new, empty block.
    Fresh,
}

pub fn modularity(g: &Graph, p: &Partition, resolution: f64) -> Result<f64> {
    p.check_covers(g)?;
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let blocks = p.block_count();
    let mut internal = vec![0usize; blocks];
    let mut degree_sum = vec![0usize; blocks];
    for v in 0..g.node_count() {
        degree_sum[p.block_of(v)] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if p.block_of(u) == p.block_of(v) {
            internal[p.block_of(u)] += 1;
        }
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&degree_sum)
        .map(|(&e, &k)| {
            let share = k as f64 / (2.0 * m);
            e as f64 / m - resolution * share * share
        })
        .sum())
}

/// Exact modularity change of moving `v` from its block to `target`.
pub fn move_gain(g: &Graph, p: &Partition, v: usize, target: MoveTarget, resolution: f64) -> Result<f64> {
    p.check_covers(g)?;
    let n = g.node_count();
    if v >= n {
        return Err(Error::NodeOutOfRange { node: v, node_count: n });
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let from = p.block_of(v);
    let to = match target {
        MoveTarget::Block(b) if b >= p.block_count() => {
            return Err(Error::BlockOutOfRange {
                block: b,
                block_count: p.block_count(),
            })
        }
        MoveTarget::Block(b) if b == from => return Ok(0.0),
        MoveTarget::Block(b) => Some(b),
        MoveTarget::Fresh => None,
    };

    let links_to = |b: usize| g.neighbors(v).iter().filter(|&&u| p.block_of(u) == b).count() as f64;
    let degree_of = |b: usize| -> f64 { (0..n).filter(|&u| p.block_of(u) == b).map(|u| g.degree(u) as f64).sum() };
    let k_v = g.degree(v) as f64;
    let w_from = links_to(from);
    let rest_of_from = degree_of(from) - k_v;
    let (w_to, k_to) = match to {
        Some(b) => (links_to(b), degree_of(b)),
        None => (0.0, 0.0),
    };
    let m = m as f64;
    Ok((w_to - w_from) / m - resolution * k_v * (k_to - rest_of_from) / (2.0 * m * m))
}

/// Leiden communities whose sizes never exceed `cfg.max_community_size`.
///
/// Every returned community induces a connected subgraph. Block ids are
/// numbered in order of each community's smallest node, so the result is a
/// pure function of the graph and the config.
pub fn leiden_communities(g: &Graph, cfg: &LeidenConfig) -> Result<Partition> {
    cfg.validate()?;
    let components = g.connected_components();
    if components.count > 1 {
        return Err(Error::DisconnectedGraph {
            components: components.count,
        });
    }
    let n = g.node_count();
    if g.edge_count() == 0 || n <= 1 {
        // A single node (or nothing) is its own community.
        return Partition::new(vec![0; n], n.min(1));
    }

    let base = Network::from_graph(g);
    let params = Params {
        resolution: cfg.resolution,
        cap: cfg.max_community_size,
        two_m: 2.0 * g.edge_count() as f64,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut labels: Vec<usize> = (0..n).collect();
    let mut quality = base.quality(&labels, params.resolution);
    for pass in 0..cfg.max_passes {
        let next = leiden_iteration(&base, labels.clone(), &params, &mut rng);
        let next_quality = base.quality(&next, params.resolution);
        let gain = next_quality - quality;
        log::debug!("leiden pass {pass}: Q {quality:.6} -> {next_quality:.6}");
        labels = next;
        quality = next_quality;
        if gain < cfg.min_gain {
            break;
        }
    }

    // Communities are connected by construction whenever the last iteration
    // ran to completion. Splitting is a no-op then, and otherwise only raises
    // modularity while keeping the cap.
    let split = g.components_where(&labels);
    Partition::new(split.labels, split.count)
}

struct Params {
    resolution: f64,
    cap: usize,
    two_m: f64,
}

/// Weighted working graph. Level 0 mirrors the input; each aggregation
/// collapses refined communities into single nodes.
#[derive(Clone)]
struct Network {
    /// Original nodes represented by each node.
    size: Vec<usize>,
    /// Sum of original degrees.
    degree: Vec<f64>,
    /// Original edges inside each node.
    internal: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Network {
    fn from_graph(g: &Graph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.edge_count());
        offsets.push(0);
        for v in 0..n {
            targets.extend_from_slice(g.neighbors(v));
            offsets.push(targets.len());
        }
        Self {
            size: vec![1; n],
            degree: (0..n).map(|v| g.degree(v) as f64).collect(),
            internal: vec![0.0; n],
            weights: vec![1.0; targets.len()],
            offsets,
            targets,
        }
    }

    fn len(&self) -> usize {
        self.size.len()
    }

    fn links(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    fn quality(&self, labels: &[usize], resolution: f64) -> f64 {
        let n = self.len();
        let two_m: f64 = self.degree.iter().sum();
        let m = two_m / 2.0;
        let mut internal = vec![0.0; n];
        let mut degree = vec![0.0; n];
        for v in 0..n {
            let c = labels[v];
            degree[c] += self.degree[v];
            internal[c] += self.internal[v];
            for (u, w) in self.links(v) {
                if u > v && labels[u] == c {
                    internal[c] += w;
                }
            }
        }
        (0..n)
            .map(|c| {
                let share = degree[c] / two_m;
                internal[c] / m - resolution * share * share
            })
            .sum()
    }

    /// Collapses nodes sharing a `groups` label (dense, `0..count`).
    fn aggregate(&self, groups: &[usize], count: usize) -> Network {
        let mut size = vec![0; count];
        let mut degree = vec![0.0; count];
        let mut internal = vec![0.0; count];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &g) in groups.iter().enumerate() {
            size[g] += self.size[v];
            degree[g] += self.degree[v];
            internal[g] += self.internal[v];
            members[g].push(v);
        }

        let mut acc = vec![0.0; count];
        let mut touched = Vec::new();
        let mut offsets = Vec::with_capacity(count + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for (g, nodes) in members.iter().enumerate() {
            for &v in nodes {
                for (u, w) in self.links(v) {
                    let h = groups[u];
                    if h == g {
                        // Seen from both ends.
                        internal[g] += w / 2.0;
                        continue;
                    }
                    if acc[h] == 0.0 {
                        touched.push(h);
                    }
                    acc[h] += w;
                }
            }
            touched.sort_unstable();
            for &h in &touched {
                targets.push(h);
                weights.push(acc[h]);
                acc[h] = 0.0;
            }
            touched.clear();
            offsets.push(targets.len());
        }
        Network {
            size,
            degree,
            internal,
            offsets,
            targets,
            weights,
        }
    }
}

/// One full Leiden iteration started from `labels` on the base network.
fn leiden_iteration(base: &Network, labels: Vec<usize>, params: &Params, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = base.len();
    let mut node_to_agg: Vec<usize> = (0..n).collect();
    let mut membership = labels;
    let mut aggregated: Option<Network> = None;

    loop {
        let net = aggregated.as_ref().unwrap_or(base);
        move_nodes(net, &mut membership, params, rng);
        let (communities, community_count) = densify(&membership);
        if community_count == net.len() {
            membership = communities;
            break;
        }

        let refined = refine(net, &communities, params, rng);
        let (mut groups, mut group_count) = densify(&refined);
        if group_count == net.len() {
            // Refinement merged nothing; collapse the communities directly.
            groups = communities.clone();
            group_count = community_count;
        }
        let next = net.aggregate(&groups, group_count);

        let mut next_membership = vec![0; group_count];
        for v in 0..net.len() {
            next_membership[groups[v]] = communities[v];
        }
        for a in node_to_agg.iter_mut() {
            *a = groups[*a];
        }
        membership = next_membership;
        aggregated = Some(next);
    }

    node_to_agg.iter().map(|&a| membership[a]).collect()
}

/// Relabels to `0..count` in order of first appearance.
fn densify(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; labels.iter().copied().max().map_or(0, |x| x + 1)];
    let mut count = 0;
    let dense = labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = count;
                count += 1;
            }
            map[l]
        })
        .collect();
    (dense, count)
}

/// Queue-based local moving. Each node goes to the admissible neighbouring
/// (or empty) community with the best modularity gain; ties go to the lowest
/// community id and zero-gain moves are not taken.
fn move_nodes(net: &Network, membership: &mut [usize], params: &Params, rng: &mut ChaCha8Rng) -> bool {
    let n = net.len();
    let mut comm_size = vec![0usize; n];
    let mut comm_degree = vec![0.0f64; n];
    let mut comm_nodes = vec![0usize; n];
    for (v, &c) in membership.iter().enumerate() {
        comm_size[c] += net.size[v];
        comm_degree[c] += net.degree[v];
        comm_nodes[c] += 1;
    }
    let mut empty: Vec<usize> = (0..n).rev().filter(|&c| comm_nodes[c] == 0).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut queue: VecDeque<usize> = order.into();
    let mut queued = vec![true; n];

    let mut link_weight = vec![0.0f64; n];
    let mut seen = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut changed = false;

    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let from = membership[v];
        let (size_v, degree_v) = (net.size[v], net.degree[v]);

        seen[from] = true;
        touched.push(from);
        for (u, w) in net.links(v) {
            let c = membership[u];
            if !seen[c] {
                seen[c] = true;
                touched.push(c);
            }
            link_weight[c] += w;
        }

        comm_size[from] -= size_v;
        comm_degree[from] -= degree_v;
        comm_nodes[from] -= 1;

        let scale = params.resolution * degree_v / params.two_m;
        let stay = link_weight[from] - scale * comm_degree[from];
        let mut best: Option<(f64, usize)> = None;
        let mut consider = |score: f64, c: usize| match best {
            Some((s, b)) if s > score || (s == score && b < c) => {}
            _ => best = Some((score, c)),
        };
        for &c in &touched {
            if c != from && comm_size[c] + size_v <= params.cap {
                consider(link_weight[c] - scale * comm_degree[c], c);
            }
        }
        if comm_nodes[from] > 0 {
            if let Some(&c) = empty.last() {
                consider(0.0, c);
            }
        }

        let target = match best {
            Some((score, c)) if score > stay + MOVE_EPSILON => c,
            _ => from,
        };
        comm_size[target] += size_v;
        comm_degree[target] += degree_v;
        if comm_nodes[target] == 0 && target != from {
            let popped = empty.pop();
            debug_assert_eq!(popped, Some(target));
        }
        comm_nodes[target] += 1;

        if target != from {
            if comm_nodes[from] == 0 {
                empty.push(from);
            }
            membership[v] = target;
            changed = true;
            for (u, _) in net.links(v) {
                if !queued[u] && membership[u] != target {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }

        for &c in &touched {
            link_weight[c] = 0.0;
            seen[c] = false;
        }
        touched.clear();
    }
    changed
}

/// Splits every community into well-connected sub-communities by merging
/// singletons into neighbouring sub-communities of the same community.
/// Merges only follow edges, so each sub-community stays connected.
fn refine(net: &Network, communities: &[usize], params: &Params, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = net.len();
    let mut refined: Vec<usize> = (0..n).collect();
    let mut sub_size = net.size.clone();
    let mut sub_degree = net.degree.clone();
    let mut sub_nodes = vec![1usize; n];

    let mut comm_degree = vec![0.0f64; n];
    for v in 0..n {
        comm_degree[communities[v]] += net.degree[v];
    }
    // Weight from each node to the rest of its community.
    let node_inside: Vec<f64> = (0..n)
        .map(|v| {
            net.links(v)
                .filter(|&(u, _)| communities[u] == communities[v])
                .map(|(_, w)| w)
                .sum()
        })
        .collect();
    // Weight from each sub-community to the rest of its community.
    let mut sub_inside = node_inside.clone();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut link_weight = vec![0.0f64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut candidates: Vec<(usize, f64)> = Vec::new();

    for v in order {
        if sub_nodes[refined[v]] != 1 {
            continue;
        }
        let c = communities[v];
        let degree_v = net.degree[v];
        let factor = params.resolution / params.two_m;
        if node_inside[v] < factor * degree_v * (comm_degree[c] - degree_v) {
            continue;
        }

        for (u, w) in net.links(v) {
            if communities[u] != c {
                continue;
            }
            let r = refined[u];
            if link_weight[r] == 0.0 {
                touched.push(r);
            }
            link_weight[r] += w;
        }
        touched.sort_unstable();

        let own = refined[v];
        let mut best_gain = f64::NEG_INFINITY;
        for &r in &touched {
            if r == own || sub_size[r] + net.size[v] > params.cap {
                continue;
            }
            let well_connected = sub_inside[r] >= factor * sub_degree[r] * (comm_degree[c] - sub_degree[r]);
            if !well_connected {
                continue;
            }
            let gain = link_weight[r] - factor * degree_v * sub_degree[r];
            if gain >= 0.0 {
                best_gain = best_gain.max(gain);
                candidates.push((r, gain));
            }
        }

        if !candidates.is_empty() {
            let weights: Vec<f64> = candidates
                .iter()
                .map(|&(_, gain)| ((gain - best_gain) / REFINE_THETA).exp())
                .collect();
            let total: f64 = weights.iter().sum();
            let mut pick = rng.random::<f64>() * total;
            let mut chosen = candidates[candidates.len() - 1].0;
            for (&(r, _), &w) in candidates.iter().zip(&weights) {
                if pick < w {
                    chosen = r;
                    break;
                }
                pick -= w;
            }

            sub_inside[chosen] += node_inside[v] - 2.0 * link_weight[chosen];
            sub_size[chosen] += net.size[v];
            sub_degree[chosen] += degree_v;
            sub_nodes[chosen] += 1;
            sub_nodes[own] = 0;
            refined[v] = chosen;
        }

        for &r in &touched {
            link_weight[r] = 0.0;
        }
        touched.clear();
        candidates.clear();
    }
    refined
}
