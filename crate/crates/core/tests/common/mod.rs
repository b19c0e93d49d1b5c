//! Graph generators, fixtures and brute-force reference computations shared
//! by the integration tests.

#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use leiden_fusion::cli::read_partition;
use leiden_fusion::{Graph, LoadOptions, Partition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn karate() -> Graph {
    let file = File::open(fixture("karate.tsv")).unwrap();
    Graph::read_edge_list(BufReader::new(file), LoadOptions::default())
        .unwrap()
        .0
}

pub fn karate_partition(name: &str) -> Partition {
    let g = karate();
    read_partition(&g, BufReader::new(File::open(fixture(name)).unwrap())).unwrap()
}

/// Two triangles joined by the edge 2-3.
pub fn barbell() -> Graph {
    Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap()
}

/// A random spanning tree on `0..n` plus `extra` uniformly random edges.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(n + extra);
    for i in 1..n {
        edges.push((order[i], order[rng.random_range(0..i)]));
    }
    if n > 1 {
        for _ in 0..extra {
            edges.push((rng.random_range(0..n), rng.random_range(0..n)));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Connected graph with planted groups of `min_group..=max_group` nodes.
/// Each group is a random tree plus random internal edges; a fraction `mix`
/// of the extra edges land anywhere. Consecutive groups are chained by one
/// edge so the graph is connected.
pub fn planted(n: usize, min_group: usize, max_group: usize, avg_degree: f64, mix: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups = Vec::new();
    let mut start = 0;
    while start < n {
        let size = rng.random_range(min_group..=max_group).min(n - start);
        groups.push(start..start + size);
        start += size;
    }
    let mut edges = Vec::new();
    for (i, group) in groups.iter().enumerate() {
        for v in group.start + 1..group.end {
            edges.push((v, rng.random_range(group.start..v)));
        }
        if i > 0 {
            let prev = &groups[i - 1];
            edges.push((rng.random_range(prev.clone()), rng.random_range(group.clone())));
        }
    }
    let target = (avg_degree * n as f64 / 2.0) as usize;
    let group_of: Vec<usize> = groups
        .iter()
        .enumerate()
        .flat_map(|(i, r)| std::iter::repeat_n(i, r.len()))
        .collect();
    while edges.len() < target {
        let u = rng.random_range(0..n);
        let v = if rng.random_bool(mix) {
            rng.random_range(0..n)
        } else {
            rng.random_range(groups[group_of[u]].clone())
        };
        edges.push((u, v));
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_labels(n: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..k)).collect()
}

/// Modularity from the pairwise definition
/// `(1/2m) Σ_ij [A_ij − γ k_i k_j / 2m] δ(c_i, c_j)`.
pub fn modularity_oracle(g: &Graph, labels: &[usize], resolution: f64) -> f64 {
    let n = g.node_count();
    let two_m = 2.0 * g.edge_count() as f64;
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] != labels[j] {
                continue;
            }
            let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
            q += a - resolution * g.degree(i) as f64 * g.degree(j) as f64 / two_m;
        }
    }
    q / two_m
}

/// Edges listed once each, independent of the adjacency layout.
pub fn edge_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.node_count() {
        for v in u + 1..g.node_count() {
            if g.has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

pub fn cut_oracle(g: &Graph, labels: &[usize]) -> usize {
    edge_pairs(g)
        .into_iter()
        .filter(|&(u, v)| labels[u] != labels[v])
        .count()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Components of the subgraph induced by each label, via union-find.
pub fn components_oracle(g: &Graph, labels: &[usize], k: usize) -> Vec<usize> {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    for (u, v) in edge_pairs(g) {
        if labels[u] == labels[v] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut counts = vec![0; k];
    for v in 0..n {
        if find(&mut parent, v) == v {
            counts[labels[v]] += 1;
        }
    }
    counts
}

pub fn isolated_oracle(g: &Graph, labels: &[usize], k: usize) -> Vec<usize> {
    let mut counts = vec![0; k];
    for v in 0..g.node_count() {
        if !(0..g.node_count()).any(|u| u != v && labels[u] == labels[v] && g.has_edge(u, v)) {
            counts[labels[v]] += 1;
        }
    }
    counts
}

/// Cut-edge count between every pair of distinct labels, by brute force.
pub fn pair_cut_oracle(g: &Graph, labels: &[usize]) -> Vec<((usize, usize), usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for (u, v) in edge_pairs(g) {
        let (a, b) = (labels[u], labels[v]);
        if a != b {
            *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    counts.into_iter().collect()
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Components and isolated nodes per block, by union-find over the edge
/// iterator and a neighbour scan. Linear time, for large graphs.
pub fn block_structure(g: &Graph, labels: &[usize], k: usize) -> (Vec<usize>, Vec<usize>) {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    for (u, v) in g.edges() {
        if labels[u] == labels[v] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut components = vec![0; k];
    let mut isolated = vec![0; k];
    for v in 0..n {
        if find(&mut parent, v) == v {
            components[labels[v]] += 1;
        }
        if !g.neighbors(v).iter().any(|&u| labels[u] == labels[v]) {
            isolated[labels[v]] += 1;
        }
    }
    (components, isolated)
}
