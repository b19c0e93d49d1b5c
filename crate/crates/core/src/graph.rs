//! Immutable undirected graphs in compressed adjacency form.
//!
//! Node ids are dense (`0..n`) internally. The external ids read from an edge
//! list are kept in ascending order alongside, so `external_id(v)` maps back
//! and `node_of(id)` is a binary search.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Undirected simple graph: symmetric sorted adjacency, no self-loops, no
/// parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    external_ids: Vec<u64>,
}

/// Options for [`Graph::read_edge_list`].
#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    /// Treat every line as an undirected edge. When false, every arc must
    /// have its reverse present in the input.
    pub symmetrize: bool,
    /// Drop `u u` lines. When false they are an error.
    pub skip_self_loops: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            symmetrize: true,
            skip_self_loops: true,
        }
    }
}

/// What was discarded while reading an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadSummary {
    pub edge_lines: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// A sorted, duplicate-free set of dense node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeSet {
    nodes: Vec<usize>,
}

impl NodeSet {
    pub fn new(nodes: impl IntoIterator<Item = usize>) -> Self {
        let mut nodes: Vec<usize> = nodes.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        Self { nodes }
    }

    pub fn all(n: usize) -> Self {
        Self {
            nodes: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.nodes
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().copied()
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.nodes.last() {
            Some(&v) if v >= n => Err(Error::NodeOutOfRange { node: v, node_count: n }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// Dense component ids, numbered in order of each component's smallest node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub labels: Vec<usize>,
    pub count: usize,
}

/// An induced subgraph together with the parent id of every local node.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    pub parent: Vec<usize>,
}

impl Graph {
    /// Builds a graph on `0..n` from an edge iterator. Self-loops and
    /// duplicates are dropped; `(u, v)` and `(v, u)` are the same edge.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_edges_with_ids((0..n as u64).collect(), edges)
    }

    /// Like [`Graph::from_edges`] with explicit external ids, which must be
    /// strictly ascending.
    pub fn from_edges_with_ids(
        external_ids: Vec<u64>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if external_ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("external ids must be strictly ascending".into()));
        }
        let n = external_ids.len();
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, node_count: n });
                }
            }
            if u != v {
                pairs.push((u.min(v), u.max(v)));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_unique_pairs(external_ids, &pairs))
    }

    // `pairs` must be sorted, deduplicated, with u < v.
    fn from_unique_pairs(external_ids: Vec<u64>, pairs: &[(usize, usize)]) -> Self {
        let n = external_ids.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; offsets[n]];
        for &(u, v) in pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Self {
            offsets,
            targets,
            external_ids,
        }
    }

    /// Reads a whitespace-separated edge list: `u v` or `u v w` per line,
    /// `#` comments, weights parsed and ignored. Ids are compacted to
    /// `0..n` in ascending order of external id; a node that only appears in
    /// a dropped self-loop is not part of the graph.
    pub fn read_edge_list(reader: impl BufRead, opts: LoadOptions) -> Result<(Self, LoadSummary)> {
        let mut summary = LoadSummary::default();
        let mut arcs: Vec<(u64, u64)> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_ascii_whitespace().collect();
            if tokens.len() < 2 || tokens.len() > 3 {
                return Err(Error::MalformedLine {
                    line: lineno,
                    reason: format!("expected 2 or 3 columns, found {}", tokens.len()),
                });
            }
            let u = parse_id(tokens[0], lineno)?;
            let v = parse_id(tokens[1], lineno)?;
            if let Some(w) = tokens.get(2) {
                if w.parse::<f64>().is_err() {
                    return Err(Error::MalformedLine {
                        line: lineno,
                        reason: format!("weight `{w}` is not a number"),
                    });
                }
            }
            summary.edge_lines += 1;
            if u == v {
                if !opts.skip_self_loops {
                    return Err(Error::SelfLoop { line: lineno, node: u });
                }
                summary.self_loops_dropped += 1;
                continue;
            }
            arcs.push((u, v));
        }

        if !opts.symmetrize {
            let mut directed = arcs.clone();
            directed.sort_unstable();
            directed.dedup();
            for &(u, v) in &directed {
                if directed.binary_search(&(v, u)).is_err() {
                    return Err(Error::AsymmetricInput { from: u, to: v });
                }
            }
        }

        let kept = arcs.len();
        for arc in arcs.iter_mut() {
            if arc.0 > arc.1 {
                *arc = (arc.1, arc.0);
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        summary.duplicates_dropped = kept - arcs.len();
        if arcs.is_empty() {
            return Err(Error::EmptyGraph);
        }

        let mut ids: Vec<u64> = arcs.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let dense = |x: u64| ids.binary_search(&x).expect("id collected above");
        let mut pairs: Vec<(usize, usize)> = arcs.iter().map(|&(u, v)| (dense(u), dense(v))).collect();
        // Dense ids are order preserving, so pairs stay sorted.
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        pairs.shrink_to_fit();

        if summary.self_loops_dropped + summary.duplicates_dropped > 0 {
            log::warn!(
                "edge list: dropped {} self-loops and {} duplicate edges",
                summary.self_loops_dropped,
                summary.duplicates_dropped
            );
        }
        Ok((Self::from_unique_pairs(ids, &pairs), summary))
    }

    /// Writes `u v` lines (u < v, external ids) in ascending order.
    pub fn write_edge_list(&self, mut w: impl Write) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", self.external_ids[u], self.external_ids[v])?;
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn external_id(&self, v: usize) -> u64 {
        self.external_ids[v]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    /// Dense id of an external id, if present.
    pub fn node_of(&self, external: u64) -> Option<usize> {
        self.external_ids.binary_search(&external).ok()
    }

    /// Every undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Graph on `nodes` keeping exactly the edges with both ends inside.
    /// Local ids follow ascending parent id; external ids are inherited.
    pub fn induced_subgraph(&self, nodes: &NodeSet) -> Result<Subgraph> {
        let n = self.node_count();
        nodes.check_range(n)?;
        let mut local = vec![usize::MAX; n];
        for (i, v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for v in nodes.iter() {
            targets.extend(
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| local[u] != usize::MAX)
                    .map(|&u| local[u]),
            );
            offsets.push(targets.len());
        }
        let graph = Graph {
            offsets,
            targets,
            external_ids: nodes.iter().map(|v| self.external_ids[v]).collect(),
        };
        Ok(Subgraph {
            graph,
            parent: nodes.as_slice().to_vec(),
        })
    }

    pub fn connected_components(&self) -> ComponentLabeling {
        let n = self.node_count();
        self.components_where(&vec![0; n])
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().count <= 1
    }

    /// Components of the graph after removing every edge whose endpoints
    /// carry different `blocks` labels. Ids are ordered by smallest node.
    pub fn components_where(&self, blocks: &[usize]) -> ComponentLabeling {
        let n = self.node_count();
        assert_eq!(blocks.len(), n, "one block label per node");
        let mut labels = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if labels[w] == usize::MAX && blocks[w] == blocks[u] {
                        labels[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        ComponentLabeling { labels, count }
    }

    /// Number of undirected edges with one end in `a` and the other in `b`.
    pub fn cut_edges(&self, a: &NodeSet, b: &NodeSet) -> Result<usize> {
        let n = self.node_count();
        a.check_range(n)?;
        b.check_range(n)?;
        let mut in_b = vec![false; n];
        for v in b.iter() {
            in_b[v] = true;
        }
        if let Some(v) = a.iter().find(|&v| in_b[v]) {
            return Err(Error::OverlappingSets { node: v });
        }
        Ok(a.iter()
            .map(|u| self.neighbors(u).iter().filter(|&&w| in_b[w]).count())
            .sum())
    }

    /// Number of edges with both ends in `a`.
    pub fn internal_edges(&self, a: &NodeSet) -> Result<usize> {
        let n = self.node_count();
        a.check_range(n)?;
        let mut inside = vec![false; n];
        for v in a.iter() {
            inside[v] = true;
        }
        let twice: usize = a
            .iter()
            .map(|u| self.neighbors(u).iter().filter(|&&w| inside[w]).count())
            .sum();
        Ok(twice / 2)
    }
}

fn parse_id(token: &str, line: usize) -> Result<u64> {
    token.parse::<u64>().map_err(|_| {
        if !token.is_empty() && token.bytes().all(|b| b.is_ascii_digit()) {
            Error::IdOverflow {
                line,
                token: token.to_string(),
            }
        } else {
            Error::MalformedLine {
                line,
                reason: format!("`{token}` is not a non-negative integer id"),
            }
        }
    })
}
