//! Partition quality metrics.
//!
//! Cut edges are counted once each: `tau` is the number of edges whose
//! endpoints lie in different blocks divided by `m`. Edge balance uses each
//! block's internal edges.

use std::fmt;

use crate::error::{Error, Result};
use crate::export::SubgraphBundle;
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub tau: f64,
    pub components: Vec<usize>,
    pub isolated: Vec<usize>,
    pub rho_nodes: f64,
    pub rho_edges: f64,
    pub replication_factor: Option<f64>,
}

pub fn cut_edge_count(g: &Graph, p: &Partition) -> Result<usize> {
    p.check_covers(g)?;
    Ok(g.edges().filter(|&(u, v)| p.block_of(u) != p.block_of(v)).count())
}

pub fn edge_cut_fraction(g: &Graph, p: &Partition) -> Result<f64> {
    let cut = cut_edge_count(g, p)?;
    match g.edge_count() {
        0 => Err(Error::EmptyGraph),
        m => Ok(cut as f64 / m as f64),
    }
}

/// Connected components induced by each block (0 for an empty block).
pub fn component_counts(g: &Graph, p: &Partition) -> Result<Vec<usize>> {
    p.check_covers(g)?;
    let split = g.components_where(p.labels());
    let mut counts = vec![0; p.block_count()];
    let mut counted = vec![false; split.count];
    for (v, &c) in split.labels.iter().enumerate() {
        if !counted[c] {
            counted[c] = true;
            counts[p.block_of(v)] += 1;
        }
    }
    Ok(counts)
}

/// Nodes per block with no neighbour inside their own block.
pub fn isolated_node_counts(g: &Graph, p: &Partition) -> Result<Vec<usize>> {
    p.check_covers(g)?;
    let mut counts = vec![0; p.block_count()];
    for v in 0..g.node_count() {
        let b = p.block_of(v);
        if !g.neighbors(v).iter().any(|&u| p.block_of(u) == b) {
            counts[b] += 1;
        }
    }
    Ok(counts)
}

pub fn internal_edge_counts(g: &Graph, p: &Partition) -> Result<Vec<usize>> {
    p.check_covers(g)?;
    let mut counts = vec![0; p.block_count()];
    for (u, v) in g.edges() {
        if p.block_of(u) == p.block_of(v) {
            counts[p.block_of(u)] += 1;
        }
    }
    Ok(counts)
}

fn check_k(p: &Partition, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be positive".into()));
    }
    if k != p.block_count() {
        return Err(Error::InvalidConfig(format!(
            "k = {k} does not match the partition's {} blocks",
            p.block_count()
        )));
    }
    Ok(())
}

/// Largest block size over the ideal `n / k`.
pub fn node_balance(p: &Partition, k: usize) -> Result<f64> {
    check_k(p, k)?;
    let largest = p.sizes().iter().copied().max().unwrap_or(0);
    Ok(largest as f64 * k as f64 / p.len() as f64)
}

/// Largest per-block internal edge count over the ideal `m / k`. Falls below
/// 1 when many edges are cut.
pub fn edge_balance(g: &Graph, p: &Partition, k: usize) -> Result<f64> {
    check_k(p, k)?;
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let largest = internal_edge_counts(g, p)?.into_iter().max().unwrap_or(0);
    Ok(largest as f64 * k as f64 / m as f64)
}

/// Average number of partitions materializing each node.
pub fn replication_factor(bundle: &SubgraphBundle) -> f64 {
    bundle.materialized_nodes() as f64 / bundle.global_node_count() as f64
}

pub fn metrics_report(g: &Graph, p: &Partition, bundle: Option<&SubgraphBundle>) -> Result<MetricsReport> {
    let k = p.block_count();
    Ok(MetricsReport {
        n: g.node_count(),
        m: g.edge_count(),
        k,
        tau: edge_cut_fraction(g, p)?,
        components: component_counts(g, p)?,
        isolated: isolated_node_counts(g, p)?,
        rho_nodes: node_balance(p, k)?,
        rho_edges: edge_balance(g, p, k)?,
        replication_factor: bundle.map(replication_factor),
    })
}

impl fmt::Display for MetricsReport {
    /// Flat `key=value` lines in a fixed order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tau={}", self.tau)?;
        for (i, c) in self.components.iter().enumerate() {
            writeln!(f, "components[{i}]={c}")?;
        }
        for (i, c) in self.isolated.iter().enumerate() {
            writeln!(f, "isolated[{i}]={c}")?;
        }
        writeln!(f, "rho_nodes={}", self.rho_nodes)?;
        writeln!(f, "rho_edges={}", self.rho_edges)?;
        if let Some(rf) = self.replication_factor {
            writeln!(f, "replication_factor={rf}")?;
        }
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "m={}", self.m)?;
        writeln!(f, "k={}", self.k)
    }
}

impl std::str::FromStr for MetricsReport {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::MalformedReport(format!("bad value `{value}` for `{key}`")))
        }
        fn indexed(list: &mut Vec<usize>, key: &str, index: &str, value: &str) -> Result<()> {
            let i: usize = num(key, index)?;
            if i != list.len() {
                return Err(Error::MalformedReport(format!("`{key}` out of order")));
            }
            list.push(num(key, value)?);
            Ok(())
        }

        let (mut tau, mut rho_nodes, mut rho_edges, mut rf) = (None, None, None, None);
        let (mut n, mut m, mut k) = (None, None, None);
        let (mut components, mut isolated) = (Vec::new(), Vec::new());
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::MalformedReport(format!("line without `=`: {line}")))?;
            match key {
                "tau" => tau = Some(num(key, value)?),
                "rho_nodes" => rho_nodes = Some(num(key, value)?),
                "rho_edges" => rho_edges = Some(num(key, value)?),
                "replication_factor" => rf = Some(num(key, value)?),
                "n" => n = Some(num(key, value)?),
                "m" => m = Some(num(key, value)?),
                "k" => k = Some(num(key, value)?),
                _ => match key.strip_suffix(']').and_then(|k| k.split_once('[')) {
                    Some(("components", i)) => indexed(&mut components, key, i, value)?,
                    Some(("isolated", i)) => indexed(&mut isolated, key, i, value)?,
                    _ => return Err(Error::MalformedReport(format!("unknown key `{key}`"))),
                },
            }
        }
        let missing = |key: &str| Error::MalformedReport(format!("missing `{key}`"));
        Ok(MetricsReport {
            n: n.ok_or_else(|| missing("n"))?,
            m: m.ok_or_else(|| missing("m"))?,
            k: k.ok_or_else(|| missing("k"))?,
            tau: tau.ok_or_else(|| missing("tau"))?,
            components,
            isolated,
            rho_nodes: rho_nodes.ok_or_else(|| missing("rho_nodes"))?,
            rho_edges: rho_edges.ok_or_else(|| missing("rho_edges"))?,
            replication_factor: rf,
        })
    }
}
