//! Per-partition training subgraphs.
//!
//! `Inner` keeps only intra-block edges. `Repli` additionally copies every
//! 1-hop neighbour owned by another block into the partition as a halo node,
//! together with the edges joining it to owned nodes, so each owned node
//! sees its full neighbourhood. Halo–halo edges are not copied.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportMode {
    Inner,
    Repli,
}

impl fmt::Display for ExportMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportMode::Inner => "inner",
            ExportMode::Repli => "repli",
        })
    }
}

impl std::str::FromStr for ExportMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inner" => Ok(ExportMode::Inner),
            "repli" => Ok(ExportMode::Repli),
            other => Err(Error::InvalidConfig(format!("unknown export mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Dense node id in the global graph.
    pub global: usize,
    pub owned: bool,
}

/// One partition's subgraph. Local ids index `manifest`; owned nodes come
/// first in ascending global order, then halo nodes likewise.
#[derive(Debug, Clone)]
pub struct PartSubgraph {
    pub graph: Graph,
    pub manifest: Vec<ManifestEntry>,
}

impl PartSubgraph {
    pub fn owned_count(&self) -> usize {
        self.manifest.iter().filter(|e| e.owned).count()
    }

    pub fn halo_count(&self) -> usize {
        self.manifest.len() - self.owned_count()
    }
}

#[derive(Debug, Clone)]
pub struct SubgraphBundle {
    pub mode: ExportMode,
    pub parts: Vec<PartSubgraph>,
    /// External ids of the global graph, indexed by dense id.
    pub external_ids: Vec<u64>,
}

impl SubgraphBundle {
    pub fn global_node_count(&self) -> usize {
        self.external_ids.len()
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// Nodes materialized across all partitions, owned plus halo.
    pub fn materialized_nodes(&self) -> usize {
        self.parts.iter().map(|p| p.manifest.len()).sum()
    }

    /// Global graph rebuilt from every partition's edges.
    pub fn reassemble(&self) -> Result<Graph> {
        let edges = self.parts.iter().flat_map(|part| {
            part.graph
                .edges()
                .map(|(u, v)| (part.manifest[u].global, part.manifest[v].global))
        });
        Graph::from_edges_with_ids(self.external_ids.clone(), edges)
    }

    /// Writes `part-NNNN/{edges.txt, manifest.txt, meta.txt}` under `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        self.parts
            .par_iter()
            .enumerate()
            .try_for_each(|(i, part)| self.write_part(dir, i, part))
    }

    fn write_part(&self, dir: &Path, index: usize, part: &PartSubgraph) -> Result<()> {
        let part_dir = dir.join(format!("part-{index:04}"));
        fs::create_dir_all(&part_dir)?;

        let mut edges = BufWriter::new(fs::File::create(part_dir.join("edges.txt"))?);
        part.graph.write_edge_list(&mut edges)?;
        edges.flush()?;

        let mut manifest = BufWriter::new(fs::File::create(part_dir.join("manifest.txt"))?);
        for (local, entry) in part.manifest.iter().enumerate() {
            let flag = if entry.owned { "owned" } else { "halo" };
            writeln!(manifest, "{local} {} {flag}", self.external_ids[entry.global])?;
        }
        manifest.flush()?;

        let owned = part.owned_count();
        let meta = format!(
            "mode={}\nk={}\npartition={index}\nnodes={}\nowned={owned}\nhalo={}\nedges={}\n",
            self.mode,
            self.k(),
            part.manifest.len(),
            part.manifest.len() - owned,
            part.graph.edge_count(),
        );
        fs::write(part_dir.join("meta.txt"), meta)?;
        Ok(())
    }
}

pub fn export(g: &Graph, p: &Partition, mode: ExportMode) -> Result<SubgraphBundle> {
    p.check_covers(g)?;
    let blocks = p.blocks();
    let parts = blocks
        .par_iter()
        .enumerate()
        .map(|(b, owned)| build_part(g, p, b, owned, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubgraphBundle {
        mode,
        parts,
        external_ids: g.external_ids().to_vec(),
    })
}

pub fn export_inner(g: &Graph, p: &Partition) -> Result<SubgraphBundle> {
    export(g, p, ExportMode::Inner)
}

pub fn export_repli(g: &Graph, p: &Partition) -> Result<SubgraphBundle> {
    export(g, p, ExportMode::Repli)
}

fn build_part(g: &Graph, p: &Partition, block: usize, owned: &[usize], mode: ExportMode) -> Result<PartSubgraph> {
    let mut halo: Vec<usize> = match mode {
        ExportMode::Inner => Vec::new(),
        ExportMode::Repli => owned
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&u| p.block_of(u) != block)
            .collect(),
    };
    halo.sort_unstable();
    halo.dedup();

    let local_of = |u: usize| -> Option<usize> {
        if p.block_of(u) == block {
            owned.binary_search(&u).ok()
        } else {
            halo.binary_search(&u).ok().map(|i| owned.len() + i)
        }
    };
    let mut edges = Vec::new();
    for (i, &v) in owned.iter().enumerate() {
        for &u in g.neighbors(v) {
            if p.block_of(u) == block {
                if u > v {
                    edges.push((i, local_of(u).expect("owned")));
                }
            } else if let Some(h) = local_of(u) {
                edges.push((i, h));
            }
        }
    }

    let manifest: Vec<ManifestEntry> = owned
        .iter()
        .map(|&global| ManifestEntry { global, owned: true })
        .chain(halo.iter().map(|&global| ManifestEntry { global, owned: false }))
        .collect();
    let graph = Graph::from_edges(manifest.len(), edges)?;
    Ok(PartSubgraph { graph, manifest })
}
