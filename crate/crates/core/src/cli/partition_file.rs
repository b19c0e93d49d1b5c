//! Partition files: one `global_node_id partition_id` line per node.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Writes one line per node in ascending external id order.
pub fn write_partition(g: &Graph, p: &Partition, mut w: impl Write) -> Result<()> {
    p.check_covers(g)?;
    for v in 0..g.node_count() {
        writeln!(w, "{} {}", g.external_id(v), p.block_of(v))?;
    }
    Ok(())
}

/// Reads a partition file against `g`. Every node must appear exactly once;
/// partition ids are compacted in ascending order. Blank lines and `#`
/// comments are skipped.
pub fn read_partition(g: &Graph, reader: impl BufRead) -> Result<Partition> {
    let mut labels = vec![usize::MAX; g.node_count()];
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let syntax = |reason: String| Error::PartitionFileSyntax { line: lineno, reason };
        let tokens: Vec<&str> = trimmed.split_ascii_whitespace().collect();
        let [node, block] = tokens[..] else {
            return Err(syntax(format!("expected 2 columns, found {}", tokens.len())));
        };
        let node: u64 = node.parse().map_err(|_| syntax(format!("`{node}` is not a node id")))?;
        let block: usize = block
            .parse()
            .map_err(|_| syntax(format!("`{block}` is not a partition id")))?;
        let v = g.node_of(node).ok_or(Error::UnknownNode { line: lineno, node })?;
        if labels[v] != usize::MAX {
            return Err(Error::DuplicateNode { line: lineno, node });
        }
        labels[v] = block;
    }
    if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
        return Err(Error::MissingNode { node: g.external_id(v) });
    }
    Ok(Partition::from_labels(&labels))
}
