use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};

/// Total assignment of nodes to blocks `0..block_count`.
///
/// Used both for intermediate community sets and for final k-way
/// partitions. Blocks may be empty only when built with an explicit block
/// count (raw label propagation output); [`Partition::compacted`] drops them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    pub fn new(labels: Vec<usize>, block_count: usize) -> Result<Self> {
        let mut sizes = vec![0; block_count];
        for &b in &labels {
            if b >= block_count {
                return Err(Error::BlockOutOfRange { block: b, block_count });
            }
            sizes[b] += 1;
        }
        Ok(Self { labels, sizes })
    }

    /// Relabels arbitrary labels densely, in ascending label order.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut distinct: Vec<usize> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let dense = labels.iter().map(|b| distinct.binary_search(b).unwrap()).collect();
        Self::new(dense, distinct.len()).expect("dense labels")
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
            sizes: vec![1; n],
        }
    }

    pub fn whole(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            sizes: if n == 0 { vec![] } else { vec![n] },
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn non_empty_blocks(&self) -> usize {
        self.sizes.iter().filter(|&&s| s > 0).count()
    }

    #[inline]
    pub fn block_of(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_size(&self, b: usize) -> usize {
        self.sizes[b]
    }

    /// Members of every block, each in ascending node order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (v, &b) in self.labels.iter().enumerate() {
            blocks[b].push(v);
        }
        blocks
    }

    pub fn node_set(&self, b: usize) -> NodeSet {
        NodeSet::new(self.labels.iter().enumerate().filter(|&(_, &l)| l == b).map(|(v, _)| v))
    }

    /// Same blocks with empty ones removed, keeping relative id order.
    pub fn compacted(&self) -> Self {
        if self.sizes.iter().all(|&s| s > 0) {
            return self.clone();
        }
        Self::from_labels(&self.labels)
    }

    /// Renumbers blocks by descending size, ties by ascending id; empty
    /// blocks disappear.
    pub fn renumbered_by_size(&self) -> Self {
        let mut order: Vec<usize> = (0..self.block_count()).filter(|&b| self.sizes[b] > 0).collect();
        order.sort_by(|&a, &b| self.sizes[b].cmp(&self.sizes[a]).then(a.cmp(&b)));
        let mut new_id = vec![usize::MAX; self.block_count()];
        for (i, &b) in order.iter().enumerate() {
            new_id[b] = i;
        }
        let labels = self.labels.iter().map(|&b| new_id[b]).collect();
        Self::new(labels, order.len()).expect("dense labels")
    }

    pub(crate) fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.len() != g.node_count() {
            return Err(Error::PartitionLength {
                labels: self.len(),
                node_count: g.node_count(),
            });
        }
        Ok(())
    }
}
