//! Connectivity-preserving k-way graph partitioning.
//!
//! Size-capped Leiden communities are greedily fused into `k` balanced
//! blocks. On a connected input graph every block induces exactly one
//! connected component and contains no isolated nodes.
//!
//! ```
//! use leiden_fusion::{lf_partition, metrics, FusionConfig, Graph};
//!
//! let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)];
//! let g = Graph::from_edges(6, edges).unwrap();
//! let p = lf_partition(&g, &FusionConfig::new(2)).unwrap();
//! assert_eq!(p.block_count(), 2);
//! assert_eq!(metrics::component_counts(&g, &p).unwrap(), vec![1, 1]);
//! ```

pub mod baselines;
pub mod cli;
pub mod error;
pub mod export;
pub mod fusion;
pub mod graph;
pub mod leiden;
pub mod metrics;
pub mod partition;

pub use baselines::{lpa_partition, random_partition, LpaConfig};
pub use error::{Error, Result};
pub use export::{export_inner, export_repli, ExportMode, SubgraphBundle};
pub use fusion::{fuse, lf_partition, split_into_components, CutState, FusionConfig};
pub use graph::{ComponentLabeling, Graph, LoadOptions, LoadSummary, NodeSet, Subgraph};
pub use leiden::{leiden_communities, modularity, move_gain, LeidenConfig, MoveTarget};
pub use metrics::{metrics_report, MetricsReport};
pub use partition::Partition;
