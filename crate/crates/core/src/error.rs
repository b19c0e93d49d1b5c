use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("line {line}: node id `{token}` overflows a 64-bit id")]
    IdOverflow { line: usize, token: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },

    #[error("arc {from} -> {to} has no reverse arc")]
    AsymmetricInput { from: u64, to: u64 },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("node sets overlap at node {node}")]
    OverlappingSets { node: usize },

    #[error("partition labels {labels} nodes but the graph has {node_count}")]
    PartitionLength { labels: usize, node_count: usize },

    #[error("block id {block} is out of range for {block_count} blocks")]
    BlockOutOfRange { block: usize, block_count: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("graph is disconnected ({components} components); only connected graphs are supported")]
    DisconnectedGraph { components: usize },

    #[error("block {block} induces {components} components; split blocks into components before fusion")]
    DisconnectedBlock { block: usize, components: usize },

    #[error("{found} blocks available, fewer than the requested k = {k}")]
    TooFewBlocks { found: usize, k: usize },

    #[error("community detection found {found} communities, fewer than k = {k}; lower beta to shrink the community size cap")]
    TooFewCommunities { found: usize, k: usize },

    #[error("community {0} is not active")]
    InactiveCommunity(usize),

    #[error("community {0} has no neighbouring community")]
    NoNeighbor(usize),

    #[error("partition file line {line}: {reason}")]
    PartitionFileSyntax { line: usize, reason: String },

    #[error("partition file line {line}: node {node} is not in the graph")]
    UnknownNode { line: usize, node: u64 },

    #[error("partition file line {line}: node {node} assigned twice")]
    DuplicateNode { line: usize, node: u64 },

    #[error("partition file has no entry for node {node}")]
    MissingNode { node: u64 },

    #[error("malformed metrics report: {0}")]
    MalformedReport(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
