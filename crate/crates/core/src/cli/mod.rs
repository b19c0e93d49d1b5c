//! `lfusion` command-line front end.

pub mod partition_file;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{lpa_partition, random_partition, LpaConfig};
use crate::error::{Error, Result};
use crate::export::{export, ExportMode};
use crate::fusion::{lf_partition, repair_and_fuse, FusionConfig};
use crate::graph::{Graph, LoadOptions};
use crate::metrics::metrics_report;
use crate::partition::Partition;

pub use partition_file::{read_partition, write_partition};

#[derive(Debug, Parser)]
#[command(
    name = "lfusion",
    version,
    about = "Connectivity-preserving k-way graph partitioning"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition a graph and report quality metrics.
    Partition(PartitionArgs),
    /// Split an existing partition into connected pieces and fuse them to k blocks.
    Fuse(FuseArgs),
    /// Compute quality metrics for an existing partition.
    Metrics(MetricsArgs),
    /// Write per-partition subgraphs to a directory tree.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Leiden communities fused into k blocks.
    Lf,
    /// Synchronous label propagation.
    Lpa,
    /// Uniform random assignment.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Inner,
    Repli,
}

impl From<Mode> for ExportMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Inner => ExportMode::Inner,
            Mode::Repli => ExportMode::Repli,
        }
    }
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// Edge list file.
    #[arg(long)]
    pub input: PathBuf,
    /// Number of partitions.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Balance slack on the per-partition node bound.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Community size cap as a fraction of the partition node bound.
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Modularity resolution.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Label propagation sweep budget.
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    /// Partition file to write.
    #[arg(long)]
    pub output: PathBuf,
    /// Metrics report file; stdout when absent.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Partition file to repair.
    #[arg(long)]
    pub partitions: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub partitions: PathBuf,
    /// Also export in this mode and report its replication factor.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Report file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub partitions: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Inner)]
    pub mode: Mode,
    /// Directory to write `part-NNNN/` subdirectories into.
    #[arg(long)]
    pub output: PathBuf,
}

/// Process exit status for a failed command.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_) => 2,
        Error::DisconnectedGraph { .. } | Error::DisconnectedBlock { .. } | Error::TooFewBlocks { .. } => 3,
        Error::TooFewCommunities { .. } => 4,
        Error::MissingNode { .. }
        | Error::UnknownNode { .. }
        | Error::DuplicateNode { .. }
        | Error::PartitionFileSyntax { .. }
        | Error::PartitionLength { .. } => 5,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Partition(args) => cmd_partition(&args),
        Command::Fuse(args) => cmd_fuse(&args),
        Command::Metrics(args) => cmd_metrics(&args),
        Command::Export(args) => cmd_export(&args),
    }
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    let reader = BufReader::new(File::open(path)?);
    let (g, summary) = Graph::read_edge_list(reader, LoadOptions::default())?;
    log::info!(
        "{}: {} nodes, {} edges ({} lines)",
        path.display(),
        g.node_count(),
        g.edge_count(),
        summary.edge_lines
    );
    Ok(g)
}

fn load_partition(g: &Graph, path: &Path) -> Result<Partition> {
    read_partition(g, BufReader::new(File::open(path)?))
}

fn save_partition(g: &Graph, p: &Partition, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_partition(g, p, &mut w)?;
    w.flush()?;
    Ok(())
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_partition(args: &PartitionArgs) -> Result<()> {
    if args.k < 1 {
        return Err(Error::InvalidConfig("--k must be at least 1".into()));
    }
    let g = load_graph(&args.input)?;
    let p = match args.method {
        Method::Lf => {
            let cfg = FusionConfig {
                k: args.k,
                alpha: args.alpha,
                beta: args.beta,
                resolution: args.gamma,
                seed: args.seed,
            };
            lf_partition(&g, &cfg)?
        }
        Method::Lpa => {
            let cfg = LpaConfig {
                k: args.k,
                max_iters: args.max_iters,
                seed: args.seed,
            };
            lpa_partition(&g, &cfg)?
        }
        Method::Random => random_partition(&g, args.k, args.seed)?,
    };
    let p = p.renumbered_by_size();
    if p.block_count() < args.k {
        log::warn!("only {} of {} partitions are non-empty", p.block_count(), args.k);
    }
    save_partition(&g, &p, &args.output)?;
    let report = metrics_report(&g, &p, None)?;
    emit(&report.to_string(), args.metrics.as_deref())
}

pub fn cmd_fuse(args: &FuseArgs) -> Result<()> {
    let g = load_graph(&args.input)?;
    let p = load_partition(&g, &args.partitions)?;
    let cfg = FusionConfig {
        alpha: args.alpha,
        ..FusionConfig::new(args.k)
    };
    let fused = repair_and_fuse(&g, &p, &cfg)?.renumbered_by_size();
    save_partition(&g, &fused, &args.output)
}

pub fn cmd_metrics(args: &MetricsArgs) -> Result<()> {
    let g = load_graph(&args.input)?;
    let p = load_partition(&g, &args.partitions)?;
    let bundle = args.mode.map(|mode| export(&g, &p, mode.into())).transpose()?;
    let report = metrics_report(&g, &p, bundle.as_ref())?;
    emit(&report.to_string(), args.output.as_deref())
}

pub fn cmd_export(args: &ExportArgs) -> Result<()> {
    let g = load_graph(&args.input)?;
    let p = load_partition(&g, &args.partitions)?;
    let bundle = export(&g, &p, args.mode.into())?;
    bundle.write_to_dir(&args.output)?;
    eprintln!(
        "wrote {} {} partitions to {}",
        bundle.k(),
        bundle.mode,
        args.output.display()
    );
    Ok(())
}
