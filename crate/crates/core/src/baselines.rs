//! Comparison partitioners: synchronous label propagation and uniform random
//! assignment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone)]
pub struct LpaConfig {
    pub k: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl LpaConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            max_iters: 100,
            seed: 42,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Most frequent label among `neighbor_labels`, smallest label on ties.
/// `None` for an empty input.
pub fn mode_label(neighbor_labels: &[usize]) -> Option<usize> {
    let mut sorted = neighbor_labels.to_vec();
    sorted.sort_unstable();
    let mut best: Option<(usize, usize)> = None;
    for run in sorted.chunk_by(|a, b| a == b) {
        if best.is_none_or(|(_, count)| run.len() > count) {
            best = Some((run[0], run.len()));
        }
    }
    best.map(|(label, _)| label)
}

/// One synchronous sweep: every node takes the mode of its neighbours'
/// previous labels. Nodes without neighbours keep their label.
pub fn lpa_sweep(g: &Graph, labels: &[usize], k: usize) -> Vec<usize> {
    (0..g.node_count())
        .into_par_iter()
        .map_init(
            || vec![0usize; k],
            |counts, v| {
                let neighbors = g.neighbors(v);
                if neighbors.is_empty() {
                    return labels[v];
                }
                for &u in neighbors {
                    counts[labels[u]] += 1;
                }
                let mut best = labels[neighbors[0]];
                for &u in neighbors {
                    let l = labels[u];
                    if counts[l] > counts[best] || (counts[l] == counts[best] && l < best) {
                        best = l;
                    }
                }
                for &u in neighbors {
                    counts[labels[u]] = 0;
                }
                best
            },
        )
        .collect()
}

/// k-way label propagation. Labels start uniformly random in `0..k` and
/// sweeps run until a fixpoint or `max_iters`. Blocks that die out stay in
/// the result as empty blocks.
pub fn lpa_partition(g: &Graph, cfg: &LpaConfig) -> Result<Partition> {
    lpa_run(g, cfg).map(|run| run.partition)
}

#[derive(Debug, Clone)]
pub struct LpaRun {
    pub partition: Partition,
    /// Sweeps that changed at least one label.
    pub sweeps: usize,
    /// True when a sweep changed nothing before `max_iters` ran out.
    pub converged: bool,
}

pub fn lpa_run(g: &Graph, cfg: &LpaConfig) -> Result<LpaRun> {
    if cfg.k < 1 || cfg.max_iters < 1 {
        return Err(Error::InvalidConfig("k and max_iters must be at least 1".into()));
    }
    let initial = random_partition(g, cfg.k, cfg.seed)?;
    let mut labels = initial.labels().to_vec();
    let mut sweeps = 0;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        let next = lpa_sweep(g, &labels, cfg.k);
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
        sweeps += 1;
    }
    log::debug!("lpa: {sweeps} sweeps, converged = {converged}");
    Ok(LpaRun {
        partition: Partition::new(labels, cfg.k)?,
        sweeps,
        converged,
    })
}

/// Each node independently uniform over `0..k`.
pub fn random_partition(g: &Graph, k: usize, seed: u64) -> Result<Partition> {
    if k < 1 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..g.node_count()).map(|_| rng.random_range(0..k)).collect();
    Partition::new(labels, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    #[test]
    fn mode_rule() {
        assert_eq!(mode_label(&[1, 1, 0]), Some(1));
        assert_eq!(mode_label(&[0, 1]), Some(0));
        assert_eq!(mode_label(&[3, 2, 3, 2]), Some(2));
        assert_eq!(mode_label(&[]), None);
    }

    #[test]
    fn sweep_matches_mode_rule() {
        // Star centre 0 with leaves labelled 1, 1, 0.
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let next = lpa_sweep(&g, &[0, 1, 1, 0], 2);
        assert_eq!(next[0], 1);
        let tie = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        assert_eq!(lpa_sweep(&tie, &[1, 0, 1], 2)[0], 0);
    }

    #[test]
    fn isolated_nodes_keep_their_label() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(lpa_sweep(&g, &[0, 1, 2], 3)[2], 2);
    }

    #[test]
    fn single_label() {
        let g = path(10);
        let p = lpa_partition(&g, &LpaConfig::new(1)).unwrap();
        assert!(p.labels().iter().all(|&l| l == 0));
        assert!(random_partition(&g, 1, 9).unwrap().labels().iter().all(|&l| l == 0));
    }

    #[test]
    fn early_stop_is_a_fixpoint() {
        let g = path(30);
        let mut converged = 0;
        for seed in 0..20 {
            let run = lpa_run(&g, &LpaConfig::new(3).with_seed(seed)).unwrap();
            if run.converged {
                converged += 1;
                assert_eq!(lpa_sweep(&g, run.partition.labels(), 3), run.partition.labels());
            } else {
                assert_eq!(run.sweeps, 100);
            }
        }
        assert!(converged > 0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let g = path(50);
        assert_eq!(
            lpa_partition(&g, &LpaConfig::new(4).with_seed(3)).unwrap(),
            lpa_partition(&g, &LpaConfig::new(4).with_seed(3)).unwrap()
        );
        assert_eq!(random_partition(&g, 4, 5).unwrap(), random_partition(&g, 4, 5).unwrap());
        assert_ne!(random_partition(&g, 4, 5).unwrap(), random_partition(&g, 4, 6).unwrap());
    }

    #[test]
    fn rejects_zero_k() {
        assert!(matches!(random_partition(&path(3), 0, 0), Err(Error::InvalidConfig(_))));
        assert!(matches!(
            lpa_partition(&path(3), &LpaConfig::new(0)),
            Err(Error::InvalidConfig(_))
        ));
    }
}
