//! Multi-epoch training driver with optional worker threads sharing one model.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::a2c::{A2cParams, LocalSgd, SharedSgd, Updater};
use crate::coarsen::coarsening_chain;
use crate::edge::{train_coarse_episode, train_edge_episode, MultilevelConfig, TrainEpisode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nn::{Agent, TaskKind};
use crate::vertex::train_vertex_episode;

pub const TRAIN_LOG_HEADER: &str =
    "# epoch graph-id episode-length cumulative-reward loss wall-time";

#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub epochs: usize,
    pub workers: usize,
    pub seed: u64,
    pub a2c: A2cParams,
    pub multilevel: MultilevelConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 1,
            workers: 1,
            seed: 0,
            a2c: A2cParams::default(),
            multilevel: MultilevelConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::InvalidInput("at least one worker is needed".into()));
        }
        self.a2c.validate()?;
        self.multilevel.validate()
    }
}

/// One episode on one graph.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainRecord {
    pub epoch: usize,
    pub graph_id: usize,
    pub length: usize,
    pub reward: f64,
    pub loss: f64,
    pub wall_time: f64,
}

impl fmt::Display for TrainRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {:.12e} {:.12e} {:.6}",
            self.epoch, self.graph_id, self.length, self.reward, self.loss, self.wall_time
        )
    }
}

impl FromStr for TrainRecord {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(Error::InvalidInput(format!(
                "training record needs 6 fields, got {}",
                f.len()
            )));
        }
        let bad = |s: &str| Error::InvalidInput(format!("bad field {s:?}"));
        Ok(Self {
            epoch: f[0].parse().map_err(|_| bad(f[0]))?,
            graph_id: f[1].parse().map_err(|_| bad(f[1]))?,
            length: f[2].parse().map_err(|_| bad(f[2]))?,
            reward: f[3].parse().map_err(|_| bad(f[3]))?,
            loss: f[4].parse().map_err(|_| bad(f[4]))?,
            wall_time: f[5].parse().map_err(|_| bad(f[5]))?,
        })
    }
}

/// Episode RNG, a function of the run seed, epoch and graph only.
pub fn episode_rng(seed: u64, epoch: usize, graph_id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((epoch as u64) << 32) ^ graph_id as u64);
    rng
}

fn run_episode(
    kind: TaskKind,
    g: &Graph,
    agent: &mut Agent,
    cfg: &TrainConfig,
    rng: &mut ChaCha8Rng,
    updater: &mut dyn Updater,
) -> Result<TrainEpisode> {
    let ml = MultilevelConfig {
        seed: rng.gen(),
        ..cfg.multilevel.clone()
    };
    match kind {
        TaskKind::Edge => train_edge_episode(g, agent, &ml, &cfg.a2c, rng, updater),
        TaskKind::Coarse => train_coarse_episode(g, agent, &cfg.a2c, rng, updater),
        TaskKind::Vertex => train_vertex_episode(g, agent, &ml, &cfg.a2c, rng, updater),
    }
}

fn record(epoch: usize, graph_id: usize, ep: &TrainEpisode, start: Instant) -> TrainRecord {
    TrainRecord {
        epoch,
        graph_id,
        length: ep.steps,
        reward: ep.reward,
        loss: ep.loss,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

/// Trains `agent` on every graph for `cfg.epochs` epochs. The coarse task
/// trains on the coarsest graph of each graph's coarsening chain. With one
/// worker the run is a deterministic function of the seed; with more, worker
/// `w` handles graphs `w, w + W, ...` and steps the shared model under a lock.
/// `on_epoch` sees each epoch's records, ordered by graph id.
pub fn train(
    agent: Agent,
    graphs: &[Graph],
    cfg: &TrainConfig,
    mut on_epoch: impl FnMut(&[TrainRecord]) -> Result<()>,
) -> Result<Agent> {
    cfg.validate()?;
    let kind = agent.kind();
    let coarse_graphs: Vec<Graph>;
    let graphs = if kind == TaskKind::Coarse {
        coarse_graphs = graphs
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let chain = coarsening_chain(g, cfg.multilevel.n_min, cfg.seed ^ i as u64);
                chain.last().map_or_else(|| g.clone(), |l| l.graph.clone())
            })
            .collect();
        &coarse_graphs[..]
    } else {
        graphs
    };

    if cfg.workers == 1 {
        let mut agent = agent;
        for epoch in 0..cfg.epochs {
            let mut records = Vec::with_capacity(graphs.len());
            for (id, g) in graphs.iter().enumerate() {
                let start = Instant::now();
                let mut rng = episode_rng(cfg.seed, epoch, id);
                let ep = run_episode(kind, g, &mut agent, cfg, &mut rng, &mut LocalSgd)?;
                records.push(record(epoch, id, &ep, start));
            }
            on_epoch(&records)?;
        }
        return Ok(agent);
    }

    let shared = Mutex::new(agent);
    for epoch in 0..cfg.epochs {
        let results: Vec<Result<Vec<TrainRecord>>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..cfg.workers)
                .map(|w| {
                    let shared = &shared;
                    s.spawn(move || -> Result<Vec<TrainRecord>> {
                        let mut local = shared.lock().unwrap_or_else(|e| e.into_inner()).clone();
                        let mut updater = SharedSgd { shared };
                        let mut out = Vec::new();
                        for id in (w..graphs.len()).step_by(cfg.workers) {
                            let start = Instant::now();
                            let mut rng = episode_rng(cfg.seed, epoch, id);
                            local.clone_from(&shared.lock().unwrap_or_else(|e| e.into_inner()));
                            let ep = run_episode(
                                kind,
                                &graphs[id],
                                &mut local,
                                cfg,
                                &mut rng,
                                &mut updater,
                            )?;
                            out.push(record(epoch, id, &ep, start));
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("training worker panicked"))
                .collect()
        });
        let mut records = Vec::with_capacity(graphs.len());
        for r in results {
            records.extend(r?);
        }
        records.sort_by_key(|r| r.graph_id);
        on_epoch(&records)?;
    }
    Ok(shared.into_inner().unwrap_or_else(|e| e.into_inner()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    fn cfg(workers: usize) -> TrainConfig {
        TrainConfig {
            epochs: 2,
            workers,
            seed: 11,
            multilevel: MultilevelConfig {
                n_min: 12,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    fn run(kind: TaskKind, workers: usize) -> (Agent, Vec<TrainRecord>) {
        let graphs = vec![grid(6, 6), grid(5, 8), ladder(12)];
        let mut log = Vec::new();
        let agent = train(Agent::new(kind, 3), &graphs, &cfg(workers), |r| {
            log.extend_from_slice(r);
            Ok(())
        })
        .unwrap();
        (agent, log)
    }

    fn strip(log: &[TrainRecord]) -> Vec<(usize, usize, usize, u64, u64)> {
        log.iter()
            .map(|r| {
                (
                    r.epoch,
                    r.graph_id,
                    r.length,
                    r.reward.to_bits(),
                    r.loss.to_bits(),
                )
            })
            .collect()
    }

    #[test]
    fn one_record_per_graph_and_epoch() {
        for kind in [TaskKind::Edge, TaskKind::Coarse, TaskKind::Vertex] {
            let (agent, log) = run(kind, 1);
            assert_eq!(log.len(), 6);
            assert_eq!(
                log.iter()
                    .map(|r| (r.epoch, r.graph_id))
                    .collect::<Vec<_>>(),
                vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
            );
            assert!(agent.params().is_finite());
            assert_ne!(agent, Agent::new(kind, 3), "{kind:?} did not learn");
        }
    }

    #[test]
    fn single_worker_is_deterministic() {
        let (a, la) = run(TaskKind::Edge, 1);
        let (b, lb) = run(TaskKind::Edge, 1);
        assert_eq!(a, b);
        assert_eq!(strip(&la), strip(&lb));
    }

    #[test]
    fn several_workers_train_the_shared_model() {
        let (agent, log) = run(TaskKind::Vertex, 3);
        assert_eq!(log.len(), 6);
        assert!(agent.params().is_finite());
        assert!(log
            .windows(2)
            .all(|w| (w[0].epoch, w[0].graph_id) < (w[1].epoch, w[1].graph_id)));
    }

    #[test]
    fn record_round_trip() {
        let r = TrainRecord {
            epoch: 1,
            graph_id: 4,
            length: 17,
            reward: 0.25,
            loss: -1.5e-3,
            wall_time: 0.01,
        };
        let back: TrainRecord = r.to_string().parse().unwrap();
        assert_eq!(
            (
                back.epoch,
                back.graph_id,
                back.length,
                back.reward,
                back.loss
            ),
            (1, 4, 17, 0.25, -1.5e-3)
        );
        assert!("1 2 3".parse::<TrainRecord>().is_err());
    }
}
