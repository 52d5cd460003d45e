//! Multilevel edge separators: coarsen, solve the coarsest graph, then
//! interpolate and refine level by level on a k-hop subgraph around the cut.

use rand::Rng;

use crate::a2c::{A2cParams, Updater};
use crate::coarsen::{coarsening_chain, interpolate_bisection, CoarseLevel};
use crate::episode::{peak_prefix, run_eval, run_train, Env, Rollout};
use crate::error::{Error, Result};
use crate::graph::{cut_frontier, k_hop_subgraph, Bisection, Graph, Side, Subgraph};
use crate::nn::{Agent, Matrix, TaskKind};

pub const EDGE_CHANNELS: usize = 5;
/// Feature index of the subgraph-boundary flag.
const BOUNDARY: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct MultilevelConfig {
    /// Graphs with fewer nodes are solved directly.
    pub n_min: usize,
    pub k_hops: usize,
    /// Seed for the coarsening chain.
    pub seed: u64,
    /// Extra moves allowed at the coarsest level, in percent of `n`.
    pub imbalance: f64,
    /// Recheck caches and features after every refinement step.
    pub audit: bool,
}

impl Default for MultilevelConfig {
    fn default() -> Self {
        Self {
            n_min: 100,
            k_hops: 3,
            seed: 0,
            imbalance: 1.0,
            audit: false,
        }
    }
}

impl MultilevelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 4 {
            return Err(Error::InvalidInput(format!(
                "n_min {} must be at least 4",
                self.n_min
            )));
        }
        if self.k_hops < 1 {
            return Err(Error::InvalidInput("k_hops must be at least 1".into()));
        }
        Ok(())
    }
}

/// How each level is refined after interpolation.
#[derive(Clone, Copy, Debug)]
pub enum Refiner<'a> {
    Agent(&'a Agent),
    /// Repeated improving single-node moves inside the refinement subgraph.
    Greedy,
    None,
}

/// How the coarsest graph is partitioned.
#[derive(Clone, Copy, Debug)]
pub enum CoarseSolver<'a> {
    Fallback,
    Agent(&'a Agent),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelReport {
    pub n: usize,
    pub cut_interpolated: usize,
    pub nc_interpolated: f64,
    pub cut: usize,
    pub nc: f64,
    /// Steps taken by the refinement episode.
    pub steps: usize,
    /// Steps kept after replaying to the reward peak.
    pub applied: usize,
}

#[derive(Clone, Debug)]
pub struct EdgeOutcome {
    pub bisection: Bisection,
    pub coarsest_n: usize,
    /// One report per refined level, coarsest first.
    pub levels: Vec<LevelReport>,
}

/// `[v ∈ A, v ∈ B, v ∈ ∂sub, volA/vol, volB/vol]` per subgraph node.
pub fn build_edge_features(g: &Graph, sub: &Subgraph, b: &Bisection) -> Matrix {
    let vol = g.total_volume().max(1) as f64;
    let (fa, fb) = (b.vol_a() as f64 / vol, b.vol_b() as f64 / vol);
    let mut f = Matrix::zeros(sub.len(), EDGE_CHANNELS);
    for (i, &v) in sub.nodes.iter().enumerate() {
        let row = f.row_mut(i);
        match b.side(v) {
            Side::A => row[0] = 1.0,
            Side::B => row[1] = 1.0,
        }
        row[2] = if sub.boundary[i] { 1.0 } else { 0.0 };
        row[3] = fa;
        row[4] = fb;
    }
    f
}

struct RefineEnv<'a> {
    g: &'a Graph,
    sub: &'a Subgraph,
    b: &'a mut Bisection,
    features: Matrix,
    audit: bool,
}

impl<'a> RefineEnv<'a> {
    fn new(g: &'a Graph, sub: &'a Subgraph, b: &'a mut Bisection, audit: bool) -> Self {
        let features = build_edge_features(g, sub, b);
        Self {
            g,
            sub,
            b,
            features,
            audit,
        }
    }
}

impl Env for RefineEnv<'_> {
    fn features(&self) -> &Matrix {
        &self.features
    }

    fn mask(&self) -> Vec<bool> {
        (0..self.sub.len())
            .map(|i| {
                self.features.get(i, BOUNDARY) != 0.0 || self.b.move_empties_part(self.sub.nodes[i])
            })
            .collect()
    }

    fn step(&mut self, a: usize) -> Result<f64> {
        let v = self.sub.nodes[a];
        if self.sub.boundary[a] {
            return Err(Error::InvalidInput(format!("boundary node {v} selected")));
        }
        let r = self.b.move_node(self.g, v)?;
        let vol = self.g.total_volume() as f64;
        let (fa, fb) = (self.b.vol_a() as f64 / vol, self.b.vol_b() as f64 / vol);
        let row = self.features.row_mut(a);
        row.swap(0, 1);
        for i in 0..self.sub.len() {
            let row = self.features.row_mut(i);
            row[3] = fa;
            row[4] = fb;
        }
        if self.audit {
            let fresh = Bisection::new(self.g, self.b.sides().to_vec())?;
            if fresh != *self.b || build_edge_features(self.g, self.sub, self.b) != self.features {
                return Err(Error::InvalidInput(
                    "refinement state diverged from a full rebuild".into(),
                ));
            }
        }
        Ok(r)
    }
}

/// Undoes the moves after the first `keep`.
fn rewind(g: &Graph, sub: &Subgraph, b: &mut Bisection, actions: &[usize], keep: usize) {
    for &a in actions[keep..].iter().rev() {
        b.flip(g, sub.nodes[a]);
    }
}

/// Refinement subgraph around the current cut, or `None` when there is
/// nothing to refine.
fn refinement_subgraph(g: &Graph, b: &Bisection, k_hops: usize) -> Option<Subgraph> {
    if b.cut() == 0 || b.vol_a() == 0 || b.vol_b() == 0 {
        return None;
    }
    let frontier = cut_frontier(g, b.sides());
    Some(k_hop_subgraph(g, &frontier, k_hops))
}

/// Greedy evaluation episode of length `cut` on `sub`, followed by replay to
/// the cumulative-reward peak. Returns the episode before rewinding.
pub fn refine_episode(
    g: &Graph,
    sub: &Subgraph,
    b: &mut Bisection,
    agent: &Agent,
    audit: bool,
) -> Result<(Vec<usize>, Vec<f64>, usize)> {
    check_kind(agent, TaskKind::Edge)?;
    let len = b.cut();
    let rollout = {
        let mut env = RefineEnv::new(g, sub, b, audit);
        run_eval(agent, &sub.graph, &mut env, len)?
    };
    let keep = peak_prefix(&rollout.rewards);
    rewind(g, sub, b, &rollout.actions, keep);
    Ok((rollout.actions, rollout.rewards, keep))
}

pub(crate) fn check_kind(agent: &Agent, kind: TaskKind) -> Result<()> {
    if agent.kind() != kind {
        return Err(Error::InvalidInput(format!(
            "expected the {} network, got the {} network",
            kind.name(),
            agent.kind().name()
        )));
    }
    Ok(())
}

/// Improving single-node moves over `candidates` (ascending), repeated until
/// a pass makes no move or `max_passes` is reached. Returns the total
/// decrease in normalized cut.
fn greedy_moves(
    g: &Graph,
    b: &mut Bisection,
    candidates: &[usize],
    max_passes: usize,
) -> Result<f64> {
    let mut total = 0.0;
    for _ in 0..max_passes {
        let mut moved = false;
        for &v in candidates {
            let crossing = g.neighbors(v).iter().any(|&w| b.side(w) != b.side(v));
            if !crossing || b.move_empties_part(v) {
                continue;
            }
            let r = b.move_node(g, v)?;
            if r > 1e-15 {
                total += r;
                moved = true;
            } else {
                b.flip(g, v);
            }
        }
        if !moved {
            break;
        }
    }
    Ok(total)
}

/// Greedy local search on the interior of the refinement subgraph.
pub fn greedy_refine(g: &Graph, b: &mut Bisection, k_hops: usize) -> Result<f64> {
    let Some(sub) = refinement_subgraph(g, b, k_hops) else {
        return Ok(0.0);
    };
    let interior: Vec<usize> = sub
        .nodes
        .iter()
        .zip(&sub.boundary)
        .filter(|(_, &bd)| !bd)
        .map(|(&v, _)| v)
        .collect();
    greedy_moves(g, b, &interior, 50)
}

/// Greedy local search over the whole graph, until no single move improves.
pub fn greedy_local_search(g: &Graph, b: &mut Bisection) -> Result<f64> {
    let all: Vec<usize> = (0..g.n()).collect();
    greedy_moves(g, b, &all, usize::MAX)
}

/// Deterministic baseline partition: BFS from a pseudo-peripheral node until
/// half the volume is reached, then one pass of improving boundary moves.
pub fn greedy_fallback_partition(g: &Graph) -> Result<Bisection> {
    if g.n() < 2 {
        return Err(Error::InvalidInput(format!(
            "cannot bisect a graph with {} nodes",
            g.n()
        )));
    }
    grown_bisection(g, g.pseudo_peripheral_node(0))
}

/// BFS growth from `start` to half the volume plus one improving pass.
pub(crate) fn grown_bisection(g: &Graph, start: usize) -> Result<Bisection> {
    let n = g.n();
    let vol = g.total_volume();
    let mut side = vec![Side::B; n];
    let mut vol_a = 0;
    let mut count_a = 0;
    let mut visited = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    let mut next_seed = 0;
    visited[start] = true;
    queue.push_back(start);
    'grow: loop {
        let u = match queue.pop_front() {
            Some(u) => u,
            None => {
                // another component: continue from its lowest node
                while next_seed < n && visited[next_seed] {
                    next_seed += 1;
                }
                if next_seed == n {
                    break;
                }
                visited[next_seed] = true;
                next_seed
            }
        };
        if count_a + 1 == n {
            break;
        }
        side[u] = Side::A;
        vol_a += g.degree(u);
        count_a += 1;
        if 2 * vol_a >= vol {
            break 'grow;
        }
        for &w in g.neighbors(u) {
            if !visited[w] {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut b = Bisection::new(g, side)?;
    if b.vol_a() > 0 && b.vol_b() > 0 {
        let frontier = cut_frontier(g, b.sides());
        greedy_moves(g, &mut b, &frontier, 1)?;
    }
    Ok(b)
}

fn initial_coarse_bisection(g: &Graph) -> Result<(Bisection, usize)> {
    let start = (0..g.n())
        .min_by_key(|&v| (g.degree(v), v))
        .ok_or_else(|| Error::InvalidInput("empty graph".into()))?;
    Ok((Bisection::from_part_a(g, &[start])?, start))
}

struct CoarseEnv<'a> {
    g: &'a Graph,
    b: Bisection,
    features: Matrix,
}

impl<'a> CoarseEnv<'a> {
    fn new(g: &'a Graph) -> Result<Self> {
        let (b, start) = initial_coarse_bisection(g)?;
        let mut features = Matrix::zeros(g.n(), 2);
        for v in 0..g.n() {
            features.set(v, if v == start { 1 } else { 0 }, 1.0);
        }
        Ok(Self { g, b, features })
    }
}

impl Env for CoarseEnv<'_> {
    fn features(&self) -> &Matrix {
        &self.features
    }

    fn mask(&self) -> Vec<bool> {
        (0..self.g.n())
            .map(|v| self.features.get(v, 1) != 0.0 || self.b.move_empties_part(v))
            .collect()
    }

    fn step(&mut self, a: usize) -> Result<f64> {
        if self.b.side(a) != Side::B {
            return Err(Error::InvalidInput(format!("node {a} is already in A")));
        }
        let r = self.b.move_node(self.g, a)?;
        self.features.set(a, 0, 0.0);
        self.features.set(a, 1, 1.0);
        Ok(r)
    }
}

fn coarse_train_len(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

fn coarse_eval_len(n: usize, imbalance: f64) -> usize {
    let extra = (imbalance * n as f64 / 100.0).floor() as usize;
    (coarse_train_len(n) + extra).min(n.saturating_sub(2))
}

/// Coarsest-level partitioner: grow A from a minimum-degree node by greedy
/// agent picks, then keep the prefix with the lowest normalized cut.
pub fn coarse_edge_separator(g: &Graph, agent: &Agent, imbalance: f64) -> Result<Bisection> {
    check_kind(agent, TaskKind::Coarse)?;
    let mut env = CoarseEnv::new(g)?;
    if env.b.vol_a() == 0 {
        return greedy_fallback_partition(g);
    }
    let rollout = run_eval(agent, g, &mut env, coarse_eval_len(g.n(), imbalance))?;
    // NC after k moves is NC_0 minus the k-th prefix sum; ties keep the longer prefix
    let mut best = (0.0, 0);
    let mut acc = 0.0;
    for (t, r) in rollout.rewards.iter().enumerate() {
        acc += r;
        if acc >= best.0 {
            best = (acc, t + 1);
        }
    }
    let mut b = env.b;
    for &a in rollout.actions[best.1..].iter().rev() {
        b.flip(g, a);
    }
    Ok(b)
}

pub(crate) fn solve_coarsest(g: &Graph, coarse: CoarseSolver, imbalance: f64) -> Result<Bisection> {
    match coarse {
        CoarseSolver::Fallback => greedy_fallback_partition(g),
        CoarseSolver::Agent(agent) => coarse_edge_separator(g, agent, imbalance),
    }
}

pub(crate) fn level_graph<'a>(g: &'a Graph, chain: &'a [CoarseLevel], i: usize) -> &'a Graph {
    if i == 0 {
        g
    } else {
        &chain[i - 1].graph
    }
}

fn nc_or_nan(b: &Bisection) -> f64 {
    b.normalized_cut().unwrap_or(f64::NAN)
}

/// Refines one interpolated level in place.
pub fn refine_level(
    g: &Graph,
    b: &mut Bisection,
    cfg: &MultilevelConfig,
    refiner: Refiner,
) -> Result<LevelReport> {
    let mut report = LevelReport {
        n: g.n(),
        cut_interpolated: b.cut(),
        nc_interpolated: nc_or_nan(b),
        cut: b.cut(),
        nc: nc_or_nan(b),
        steps: 0,
        applied: 0,
    };
    let Some(sub) = refinement_subgraph(g, b, cfg.k_hops) else {
        return Ok(report);
    };
    match refiner {
        Refiner::None => {}
        Refiner::Greedy => {
            greedy_refine(g, b, cfg.k_hops)?;
        }
        Refiner::Agent(agent) => {
            let (actions, _, keep) = refine_episode(g, &sub, b, agent, cfg.audit)?;
            report.steps = actions.len();
            report.applied = keep;
        }
    }
    report.cut = b.cut();
    report.nc = nc_or_nan(b);
    Ok(report)
}

/// Full multilevel edge separator.
pub fn edge_separator(
    g: &Graph,
    cfg: &MultilevelConfig,
    refiner: Refiner,
    coarse: CoarseSolver,
) -> Result<EdgeOutcome> {
    cfg.validate()?;
    g.ensure_connected()?;
    if let Refiner::Agent(a) = refiner {
        check_kind(a, TaskKind::Edge)?;
    }
    let chain = coarsening_chain(g, cfg.n_min, cfg.seed);
    let coarsest = level_graph(g, &chain, chain.len());
    let mut b = solve_coarsest(coarsest, coarse, cfg.imbalance)?;
    let mut levels = Vec::with_capacity(chain.len());
    for i in (0..chain.len()).rev() {
        let fine = level_graph(g, &chain, i);
        b = interpolate_bisection(fine, &chain[i], &b)?;
        levels.push(refine_level(fine, &mut b, cfg, refiner)?);
    }
    Ok(EdgeOutcome {
        bisection: b,
        coarsest_n: coarsest.n(),
        levels,
    })
}

/// Outcome of one training pass over a graph.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainEpisode {
    pub steps: usize,
    pub reward: f64,
    pub loss: f64,
}

impl TrainEpisode {
    pub(crate) fn absorb(&mut self, r: &Rollout) {
        self.steps += r.actions.len();
        self.reward += r.rewards.iter().sum::<f64>();
        self.loss += r.loss;
    }
}

/// Training pass of the refinement agent: the coarsest graph is solved by
/// the fallback and every level runs a sampled episode with updates.
pub fn train_edge_episode<R: Rng>(
    g: &Graph,
    agent: &mut Agent,
    cfg: &MultilevelConfig,
    p: &A2cParams,
    rng: &mut R,
    updater: &mut dyn Updater,
) -> Result<TrainEpisode> {
    check_kind(agent, TaskKind::Edge)?;
    g.ensure_connected()?;
    let chain = coarsening_chain(g, cfg.n_min, cfg.seed);
    let mut b = greedy_fallback_partition(level_graph(g, &chain, chain.len()))?;
    let mut out = TrainEpisode::default();
    for i in (0..chain.len()).rev() {
        let fine = level_graph(g, &chain, i);
        b = interpolate_bisection(fine, &chain[i], &b)?;
        let Some(sub) = refinement_subgraph(fine, &b, cfg.k_hops) else {
            continue;
        };
        let len = b.cut();
        let rollout = {
            let mut env = RefineEnv::new(fine, &sub, &mut b, cfg.audit);
            run_train(agent, &sub.graph, &mut env, len, rng, p, updater)?
        };
        out.absorb(&rollout);
        rewind(
            fine,
            &sub,
            &mut b,
            &rollout.actions,
            peak_prefix(&rollout.rewards),
        );
    }
    Ok(out)
}

/// Training pass of the coarse partitioner on `g` itself.
pub fn train_coarse_episode<R: Rng>(
    g: &Graph,
    agent: &mut Agent,
    p: &A2cParams,
    rng: &mut R,
    updater: &mut dyn Updater,
) -> Result<TrainEpisode> {
    check_kind(agent, TaskKind::Coarse)?;
    g.ensure_connected()?;
    let mut env = CoarseEnv::new(g)?;
    if env.b.vol_a() == 0 {
        return Ok(TrainEpisode::default());
    }
    let rollout = run_train(agent, g, &mut env, coarse_train_len(g.n()), rng, p, updater)?;
    let mut out = TrainEpisode::default();
    out.absorb(&rollout);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::a2c::LocalSgd;
    use crate::graph::generators::*;
    use crate::graph::normalized_cut;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small_cfg() -> MultilevelConfig {
        MultilevelConfig {
            n_min: 8,
            audit: true,
            ..MultilevelConfig::default()
        }
    }

    #[test]
    fn feature_rows() {
        let g = path(6);
        let b = Bisection::from_part_a(&g, &[0, 1, 2]).unwrap();
        let sub = k_hop_subgraph(&g, &[2, 3], 1);
        let f = build_edge_features(&g, &sub, &b);
        assert_eq!(f.row(1), &[1.0, 0.0, 0.0, 0.5, 0.5]);
        assert_eq!(f.row(3), &[0.0, 1.0, 1.0, 0.5, 0.5]);
        assert!((0..4).all(|i| f.get(i, 3) == f.get(0, 3)));
    }

    #[test]
    fn fallback_examples() {
        let b = greedy_fallback_partition(&path(4)).unwrap();
        let mut a = b.part(Side::A);
        if !a.contains(&0) {
            a = b.part(Side::B);
        }
        assert_eq!(a, vec![0, 1]);
        assert_eq!(b.cut(), 1);
        let b = greedy_fallback_partition(&complete(4)).unwrap();
        assert_eq!((b.count(Side::A), b.cut()), (2, 4));
        assert!(greedy_fallback_partition(&grid(4, 4)).unwrap().cut() <= 6);
        assert!(greedy_fallback_partition(&path(1)).is_err());
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(greedy_fallback_partition(&two).unwrap().cut(), 0);
    }

    #[test]
    fn grid_4x4_optimum_by_enumeration_is_4() {
        let g = grid(4, 4);
        let mut best = usize::MAX;
        for mask in 1u32..(1 << 16) - 1 {
            if mask.count_ones() != 8 {
                continue;
            }
            let side: Vec<Side> = (0..16)
                .map(|v| if mask >> v & 1 == 1 { Side::A } else { Side::B })
                .collect();
            best = best.min(crate::graph::cut_size(&g, &side));
        }
        assert_eq!(best, 4);
    }

    #[test]
    fn coarse_examples() {
        let agent = Agent::new(TaskKind::Coarse, 3);
        let b = coarse_edge_separator(&path(2), &agent, 1.0).unwrap();
        assert_eq!(b.part(Side::A), vec![0]);
        let (b0, start) = initial_coarse_bisection(&star(5)).unwrap();
        assert_ne!(start, 0);
        assert_eq!(b0.count(Side::A), 1);

        // path of 4: every nontrivial bisection, NC of the output must not
        // exceed the single-node start
        let g = path(4);
        let out = coarse_edge_separator(&g, &agent, 1.0).unwrap();
        assert!((1..=2).contains(&out.count(Side::A)));
        assert!(out.normalized_cut().unwrap() <= b_nc(&g, &[0]) + 1e-15);
        // the 7 nontrivial bisections of the path, counted with node 0 in A
        let all: Vec<f64> = (1u32..16)
            .filter(|m| m & 1 == 1 && *m != 15)
            .map(|m| b_nc(&g, &(0..4).filter(|v| m >> v & 1 == 1).collect::<Vec<_>>()))
            .collect();
        assert_eq!(all.len(), 7);
        let optimum = all.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(out.normalized_cut().unwrap() >= optimum - 1e-15);
    }

    fn b_nc(g: &Graph, a: &[usize]) -> f64 {
        Bisection::from_part_a(g, a)
            .unwrap()
            .normalized_cut()
            .unwrap()
    }

    #[test]
    fn refinement_never_worsens_interpolation() {
        let g = grid(12, 12);
        let agent = Agent::new(TaskKind::Edge, 1);
        let out = edge_separator(
            &g,
            &small_cfg(),
            Refiner::Agent(&agent),
            CoarseSolver::Fallback,
        )
        .unwrap();
        assert!(!out.levels.is_empty());
        for l in &out.levels {
            assert!(l.nc <= l.nc_interpolated + 1e-12, "{l:?}");
            assert!(l.steps <= l.cut_interpolated);
        }
        let b = &out.bisection;
        assert!(
            (normalized_cut(&g, b.sides()).unwrap() - b.normalized_cut().unwrap()).abs() < 1e-12
        );
    }

    #[test]
    fn ladder_refinement_matches_greedy() {
        let g = ladder(8);
        let agent = Agent::new(TaskKind::Edge, 2);
        let cfg = MultilevelConfig {
            n_min: 6,
            ..small_cfg()
        };
        let rl = edge_separator(&g, &cfg, Refiner::Agent(&agent), CoarseSolver::Fallback).unwrap();
        let greedy = edge_separator(&g, &cfg, Refiner::Greedy, CoarseSolver::Fallback).unwrap();
        assert!(rl.bisection.cut() >= 2);
        assert!(greedy.bisection.cut() >= 2);
        for l in rl.levels.iter().chain(&greedy.levels) {
            assert!(l.nc <= l.nc_interpolated + 1e-12);
        }
    }

    #[test]
    fn small_graph_uses_coarsest_solver() {
        let g = grid(2, 3);
        let out =
            edge_separator(&g, &small_cfg(), Refiner::Greedy, CoarseSolver::Fallback).unwrap();
        assert!(out.levels.is_empty());
        assert_eq!(out.bisection, greedy_fallback_partition(&g).unwrap());
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            edge_separator(&two, &small_cfg(), Refiner::None, CoarseSolver::Fallback),
            Err(Error::Disconnected(2))
        ));
    }

    #[test]
    fn negative_episode_replays_nothing() {
        let g = grid(6, 6);
        let mut b = Bisection::from_part_a(&g, &(0..18).collect::<Vec<_>>()).unwrap();
        let before = b.clone();
        let sub = k_hop_subgraph(&g, &cut_frontier(&g, b.sides()), 3);
        let agent = Agent::new(TaskKind::Edge, 0);
        let (actions, rewards, keep) = refine_episode(&g, &sub, &mut b, &agent, true).unwrap();
        assert_eq!(actions.len(), 6);
        let best = rewards
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r;
                Some(*acc)
            })
            .fold(0.0f64, f64::max);
        assert!(
            (before.normalized_cut().unwrap() - best - b.normalized_cut().unwrap()).abs() < 1e-12
        );
        if keep == 0 {
            assert_eq!(b, before);
        }
        for &a in &actions {
            assert!(!sub.boundary[a]);
        }
    }

    #[test]
    fn training_runs_and_keeps_parameters_finite() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut agent = Agent::new(TaskKind::Edge, 0);
        let g = grid(10, 10);
        let ep = train_edge_episode(
            &g,
            &mut agent,
            &small_cfg(),
            &A2cParams::default(),
            &mut rng,
            &mut LocalSgd,
        )
        .unwrap();
        assert!(ep.steps > 0);
        assert!(agent.params().is_finite());
        let mut coarse = Agent::new(TaskKind::Coarse, 0);
        let ep = train_coarse_episode(
            &grid(4, 5),
            &mut coarse,
            &A2cParams::default(),
            &mut rng,
            &mut LocalSgd,
        )
        .unwrap();
        assert_eq!(ep.steps, 9);
        assert!(coarse.params().is_finite());
    }
}
