//! Multilevel vertex separators with the three-way action rule.

use rand::Rng;

use crate::a2c::{A2cParams, Updater};
use crate::coarsen::{coarsening_chain, interpolate_bisection, interpolate_separator, CoarseLevel};
use crate::edge::{
    check_kind, greedy_fallback_partition, grown_bisection, level_graph, solve_coarsest,
    CoarseSolver, MultilevelConfig, Refiner, TrainEpisode,
};
use crate::episode::{peak_prefix, run_eval, run_train, Env};
use crate::error::{Error, Result};
use crate::graph::{k_hop_subgraph, Bisection, Graph, Label, Separator3, Side, Subgraph};
use crate::nn::{Agent, Matrix, TaskKind};

pub const VERTEX_CHANNELS: usize = 7;
const BOUNDARY: usize = 3;
const ESSENTIAL: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct VertexLevelReport {
    pub n: usize,
    pub size_interpolated: usize,
    pub ns_interpolated: f64,
    pub size: usize,
    pub ns: f64,
    pub steps: usize,
    pub applied: usize,
}

#[derive(Clone, Debug)]
pub struct VertexOutcome {
    pub separator: Separator3,
    pub coarsest_n: usize,
    /// One report per refined level, coarsest first.
    pub levels: Vec<VertexLevelReport>,
}

fn feature_row(g: &Graph, s: &Separator3, v: usize, boundary: bool, row: &mut [f64]) {
    row[..5].fill(0.0);
    row[match s.label(v) {
        Label::A => 0,
        Label::B => 1,
        Label::S => 2,
    }] = 1.0;
    row[BOUNDARY] = if boundary { 1.0 } else { 0.0 };
    row[ESSENTIAL] = if s.is_essential(g, v) { 1.0 } else { 0.0 };
}

fn fill_constants(f: &mut Matrix, g: &Graph, s: &Separator3) {
    let n = g.n().max(1) as f64;
    let (fa, fb) = (s.card(Label::A) as f64 / n, s.card(Label::B) as f64 / n);
    for i in 0..f.rows() {
        let row = f.row_mut(i);
        row[5] = fa;
        row[6] = fb;
    }
}

/// `[v ∈ A, v ∈ B, v ∈ S, v ∈ ∂sub, v essential, |A|/n, |B|/n]` per
/// subgraph node.
pub fn build_vertex_features(g: &Graph, sub: &Subgraph, s: &Separator3) -> Matrix {
    let mut f = Matrix::zeros(sub.len(), VERTEX_CHANNELS);
    for (i, &v) in sub.nodes.iter().enumerate() {
        feature_row(g, s, v, sub.boundary[i], f.row_mut(i));
    }
    fill_constants(&mut f, g, s);
    f
}

/// Minimum vertex cover of the cut edges (maximum matching plus König's
/// construction) becomes the separator. Cover nodes are taken from the larger
/// side where the cover is not forced; equal sides count A as larger.
pub fn edge_to_vertex_separator(g: &Graph, b: &Bisection) -> Result<Separator3> {
    if b.sides().len() != g.n() {
        return Err(Error::DimensionMismatch(
            "bisection does not match graph".into(),
        ));
    }
    let (left_side, cover) = konig_cover(g, b);
    let label: Vec<Label> = (0..g.n())
        .map(|v| match b.side(v) {
            _ if cover[v] => Label::S,
            Side::A => Label::A,
            Side::B => Label::B,
        })
        .collect();
    let s = Separator3::new(g, label)?;
    if g.n() > 2 && (s.card(Label::A) == 0 || s.card(Label::B) == 0) {
        // the minimum cover swallowed a whole side; cover from the larger side only
        let label = (0..g.n())
            .map(|v| match b.side(v) {
                x if x == left_side && g.neighbors(v).iter().any(|&w| b.side(w) != x) => Label::S,
                Side::A => Label::A,
                Side::B => Label::B,
            })
            .collect();
        let s = Separator3::new(g, label)?;
        if s.card(Label::A) == 0 || s.card(Label::B) == 0 {
            return Err(Error::DegeneratePartition("separator leaves a side empty"));
        }
        return Ok(s);
    }
    Ok(s)
}

/// Minimum vertex cover of the cut edges, plus the side treated as the left
/// half of the bipartite graph.
fn konig_cover(g: &Graph, b: &Bisection) -> (Side, Vec<bool>) {
    let left_side = if b.count(Side::B) > b.count(Side::A) {
        Side::B
    } else {
        Side::A
    };
    let left: Vec<usize> = (0..g.n())
        .filter(|&v| {
            b.side(v) == left_side && g.neighbors(v).iter().any(|&w| b.side(w) != left_side)
        })
        .collect();
    let cross = |v: usize| {
        g.neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| b.side(w) != b.side(v))
    };

    const NONE: usize = usize::MAX;
    let mut mate = vec![NONE; g.n()];
    // Kuhn's augmenting paths, iterative
    for &root in &left {
        let mut seen = vec![false; g.n()];
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(root, cross(root).collect(), 0)];
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut found = false;
        while let Some((u, nbrs, idx)) = stack.last_mut() {
            if *idx == nbrs.len() {
                stack.pop();
                path.pop();
                continue;
            }
            let w = nbrs[*idx];
            *idx += 1;
            if seen[w] {
                continue;
            }
            seen[w] = true;
            let u = *u;
            path.push((u, w));
            if mate[w] == NONE {
                found = true;
                break;
            }
            let next = mate[w];
            stack.push((next, cross(next).collect(), 0));
        }
        if found {
            for &(u, w) in &path {
                mate[u] = w;
                mate[w] = u;
            }
        }
    }

    // alternating reachability from unmatched left nodes
    let mut z = vec![false; g.n()];
    let mut stack: Vec<usize> = left.iter().copied().filter(|&u| mate[u] == NONE).collect();
    for &u in &stack {
        z[u] = true;
    }
    while let Some(u) = stack.pop() {
        for w in cross(u) {
            if !z[w] && mate[u] != w {
                z[w] = true;
                let m = mate[w];
                if m != NONE && !z[m] {
                    z[m] = true;
                    stack.push(m);
                }
            }
        }
    }
    let cover = (0..g.n())
        .map(|v| {
            let on_cut = g.neighbors(v).iter().any(|&w| b.side(w) != b.side(v));
            on_cut && if b.side(v) == left_side { !z[v] } else { z[v] }
        })
        .collect();
    (left_side, cover)
}

struct VertexEnv<'a> {
    g: &'a Graph,
    sub: &'a Subgraph,
    s: &'a mut Separator3,
    features: Matrix,
    history: Vec<(usize, Label)>,
    audit: bool,
}

impl<'a> VertexEnv<'a> {
    fn new(g: &'a Graph, sub: &'a Subgraph, s: &'a mut Separator3, audit: bool) -> Self {
        let features = build_vertex_features(g, sub, s);
        Self {
            g,
            sub,
            s,
            features,
            history: Vec::new(),
            audit,
        }
    }
}

impl Env for VertexEnv<'_> {
    fn features(&self) -> &Matrix {
        &self.features
    }

    fn mask(&self) -> Vec<bool> {
        (0..self.sub.len())
            .map(|i| {
                self.features.get(i, BOUNDARY) != 0.0
                    || self.features.get(i, ESSENTIAL) != 0.0
                    || self.s.action_empties_side(self.sub.nodes[i])
            })
            .collect()
    }

    fn step(&mut self, a: usize) -> Result<f64> {
        let v = self.sub.nodes[a];
        if self.sub.boundary[a] {
            return Err(Error::InvalidInput(format!("boundary node {v} selected")));
        }
        let old = self.s.label(v);
        let r = self.s.apply_action(self.g, v)?;
        self.history.push((v, old));
        for w in std::iter::once(v).chain(self.g.neighbors(v).iter().copied()) {
            if let Some(i) = self.sub.local(w) {
                feature_row(
                    self.g,
                    self.s,
                    w,
                    self.sub.boundary[i],
                    self.features.row_mut(i),
                );
            }
        }
        fill_constants(&mut self.features, self.g, self.s);
        if self.audit {
            self.s.validate(self.g)?;
            let fresh = Separator3::new_unchecked(self.g, self.s.labels().to_vec())?;
            if [Label::A, Label::B, Label::S]
                .iter()
                .any(|&l| fresh.card(l) != self.s.card(l))
                || build_vertex_features(self.g, self.sub, self.s) != self.features
            {
                return Err(Error::InvalidInput(
                    "separator state diverged from a full rebuild".into(),
                ));
            }
        }
        Ok(r)
    }
}

fn rewind(s: &mut Separator3, history: &[(usize, Label)], keep: usize) {
    for &(v, old) in history[keep..].iter().rev() {
        s.relabel(v, old);
    }
}

fn refinement_subgraph(g: &Graph, s: &Separator3, k_hops: usize) -> Option<Subgraph> {
    if s.card(Label::S) == 0 || s.card(Label::A) == 0 || s.card(Label::B) == 0 {
        return None;
    }
    Some(k_hop_subgraph(g, &s.nodes(Label::S), k_hops))
}

/// Greedy evaluation episode of length `2|S|`, then replay to the reward
/// peak. Returns the episode's actions (local ids), rewards and kept length.
pub fn vertex_refine_episode(
    g: &Graph,
    sub: &Subgraph,
    s: &mut Separator3,
    agent: &Agent,
    audit: bool,
) -> Result<(Vec<usize>, Vec<f64>, usize)> {
    check_kind(agent, TaskKind::Vertex)?;
    let len = 2 * s.card(Label::S);
    let mut env = VertexEnv::new(g, sub, s, audit);
    let rollout = run_eval(agent, &sub.graph, &mut env, len)?;
    let keep = peak_prefix(&rollout.rewards);
    let history = std::mem::take(&mut env.history);
    rewind(env.s, &history, keep);
    Ok((rollout.actions, rollout.rewards, keep))
}

/// Moves every non-essential separator node inside the refinement subgraph
/// out of the separator, as long as that lowers the normalized separator.
pub fn greedy_thin(g: &Graph, s: &mut Separator3, k_hops: usize) -> Result<f64> {
    let Some(sub) = refinement_subgraph(g, s, k_hops) else {
        return Ok(0.0);
    };
    let mut total = 0.0;
    loop {
        let mut moved = false;
        for (i, &v) in sub.nodes.iter().enumerate() {
            if sub.boundary[i] || s.label(v) != Label::S || s.is_essential(g, v) {
                continue;
            }
            let old = s.label(v);
            let r = s.apply_action(g, v)?;
            if r > 1e-15 {
                total += r;
                moved = true;
            } else {
                s.relabel(v, old);
            }
        }
        if !moved {
            return Ok(total);
        }
    }
}

fn ns_or_nan(s: &Separator3) -> f64 {
    s.normalized_separator().unwrap_or(f64::NAN)
}

pub fn refine_vertex_level(
    g: &Graph,
    s: &mut Separator3,
    cfg: &MultilevelConfig,
    refiner: Refiner,
) -> Result<VertexLevelReport> {
    let mut report = VertexLevelReport {
        n: g.n(),
        size_interpolated: s.card(Label::S),
        ns_interpolated: ns_or_nan(s),
        size: s.card(Label::S),
        ns: ns_or_nan(s),
        steps: 0,
        applied: 0,
    };
    let Some(sub) = refinement_subgraph(g, s, cfg.k_hops) else {
        return Ok(report);
    };
    match refiner {
        Refiner::None => {}
        Refiner::Greedy => {
            greedy_thin(g, s, cfg.k_hops)?;
        }
        Refiner::Agent(agent) => {
            let (actions, _, keep) = vertex_refine_episode(g, &sub, s, agent, cfg.audit)?;
            report.steps = actions.len();
            report.applied = keep;
        }
    }
    if cfg.audit {
        s.validate(g)?;
    }
    report.size = s.card(Label::S);
    report.ns = ns_or_nan(s);
    Ok(report)
}

/// Vertex separator of a graph small enough to be solved directly.
pub fn coarsest_vertex_separator(
    g: &Graph,
    coarse: CoarseSolver,
    imbalance: f64,
) -> Result<Separator3> {
    let b = solve_coarsest(g, coarse, imbalance)?;
    edge_to_vertex_separator(g, &b)
}

/// Solves the coarsest graph as a bisection and carries the bisection up the
/// chain until its cut cover leaves both sides non-empty. Returns the level
/// index reached and the separator there.
fn starting_separator(
    g: &Graph,
    chain: &[CoarseLevel],
    b: Bisection,
) -> Result<(usize, Separator3)> {
    let mut level = chain.len();
    let mut b = b;
    loop {
        let lg = level_graph(g, chain, level);
        match edge_to_vertex_separator(lg, &b) {
            Ok(s) => return Ok((level, s)),
            Err(Error::DegeneratePartition(_)) if level > 0 => {
                level -= 1;
                b = interpolate_bisection(level_graph(g, chain, level), &chain[level], &b)?;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Fallback start: BFS bisections grown from every coarsest node, keeping the
/// one whose converted separator sits lowest in the chain with the smallest NS.
fn multistart_separator(g: &Graph, chain: &[CoarseLevel]) -> Result<(usize, Separator3)> {
    let coarsest = level_graph(g, chain, chain.len());
    let mut best: Option<(usize, f64, Separator3)> = None;
    for v in 0..coarsest.n() {
        let Ok((level, s)) = starting_separator(g, chain, grown_bisection(coarsest, v)?) else {
            continue;
        };
        let ns = s.normalized_separator().unwrap_or(f64::INFINITY);
        if best
            .as_ref()
            .is_none_or(|(l, b, _)| level > *l || (level == *l && ns < *b))
        {
            best = Some((level, ns, s));
        }
    }
    match best {
        Some((level, _, s)) => Ok((level, s)),
        None => starting_separator(g, chain, greedy_fallback_partition(coarsest)?),
    }
}

/// Full multilevel vertex separator.
pub fn vertex_separator(
    g: &Graph,
    cfg: &MultilevelConfig,
    refiner: Refiner,
    coarse: CoarseSolver,
) -> Result<VertexOutcome> {
    cfg.validate()?;
    g.ensure_connected()?;
    if let Refiner::Agent(a) = refiner {
        check_kind(a, TaskKind::Vertex)?;
    }
    let chain = coarsening_chain(g, cfg.n_min, cfg.seed);
    let coarsest = level_graph(g, &chain, chain.len());
    let (start, mut s) = match coarse {
        CoarseSolver::Fallback => multistart_separator(g, &chain)?,
        CoarseSolver::Agent(_) => {
            starting_separator(g, &chain, solve_coarsest(coarsest, coarse, cfg.imbalance)?)?
        }
    };
    let mut levels = Vec::with_capacity(start);
    for i in (0..start).rev() {
        let fine = level_graph(g, &chain, i);
        s = interpolate_separator(fine, &chain[i], &s)?;
        levels.push(refine_vertex_level(fine, &mut s, cfg, refiner)?);
    }
    Ok(VertexOutcome {
        separator: s,
        coarsest_n: coarsest.n(),
        levels,
    })
}

/// Training pass of the vertex agent; mirrors the edge training shape.
pub fn train_vertex_episode<R: Rng>(
    g: &Graph,
    agent: &mut Agent,
    cfg: &MultilevelConfig,
    p: &A2cParams,
    rng: &mut R,
    updater: &mut dyn Updater,
) -> Result<TrainEpisode> {
    check_kind(agent, TaskKind::Vertex)?;
    g.ensure_connected()?;
    let chain = coarsening_chain(g, cfg.n_min, cfg.seed);
    let (start, mut s) = multistart_separator(g, &chain)?;
    let mut out = TrainEpisode::default();
    for i in (0..start).rev() {
        let fine = level_graph(g, &chain, i);
        s = interpolate_separator(fine, &chain[i], &s)?;
        let Some(sub) = refinement_subgraph(fine, &s, cfg.k_hops) else {
            continue;
        };
        let len = 2 * s.card(Label::S);
        let mut env = VertexEnv::new(fine, &sub, &mut s, cfg.audit);
        let rollout = run_train(agent, &sub.graph, &mut env, len, rng, p, updater)?;
        out.absorb(&rollout);
        let history = std::mem::take(&mut env.history);
        rewind(env.s, &history, peak_prefix(&rollout.rewards));
    }
    Ok(out)
}
