//! Heavy-edge-matching coarsening and interpolation back to finer graphs.
//!
//! The graphs here are unweighted, so "heavy" degenerates to a neighbor
//! choice rule: each visited node matches the unmatched neighbor that has the
//! fewest unmatched neighbors left, breaking ties by lowest id. Nodes are
//! visited in a seeded random order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Bisection, Graph, Label, Separator3};

/// One coarsening step: the coarse graph and the fine-to-coarse cluster map.
#[derive(Clone, Debug)]
pub struct CoarseLevel {
    pub fine2coarse: Vec<usize>,
    pub graph: Graph,
    pub cluster_sizes: Vec<usize>,
}

impl CoarseLevel {
    pub fn fine_n(&self) -> usize {
        self.fine2coarse.len()
    }

    pub fn coarse_n(&self) -> usize {
        self.graph.n()
    }
}

pub fn heavy_edge_matching(g: &Graph, seed: u64) -> CoarseLevel {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    heavy_edge_matching_with_order(g, &order)
}

/// Matching with an explicit visiting order. Coarse ids follow the order in
/// which clusters are formed.
pub fn heavy_edge_matching_with_order(g: &Graph, order: &[usize]) -> CoarseLevel {
    let n = g.n();
    let mut fine2coarse = vec![usize::MAX; n];
    let mut free_deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut cluster_sizes = Vec::with_capacity(n / 2 + 1);

    let take = |v: usize, id: usize, fine2coarse: &mut [usize], free_deg: &mut [usize]| {
        fine2coarse[v] = id;
        for &w in g.neighbors(v) {
            free_deg[w] -= 1;
        }
    };

    for &u in order {
        if fine2coarse[u] != usize::MAX {
            continue;
        }
        let id = cluster_sizes.len();
        take(u, id, &mut fine2coarse, &mut free_deg);
        let mate = g
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&w| fine2coarse[w] == usize::MAX)
            .min_by_key(|&w| (free_deg[w], w));
        match mate {
            Some(w) => {
                take(w, id, &mut fine2coarse, &mut free_deg);
                cluster_sizes.push(2);
            }
            None => cluster_sizes.push(1),
        }
    }

    let nc = cluster_sizes.len();
    let mut lists = vec![Vec::new(); nc];
    for u in 0..n {
        let cu = fine2coarse[u];
        for &w in g.neighbors(u) {
            let cw = fine2coarse[w];
            if cu != cw {
                lists[cu].push(cw);
            }
        }
    }
    CoarseLevel {
        fine2coarse,
        graph: Graph::from_lists(lists),
        cluster_sizes,
    }
}

/// Coarsens until the coarsest graph has fewer than `n_min` nodes or a step
/// fails to shrink the graph. Returns the levels finest first.
pub fn coarsening_chain(g: &Graph, n_min: usize, seed: u64) -> Vec<CoarseLevel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels: Vec<CoarseLevel> = Vec::new();
    loop {
        let current = levels.last().map_or(g, |l| &l.graph);
        if current.n() < n_min.max(2) {
            break;
        }
        let level = heavy_edge_matching(current, rng.gen());
        if level.coarse_n() == current.n() {
            break;
        }
        levels.push(level);
    }
    levels
}

pub fn interpolate_bisection(
    fine: &Graph,
    lvl: &CoarseLevel,
    coarse: &Bisection,
) -> Result<Bisection> {
    if coarse.sides().len() != lvl.coarse_n() || fine.n() != lvl.fine_n() {
        return Err(Error::DimensionMismatch(
            "bisection does not match coarse level".into(),
        ));
    }
    let side = lvl.fine2coarse.iter().map(|&c| coarse.side(c)).collect();
    Bisection::new(fine, side)
}

pub fn interpolate_separator(
    fine: &Graph,
    lvl: &CoarseLevel,
    coarse: &Separator3,
) -> Result<Separator3> {
    if coarse.labels().len() != lvl.coarse_n() || fine.n() != lvl.fine_n() {
        return Err(Error::DimensionMismatch(
            "separator does not match coarse level".into(),
        ));
    }
    coarse.validate(&lvl.graph)?;
    let label: Vec<Label> = lvl.fine2coarse.iter().map(|&c| coarse.label(c)).collect();
    // a fine A-B edge would pull back to a coarse A-B edge
    Separator3::new_unchecked(fine, label)
}
