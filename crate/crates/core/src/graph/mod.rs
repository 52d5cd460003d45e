//! Graph representation, partition state and quality metrics.

mod bisection;
pub mod generators;
mod separator;
mod subgraph;

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub use bisection::{cut_frontier, cut_size, normalized_cut, volume, Bisection, Side};
pub use separator::{essential_separator_nodes, normalized_separator, Label, Separator3};
pub use subgraph::{k_hop_subgraph, Subgraph};

/// Simple undirected graph in compressed adjacency form.
///
/// Neighbor lists are sorted, symmetric and free of self-loops and duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Self-loops and repeated edges are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut lists = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                continue;
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        Ok(Self::from_lists(lists))
    }

    /// Builds a graph from neighbor lists that are already symmetric.
    /// Lists are sorted and deduplicated; self-loops are removed.
    pub(crate) fn from_lists(mut lists: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for (u, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            targets.extend(list.iter().copied().filter(|&v| v != u));
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Start of `v`'s slice in the flattened adjacency array.
    pub(crate) fn offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    /// Sum of all degrees, i.e. `2m`.
    pub fn total_volume(&self) -> usize {
        self.targets.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Component id per node, numbered in order of each component's lowest node.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().0 == 1
    }

    pub(crate) fn ensure_connected(&self) -> Result<()> {
        let (count, _) = self.components();
        if count > 1 {
            Err(Error::Disconnected(count))
        } else {
            Ok(())
        }
    }

    /// Induced subgraph on `nodes`; local id `i` corresponds to `nodes[i]`.
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        self.induced_with_map(nodes, &local)
    }

    /// Like [`Graph::induced`] but reuses a caller-owned global-to-local map,
    /// which must hold `usize::MAX` for nodes outside the subgraph.
    pub(crate) fn induced_with_map(&self, nodes: &[usize], local: &[usize]) -> Graph {
        let lists = nodes
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                    .collect()
            })
            .collect();
        Graph::from_lists(lists)
    }

    /// Largest connected component (ties go to the lowest component id) and
    /// the parent id of each of its nodes.
    pub fn largest_component(&self) -> (Graph, Vec<usize>) {
        let (count, comp) = self.components();
        if count <= 1 {
            return (self.clone(), (0..self.n()).collect());
        }
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let best = (0..count)
            .max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
            .unwrap();
        let nodes: Vec<usize> = (0..self.n()).filter(|&v| comp[v] == best).collect();
        (self.induced(&nodes), nodes)
    }

    /// BFS distances from a set of sources; unreachable nodes get `usize::MAX`.
    pub fn bfs_distances(&self, sources: &[usize]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// George–Liu pseudo-peripheral node search starting from `start`.
    pub fn pseudo_peripheral_node(&self, start: usize) -> usize {
        let mut root = start;
        let mut ecc = 0;
        loop {
            let dist = self.bfs_distances(&[root]);
            let far = dist
                .iter()
                .copied()
                .filter(|&d| d != usize::MAX)
                .max()
                .unwrap_or(0);
            let candidate = (0..self.n())
                .filter(|&v| dist[v] == far)
                .min_by_key(|&v| (self.degree(v), v))
                .unwrap_or(root);
            if far > ecc {
                ecc = far;
                root = candidate;
            } else {
                return root;
            }
        }
    }
}
