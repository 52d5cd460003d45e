use std::collections::VecDeque;

use super::Graph;

/// Induced subgraph together with its parent ids and boundary flags.
///
/// A node is on the boundary when it has a parent-graph neighbor outside the
/// subgraph.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub nodes: Vec<usize>,
    pub graph: Graph,
    pub boundary: Vec<bool>,
}

impl Subgraph {
    /// Builds the induced subgraph on `nodes`, which must be sorted and unique.
    pub fn new(parent: &Graph, nodes: Vec<usize>) -> Self {
        let mut local = vec![usize::MAX; parent.n()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let graph = parent.induced_with_map(&nodes, &local);
        let boundary = nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| graph.degree(i) < parent.degree(v))
            .collect();
        Self {
            nodes,
            graph,
            boundary,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Local id of parent node `v`, if it is in the subgraph.
    pub fn local(&self, v: usize) -> Option<usize> {
        self.nodes.binary_search(&v).ok()
    }

    pub fn boundary_nodes(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.boundary[i])
            .map(|i| self.nodes[i])
            .collect()
    }
}

/// Induced subgraph on every node within `k` hops of `seeds`.
pub fn k_hop_subgraph(g: &Graph, seeds: &[usize], k: usize) -> Subgraph {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    let mut nodes = Vec::new();
    for &s in seeds {
        if dist[s] == usize::MAX {
            dist[s] = 0;
            queue.push_back(s);
            nodes.push(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == k {
            continue;
        }
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
                nodes.push(v);
            }
        }
    }
    nodes.sort_unstable();
    Subgraph::new(g, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use proptest::prelude::*;

    #[test]
    fn path_examples() {
        let g = path(6);
        let sub = k_hop_subgraph(&g, &[2, 3], 1);
        assert_eq!(sub.nodes, vec![1, 2, 3, 4]);
        assert_eq!(sub.boundary_nodes(), vec![1, 4]);
        assert_eq!(sub.graph.m(), 3);

        let sub0 = k_hop_subgraph(&g, &[2, 3], 0);
        assert_eq!(sub0.nodes, vec![2, 3]);
        assert_eq!(sub0.graph.m(), 1);

        let all = k_hop_subgraph(&g, &[2, 3], 10);
        assert_eq!(all.nodes, (0..6).collect::<Vec<_>>());
        assert!(all.boundary_nodes().is_empty());
        assert_eq!(all.local(4), Some(4));
    }

    proptest! {
        #[test]
        fn monotone_in_k(rows in 2usize..7, cols in 2usize..7, seed in 0usize..36, k in 0usize..4) {
            let g = grid(rows, cols);
            let s = seed % g.n();
            let small = k_hop_subgraph(&g, &[s], k);
            let big = k_hop_subgraph(&g, &[s], k + 1);
            prop_assert!(small.nodes.iter().all(|v| big.nodes.contains(v)));
            prop_assert!(small.nodes.contains(&s));
            for (i, &v) in small.nodes.iter().enumerate() {
                let outside = g.neighbors(v).iter().any(|w| !small.nodes.contains(w));
                prop_assert_eq!(small.boundary[i], outside);
            }
            for (a, b) in small.graph.edges() {
                prop_assert!(g.has_edge(small.nodes[a], small.nodes[b]));
            }
        }
    }
}
