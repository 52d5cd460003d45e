use std::time::Instant;

use super::minimum_degree::minimum_degree;
use super::pattern::{Permutation, SparsePattern};
use super::symbolic::{symbolic_fill, FillStats};
use crate::edge::{CoarseSolver, MultilevelConfig, Refiner};
use crate::error::{Error, Result};
use crate::graph::{Graph, Label, Separator3};
use crate::nn::{Agent, TaskKind};
use crate::vertex::vertex_separator;

/// Source of vertex separators for nested dissection.
pub trait SeparatorProvider {
    fn name(&self) -> &str;
    /// Separator of a connected graph.
    fn separator(&self, g: &Graph) -> Result<Separator3>;
}

/// Multilevel separator refined by a trained vertex agent.
pub struct DrlSeparator<'a> {
    pub agent: &'a Agent,
    pub coarse: CoarseSolver<'a>,
    pub cfg: MultilevelConfig,
}

impl<'a> DrlSeparator<'a> {
    pub fn new(agent: &'a Agent, cfg: MultilevelConfig) -> Result<Self> {
        if agent.kind() != TaskKind::Vertex {
            return Err(Error::VersionMismatch(format!(
                "{} agent used for vertex separators",
                agent.kind().name()
            )));
        }
        Ok(Self {
            agent,
            coarse: CoarseSolver::Fallback,
            cfg,
        })
    }
}

impl SeparatorProvider for DrlSeparator<'_> {
    fn name(&self) -> &str {
        "nd-drl"
    }

    fn separator(&self, g: &Graph) -> Result<Separator3> {
        Ok(vertex_separator(g, &self.cfg, Refiner::Agent(self.agent), self.coarse)?.separator)
    }
}

/// Multilevel separator with greedy thinning instead of an agent.
#[derive(Clone, Debug, Default)]
pub struct GreedySeparator {
    pub cfg: MultilevelConfig,
}

impl SeparatorProvider for GreedySeparator {
    fn name(&self) -> &str {
        "nd-greedy"
    }

    fn separator(&self, g: &Graph) -> Result<Separator3> {
        Ok(vertex_separator(g, &self.cfg, Refiner::Greedy, CoarseSolver::Fallback)?.separator)
    }
}

fn place(out: &mut [usize], start: usize, nodes: &[usize], local_order: &Permutation) {
    for (k, &i) in local_order.as_slice().iter().enumerate() {
        out[start + k] = nodes[i];
    }
}

/// Nested dissection: subdomain A first, then B, then the separator. Blocks
/// smaller than `n_min` and blocks whose separator is degenerate are ordered
/// by minimum degree; disconnected blocks are split into components ordered
/// by their lowest node.
pub fn nested_dissection(g: &Graph, n_min: usize, provider: &dyn SeparatorProvider) -> Permutation {
    let n = g.n();
    if n < n_min {
        return minimum_degree(g);
    }
    let mut out = vec![usize::MAX; n];
    let mut local = vec![usize::MAX; n];
    let mut stack: Vec<(Vec<usize>, usize)> = vec![((0..n).collect(), 0)];
    while let Some((nodes, start)) = stack.pop() {
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let sub = g.induced_with_map(&nodes, &local);
        for &v in &nodes {
            local[v] = usize::MAX;
        }
        if nodes.len() < n_min {
            place(&mut out, start, &nodes, &minimum_degree(&sub));
            continue;
        }
        let (count, comp) = sub.components();
        if count > 1 {
            let mut parts: Vec<Vec<usize>> = vec![Vec::new(); count];
            for (i, &c) in comp.iter().enumerate() {
                parts[c].push(nodes[i]);
            }
            let mut at = start;
            for part in parts {
                let len = part.len();
                stack.push((part, at));
                at += len;
            }
            continue;
        }
        let s = match provider.separator(&sub) {
            Ok(s)
                if s.is_valid(&sub)
                    && [Label::A, Label::B, Label::S]
                        .iter()
                        .all(|&l| s.card(l) > 0) =>
            {
                s
            }
            Ok(_) => {
                log::debug!(
                    "degenerate separator on a block of {}, using minimum degree",
                    nodes.len()
                );
                place(&mut out, start, &nodes, &minimum_degree(&sub));
                continue;
            }
            Err(e) => {
                log::debug!(
                    "separator failed on a block of {} ({e}), using minimum degree",
                    nodes.len()
                );
                place(&mut out, start, &nodes, &minimum_degree(&sub));
                continue;
            }
        };
        let pick = |l: Label| -> Vec<usize> { s.nodes(l).into_iter().map(|i| nodes[i]).collect() };
        let (a, b, sep) = (pick(Label::A), pick(Label::B), pick(Label::S));
        let tail = start + a.len() + b.len();
        out[tail..tail + sep.len()].copy_from_slice(&sep);
        let b_start = start + a.len();
        stack.push((b, b_start));
        stack.push((a, start));
    }
    Permutation::new(out).expect("every node placed once")
}

/// Orders a symmetric pattern by nested dissection and reports fill before
/// and after.
#[derive(Clone, Debug)]
pub struct OrderReport {
    pub permutation: Permutation,
    pub natural: FillStats,
    pub ordered: FillStats,
    pub seconds: f64,
}

pub fn order_matrix(
    a: &SparsePattern,
    n_min: usize,
    provider: &dyn SeparatorProvider,
) -> Result<OrderReport> {
    let g = a.to_graph();
    let t = Instant::now();
    let permutation = nested_dissection(&g, n_min, provider);
    let seconds = t.elapsed().as_secs_f64();
    let natural = symbolic_fill(a, &Permutation::identity(a.n()))?;
    let ordered = symbolic_fill(a, &permutation)?;
    Ok(OrderReport {
        permutation,
        natural,
        ordered,
        seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Splits paths at their middle node.
    struct Middle;

    impl SeparatorProvider for Middle {
        fn name(&self) -> &str {
            "middle"
        }

        fn separator(&self, g: &Graph) -> Result<Separator3> {
            let m = g.n() / 2;
            let label = (0..g.n())
                .map(|v| {
                    if v < m {
                        Label::A
                    } else if v == m {
                        Label::S
                    } else {
                        Label::B
                    }
                })
                .collect();
            Separator3::new(g, label)
        }
    }

    struct Failing;

    impl SeparatorProvider for Failing {
        fn name(&self) -> &str {
            "failing"
        }

        fn separator(&self, _: &Graph) -> Result<Separator3> {
            Err(Error::DegeneratePartition("no separator"))
        }
    }

    #[test]
    fn path_of_seven() {
        let p = nested_dissection(&path(7), 2, &Middle);
        assert_eq!(p.as_slice(), &[0, 2, 1, 4, 6, 5, 3]);
        let pos = p.inverse();
        assert!(pos[3] == 6 && pos[1] > pos[0].max(pos[2]) && pos[5] > pos[4].max(pos[6]));
        // eliminating 2 and 6 links their subdomain separators to node 3
        let fill = symbolic_fill(&SparsePattern::from_graph(&path(7)), &p).unwrap();
        assert_eq!(fill.fill_count, 2);
    }

    #[test]
    fn small_graphs_use_minimum_degree() {
        let g = grid(4, 4);
        assert_eq!(nested_dissection(&g, 100, &Middle), minimum_degree(&g));
        assert_eq!(nested_dissection(&g, 4, &Failing), minimum_degree(&g));
    }

    #[test]
    fn components_are_concatenated() {
        let g = Graph::from_edges(6, [(0, 3), (3, 5), (1, 2), (2, 4)]).unwrap();
        let p = nested_dissection(&g, 2, &Failing);
        assert_eq!(p.as_slice(), &[0, 3, 5, 1, 2, 4]);
    }

    #[test]
    fn random_graphs_give_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let provider = GreedySeparator {
            cfg: MultilevelConfig {
                n_min: 8,
                ..Default::default()
            },
        };
        for _ in 0..100 {
            let n = rng.gen_range(1..80);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool((3.0 / n as f64).min(1.0)) {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let p = nested_dissection(&g, 10, &provider);
            assert!(Permutation::new(p.as_slice().to_vec()).is_ok());
            assert_eq!(p.len(), n);
        }
    }

    #[test]
    fn grids_beat_natural_order() {
        let provider = GreedySeparator {
            cfg: MultilevelConfig {
                n_min: 20,
                ..Default::default()
            },
        };
        for side in [9, 12, 20] {
            let a = SparsePattern::from_graph(&grid(side, side));
            let r = order_matrix(&a, 16, &provider).unwrap();
            assert!(
                r.ordered.fill_count <= r.natural.fill_count,
                "{side}: {:?}",
                r
            );
        }
        let agent = Agent::new(TaskKind::Vertex, 0);
        let drl = DrlSeparator::new(
            &agent,
            MultilevelConfig {
                n_min: 20,
                ..Default::default()
            },
        )
        .unwrap();
        let a = SparsePattern::from_graph(&grid(15, 15));
        let r = order_matrix(&a, 16, &drl).unwrap();
        assert!(r.ordered.fill_count <= r.natural.fill_count);
        assert!(
            DrlSeparator::new(&Agent::new(TaskKind::Edge, 0), MultilevelConfig::default()).is_err()
        );
    }
}
