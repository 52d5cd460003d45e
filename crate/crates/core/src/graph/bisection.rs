use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Two-way node labeling with cached volumes, cardinalities and cut size.
#[derive(Clone, Debug, PartialEq)]
pub struct Bisection {
    side: Vec<Side>,
    vol: [usize; 2],
    count: [usize; 2],
    cut: usize,
}

fn slot(side: Side) -> usize {
    match side {
        Side::A => 0,
        Side::B => 1,
    }
}

impl Bisection {
    pub fn new(g: &Graph, side: Vec<Side>) -> Result<Self> {
        if side.len() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} nodes",
                side.len(),
                g.n()
            )));
        }
        let mut vol = [0; 2];
        let mut count = [0; 2];
        for (v, &s) in side.iter().enumerate() {
            vol[slot(s)] += g.degree(v);
            count[slot(s)] += 1;
        }
        let cut = cut_size(g, &side);
        Ok(Self {
            side,
            vol,
            count,
            cut,
        })
    }

    /// Bisection with `part_a` in A and every other node in B.
    pub fn from_part_a(g: &Graph, part_a: &[usize]) -> Result<Self> {
        let mut side = vec![Side::B; g.n()];
        for &v in part_a {
            if v >= g.n() {
                return Err(Error::InvalidInput(format!("node {v} out of range")));
            }
            side[v] = Side::A;
        }
        Self::new(g, side)
    }

    pub fn side(&self, v: usize) -> Side {
        self.side[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    pub fn vol_a(&self) -> usize {
        self.vol[0]
    }

    pub fn vol_b(&self) -> usize {
        self.vol[1]
    }

    pub fn count(&self, side: Side) -> usize {
        self.count[slot(side)]
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    pub fn part(&self, side: Side) -> Vec<usize> {
        (0..self.side.len())
            .filter(|&v| self.side[v] == side)
            .collect()
    }

    pub fn normalized_cut(&self) -> Result<f64> {
        nc_from(self.cut, self.vol[0], self.vol[1])
    }

    /// `max(volA/volB, volB/volA)`.
    pub fn balance(&self) -> f64 {
        let (a, b) = (self.vol[0] as f64, self.vol[1] as f64);
        if a == 0.0 || b == 0.0 {
            f64::INFINITY
        } else {
            (a / b).max(b / a)
        }
    }

    /// True when moving `v` would leave its side empty.
    pub fn move_empties_part(&self, v: usize) -> bool {
        self.count[slot(self.side[v])] <= 1
    }

    /// Flips `v` to the other side, updating the caches from `v`'s neighbors
    /// only, and returns the decrease in normalized cut.
    pub fn move_node(&mut self, g: &Graph, v: usize) -> Result<f64> {
        if self.move_empties_part(v) {
            return Err(Error::DegeneratePartition("move would empty a part"));
        }
        let before = self.normalized_cut()?;
        self.flip(g, v);
        Ok(before - self.normalized_cut()?)
    }

    pub(crate) fn flip(&mut self, g: &Graph, v: usize) {
        let from = self.side[v];
        let mut same = 0;
        for &w in g.neighbors(v) {
            if self.side[w] == from {
                same += 1;
            }
        }
        let deg = g.degree(v);
        // edges to the old side become cut, edges to the new side stop being cut
        self.cut = self.cut + same - (deg - same);
        self.vol[slot(from)] -= deg;
        self.vol[slot(from.other())] += deg;
        self.count[slot(from)] -= 1;
        self.count[slot(from.other())] += 1;
        self.side[v] = from.other();
    }
}

fn nc_from(cut: usize, vol_a: usize, vol_b: usize) -> Result<f64> {
    if vol_a == 0 || vol_b == 0 {
        return Err(Error::DegeneratePartition("a part has zero volume"));
    }
    Ok(cut as f64 * (1.0 / vol_a as f64 + 1.0 / vol_b as f64))
}

/// Number of edges whose endpoints carry different labels.
pub fn cut_size(g: &Graph, side: &[Side]) -> usize {
    g.edges().filter(|&(u, v)| side[u] != side[v]).count()
}

/// Sum of degrees over `part`.
pub fn volume(g: &Graph, part: &[usize]) -> usize {
    part.iter().map(|&v| g.degree(v)).sum()
}

/// Normalized cut recomputed from scratch.
pub fn normalized_cut(g: &Graph, side: &[Side]) -> Result<f64> {
    let mut vol = [0; 2];
    for (v, &s) in side.iter().enumerate() {
        vol[slot(s)] += g.degree(v);
    }
    nc_from(cut_size(g, side), vol[0], vol[1])
}

/// All endpoints of cut edges, ascending.
pub fn cut_frontier(g: &Graph, side: &[Side]) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| g.neighbors(v).iter().any(|&w| side[w] != side[v]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    fn random_sides(n: usize, rng: &mut ChaCha8Rng) -> Vec<Side> {
        (0..n)
            .map(|_| if rng.gen_bool(0.5) { Side::A } else { Side::B })
            .collect()
    }

    // independent oracle: scan every (i, j) pair of the dense adjacency
    fn brute_cut(g: &Graph, side: &[Side]) -> usize {
        let mut c = 0;
        for i in 0..g.n() {
            for j in i + 1..g.n() {
                if g.has_edge(i, j) && side[i] != side[j] {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn path_examples() {
        let g = path(4);
        let b = Bisection::from_part_a(&g, &[0, 1]).unwrap();
        assert_eq!(b.cut(), 1);
        assert_eq!(volume(&g, &[0, 1]), 3);
        assert!((b.normalized_cut().unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(cut_frontier(&g, b.sides()), vec![1, 2]);
        let all_a = Bisection::from_part_a(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(all_a.cut(), 0);
        assert!(cut_frontier(&g, all_a.sides()).is_empty());
        assert!(matches!(
            all_a.normalized_cut(),
            Err(Error::DegeneratePartition(_))
        ));
        assert_eq!(volume(&g, &[0, 1, 2, 3]), 2 * g.m());
    }

    #[test]
    fn star_and_complete_examples() {
        let g = star(3);
        let b = Bisection::from_part_a(&g, &[1]).unwrap();
        assert!((b.normalized_cut().unwrap() - 1.2).abs() < 1e-15);
        let k4 = complete(4);
        let b = Bisection::from_part_a(&k4, &[0, 3]).unwrap();
        assert!((b.normalized_cut().unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn move_matches_full_recompute() {
        let g = path(4);
        let mut b = Bisection::from_part_a(&g, &[0, 1]).unwrap();
        let r = b.move_node(&g, 1).unwrap();
        // A = {0}: the only crossing edge is still (0, 1)
        assert_eq!(b.cut(), 1);
        assert_eq!(b.vol_a(), 1);
        let expected = 2.0 / 3.0 - normalized_cut(&g, b.sides()).unwrap();
        assert!((r - expected).abs() < 1e-15);
        assert!(r < 0.0);
        let r_back = b.move_node(&g, 1).unwrap();
        assert_eq!((b.cut(), b.vol_a(), b.vol_b()), (1, 3, 3));
        assert!((r + r_back).abs() < 1e-15);
        assert!(b.move_node(&g, 0).is_ok());
        assert!(matches!(
            b.move_node(&g, 1),
            Err(Error::DegeneratePartition(_))
        ));
    }

    #[test]
    fn random_moves_keep_caches_coherent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_graph(40, 0.15, &mut rng);
        let mut b = Bisection::new(&g, random_sides(40, &mut rng)).unwrap();
        let nc0 = b.normalized_cut().unwrap();
        let mut total = 0.0;
        for _ in 0..50 {
            let v = rng.gen_range(0..40);
            if let Ok(r) = b.move_node(&g, v) {
                total += r;
            }
            let fresh = Bisection::new(&g, b.sides().to_vec()).unwrap();
            assert_eq!(fresh, b);
        }
        let nc1 = b.normalized_cut().unwrap();
        assert!((total - (nc0 - nc1)).abs() < 1e-12);
    }

    #[test]
    fn cut_and_frontier_match_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_graph(20, 0.2, &mut rng);
            let side = random_sides(20, &mut rng);
            assert_eq!(cut_size(&g, &side), brute_cut(&g, &side));
            let mut frontier = Vec::new();
            for i in 0..20 {
                if (0..20).any(|j| g.has_edge(i, j) && side[i] != side[j]) {
                    frontier.push(i);
                }
            }
            assert_eq!(cut_frontier(&g, &side), frontier);
            if let Ok(nc) = normalized_cut(&g, &side) {
                assert!((0.0..=2.0).contains(&nc));
            }
        }
    }
}
