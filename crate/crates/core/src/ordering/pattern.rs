use crate::error::{Error, Result};
use crate::graph::Graph;

/// Symmetric reordering. `p[new] = old`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    p: Vec<usize>,
    inv: Vec<usize>,
}

impl Permutation {
    pub fn new(p: Vec<usize>) -> Result<Self> {
        let mut inv = vec![usize::MAX; p.len()];
        for (new, &old) in p.iter().enumerate() {
            if old >= p.len() || inv[old] != usize::MAX {
                return Err(Error::InvalidInput(format!(
                    "not a permutation: entry {old} at position {new}"
                )));
            }
            inv[old] = new;
        }
        Ok(Self { p, inv })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            p: (0..n).collect(),
            inv: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.p
    }

    /// `inverse()[old] = new`.
    pub fn inverse(&self) -> &[usize] {
        &self.inv
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.p
    }

    /// Applying `self` and then `then` to a pattern equals applying the result.
    pub fn then(&self, then: &Permutation) -> Result<Permutation> {
        if then.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutations of {} and {}",
                self.len(),
                then.len()
            )));
        }
        Permutation::new(then.p.iter().map(|&i| self.p[i]).collect())
    }

    pub fn reversed(&self) -> Permutation {
        let p: Vec<usize> = self.p.iter().rev().copied().collect();
        Permutation::new(p).expect("reversal of a permutation")
    }
}

/// Symmetric sparsity structure with an implicit full diagonal. Only the
/// off-diagonal entries are stored, row-wise sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePattern {
    offsets: Vec<usize>,
    cols: Vec<usize>,
}

impl SparsePattern {
    /// Structure of `A ∪ Aᵀ` for a square coordinate list. Diagonal entries
    /// and duplicates are dropped.
    pub fn from_coordinates(
        nrows: usize,
        ncols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if nrows != ncols {
            return Err(Error::NotSquare {
                rows: nrows,
                cols: ncols,
            });
        }
        let n = nrows;
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, j) in entries {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "entry ({i}, {j}) outside a {n}x{n} matrix"
                )));
            }
            if i != j {
                rows[i].push(j);
                rows[j].push(i);
            }
        }
        Ok(Self::from_rows(rows))
    }

    fn from_rows(mut rows: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut cols = Vec::new();
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
            cols.extend_from_slice(r);
            offsets.push(cols.len());
        }
        Self { offsets, cols }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        offsets.push(0);
        let mut cols = Vec::with_capacity(2 * g.m());
        for v in 0..g.n() {
            cols.extend_from_slice(g.neighbors(v));
            offsets.push(cols.len());
        }
        Self { offsets, cols }
    }

    pub fn to_graph(&self) -> Graph {
        let edges = (0..self.n()).flat_map(|i| {
            self.row(i)
                .iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (i, j))
        });
        Graph::from_edges(self.n(), edges).expect("pattern is a simple symmetric structure")
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Off-diagonal columns of row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.cols[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn offdiag_nnz(&self) -> usize {
        self.cols.len()
    }

    /// Nonzeros of the full matrix, diagonal included.
    pub fn nnz(&self) -> usize {
        self.cols.len() + self.n()
    }

    /// Pattern of `PᵀAP`: new row `i` is old row `p[i]`.
    pub fn permute(&self, p: &Permutation) -> Result<SparsePattern> {
        if p.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of {} for a pattern of {}",
                p.len(),
                self.n()
            )));
        }
        let inv = p.inverse();
        let rows = p
            .as_slice()
            .iter()
            .map(|&old| self.row(old).iter().map(|&j| inv[j]).collect())
            .collect();
        Ok(Self::from_rows(rows))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|i| {
            self.row(i)
                .iter()
                .all(|&j| self.row(j).binary_search(&i).is_ok())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::grid;

    #[test]
    fn permutation_basics() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.inverse(), &[1, 2, 0]);
        for i in 0..3 {
            assert_eq!(p.inverse()[p.as_slice()[i]], i);
        }
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
        assert_eq!(p.reversed().as_slice(), &[1, 0, 2]);
    }

    #[test]
    fn symmetrization() {
        let lower = [(1, 0), (2, 1), (0, 0)];
        let a = SparsePattern::from_coordinates(3, 3, lower).unwrap();
        let full = SparsePattern::from_coordinates(3, 3, [(1, 0), (0, 1), (2, 1), (1, 2), (1, 0)])
            .unwrap();
        assert_eq!(a, full);
        assert_eq!(a.nnz(), 7);
        assert!(a.is_symmetric());
        assert!(matches!(
            SparsePattern::from_coordinates(2, 3, []),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn graph_round_trip_and_composition() {
        let g = grid(3, 4);
        let a = SparsePattern::from_graph(&g);
        assert_eq!(a.to_graph(), g);
        let p = Permutation::new(vec![5, 3, 0, 1, 11, 2, 4, 10, 6, 7, 8, 9]).unwrap();
        let q = Permutation::new((0..12).rev().collect()).unwrap();
        let twice = a.permute(&p).unwrap().permute(&q).unwrap();
        assert_eq!(twice, a.permute(&p.then(&q).unwrap()).unwrap());
        assert!(twice.is_symmetric());
    }
}
