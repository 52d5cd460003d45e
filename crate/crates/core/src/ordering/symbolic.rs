use super::pattern::{Permutation, SparsePattern};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FillStats {
    pub n: usize,
    /// Nonzeros of the Cholesky-shaped factor L, diagonal included.
    pub nnz_factor: usize,
    /// Entries of L that are zero in the lower triangle of A.
    pub fill_count: usize,
}

impl FillStats {
    /// Nonzeros of L + U with a shared diagonal.
    pub fn lu_nnz(&self) -> usize {
        2 * self.nnz_factor - self.n
    }
}

/// Elimination tree of a symmetric pattern (Liu's algorithm with path
/// compression). `None` marks roots.
pub fn elimination_tree(a: &SparsePattern) -> Vec<Option<usize>> {
    let n = a.n();
    let mut parent = vec![None; n];
    let mut ancestor: Vec<Option<usize>> = vec![None; n];
    for k in 0..n {
        for &i in a.row(k).iter().take_while(|&&i| i < k) {
            let mut r = Some(i);
            while let Some(j) = r.filter(|&j| j < k) {
                r = ancestor[j];
                ancestor[j] = Some(k);
                if r.is_none() {
                    parent[j] = Some(k);
                }
            }
        }
    }
    parent
}

/// Symbolic elimination of `PᵀAP` without pivoting. Row `k` of L is the set of
/// etree nodes reached from the lower-triangular entries of row `k`.
pub fn symbolic_fill(a: &SparsePattern, p: &Permutation) -> Result<FillStats> {
    let b = a.permute(p)?;
    let n = b.n();
    let parent = elimination_tree(&b);
    let mut mark = vec![usize::MAX; n];
    let mut nnz = n;
    let mut lower = 0;
    for k in 0..n {
        mark[k] = k;
        for &i in b.row(k).iter().take_while(|&&i| i < k) {
            lower += 1;
            let mut j = i;
            while mark[j] != k {
                mark[j] = k;
                nnz += 1;
                j = parent[j].expect("lower entries reach k in the etree");
            }
        }
    }
    Ok(FillStats {
        n,
        nnz_factor: nnz,
        fill_count: nnz - n - lower,
    })
}
