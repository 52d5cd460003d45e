//! Small deterministic graph families used in tests, benches and examples.

use super::Graph;

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// `rows x cols` 4-neighbor grid, nodes numbered row-major.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, edges).unwrap()
}

/// `nx x ny x nz` 6-neighbor grid, nodes numbered with x fastest.
pub fn grid3(nx: usize, ny: usize, nz: usize) -> Graph {
    let id = |x: usize, y: usize, z: usize| (z * ny + y) * nx + x;
    let mut edges = Vec::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                if x + 1 < nx {
                    edges.push((id(x, y, z), id(x + 1, y, z)));
                }
                if y + 1 < ny {
                    edges.push((id(x, y, z), id(x, y + 1, z)));
                }
                if z + 1 < nz {
                    edges.push((id(x, y, z), id(x, y, z + 1)));
                }
            }
        }
    }
    Graph::from_edges(nx * ny * nz, edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Graph::from_edges(n, edges).unwrap()
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
}

/// Two parallel paths of length `k` joined by rungs.
pub fn ladder(k: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, i + k));
        if i + 1 < k {
            edges.push((i, i + 1));
            edges.push((i + k, i + k + 1));
        }
    }
    Graph::from_edges(2 * k, edges).unwrap()
}
