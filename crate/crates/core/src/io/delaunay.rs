//! Incremental Bowyer–Watson triangulation on exact predicates.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust::{incircle, orient2d, Coord};

use crate::error::{Error, Result};
use crate::graph::Graph;

const SUPER: f64 = 1.0e7;

#[derive(Clone, Copy, Debug)]
struct Tri {
    v: [usize; 3],
    // nbr[i] lies across the edge opposite v[i]
    nbr: [Option<usize>; 3],
}

fn c(p: [f64; 2]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

struct Triangulation {
    pts: Vec<[f64; 2]>,
    tris: Vec<Tri>,
    alive: Vec<bool>,
    free: Vec<usize>,
    last: usize,
}

impl Triangulation {
    fn new(points: &[[f64; 2]]) -> Self {
        let mut pts = points.to_vec();
        pts.extend([[-SUPER, -SUPER], [SUPER, -SUPER], [0.0, SUPER]]);
        let n = points.len();
        Self {
            pts,
            tris: vec![Tri {
                v: [n, n + 1, n + 2],
                nbr: [None; 3],
            }],
            alive: vec![true],
            free: Vec::new(),
            last: 0,
        }
    }

    fn orient(&self, a: usize, b: usize, p: usize) -> f64 {
        orient2d(c(self.pts[a]), c(self.pts[b]), c(self.pts[p]))
    }

    fn in_circle(&self, t: usize, p: usize) -> bool {
        let [a, b, d] = self.tris[t].v;
        incircle(
            c(self.pts[a]),
            c(self.pts[b]),
            c(self.pts[d]),
            c(self.pts[p]),
        ) > 0.0
    }

    /// Visibility walk from the last created triangle.
    fn locate(&self, p: usize) -> usize {
        let mut t = self.last;
        let mut start = 0;
        'walk: loop {
            let tri = &self.tris[t];
            for k in 0..3 {
                let i = (start + k) % 3;
                let (a, b) = (tri.v[(i + 1) % 3], tri.v[(i + 2) % 3]);
                if self.orient(a, b, p) < 0.0 {
                    if let Some(next) = tri.nbr[i] {
                        t = next;
                        start = (start + 1) % 3;
                        continue 'walk;
                    }
                }
            }
            return t;
        }
    }

    fn alloc(&mut self, tri: Tri) -> usize {
        if let Some(i) = self.free.pop() {
            self.tris[i] = tri;
            self.alive[i] = true;
            i
        } else {
            self.tris.push(tri);
            self.alive.push(true);
            self.tris.len() - 1
        }
    }

    fn insert(&mut self, p: usize) {
        let start = self.locate(p);
        let mut bad = vec![start];
        let mut is_bad: HashMap<usize, bool> = HashMap::from([(start, true)]);
        let mut i = 0;
        while i < bad.len() {
            let t = bad[i];
            i += 1;
            for nb in self.tris[t].nbr.into_iter().flatten() {
                if let Entry::Vacant(slot) = is_bad.entry(nb) {
                    let b = self.in_circle(nb, p);
                    slot.insert(b);
                    if b {
                        bad.push(nb);
                    }
                }
            }
        }
        // cavity boundary, each edge (a, b) counter-clockwise seen from inside
        let mut boundary = Vec::new();
        for &t in &bad {
            let tri = self.tris[t];
            for k in 0..3 {
                let outside = tri.nbr[k].filter(|nb| !is_bad[nb]);
                if tri.nbr[k].is_none() || outside.is_some() {
                    // slot in the outside triangle that points back here
                    let back = outside.map(|o| {
                        let slot = self.tris[o].nbr.iter().position(|&x| x == Some(t));
                        (o, slot.expect("neighbor links are mutual"))
                    });
                    boundary.push((tri.v[(k + 1) % 3], tri.v[(k + 2) % 3], back));
                }
            }
        }
        for &t in &bad {
            self.alive[t] = false;
            self.free.push(t);
        }
        let mut starts_at: HashMap<usize, usize> = HashMap::new();
        let mut created = Vec::with_capacity(boundary.len());
        for &(a, b, back) in &boundary {
            let t = self.alloc(Tri {
                v: [a, b, p],
                nbr: [None, None, back.map(|(o, _)| o)],
            });
            if let Some((o, slot)) = back {
                self.tris[o].nbr[slot] = Some(t);
            }
            starts_at.insert(a, t);
            created.push(t);
        }
        for &t in &created {
            let [a, b, _] = self.tris[t].v;
            // edge (b, p) is shared with the triangle starting at b, edge (p, a)
            // with the one ending at a
            self.tris[t].nbr[0] = Some(starts_at[&b]);
            let before = created
                .iter()
                .copied()
                .find(|&u| self.tris[u].v[1] == a)
                .expect("closed cavity");
            self.tris[t].nbr[1] = Some(before);
        }
        self.last = *created.last().expect("non-empty cavity");
    }

    fn triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.tris
            .iter()
            .zip(&self.alive)
            .filter(|(_, &a)| a)
            .map(|(t, _)| t.v)
    }
}

fn convex_hull(points: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .partial_cmp(&points[b])
            .expect("finite coordinates")
    });
    let turn = |a: usize, b: usize, p: usize| orient2d(c(points[a]), c(points[b]), c(points[p]));
    let mut hull: Vec<usize> = Vec::new();
    for pass in [idx.clone(), idx.into_iter().rev().collect()] {
        let base = hull.len();
        for p in pass {
            while hull.len() >= base + 2
                && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) < 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn check_points(points: &[[f64; 2]]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "a triangulation needs 3 points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .flatten()
        .any(|x| !x.is_finite() || x.abs() >= SUPER / 16.0)
    {
        return Err(Error::InvalidInput(
            "point coordinates must be finite and moderate".into(),
        ));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("duplicate points".into()));
    }
    Ok(())
}

/// Delaunay triangles (counter-clockwise) of distinct points. Cocircular
/// configurations are resolved by the strict in-circle test.
pub fn delaunay_triangles(points: &[[f64; 2]]) -> Result<Vec<[usize; 3]>> {
    check_points(points)?;
    let n = points.len();
    let mut t = Triangulation::new(points);
    for p in 0..n {
        t.insert(p);
    }
    Ok(t.triangles().filter(|v| v.iter().all(|&x| x < n)).collect())
}

/// Graph of the Delaunay triangulation of distinct points.
pub fn delaunay_graph(points: &[[f64; 2]]) -> Result<Graph> {
    check_points(points)?;
    let n = points.len();
    let mut t = Triangulation::new(points);
    for p in 0..n {
        t.insert(p);
    }
    let mut edges = Vec::new();
    for v in t.triangles() {
        for k in 0..3 {
            let (a, b) = (v[k], v[(k + 1) % 3]);
            if a < n && b < n && a < b {
                edges.push((a, b));
            }
        }
    }
    // hull edges can hide behind the far super vertices
    // collinear boundary points stay on the hull so no chord skips them
    let hull = convex_hull(points);
    for k in 0..hull.len() {
        let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
        edges.push((a.min(b), a.max(b)));
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::from_edges(n, edges)
}

/// `n` distinct uniform points in the unit square.
pub fn random_points(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::with_capacity(n);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p: [f64; 2] = [rng.gen(), rng.gen()];
        if seen.insert((p[0].to_bits(), p[1].to_bits())) {
            pts.push(p);
        }
    }
    pts
}

/// Delaunay graph of `n` uniform random points in the unit square.
pub fn generate_delaunay(n: usize, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 points, got {n}"
        )));
    }
    delaunay_graph(&random_points(n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points_make_a_triangle() {
        let g = delaunay_graph(&[[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]]).unwrap();
        assert_eq!(g, crate::graph::generators::complete(3));
        assert_eq!(
            delaunay_triangles(&[[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]])
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn collinear_points_make_a_path() {
        let pts: Vec<[f64; 2]> = (0..5).map(|i| [i as f64 * 0.1, i as f64 * 0.2]).collect();
        assert_eq!(
            delaunay_graph(&pts).unwrap(),
            crate::graph::generators::path(5)
        );
        assert!(delaunay_triangles(&pts).unwrap().is_empty());
    }

    #[test]
    fn square_grid_points_are_cocircular() {
        let pts: Vec<[f64; 2]> = (0..16).map(|i| [(i % 4) as f64, (i / 4) as f64]).collect();
        let g = delaunay_graph(&pts).unwrap();
        // 24 axis edges plus one diagonal per cell
        assert_eq!(g.m(), 33);
        assert!(g.is_connected());
    }

    #[test]
    fn empty_circumcircles() {
        let pts = random_points(50, 7);
        let tris = delaunay_triangles(&pts).unwrap();
        let hull = convex_hull(&pts).len();
        // a full triangulation has 2n - 2 - h triangles
        assert_eq!(tris.len(), 2 * 50 - 2 - hull);
        for t in &tris {
            assert!(orient2d(c(pts[t[0]]), c(pts[t[1]]), c(pts[t[2]])) > 0.0);
            for (q, &p) in pts.iter().enumerate() {
                if !t.contains(&q) {
                    assert!(incircle(c(pts[t[0]]), c(pts[t[1]]), c(pts[t[2]]), c(p)) <= 0.0);
                }
            }
        }
    }

    #[test]
    fn planar_connected_and_deterministic() {
        for (n, seed) in [(3, 1), (10, 2), (200, 3), (1000, 4)] {
            let g = generate_delaunay(n, seed).unwrap();
            assert!(g.m() <= 3 * n - 6 || n == 3);
            assert!(g.is_connected());
            assert_eq!(g, generate_delaunay(n, seed).unwrap());
        }
        assert!(generate_delaunay(2, 0).is_err());
        assert!(delaunay_graph(&[[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]).is_err());
    }
}
