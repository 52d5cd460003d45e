//! Training datasets: generated or ingested graphs plus their coarsening
//! chains.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cache::{load_graph, save_graph};
use super::delaunay::generate_delaunay;
use super::mtx::read_matrix_market;
use crate::coarsen::coarsening_chain;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DatasetSource {
    Delaunay,
    MatrixDir(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// `delaunay` or the matrix file name.
    pub source: String,
    pub seed: u64,
    /// 0 for the generated or ingested graph, then one per coarsening step.
    pub depth: usize,
    /// Nodes dropped outside the largest component.
    pub removed: usize,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.source, self.seed, self.depth, self.removed
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct Dataset {
    pub graphs: Vec<Graph>,
    pub provenance: Vec<Provenance>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    fn push(&mut self, g: Graph, p: Provenance) {
        self.graphs.push(g);
        self.provenance.push(p);
    }

    /// Writes `manifest.txt` and one graph cache file per member.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let mut manifest = String::from("# file source seed depth removed\n");
        for (i, (g, p)) in self.graphs.iter().zip(&self.provenance).enumerate() {
            let name = format!("graph_{i:06}.bin");
            save_graph(g, dir.join(&name))?;
            manifest.push_str(&format!("{name} {p}\n"));
        }
        fs::write(dir.join("manifest.txt"), manifest)?;
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let text = fs::read_to_string(dir.join("manifest.txt"))?;
        let mut out = Dataset::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            if f.len() != 5 {
                return Err(bad("manifest lines need 5 fields"));
            }
            let provenance = Provenance {
                source: f[1].to_string(),
                seed: f[2].parse().map_err(|_| bad("bad seed"))?,
                depth: f[3].parse().map_err(|_| bad("bad depth"))?,
                removed: f[4].parse().map_err(|_| bad("bad removed count"))?,
            };
            out.push(load_graph(dir.join(f[0]))?, provenance);
        }
        Ok(out)
    }
}

/// Reads a Matrix Market file as a connected graph: its largest component
/// and the number of nodes dropped.
pub fn read_matrix_graph(path: impl AsRef<Path>) -> Result<(Graph, usize)> {
    let g = read_matrix_market(path)?.to_graph();
    let n = g.n();
    let (lc, _) = g.largest_component();
    let removed = n - lc.n();
    if removed > 0 {
        log::info!("kept the largest component, dropped {removed} of {n} nodes");
    }
    Ok((lc, removed))
}

fn matrix_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("mtx")))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no .mtx files in {}",
            dir.display()
        )));
    }
    Ok(files)
}

/// Adds graphs and their coarsening chains (members with at least `n_min`
/// nodes) until `n_target` members exist. Delaunay sizes are uniform in
/// `(n_min, n_max]`; matrix files are used in name order, cycling, and
/// files whose largest component has at most `n_min` nodes are skipped.
pub fn build_training_dataset(
    source: &DatasetSource,
    n_min: usize,
    n_max: usize,
    n_target: usize,
    seed: u64,
) -> Result<Dataset> {
    if n_min >= n_max {
        return Err(Error::InvalidInput(format!(
            "n_min {n_min} must be below n_max {n_max}"
        )));
    }
    if n_min < 3 {
        return Err(Error::InvalidInput("n_min must be at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let files = match source {
        DatasetSource::MatrixDir(dir) => matrix_files(dir)?,
        DatasetSource::Delaunay => Vec::new(),
    };
    let mut ingested = Vec::new();
    for f in &files {
        let (g, removed) = read_matrix_graph(f)?;
        let name = f.file_name().map_or_else(
            || f.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        if g.n() > n_min {
            ingested.push((g, name, removed));
        } else {
            log::warn!("skipping {name}: {} nodes", g.n());
        }
    }
    if !files.is_empty() && ingested.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no matrix has more than {n_min} nodes"
        )));
    }

    let mut out = Dataset::default();
    let mut item = 0;
    while out.len() < n_target {
        let item_seed: u64 = rng.gen();
        let (g, name, removed) = match source {
            DatasetSource::Delaunay => {
                let n = rng.gen_range(n_min + 1..=n_max);
                (generate_delaunay(n, item_seed)?, "delaunay".to_string(), 0)
            }
            DatasetSource::MatrixDir(_) => ingested[item % ingested.len()].clone(),
        };
        item += 1;
        let chain = coarsening_chain(&g, n_min, item_seed);
        let coarse: Vec<Graph> = chain
            .into_iter()
            .map(|l| l.graph)
            .filter(|c| c.n() >= n_min)
            .collect();
        let prov = |depth| Provenance {
            source: name.clone(),
            seed: item_seed,
            depth,
            removed,
        };
        out.push(g, prov(0));
        for (d, c) in coarse.into_iter().enumerate() {
            out.push(c, prov(d + 1));
        }
    }
    out.graphs.truncate(n_target);
    out.provenance.truncate(n_target);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::grid;
    use crate::io::mtx::save_matrix_market;
    use crate::ordering::SparsePattern;

    #[test]
    fn single_member() {
        let d = build_training_dataset(&DatasetSource::Delaunay, 20, 60, 1, 0).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.provenance[0].depth, 0);
    }

    #[test]
    fn sizes_stay_in_range() {
        let d = build_training_dataset(&DatasetSource::Delaunay, 30, 200, 40, 1).unwrap();
        assert_eq!(d.len(), 40);
        for (g, p) in d.graphs.iter().zip(&d.provenance) {
            assert!(g.n() >= 30 && g.n() <= 200);
            if p.depth == 0 {
                assert!(g.n() > 30);
            }
            assert!(g.is_connected());
        }
        assert!(d.provenance.iter().any(|p| p.depth > 0));
    }

    #[test]
    fn deterministic_and_persistent() {
        let a = build_training_dataset(&DatasetSource::Delaunay, 20, 80, 12, 9).unwrap();
        let b = build_training_dataset(&DatasetSource::Delaunay, 20, 80, 12, 9).unwrap();
        assert_eq!(a.graphs, b.graphs);
        let dir = tempfile::tempdir().unwrap();
        a.save(dir.path()).unwrap();
        let c = Dataset::load(dir.path()).unwrap();
        assert_eq!(a.graphs, c.graphs);
        assert_eq!(a.provenance, c.provenance);
    }

    #[test]
    fn matrix_directory() {
        let dir = tempfile::tempdir().unwrap();
        assert!(build_training_dataset(
            &DatasetSource::MatrixDir(dir.path().into()),
            10,
            100,
            3,
            0
        )
        .is_err());
        let mut edges: Vec<(usize, usize)> = grid(6, 6).edges().collect();
        edges.push((36, 37));
        let g = Graph::from_edges(38, edges).unwrap();
        save_matrix_market(&SparsePattern::from_graph(&g), dir.path().join("m.mtx")).unwrap();
        let d = build_training_dataset(&DatasetSource::MatrixDir(dir.path().into()), 10, 100, 3, 0)
            .unwrap();
        assert_eq!(d.graphs[0], grid(6, 6));
        assert_eq!(d.provenance[0].removed, 2);
        assert_eq!(d.provenance[0].source, "m.mtx");
    }
}
