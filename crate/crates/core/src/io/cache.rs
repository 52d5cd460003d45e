//! Binary graph cache: little-endian u64 `n`, u64 `m`, then `m` sorted edges
//! `(u, v)` with `u < v`, each as two u64.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn write_graph_cache<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    w.write_all(&(g.m() as u64).to_le_bytes())?;
    for (u, v) in g.edges() {
        w.write_all(&(u as u64).to_le_bytes())?;
        w.write_all(&(v as u64).to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::CorruptFile("truncated graph cache".into()),
        _ => Error::Io(e),
    })?;
    Ok(u64::from_le_bytes(b))
}

pub fn read_graph_cache<R: Read>(mut r: R) -> Result<Graph> {
    let n = read_u64(&mut r)? as usize;
    let m = read_u64(&mut r)? as usize;
    if m > n.saturating_mul(n) / 2 {
        return Err(Error::CorruptFile(format!(
            "{m} edges cannot fit {n} nodes"
        )));
    }
    let mut edges = Vec::with_capacity(m);
    let mut prev = None;
    for _ in 0..m {
        let e = (read_u64(&mut r)? as usize, read_u64(&mut r)? as usize);
        if e.0 >= e.1 || e.1 >= n || prev.is_some_and(|p| p >= e) {
            return Err(Error::CorruptFile(format!(
                "edge {e:?} out of order or out of range"
            )));
        }
        prev = Some(e);
        edges.push(e);
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::CorruptFile("trailing bytes after edge list".into()));
    }
    Graph::from_edges(n, edges)
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_graph_cache(g, BufWriter::new(File::create(path)?))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    read_graph_cache(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    #[test]
    fn round_trip_and_layout() {
        let g = grid(3, 3);
        let mut buf = Vec::new();
        write_graph_cache(&g, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 16 * 12);
        assert_eq!(&buf[..8], &9u64.to_le_bytes());
        assert_eq!(read_graph_cache(buf.as_slice()).unwrap(), g);
        assert!(matches!(
            read_graph_cache(&buf[..30]),
            Err(Error::CorruptFile(_))
        ));
        let mut swapped = buf.clone();
        swapped[16..32].copy_from_slice(&buf[32..48]);
        assert!(read_graph_cache(swapped.as_slice()).is_err());
    }
}
