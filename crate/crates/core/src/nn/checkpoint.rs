//! Binary checkpoint format, little-endian:
//!
//! ```text
//! magic  b"DRLPCKPT"
//! u32    format version
//! u8     task kind
//! u32    input channels
//! u32    tensor count, then per tensor: u32 name length, name bytes, u32 rows, u32 cols
//! f64*   parameter values in declaration order
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::agent::{Agent, TaskKind};
use super::matrix::Matrix;
use super::params::ParamStore;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"DRLPCKPT";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_checkpoint<W: Write>(agent: &Agent, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&[agent.kind().code()])?;
    w.write_all(&(agent.channels() as u32).to_le_bytes())?;
    let params = agent.params();
    w.write_all(&(params.len() as u32).to_le_bytes())?;
    for (name, m) in params.iter() {
        w.write_all(&(name.len() as u32).to_le_bytes())?;
        w.write_all(name.as_bytes())?;
        w.write_all(&(m.rows() as u32).to_le_bytes())?;
        w.write_all(&(m.cols() as u32).to_le_bytes())?;
    }
    for (_, m) in params.iter() {
        for x in m.data() {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_exact<R: Read, const N: usize>(r: &mut R, what: &str) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => {
            Error::CorruptFile(format!("truncated while reading {what}"))
        }
        _ => Error::Io(e),
    })?;
    Ok(buf)
}

fn read_u32<R: Read>(r: &mut R, what: &str) -> Result<u32> {
    Ok(u32::from_le_bytes(read_exact::<R, 4>(r, what)?))
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<Agent> {
    if &read_exact::<R, 8>(&mut r, "magic")? != MAGIC {
        return Err(Error::CorruptFile("bad magic".into()));
    }
    let version = read_u32(&mut r, "version")?;
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch(format!(
            "format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    let code = read_exact::<R, 1>(&mut r, "task kind")?[0];
    let kind = TaskKind::from_code(code)
        .ok_or_else(|| Error::CorruptFile(format!("unknown task kind {code}")))?;
    let channels = read_u32(&mut r, "channels")? as usize;
    if channels != kind.channels() {
        return Err(Error::VersionMismatch(format!(
            "{channels} channels recorded for the {} network, which takes {}",
            kind.name(),
            kind.channels()
        )));
    }
    let count = read_u32(&mut r, "tensor count")? as usize;
    if count > 1024 {
        return Err(Error::CorruptFile(format!(
            "implausible tensor count {count}"
        )));
    }
    let mut table = Vec::with_capacity(count);
    for _ in 0..count {
        let len = read_u32(&mut r, "name length")? as usize;
        if len > 256 {
            return Err(Error::CorruptFile(format!("implausible name length {len}")));
        }
        let mut name = vec![0u8; len];
        r.read_exact(&mut name)
            .map_err(|_| Error::CorruptFile("truncated while reading a tensor name".into()))?;
        let name = String::from_utf8(name)
            .map_err(|_| Error::CorruptFile("tensor name is not utf-8".into()))?;
        let rows = read_u32(&mut r, "rows")? as usize;
        let cols = read_u32(&mut r, "cols")? as usize;
        table.push((name, rows, cols));
    }
    let expected = Agent::zeros(kind).params().shapes();
    if table != expected {
        return Err(Error::VersionMismatch(format!(
            "layer table does not match the {} network",
            kind.name()
        )));
    }
    let mut params = ParamStore::new();
    for (name, rows, cols) in table {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(f64::from_le_bytes(read_exact::<R, 8>(
                &mut r,
                "parameters",
            )?));
        }
        params.push(name, Matrix::from_vec(rows, cols, data));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::CorruptFile("trailing bytes after parameters".into()));
    }
    Agent::from_params(kind, params)
}

pub fn save_checkpoint(agent: &Agent, path: impl AsRef<Path>) -> Result<()> {
    write_checkpoint(agent, BufWriter::new(File::create(path)?))
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Agent> {
    read_checkpoint(BufReader::new(File::open(path)?))
}

/// Loads a checkpoint and checks that it holds the expected network.
pub fn load_checkpoint_for(path: impl AsRef<Path>, kind: TaskKind) -> Result<Agent> {
    let agent = load_checkpoint(path)?;
    if agent.kind() != kind {
        return Err(Error::VersionMismatch(format!(
            "checkpoint holds the {} network, expected {}",
            agent.kind().name(),
            kind.name()
        )));
    }
    Ok(agent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::grid;

    fn bytes(agent: &Agent) -> Vec<u8> {
        let mut buf = Vec::new();
        write_checkpoint(agent, &mut buf).unwrap();
        buf
    }

    #[test]
    fn round_trip_is_bit_exact() {
        for kind in [TaskKind::Edge, TaskKind::Coarse, TaskKind::Vertex] {
            let a = Agent::new(kind, 42);
            let b = read_checkpoint(bytes(&a).as_slice()).unwrap();
            assert_eq!(a, b);
            let g = grid(3, 3);
            let f = Matrix::from_vec(
                9,
                kind.channels(),
                (0..9 * kind.channels()).map(|i| (i % 3) as f64).collect(),
            );
            let oa = a.evaluate(&g, f.clone(), &[false; 9], true).unwrap();
            let ob = b.evaluate(&g, f, &[false; 9], true).unwrap();
            assert_eq!(oa.log_probs, ob.log_probs);
            assert_eq!(oa.value, ob.value);
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("agent.ckpt");
        let a = Agent::new(TaskKind::Vertex, 1);
        save_checkpoint(&a, &path).unwrap();
        assert_eq!(load_checkpoint_for(&path, TaskKind::Vertex).unwrap(), a);
        assert!(matches!(
            load_checkpoint_for(&path, TaskKind::Edge),
            Err(Error::VersionMismatch(_))
        ));
    }

    #[test]
    fn wrong_channel_count_is_a_version_mismatch() {
        let mut buf = bytes(&Agent::new(TaskKind::Edge, 0));
        // channel field follows magic (8), version (4) and kind (1)
        buf[13..17].copy_from_slice(&7u32.to_le_bytes());
        assert!(matches!(
            read_checkpoint(buf.as_slice()),
            Err(Error::VersionMismatch(_))
        ));
    }

    #[test]
    fn truncation_is_corruption() {
        let buf = bytes(&Agent::new(TaskKind::Edge, 0));
        for cut in [4, 20, buf.len() - 3] {
            assert!(
                matches!(read_checkpoint(&buf[..cut]), Err(Error::CorruptFile(_))),
                "cut at {cut}"
            );
        }
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(
            read_checkpoint(bad.as_slice()),
            Err(Error::CorruptFile(_))
        ));
    }
}
