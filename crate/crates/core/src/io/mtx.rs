//! Matrix Market coordinate files, reduced to symmetric structure.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::ordering::SparsePattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Complex,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

#[derive(Clone, Debug)]
pub struct MatrixMarket {
    pub pattern: SparsePattern,
    pub field: Field,
    pub symmetry: Symmetry,
    /// Entries listed in the file, diagonal and explicit zeros included.
    pub entries: usize,
    /// Entries repeating an earlier (row, column) pair.
    pub duplicates: usize,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str) -> Result<(Field, Symmetry)> {
    let t: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if t.len() != 5 || t[0] != "%%matrixmarket" || t[1] != "matrix" {
        return Err(perr(
            1,
            "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'",
        ));
    }
    if t[2] != "coordinate" {
        return Err(perr(
            1,
            format!("unsupported format '{}', only coordinate is read", t[2]),
        ));
    }
    let field = match t[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        "pattern" => Field::Pattern,
        other => return Err(perr(1, format!("unknown field '{other}'"))),
    };
    let symmetry = match t[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(perr(1, format!("unknown symmetry '{other}'"))),
    };
    Ok((field, symmetry))
}

pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<MatrixMarket> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let (field, symmetry) = parse_header(&header?)?;
    let values = match field {
        Field::Pattern => 0,
        Field::Real | Field::Integer => 1,
        Field::Complex => 2,
    };

    let mut size = None;
    let mut coords: Vec<(usize, usize)> = Vec::new();
    let mut last_line = 1;
    for (no, line) in lines {
        let line = line?;
        last_line = no;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        let Some((rows, cols, nnz)) = size else {
            if tok.len() != 3 {
                return Err(perr(no, "size line needs rows, columns and entry count"));
            }
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| perr(no, format!("bad size '{s}'")))
            };
            let dims = (num(tok[0])?, num(tok[1])?, num(tok[2])?);
            if dims.0 != dims.1 {
                return Err(Error::NotSquare {
                    rows: dims.0,
                    cols: dims.1,
                });
            }
            size = Some(dims);
            coords.reserve(dims.2);
            continue;
        };
        if tok.len() != 2 + values {
            return Err(perr(
                no,
                format!("expected {} fields, found {}", 2 + values, tok.len()),
            ));
        }
        if coords.len() == nnz {
            return Err(perr(no, format!("more than the declared {nnz} entries")));
        }
        let idx = |s: &str, bound: usize| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(i) if (1..=bound).contains(&i) => Ok(i - 1),
                _ => Err(perr(no, format!("index '{s}' outside 1..={bound}"))),
            }
        };
        let (i, j) = (idx(tok[0], rows)?, idx(tok[1], cols)?);
        for v in &tok[2..] {
            v.parse::<f64>()
                .map_err(|_| perr(no, format!("bad value '{v}'")))?;
        }
        if symmetry != Symmetry::General && j > i {
            return Err(perr(no, "entry above the diagonal in a symmetric file"));
        }
        coords.push((i, j));
    }
    let (rows, cols, nnz) = size.ok_or_else(|| perr(last_line, "missing size line"))?;
    if coords.len() != nnz {
        return Err(perr(
            last_line,
            format!("declared {nnz} entries, found {}", coords.len()),
        ));
    }
    let entries = coords.len();
    let mut sorted = coords.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let duplicates = entries - sorted.len();
    if duplicates > 0 {
        log::info!("merged {duplicates} duplicate entries");
    }
    let pattern = SparsePattern::from_coordinates(rows, cols, sorted)?;
    Ok(MatrixMarket {
        pattern,
        field,
        symmetry,
        entries,
        duplicates,
    })
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparsePattern> {
    Ok(parse_matrix_market(BufReader::new(File::open(path)?))?.pattern)
}

/// Writes the lower triangle with the diagonal as a symmetric pattern file.
pub fn write_matrix_market<W: Write>(a: &SparsePattern, mut w: W) -> Result<()> {
    let n = a.n();
    writeln!(w, "%%MatrixMarket matrix coordinate pattern symmetric")?;
    writeln!(w, "{n} {n} {}", a.offdiag_nnz() / 2 + n)?;
    for i in 0..n {
        for &j in a.row(i).iter().take_while(|&&j| j < i) {
            writeln!(w, "{} {}", i + 1, j + 1)?;
        }
        writeln!(w, "{} {}", i + 1, i + 1)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_matrix_market(a: &SparsePattern, path: impl AsRef<Path>) -> Result<()> {
    write_matrix_market(a, BufWriter::new(File::create(path)?))
}
