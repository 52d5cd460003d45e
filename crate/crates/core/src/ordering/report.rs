use std::fmt;
use std::str::FromStr;

use super::symbolic::FillStats;
use crate::error::{Error, Result};

pub const FILL_REPORT_HEADER: &str = "# matrix-id n nnz ordering factor-nnz fill wall-time";

/// One line of a fill report. Factor counts are symbolic LU nonzeros
/// (`2·nnz(L) − n`); fill is the LU nonzeros absent from A.
#[derive(Clone, Debug, PartialEq)]
pub struct FillRecord {
    pub matrix_id: String,
    pub n: usize,
    pub nnz: usize,
    pub ordering: String,
    pub factor_nnz: usize,
    pub fill: usize,
    pub wall_time: f64,
}

impl FillRecord {
    pub fn new(
        matrix_id: &str,
        nnz: usize,
        ordering: &str,
        stats: &FillStats,
        wall_time: f64,
    ) -> Self {
        Self {
            matrix_id: matrix_id.to_string(),
            n: stats.n,
            nnz,
            ordering: ordering.to_string(),
            factor_nnz: stats.lu_nnz(),
            fill: 2 * stats.fill_count,
            wall_time,
        }
    }
}

impl fmt::Display for FillRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {} {:.6}",
            self.matrix_id,
            self.n,
            self.nnz,
            self.ordering,
            self.factor_nnz,
            self.fill,
            self.wall_time
        )
    }
}

impl FromStr for FillRecord {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 7 {
            return Err(Error::InvalidInput(format!(
                "fill record needs 7 fields, got {}",
                f.len()
            )));
        }
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad integer {s:?}")))
        };
        Ok(Self {
            matrix_id: f[0].to_string(),
            n: int(f[1])?,
            nnz: int(f[2])?,
            ordering: f[3].to_string(),
            factor_nnz: int(f[4])?,
            fill: int(f[5])?,
            wall_time: f[6]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad time {:?}", f[6])))?,
        })
    }
}

/// Parses a report, skipping blank and `#` lines.
pub fn parse_fill_report(text: &str) -> Result<Vec<FillRecord>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}
