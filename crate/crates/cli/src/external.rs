//! Optional comparison against an external METIS-style partitioner. The tool
//! is run as `EXE <graph-file> 2` and must write `<graph-file>.part.2` with
//! one part id per line. A missing tool is reported, never fatal.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

use drlpart::{Bisection, Graph, Side};

fn metis_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for v in 0..g.n() {
        let line: Vec<String> = g.neighbors(v).iter().map(|w| (w + 1).to_string()).collect();
        writeln!(s, "{}", line.join(" ")).expect("writing to a string");
    }
    s
}

pub fn run_external(exe: &str, g: &Graph) -> Option<Bisection> {
    let dir: PathBuf =
        std::env::temp_dir().join(format!("drlpart-external-{}", std::process::id()));
    let result = (|| {
        fs::create_dir_all(&dir).ok()?;
        let file = dir.join("graph.metis");
        fs::write(&file, metis_graph(g)).ok()?;
        let status = match Command::new(exe).arg(&file).arg("2").output() {
            Ok(out) => out.status,
            Err(e) => {
                log::warn!("external partitioner {exe} unavailable: {e}");
                return None;
            }
        };
        if !status.success() {
            log::warn!("external partitioner {exe} exited with {status}");
            return None;
        }
        let text = fs::read_to_string(dir.join("graph.metis.part.2")).ok()?;
        let side: Vec<Side> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| if l.trim() == "0" { Side::A } else { Side::B })
            .collect();
        Bisection::new(g, side).ok()
    })();
    let _ = fs::remove_dir_all(&dir);
    result
}
