//! `key = value` config files. Each key is a long flag name; flags given on
//! the command line win.

use std::ffi::OsString;
use std::fs;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", no + 1))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", no + 1));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn given(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().any(|a| {
        a.to_str()
            .is_some_and(|a| a == flag || a.starts_with(&format!("{flag}=")))
    })
}

/// Expands `--config FILE` into flags that are not already present.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        return Ok(args);
    };
    let path = args.get(pos + 1).ok_or("--config needs a file")?.clone();
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let mut out: Vec<OsString> = args[..pos]
        .iter()
        .chain(&args[pos + 2..])
        .cloned()
        .collect();
    for (k, v) in parse_config(&text)? {
        if given(&out, &k) {
            continue;
        }
        if v == "true" {
            out.push(format!("--{k}").into());
        } else if v != "false" {
            out.push(format!("--{k}").into());
            out.push(v.into());
        }
    }
    Ok(out)
}
