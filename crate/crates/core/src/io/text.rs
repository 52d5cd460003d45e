//! Line-oriented label and permutation files.
//!
//! Label files hold one `A`, `B` or `S` per node, in node order. Permutation
//! files hold one old index per line, in new order. Lines starting with `#`
//! are comments.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Bisection, Graph, Label, Separator3, Side};
use crate::ordering::Permutation;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn format_bisection(b: &Bisection) -> String {
    let mut s = String::with_capacity(2 * b.sides().len());
    for &side in b.sides() {
        s.push(if side == Side::A { 'A' } else { 'B' });
        s.push('\n');
    }
    s
}

pub fn format_separator(sep: &Separator3) -> String {
    let mut s = String::with_capacity(2 * sep.labels().len());
    for &l in sep.labels() {
        s.push(match l {
            Label::A => 'A',
            Label::B => 'B',
            Label::S => 'S',
        });
        s.push('\n');
    }
    s
}

fn parse_labels(text: &str) -> Result<Vec<Label>> {
    content_lines(text)
        .map(|(no, l)| match l {
            "A" => Ok(Label::A),
            "B" => Ok(Label::B),
            "S" => Ok(Label::S),
            other => Err(Error::Parse {
                line: no,
                msg: format!("unknown label '{other}'"),
            }),
        })
        .collect()
}

pub fn parse_bisection(g: &Graph, text: &str) -> Result<Bisection> {
    let side = parse_labels(text)?
        .into_iter()
        .map(|l| match l {
            Label::A => Ok(Side::A),
            Label::B => Ok(Side::B),
            Label::S => Err(Error::InvalidInput(
                "separator label in a bisection file".into(),
            )),
        })
        .collect::<Result<_>>()?;
    Bisection::new(g, side)
}

pub fn parse_separator(g: &Graph, text: &str) -> Result<Separator3> {
    Separator3::new(g, parse_labels(text)?)
}

pub fn format_permutation(p: &Permutation) -> String {
    let mut s = String::new();
    for &i in p.as_slice() {
        writeln!(s, "{i}").expect("writing to a string");
    }
    s
}

pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let p = content_lines(text)
        .map(|(no, l)| {
            l.parse::<usize>().map_err(|_| Error::Parse {
                line: no,
                msg: format!("bad index '{l}'"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::path;

    #[test]
    fn round_trips() {
        let g = path(5);
        let b = Bisection::from_part_a(&g, &[0, 1]).unwrap();
        assert_eq!(parse_bisection(&g, &format_bisection(&b)).unwrap(), b);
        let s =
            Separator3::new(&g, vec![Label::A, Label::S, Label::B, Label::B, Label::B]).unwrap();
        assert_eq!(parse_separator(&g, &format_separator(&s)).unwrap(), s);
        let p = Permutation::new(vec![3, 1, 4, 0, 2]).unwrap();
        assert_eq!(
            parse_permutation(&format!("# order\n{}", format_permutation(&p))).unwrap(),
            p
        );
        assert!(matches!(
            parse_separator(&g, "A\nQ\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_bisection(&g, "A\nS\nB\nB\nB\n").is_err());
    }
}
