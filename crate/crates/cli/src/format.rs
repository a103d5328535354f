//! Poset text files and the set/delta line formats.

use std::collections::HashSet;
use std::fmt::Write as _;

use poset_enum::{Delta, Poset, PosetError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `poset <n>` header")]
    NoHeader,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn id(tok: Option<&str>, line: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, "expected an element id"))?;
    tok.parse().map_err(|_| syntax(line, format!("bad id `{tok}`")))
}

/// Reads `poset <n>` followed by `rel <u> <v>` lines; `#` starts a comment.
pub fn parse_poset(text: &str) -> Result<Poset, ParseError> {
    let mut n = None;
    let mut rels = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        match toks.next() {
            Some("poset") => {
                if n.is_some() {
                    return Err(syntax(line, "second header"));
                }
                n = Some(id(toks.next(), line)?);
            }
            Some("rel") => {
                let size = n.ok_or(ParseError::NoHeader)?;
                let (u, v) = (id(toks.next(), line)?, id(toks.next(), line)?);
                for x in [u, v] {
                    if x >= size {
                        return Err(syntax(line, format!("id {x} out of range for poset {size}")));
                    }
                }
                if !seen.insert((u, v)) {
                    return Err(syntax(line, format!("duplicate relation {u} {v}")));
                }
                rels.push((u, v));
            }
            Some(other) => return Err(syntax(line, format!("unknown keyword `{other}`"))),
            None => unreachable!(),
        }
        if let Some(extra) = toks.next() {
            return Err(syntax(line, format!("trailing token `{extra}`")));
        }
    }
    let n = n.ok_or(ParseError::NoHeader)?;
    Ok(Poset::from_relations(n, &rels)?)
}

/// Writes the transitive reduction in original labels.
pub fn write_poset(p: &Poset) -> String {
    let mut rels: Vec<(usize, usize)> = p.cover_relations().into_iter().map(|(u, v)| (p.label(u), p.label(v))).collect();
    rels.sort_unstable();
    let mut out = format!("poset {}\n", p.len());
    for (u, v) in rels {
        writeln!(out, "rel {u} {v}").unwrap();
    }
    out
}

/// Sorted labels separated by spaces, `.` for the empty set.
pub fn set_line(p: &Poset, members: &[usize]) -> String {
    if members.is_empty() {
        return ".".into();
    }
    let mut labels: Vec<usize> = members.iter().map(|&u| p.label(u)).collect();
    labels.sort_unstable();
    labels.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// `+a +b -c`, additions first, each group by label.
pub fn delta_line(p: &Poset, d: &Delta) -> String {
    let mut added: Vec<usize> = d.added.iter().map(|&u| p.label(u)).collect();
    let mut removed: Vec<usize> = d.removed.iter().map(|&u| p.label(u)).collect();
    added.sort_unstable();
    removed.sort_unstable();
    let terms = added.iter().map(|a| format!("+{a}")).chain(removed.iter().map(|r| format!("-{r}")));
    terms.collect::<Vec<_>>().join(" ")
}

/// Parses a set line back into sorted labels.
pub fn parse_set_line(line: &str) -> Option<Vec<usize>> {
    if line.trim() == "." {
        return Some(Vec::new());
    }
    let mut v: Vec<usize> = line.split_whitespace().map(str::parse).collect::<Result<_, _>>().ok()?;
    v.sort_unstable();
    Some(v)
}

/// Applies a delta line to a sorted label set.
pub fn apply_delta_line(set: &mut Vec<usize>, line: &str) -> Option<()> {
    for tok in line.split_whitespace() {
        let (sign, rest) = tok.split_at(1);
        let x: usize = rest.parse().ok()?;
        match (sign, set.binary_search(&x)) {
            ("+", Err(i)) => set.insert(i, x),
            ("-", Ok(i)) => {
                set.remove(i);
            }
            _ => return None,
        }
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_by_closure() {
        let p = parse_poset("poset 3\nrel 0 1\nrel 1 2\n").unwrap();
        assert!(p.less(0, 2));
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse_poset("# v shape\n\nposet 3 # three\nrel 0 2\nrel 1 2\n").unwrap();
        assert_eq!(p.stats().q, 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_poset("poset 2\nrel 0 2\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse_poset("poset 2\nrel 0 1\nrel 0 1\n"), Err(ParseError::Syntax { line: 3, .. })));
        assert_eq!(parse_poset("rel 0 1\n"), Err(ParseError::NoHeader));
        assert_eq!(parse_poset("poset 2\nrel 0 1\nrel 1 0\n"), Err(ParseError::Poset(PosetError::NotPartialOrder)));
        assert!(parse_poset("poset 2\nedge 0 1\n").is_err());
    }

    #[test]
    fn writer_emits_reduction() {
        let p = parse_poset("poset 3\nrel 0 1\nrel 1 2\nrel 0 2\n").unwrap();
        assert_eq!(write_poset(&p), "poset 3\nrel 0 1\nrel 1 2\n");
    }

    #[test]
    fn lines_use_labels() {
        // 2 ≺ 0 forces a relabel
        let p = parse_poset("poset 3\nrel 2 0\n").unwrap();
        let d = Delta { added: vec![0, 1], removed: vec![2] };
        assert_eq!(delta_line(&p, &d), format!("+{} +{} -{}", p.label(0).min(p.label(1)), p.label(0).max(p.label(1)), p.label(2)));
        assert_eq!(set_line(&p, &[]), ".");
        let mut s = vec![1];
        apply_delta_line(&mut s, "+0 -1 +2").unwrap();
        assert_eq!(s, [0, 2]);
        assert_eq!(parse_set_line("2 0"), Some(vec![0, 2]));
    }
}
