//! Plain-text input formats.
//!
//! * edge list: one `u v` pair per line;
//! * relation file: header `v d`, an optional `labels ...` line, then `d + 1`
//!   blocks of `v` rows of 0/1 entries (space separated or packed), blocks
//!   separated by blank lines;
//! * partition file: one cell per line, labels separated by whitespace or
//!   commas;
//! * permutation file: one `x y` (or `x -> y`) mapping per line; vertices
//!   that are not mentioned are fixed.
//!
//! `#` starts a comment everywhere.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::partition::Partition;
use crate::scheme::{AssociationScheme, LabeledGraph};

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(n, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((n + 1, line))
    })
}

pub fn parse_edge_list(text: &str) -> Result<LabeledGraph> {
    let mut pairs = Vec::new();
    for (n, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[..] {
            [u, v] => pairs.push((u.to_string(), v.to_string())),
            _ => return Err(Error::parse(n, format!("expected \"u v\", got {line:?}"))),
        }
    }
    if pairs.is_empty() {
        return Err(Error::parse(0, "edge list is empty"));
    }
    LabeledGraph::from_labeled_edges(&pairs)
}

/// Relation file contents: the matrices and any vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFile {
    pub matrices: Vec<IntMatrix>,
    pub labels: Option<Vec<String>>,
}

fn parse_count(n: usize, token: &str, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(n, format!("{what} must be a non-negative integer, got {token:?}")))
}

/// Space-separated rows take any integers, so that non-binary matrices reach
/// the axiom check; packed rows are strings of 0 and 1.
fn parse_row(n: usize, line: &str, v: usize) -> Result<Vec<i64>> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let row: Vec<i64> = if tokens.len() == 1 && v > 1 {
        tokens[0]
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::parse(n, format!("packed row entry {c:?} is not 0 or 1"))),
            })
            .collect::<Result<_>>()?
    } else {
        tokens
            .iter()
            .map(|t| t.parse().map_err(|_| Error::parse(n, format!("entry {t:?} is not an integer"))))
            .collect::<Result<_>>()?
    };
    if row.len() != v {
        return Err(Error::parse(n, format!("row has {} entries, expected {v}", row.len())));
    }
    Ok(row)
}

pub fn parse_relation_file(text: &str) -> Result<RelationFile> {
    // Blank lines matter here, so the block structure is tracked by hand.
    let mut lines = text.lines().enumerate().map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()));
    let (hn, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::parse(0, "missing \"v d\" header"))?;
    let (v, d) = match header.split_whitespace().collect::<Vec<_>>()[..] {
        [a, b] => (parse_count(hn, a, "v")?, parse_count(hn, b, "d")?),
        _ => return Err(Error::parse(hn, format!("expected header \"v d\", got {header:?}"))),
    };
    if v == 0 {
        return Err(Error::parse(hn, "v must be positive"));
    }

    let mut labels = None;
    let mut blocks: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut current: Vec<Vec<i64>> = Vec::new();
    let mut last_line = hn;
    for (n, line) in lines {
        last_line = n;
        if line.is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("labels") {
            if labels.is_some() || !blocks.is_empty() || !current.is_empty() {
                return Err(Error::parse(n, "labels line must directly follow the header"));
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.len() != v {
                return Err(Error::parse(n, format!("{} labels for {v} vertices", names.len())));
            }
            labels = Some(names);
            continue;
        }
        current.push(parse_row(n, line, v)?);
        if current.len() > v {
            return Err(Error::parse(n, format!("block {} has more than {v} rows", blocks.len())));
        }
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    if blocks.len() != d + 1 {
        return Err(Error::parse(last_line, format!("found {} matrix blocks, expected {}", blocks.len(), d + 1)));
    }
    let matrices = blocks
        .into_iter()
        .enumerate()
        .map(|(i, rows)| {
            if rows.len() != v {
                return Err(Error::parse(last_line, format!("block {i} has {} rows, expected {v}", rows.len())));
            }
            IntMatrix::from_rows(rows)
        })
        .collect::<Result<_>>()?;
    Ok(RelationFile { matrices, labels })
}

pub fn write_relation_file(s: &AssociationScheme) -> String {
    let mut out = format!("{} {}\nlabels {}\n", s.vertex_count(), s.classes(), s.labels().join(" "));
    for a in s.relations() {
        out.push('\n');
        for row in a.iter_rows() {
            let packed: String = row.iter().map(|&x| if x == 1 { '1' } else { '0' }).collect();
            let _ = writeln!(out, "{packed}");
        }
    }
    out
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .map(|t| t.trim_matches(|c| c == '{' || c == '}'))
        .filter(|t| !t.is_empty())
}

/// Cells as label lists, one per non-empty line.
pub fn parse_partition_cells(text: &str) -> Vec<Vec<String>> {
    content_lines(text)
        .map(|(_, line)| tokens(line).map(str::to_string).collect::<Vec<_>>())
        .filter(|cell| !cell.is_empty())
        .collect()
}

pub fn parse_partition(s: &AssociationScheme, text: &str) -> Result<Partition> {
    crate::partition::make_partition(s, &parse_partition_cells(text))
}

pub fn write_partition(s: &AssociationScheme, pi: &Partition) -> String {
    pi.cells()
        .iter()
        .map(|cell| cell.iter().map(|&x| s.label(x)).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

/// Reads `x y` mappings into `permutation[x] = y`. Vertices that are never
/// mapped stay fixed; the result must be a bijection.
pub fn parse_permutation(s: &AssociationScheme, text: &str) -> Result<Vec<usize>> {
    let v = s.vertex_count();
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    if let [(_, line)] = lines[..] {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if v != 2 && tokens.len() == v {
            let permutation = tokens.iter().map(|t| s.vertex(t)).collect::<Result<Vec<_>>>()?;
            return check_bijection(s, permutation);
        }
    }
    let mut image: Vec<Option<usize>> = vec![None; v];
    for (n, line) in lines {
        let parts: Vec<&str> = line
            .split(|c: char| c.is_whitespace())
            .filter(|t| !t.is_empty() && *t != "->" && *t != "→")
            .collect();
        let (x, y) = match parts[..] {
            [x, y] => (x, y),
            _ => return Err(Error::parse(n, format!("expected \"x y\", got {line:?}"))),
        };
        let x = s.vertex(x)?;
        let y = s.vertex(y)?;
        if image[x].replace(y).is_some() {
            return Err(Error::NotBijection(format!("{} is mapped twice", s.label(x))));
        }
    }
    let permutation: Vec<usize> = image.iter().enumerate().map(|(x, y)| y.unwrap_or(x)).collect();
    check_bijection(s, permutation)
}

fn check_bijection(s: &AssociationScheme, permutation: Vec<usize>) -> Result<Vec<usize>> {
    let mut hit = vec![false; permutation.len()];
    for &y in &permutation {
        if std::mem::replace(&mut hit[y], true) {
            return Err(Error::NotBijection(format!("{} is hit twice", s.label(y))));
        }
    }
    Ok(permutation)
}

pub fn write_permutation(s: &AssociationScheme, permutation: &[usize]) -> String {
    permutation
        .iter()
        .enumerate()
        .map(|(x, &y)| format!("{} {}\n", s.label(x), s.label(y)))
        .collect()
}
