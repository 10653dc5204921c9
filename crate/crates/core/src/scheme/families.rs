use std::fmt;
use std::str::FromStr;

use super::{from_distance_regular_graph, AssociationScheme, LabeledGraph};
use crate::error::{Error, Result};

/// Distance-regular graph families with a built-in constructor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Words of length `n` over `q` symbols, adjacent at Hamming distance 1.
    Hamming { n: usize, q: usize },
    /// `k`-subsets of an `n`-set, adjacent when they share `k - 1` points.
    Johnson { n: usize, k: usize },
    Cycle(usize),
    Complete(usize),
    /// Outer 5-cycle `0..4`, inner pentagram `0'..4'`, spokes `i ~ i'`.
    Petersen,
}

impl Family {
    pub fn vertex_count(&self) -> Option<usize> {
        match *self {
            Family::Hamming { n, q } => u32::try_from(n).ok().and_then(|n| q.checked_pow(n)),
            Family::Johnson { n, k } => binomial(n, k),
            Family::Cycle(n) | Family::Complete(n) => Some(n),
            Family::Petersen => Some(10),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            Family::Hamming { n, q } if n < 1 || q < 2 => bad(format!("hamming({n},{q}) needs n >= 1, q >= 2")),
            Family::Johnson { n, k } if k == 0 || 2 * k > n => {
                bad(format!("johnson({n},{k}) needs 0 < k <= n/2"))
            }
            Family::Cycle(n) if n < 3 => bad(format!("cycle({n}) needs n >= 3")),
            Family::Complete(n) if n < 2 => bad(format!("complete({n}) needs n >= 2")),
            _ => Ok(()),
        }
    }

    /// The graph in construction order: words lexicographic, subsets
    /// colexicographic, Petersen as `0..4, 0'..4'`.
    pub fn graph(&self) -> Result<LabeledGraph> {
        self.validate()?;
        match *self {
            Family::Hamming { n, q } => hamming(n, q),
            Family::Johnson { n, k } => johnson(n, k),
            Family::Cycle(n) => {
                let labels = (0..n).map(|i| i.to_string()).collect();
                LabeledGraph::new(labels, (0..n).map(|i| (i, (i + 1) % n)).collect())
            }
            Family::Complete(n) => {
                let labels = (0..n).map(|i| i.to_string()).collect();
                let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
                LabeledGraph::new(labels, edges)
            }
            Family::Petersen => petersen(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Hamming { n, q } => write!(f, "hamming,{n},{q}"),
            Family::Johnson { n, k } => write!(f, "johnson,{n},{k}"),
            Family::Cycle(n) => write!(f, "cycle,{n}"),
            Family::Complete(n) => write!(f, "complete,{n}"),
            Family::Petersen => write!(f, "petersen"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `petersen`, `hamming,n,q`, `johnson,n,k`, `cycle,n`, `complete,n`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',').map(str::trim);
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let params: Vec<usize> = parts
            .map(|p| {
                p.parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad family parameter {p:?} in {s:?}")))
            })
            .collect::<Result<_>>()?;
        let family = match (name.as_str(), params.as_slice()) {
            ("petersen", []) => Family::Petersen,
            ("hamming", &[n, q]) => Family::Hamming { n, q },
            ("johnson", &[n, k]) => Family::Johnson { n, k },
            ("cycle", &[n]) => Family::Cycle(n),
            ("complete", &[n]) => Family::Complete(n),
            _ => return Err(Error::InvalidParameter(format!("unknown family {s:?}"))),
        };
        Ok(family)
    }
}

/// Builds the distance scheme of a named family, refusing anything with more
/// than `max_vertices` vertices before constructing it.
pub fn named_scheme(family: Family, max_vertices: usize) -> Result<AssociationScheme> {
    family.validate()?;
    let v = family.vertex_count().unwrap_or(usize::MAX);
    if v > max_vertices {
        return Err(Error::TooLarge { v, cap: max_vertices });
    }
    from_distance_regular_graph(&family.graph()?)
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    (0..k.min(n - k)).try_fold(1usize, |acc, i| acc.checked_mul(n - i).map(|x| x / (i + 1)))
}

fn join_symbols(symbols: &[usize], alphabet: usize) -> String {
    let parts: Vec<String> = symbols.iter().map(usize::to_string).collect();
    if alphabet <= 10 {
        parts.concat()
    } else {
        parts.join(",")
    }
}

fn hamming(n: usize, q: usize) -> Result<LabeledGraph> {
    let v = q.pow(n as u32);
    let word = |mut x: usize| {
        let mut w = vec![0; n];
        for slot in w.iter_mut().rev() {
            *slot = x % q;
            x /= q;
        }
        w
    };
    let words: Vec<Vec<usize>> = (0..v).map(word).collect();
    let labels = words.iter().map(|w| join_symbols(w, q)).collect();
    let mut edges = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            if words[a].iter().zip(&words[b]).filter(|(x, y)| x != y).count() == 1 {
                edges.push((a, b));
            }
        }
    }
    LabeledGraph::new(labels, edges)
}

fn johnson(n: usize, k: usize) -> Result<LabeledGraph> {
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        subsets.push(current.clone());
        // Next subset in lexicographic order.
        let Some(pos) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            break;
        };
        current[pos] += 1;
        for i in pos + 1..k {
            current[i] = current[i - 1] + 1;
        }
    }
    subsets.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    let labels = subsets.iter().map(|s| join_symbols(s, n)).collect();
    let mut edges = Vec::new();
    for a in 0..subsets.len() {
        for b in a + 1..subsets.len() {
            let common = subsets[a].iter().filter(|x| subsets[b].contains(x)).count();
            if common + 1 == k {
                edges.push((a, b));
            }
        }
    }
    LabeledGraph::new(labels, edges)
}

fn petersen() -> Result<LabeledGraph> {
    let labels = (0..5)
        .map(|i| i.to_string())
        .chain((0..5).map(|i| format!("{i}'")))
        .collect();
    let mut edges = Vec::new();
    for i in 0..5 {
        // The outer cycle, its complement on the primed vertices, the matching.
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    LabeledGraph::new(labels, edges)
}
