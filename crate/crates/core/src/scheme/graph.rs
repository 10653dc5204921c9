use std::collections::{HashMap, VecDeque};

use super::{verify_axioms, AssociationScheme, AxiomViolation};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Simple undirected graph on labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    adjacency: IntMatrix,
}

impl LabeledGraph {
    /// Builds a graph from vertex labels and index pairs. Loops and repeated
    /// edges are rejected.
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        let mut adjacency = IntMatrix::zeros(n, n);
        for &(u, w) in &edges {
            if u >= n || w >= n {
                return Err(Error::InvalidParameter(format!("edge ({u}, {w}) out of range")));
            }
            if u == w {
                return Err(Error::InvalidParameter(format!("loop at vertex {}", labels[u])));
            }
            if adjacency[(u, w)] != 0 {
                return Err(Error::InvalidParameter(format!(
                    "repeated edge {} {}",
                    labels[u], labels[w]
                )));
            }
            adjacency[(u, w)] = 1;
            adjacency[(w, u)] = 1;
        }
        Ok(LabeledGraph {
            labels,
            edges,
            adjacency,
        })
    }

    /// Builds a graph from labelled edges; vertex indices follow first
    /// appearance.
    pub fn from_labeled_edges<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        let mut intern = |l: &str| {
            *index.entry(l.to_string()).or_insert_with(|| {
                labels.push(l.to_string());
                labels.len() - 1
            })
        };
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .map(|(a, b)| (intern(a.as_ref()), intern(b.as_ref())))
            .collect();
        LabeledGraph::new(labels, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &IntMatrix {
        &self.adjacency
    }

    /// Breadth-first distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let n = self.vertex_count();
        let mut dist = vec![None; n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].expect("queued vertices are reached");
            for (y, dy) in dist.iter_mut().enumerate() {
                if self.adjacency[(x, y)] == 1 && dy.is_none() {
                    *dy = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// All-pairs distance matrix, or the first unreachable pair.
    pub fn distance_matrix(&self) -> Result<Vec<Vec<usize>>> {
        (0..self.vertex_count())
            .map(|x| {
                self.distances_from(x)
                    .into_iter()
                    .enumerate()
                    .map(|(y, d)| {
                        d.ok_or_else(|| Error::Disconnected {
                            from: self.labels[x].clone(),
                            to: self.labels[y].clone(),
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// The distance scheme of a distance-regular graph: `A_i` relates vertices
/// at distance `i`, so `d` is the diameter.
pub fn from_distance_regular_graph(g: &LabeledGraph) -> Result<AssociationScheme> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let dist = g.distance_matrix()?;
    let diameter = dist.iter().flatten().copied().max().unwrap_or(0);
    let v = g.vertex_count();
    let matrices = (0..=diameter)
        .map(|i| IntMatrix::from_fn(v, v, |x, y| i64::from(dist[x][y] == i)))
        .collect();
    verify_axioms(matrices, Some(g.labels().to_vec())).map_err(|e| match e {
        Error::Axiom(AxiomViolation::NotClosed { i, j, k, .. }) => Error::NotDistanceRegular { i, j, k },
        other => other,
    })
}
