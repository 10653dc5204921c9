//! Symmetric association schemes: construction and axiom verification.

mod families;
mod graph;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{char_poly, IntMatrix, Matrix, Polynomial};

pub use families::{named_scheme, Family};
pub use graph::{from_distance_regular_graph, LabeledGraph};

/// Default bound on the vertex count of constructed schemes.
pub const DEFAULT_MAX_VERTICES: usize = 512;

/// First axiom failure found by [`verify_axioms`], with witness indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `A_0` differs from the identity at `(row, col)`.
    NotIdentity { row: usize, col: usize },
    /// An entry other than 0 or 1.
    NotBinary { relation: usize, row: usize, col: usize, value: i64 },
    /// A relation with no pairs.
    EmptyRelation { relation: usize },
    /// `Σ A_i` differs from `J` at `(row, col)`.
    NotAllOnes { row: usize, col: usize, sum: i64 },
    /// `A_iᵀ` is not one of the relation matrices.
    TransposeMissing { relation: usize },
    /// `A_iᵀ = A_j` with `j ≠ i`; only symmetric schemes are supported.
    NotSymmetric { relation: usize, transpose: usize },
    /// `(A_i A_j)` is not constant on relation `k`: it takes `expected` at
    /// the first pair of relation `k` but `found` at `(row, col)`.
    NotClosed {
        i: usize,
        j: usize,
        k: usize,
        row: usize,
        col: usize,
        expected: u64,
        found: u64,
    },
}

impl AxiomViolation {
    /// Number of the violated axiom (1 to 4).
    pub fn axiom(&self) -> u8 {
        match self {
            AxiomViolation::NotIdentity { .. } => 1,
            AxiomViolation::NotBinary { .. }
            | AxiomViolation::EmptyRelation { .. }
            | AxiomViolation::NotAllOnes { .. } => 2,
            AxiomViolation::TransposeMissing { .. } | AxiomViolation::NotSymmetric { .. } => 3,
            AxiomViolation::NotClosed { .. } => 4,
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::NotIdentity { row, col } => write!(f, "A_0 differs from I at ({row}, {col})"),
            AxiomViolation::NotBinary { relation, row, col, value } => {
                write!(f, "A_{relation} has entry {value} at ({row}, {col})")
            }
            AxiomViolation::EmptyRelation { relation } => write!(f, "A_{relation} is empty"),
            AxiomViolation::NotAllOnes { row, col, sum } => {
                write!(f, "sum of relations is {sum} at ({row}, {col}), expected 1")
            }
            AxiomViolation::TransposeMissing { relation } => {
                write!(f, "transpose of A_{relation} is not a relation matrix")
            }
            AxiomViolation::NotSymmetric { relation, transpose } => write!(
                f,
                "A_{relation} is not symmetric (its transpose is A_{transpose}); only symmetric schemes are supported"
            ),
            AxiomViolation::NotClosed { i, j, k, row, col, expected, found } => write!(
                f,
                "A_{i} A_{j} is not constant on relation {k}: {expected} at its first pair, {found} at ({row}, {col})"
            ),
        }
    }
}

/// Intersection numbers `p_ij^k`, indexed `0 ≤ i, j, k ≤ d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionNumbers {
    size: usize,
    data: Vec<u64>,
}

impl IntersectionNumbers {
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.data[(i * self.size + j) * self.size + k]
    }

    pub fn classes(&self) -> usize {
        self.size - 1
    }
}

/// A verified symmetric association scheme on labelled vertices.
#[derive(Clone, Debug)]
pub struct AssociationScheme {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    relations: Vec<IntMatrix>,
    relation_of: Matrix<usize>,
    valencies: Vec<usize>,
    intersections: IntersectionNumbers,
    char_polys: OnceLock<Vec<Polynomial>>,
}

impl AssociationScheme {
    /// Number of vertices `v`.
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of classes `d`.
    pub fn classes(&self) -> usize {
        self.relations.len() - 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, vertex: usize) -> &str {
        &self.labels[vertex]
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Adjacency matrices `A_0, …, A_d`.
    pub fn relations(&self) -> &[IntMatrix] {
        &self.relations
    }

    pub fn relation(&self, i: usize) -> &IntMatrix {
        &self.relations[i]
    }

    /// Index `i` of the relation containing `(x, y)`.
    pub fn relation_of(&self, x: usize, y: usize) -> usize {
        self.relation_of[(x, y)]
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valencies
    }

    pub fn intersection_numbers(&self) -> &IntersectionNumbers {
        &self.intersections
    }

    /// Exact characteristic polynomials of `A_0, …, A_d`, computed once.
    pub fn char_polys(&self) -> &[Polynomial] {
        self.char_polys.get_or_init(|| {
            self.relations
                .iter()
                .map(|a| char_poly(&a.to_rational()).expect("relation matrices are square"))
                .collect()
        })
    }

    pub fn check_relation(&self, i: usize) -> Result<()> {
        if i > self.classes() {
            Err(Error::RelationOutOfRange {
                index: i,
                classes: self.classes(),
            })
        } else {
            Ok(())
        }
    }

    /// Neighbours of `x` in the graph `(V, R_i)`.
    pub fn neighbours(&self, i: usize, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&y| self.relation_of[(x, y)] == i)
    }
}

// Equality ignores the polynomial cache.
impl PartialEq for AssociationScheme {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.relations == other.relations
    }
}

impl Eq for AssociationScheme {}

/// `p_ij^k` of a verified scheme.
pub fn intersection_numbers(s: &AssociationScheme) -> &IntersectionNumbers {
    s.intersection_numbers()
}

/// Checks axioms (1) to (4) on integer matrices and, on success, returns the
/// scheme with its valencies and intersection numbers. Vertices are labelled
/// by `labels`, or `0..v` when `labels` is `None`.
///
/// Only symmetric schemes are accepted: a relation whose transpose is a
/// different relation is reported as a violation of axiom (3).
pub fn verify_axioms(matrices: Vec<IntMatrix>, labels: Option<Vec<String>>) -> Result<AssociationScheme> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::InvalidParameter("no relation matrices given".into()))?;
    let v = first.require_square()?;
    if v == 0 {
        return Err(Error::EmptyVertexSet);
    }
    for m in &matrices {
        m.require_square()?;
        if m.dims() != first.dims() {
            return Err(Error::DimensionMismatch {
                op: "relation matrices",
                left: first.dims(),
                right: m.dims(),
            });
        }
    }
    let labels = match labels {
        Some(l) if l.len() != v => {
            return Err(Error::InvalidParameter(format!("{} labels for {v} vertices", l.len())));
        }
        Some(l) => l,
        None => (0..v).map(|x| x.to_string()).collect(),
    };
    let mut index = HashMap::with_capacity(v);
    for (x, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), x).is_some() {
            return Err(Error::InvalidParameter(format!("duplicate vertex label {l:?}")));
        }
    }

    check_axioms(&matrices).map_err(Error::Axiom)?;
    let relation_of = Matrix::from_fn(v, v, |x, y| {
        matrices
            .iter()
            .position(|m| m[(x, y)] == 1)
            .expect("axiom (2) checked")
    });
    let size = matrices.len();
    let intersections = closure_numbers(&relation_of, size).map_err(Error::Axiom)?;
    let valencies = (0..size).map(|i| intersections.get(i, i, 0) as usize).collect();

    Ok(AssociationScheme {
        labels,
        index,
        relations: matrices,
        relation_of,
        valencies,
        intersections,
        char_polys: OnceLock::new(),
    })
}

fn check_axioms(matrices: &[IntMatrix]) -> std::result::Result<(), AxiomViolation> {
    let v = matrices[0].rows();
    for r in 0..v {
        for c in 0..v {
            if matrices[0][(r, c)] != i64::from(r == c) {
                return Err(AxiomViolation::NotIdentity { row: r, col: c });
            }
        }
    }
    for (relation, m) in matrices.iter().enumerate() {
        if let Some((pos, &value)) = m.entries().iter().enumerate().find(|(_, &x)| x != 0 && x != 1) {
            return Err(AxiomViolation::NotBinary {
                relation,
                row: pos / v,
                col: pos % v,
                value,
            });
        }
        if m.entries().iter().all(|&x| x == 0) {
            return Err(AxiomViolation::EmptyRelation { relation });
        }
    }
    for r in 0..v {
        for c in 0..v {
            let sum: i64 = matrices.iter().map(|m| m[(r, c)]).sum();
            if sum != 1 {
                return Err(AxiomViolation::NotAllOnes { row: r, col: c, sum });
            }
        }
    }
    for (relation, m) in matrices.iter().enumerate() {
        let t = m.transpose();
        match matrices.iter().position(|other| *other == t) {
            None => return Err(AxiomViolation::TransposeMissing { relation }),
            Some(transpose) if transpose != relation => {
                return Err(AxiomViolation::NotSymmetric { relation, transpose })
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Axiom (4): counts `#{z : (x,z) ∈ R_i, (z,y) ∈ R_j}` must depend only on
/// the relation of `(x, y)`.
fn closure_numbers(rel: &Matrix<usize>, size: usize) -> std::result::Result<IntersectionNumbers, AxiomViolation> {
    let v = rel.rows();
    let counts = |x: usize, y: usize| {
        let mut c = vec![0u64; size * size];
        for z in 0..v {
            c[rel[(x, z)] * size + rel[(z, y)]] += 1;
        }
        c
    };

    // Representative pair of each relation: its first pair in row-major order.
    let mut data = vec![0u64; size * size * size];
    let mut representative = vec![None; size];
    for x in 0..v {
        for y in x..v {
            let k = rel[(x, y)];
            if representative[k].is_none() {
                representative[k] = Some((x, y));
                for (ij, n) in counts(x, y).into_iter().enumerate() {
                    data[ij * size + k] = n;
                }
            }
        }
    }

    let first_violation = (0..v)
        .into_par_iter()
        .find_map_first(|x| {
            (x..v).find_map(|y| {
                let k = rel[(x, y)];
                let c = counts(x, y);
                (0..size * size).find_map(|ij| {
                    let expected = data[ij * size + k];
                    (c[ij] != expected).then_some(AxiomViolation::NotClosed {
                        i: ij / size,
                        j: ij % size,
                        k,
                        row: x,
                        col: y,
                        expected,
                        found: c[ij],
                    })
                })
            })
        });
    match first_violation {
        Some(violation) => Err(violation),
        None => Ok(IntersectionNumbers { size, data }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> IntMatrix {
        IntMatrix::identity(n)
    }

    fn complement_of_identity(n: usize) -> IntMatrix {
        IntMatrix::from_fn(n, n, |r, c| i64::from(r != c))
    }

    #[test]
    fn complete_graph_scheme_passes() {
        let s = verify_axioms(vec![identity(4), complement_of_identity(4)], None).unwrap();
        assert_eq!(s.classes(), 1);
        assert_eq!(s.valencies(), &[1, 3]);
        assert_eq!(s.intersection_numbers().get(1, 1, 1), 2);
        assert_eq!(s.intersection_numbers().get(1, 1, 0), 3);
    }

    #[test]
    fn j_minus_two_i_violates_axiom_two() {
        let bad = IntMatrix::from_fn(4, 4, |r, c| if r == c { -1 } else { 1 });
        let err = verify_axioms(vec![identity(4), bad], None).unwrap_err();
        match err {
            Error::Axiom(v) => assert_eq!(v.axiom(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_first_matrix_violates_axiom_one() {
        let err = verify_axioms(vec![complement_of_identity(3), identity(3)], None).unwrap_err();
        assert_eq!(err, Error::Axiom(AxiomViolation::NotIdentity { row: 0, col: 0 }));
    }

    #[test]
    fn directed_relations_violate_axiom_three() {
        // Directed 3-cycle: A_1ᵀ = A_2.
        let a1 = IntMatrix::from_fn(3, 3, |r, c| i64::from((r + 1) % 3 == c));
        let a2 = a1.transpose();
        let err = verify_axioms(vec![identity(3), a1, a2], None).unwrap_err();
        assert_eq!(
            err,
            Error::Axiom(AxiomViolation::NotSymmetric { relation: 1, transpose: 2 })
        );
    }

    #[test]
    fn path_distances_violate_axiom_four() {
        // Distance matrices of the path 0 - 1 - 2.
        let a1 = IntMatrix::from_rows(vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        let a2 = IntMatrix::from_rows(vec![vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]]).unwrap();
        let err = verify_axioms(vec![identity(3), a1, a2], None).unwrap_err();
        assert!(matches!(err, Error::Axiom(AxiomViolation::NotClosed { .. })));
    }

    #[test]
    fn malformed_inputs_are_errors() {
        assert!(matches!(
            verify_axioms(vec![IntMatrix::zeros(2, 3)], None),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            verify_axioms(vec![identity(2), identity(3)], None),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(verify_axioms(Vec::new(), None).is_err());
        assert!(verify_axioms(vec![identity(2)], Some(vec!["a".into()])).is_err());
    }

    #[test]
    fn single_vertex_scheme_has_no_classes() {
        let s = verify_axioms(vec![identity(1)], None).unwrap();
        assert_eq!(s.classes(), 0);
        assert_eq!(s.valencies(), &[1]);
    }
}
