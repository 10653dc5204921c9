//! Vertex partitions: characteristic matrices, projectors, equitability and
//! distance partitions.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{integer, IntMatrix, Rational, RationalMatrix};
use crate::scheme::AssociationScheme;

/// A partition of `{0, …, v-1}` into nonempty cells, validated on
/// construction. Cell order is significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    /// `names` renders vertices in error messages.
    pub fn new(v: usize, cells: Vec<Vec<usize>>, names: impl Fn(usize) -> String) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; v];
        for (k, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::EmptyCell(k + 1));
            }
            for &x in cell {
                if x >= v {
                    return Err(Error::UnknownVertex(x.to_string()));
                }
                if cell_of[x] != usize::MAX {
                    return Err(Error::OverlappingCells(names(x)));
                }
                cell_of[x] = k;
            }
        }
        if let Some(x) = cell_of.iter().position(|&k| k == usize::MAX) {
            return Err(Error::Uncovered(names(x)));
        }
        Ok(Partition { cells, cell_of })
    }

    pub fn vertex_count(&self) -> usize {
        self.cell_of.len()
    }

    /// Number of cells `t`.
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, x: usize) -> usize {
        self.cell_of[x]
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// The `v × t` 0/1 matrix `H` whose columns are the cells' characteristic vectors.
    pub fn characteristic_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.vertex_count(), self.cell_count(), |x, k| {
            i64::from(self.cell_of[x] == k)
        })
    }

    /// `D = HᵀH`, diagonal with the cell sizes.
    pub fn size_matrix(&self) -> IntMatrix {
        let t = self.cell_count();
        IntMatrix::from_fn(t, t, |a, b| if a == b { self.cells[a].len() as i64 } else { 0 })
    }

    fn check_against(&self, s: &AssociationScheme) -> Result<()> {
        if self.vertex_count() == s.vertex_count() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                op: "partition vs scheme",
                left: (self.vertex_count(), self.cell_count()),
                right: (s.vertex_count(), s.vertex_count()),
            })
        }
    }
}

/// A validated partition of the scheme's vertices from cells of labels.
pub fn make_partition<S: AsRef<str>>(s: &AssociationScheme, cells: &[Vec<S>]) -> Result<Partition> {
    let cells = cells
        .iter()
        .map(|cell| cell.iter().map(|l| s.vertex(l.as_ref())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Partition::new(s.vertex_count(), cells, |x| s.label(x).to_string())
}

/// Two vertices of one cell with different numbers of `R_i`-neighbours in
/// another cell. `vertex` is the first vertex of `from_cell`, `other` the
/// first vertex whose count differs from it. Cells are 0-based here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountViolation {
    pub relation: usize,
    pub from_cell: usize,
    pub to_cell: usize,
    pub vertex: usize,
    pub vertex_count: usize,
    pub other: usize,
    pub other_count: usize,
}

impl CountViolation {
    pub fn describe(&self, s: &AssociationScheme) -> String {
        format!(
            "relation {}: in C_{}, vertex {} has {} and vertex {} has {} in C_{}",
            self.relation,
            self.from_cell + 1,
            s.label(self.other),
            self.other_count,
            s.label(self.vertex),
            self.vertex_count,
            self.to_cell + 1
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitabilityResult {
    pub equitable: bool,
    /// `N_0, …, N_d` with `(N_i)[k][j] = n_ij^k`, when equitable.
    pub quotients: Option<Vec<IntMatrix>>,
    /// Every violated `(i, k, j)` triple, in lexicographic order.
    pub violations: Vec<CountViolation>,
}

impl EquitabilityResult {
    /// First violation in `(relation, from_cell, to_cell)` order.
    pub fn witness(&self) -> Option<&CountViolation> {
        self.violations.first()
    }
}

/// Counts `|{y ∈ C_j : (x, y) ∈ R_i}|` for every vertex; indexed
/// `[x][i * t + j]`.
fn neighbour_counts(s: &AssociationScheme, pi: &Partition) -> Vec<Vec<usize>> {
    let v = s.vertex_count();
    let t = pi.cell_count();
    let size = s.classes() + 1;
    (0..v)
        .map(|x| {
            let mut c = vec![0usize; size * t];
            for y in 0..v {
                c[s.relation_of(x, y) * t + pi.cell_of(y)] += 1;
            }
            c
        })
        .collect()
}

/// Combinatorial equitability test: every vertex of `C_k` must have the same
/// number of `R_i`-neighbours in `C_j`, for all `i, j, k`. Relations are
/// scanned in parallel and merged in order.
pub fn is_equitable(s: &AssociationScheme, pi: &Partition) -> Result<EquitabilityResult> {
    pi.check_against(s)?;
    let t = pi.cell_count();
    let counts = neighbour_counts(s, pi);
    let per_relation: Vec<(IntMatrix, Vec<CountViolation>)> = (0..=s.classes())
        .into_par_iter()
        .map(|i| {
            let mut quotient = IntMatrix::zeros(t, t);
            let mut violations = Vec::new();
            for (k, cell) in pi.cells().iter().enumerate() {
                let reference = cell[0];
                for j in 0..t {
                    let expected = counts[reference][i * t + j];
                    quotient[(k, j)] = expected as i64;
                    if let Some(&other) = cell.iter().find(|&&x| counts[x][i * t + j] != expected) {
                        violations.push(CountViolation {
                            relation: i,
                            from_cell: k,
                            to_cell: j,
                            vertex: reference,
                            vertex_count: expected,
                            other,
                            other_count: counts[other][i * t + j],
                        });
                    }
                }
            }
            (quotient, violations)
        })
        .collect();

    let mut quotients = Vec::with_capacity(per_relation.len());
    let mut violations = Vec::new();
    for (q, v) in per_relation {
        quotients.push(q);
        violations.extend(v);
    }
    if !violations.is_empty() {
        return Ok(EquitabilityResult {
            equitable: false,
            quotients: None,
            violations,
        });
    }
    let h = pi.characteristic_matrix();
    for (a, n) in s.relations().iter().zip(&quotients) {
        if a.mul(&h)? != h.mul(n)? {
            return Err(Error::Inconsistent("A_i H differs from H N_i".into()));
        }
    }
    Ok(EquitabilityResult {
        equitable: true,
        quotients: Some(quotients),
        violations,
    })
}

/// `F = H(HᵀH)⁻¹Hᵀ`: `1/|C_k|` on pairs inside `C_k`, zero elsewhere.
pub fn partition_projector(pi: &Partition) -> RationalMatrix {
    let v = pi.vertex_count();
    let weights: Vec<Rational> = pi
        .cells()
        .iter()
        .map(|c| Rational::new(1.into(), (c.len() as i64).into()))
        .collect();
    RationalMatrix::from_fn(v, v, |x, y| {
        let k = pi.cell_of(x);
        if k == pi.cell_of(y) {
            weights[k].clone()
        } else {
            Rational::zero()
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commutation {
    pub commutes: bool,
    /// `max_i ‖F A_i - A_i F‖_max`.
    pub max_violation: Rational,
}

/// Exact test of `F A_i = A_i F` for every relation.
pub fn commutes_with_scheme(f: &RationalMatrix, s: &AssociationScheme) -> Result<Commutation> {
    let v = s.vertex_count();
    if f.dims() != (v, v) {
        return Err(Error::DimensionMismatch {
            op: "commutation",
            left: f.dims(),
            right: (v, v),
        });
    }
    let mut worst = Rational::zero();
    for a in s.relations() {
        let a = a.to_rational();
        let diff = f.mul(&a)?.sub(&a.mul(f)?)?;
        for x in diff.entries() {
            let m = x.abs();
            if m > worst {
                worst = m;
            }
        }
    }
    Ok(Commutation {
        commutes: worst.is_zero(),
        max_violation: worst,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistancePartition {
    /// Cells `Γ_0(C) = C, Γ_1(C), …, Γ_ρ(C)`.
    pub partition: Partition,
    pub covering_radius: usize,
}

/// Distance partition of `(V, R_i)` with respect to `code`.
pub fn distance_partition(s: &AssociationScheme, relation: usize, code: &[usize]) -> Result<DistancePartition> {
    s.check_relation(relation)?;
    let v = s.vertex_count();
    let mut code = code.to_vec();
    code.sort_unstable();
    code.dedup();
    if code.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    if let Some(&x) = code.iter().find(|&&x| x >= v) {
        return Err(Error::UnknownVertex(x.to_string()));
    }
    let mut dist = vec![usize::MAX; v];
    let mut queue = VecDeque::new();
    for &c in &code {
        dist[c] = 0;
        queue.push_back(c);
    }
    while let Some(x) = queue.pop_front() {
        for y in s.neighbours(relation, x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    if let Some(y) = dist.iter().position(|&d| d == usize::MAX) {
        return Err(Error::Disconnected {
            from: s.label(code[0]).to_string(),
            to: s.label(y).to_string(),
        });
    }
    let radius = dist.iter().copied().max().unwrap_or(0);
    let mut cells = vec![Vec::new(); radius + 1];
    for (x, &d) in dist.iter().enumerate() {
        cells[d].push(x);
    }
    Ok(DistancePartition {
        partition: Partition::new(v, cells, |x| s.label(x).to_string())?,
        covering_radius: radius,
    })
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .cells
            .iter()
            .map(|c| format!("{c:?}"))
            .collect();
        write!(f, "{}", cells.join(" | "))
    }
}

/// `⟨F, A_i⟩` for the block projector; helper shared with feasibility.
pub(crate) fn projector_inner_with_relations(s: &AssociationScheme, pi: &Partition) -> Vec<Rational> {
    let size = s.classes() + 1;
    let mut out = vec![Rational::zero(); size];
    for cell in pi.cells() {
        let mut per_relation = vec![0i64; size];
        for &x in cell {
            for &y in cell {
                per_relation[s.relation_of(x, y)] += 1;
            }
        }
        let w = Rational::new(1.into(), (cell.len() as i64).into());
        for (acc, n) in out.iter_mut().zip(per_relation) {
            if n != 0 {
                *acc = acc.clone() + w.clone() * integer(n);
            }
        }
    }
    out
}
