use super::FloatMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// A float matrix whose symmetry has been checked bit-exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix(FloatMatrix);

impl SymmetricMatrix {
    pub fn new(m: FloatMatrix) -> Result<Self> {
        let n = m.require_square()?;
        for r in 0..n {
            for c in r + 1..n {
                if m[(r, c)].to_bits() != m[(c, r)].to_bits() {
                    return Err(Error::NotSymmetric { row: r, col: c });
                }
            }
        }
        Ok(SymmetricMatrix(m))
    }

    /// Averages `m` with its transpose so the result is symmetric by construction.
    pub fn symmetrize(m: &FloatMatrix) -> Result<Self> {
        let n = m.require_square()?;
        let mut s = m.clone();
        for r in 0..n {
            for c in r + 1..n {
                let avg = 0.5 * (m[(r, c)] + m[(c, r)]);
                s[(r, c)] = avg;
                s[(c, r)] = avg;
            }
        }
        Ok(SymmetricMatrix(s))
    }

    pub fn matrix(&self) -> &FloatMatrix {
        &self.0
    }

    pub fn into_inner(self) -> FloatMatrix {
        self.0
    }
}

/// One eigenvalue together with an orthonormal basis (rows) of its eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenGroup {
    pub value: f64,
    pub vectors: FloatMatrix,
}

impl EigenGroup {
    pub fn multiplicity(&self) -> usize {
        self.vectors.rows()
    }
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Eigenvalues within `tol · max(1, ‖M‖_max)` of their neighbour are merged
/// into one group; groups come back in decreasing order of eigenvalue.
pub fn symmetric_eigen(m: &SymmetricMatrix, tol: f64) -> Result<Vec<EigenGroup>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("eigen tolerance must be positive, got {tol}")));
    }
    let n = m.0.rows();
    let mut a = m.0.clone();
    let mut v = FloatMatrix::identity(n);
    let scale = m.0.max_abs().max(1.0);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (r + 1..n).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)] * a[(r, c)])
            .sum();
        if off.sqrt() <= f64::EPSILON * scale * n as f64 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));

    let group_tol = tol * scale;
    let mut groups: Vec<(Vec<usize>, f64)> = Vec::new();
    for &i in &order {
        let val = a[(i, i)];
        match groups.last_mut() {
            Some((members, _)) if (a[(*members.last().unwrap(), *members.last().unwrap())] - val).abs() <= group_tol => {
                members.push(i)
            }
            _ => groups.push((vec![i], val)),
        }
    }
    Ok(groups
        .into_iter()
        .map(|(members, _)| {
            let value = members.iter().map(|&i| a[(i, i)]).sum::<f64>() / members.len() as f64;
            let vectors = FloatMatrix::from_fn(members.len(), n, |r, c| v[(c, members[r])]);
            EigenGroup { value, vectors }
        })
        .collect())
}

/// Annihilate `a[p][q]` with a plane rotation, accumulating it into `v`.
fn rotate(a: &mut FloatMatrix, v: &mut FloatMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
