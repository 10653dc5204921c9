use super::{Matrix, Rational, RationalMatrix, Scalar};
use crate::error::{Error, Result};

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<T> {
    pub reduced: Matrix<T>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Exact Gauss-Jordan elimination.
pub fn rref(m: &RationalMatrix) -> Echelon<Rational> {
    rref_tol(m, 0.0)
}

/// Gauss-Jordan elimination. For floating-point scalars entries with
/// magnitude at most `tol · max(1, ‖m‖_max)` count as zero and pivots are
/// chosen by largest magnitude; exact scalars ignore `tol`.
pub fn rref_tol<T: Scalar>(m: &Matrix<T>, tol: f64) -> Echelon<T> {
    let mut a = m.clone();
    let (rows, cols) = a.dims();
    let threshold = if T::EXACT {
        0.0
    } else {
        let scale = m.entries().iter().fold(1.0f64, |s, x| s.max(x.to_f64().abs()));
        tol * scale
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = find_pivot(&a, r, c, threshold) else {
            if !T::EXACT {
                for rr in r..rows {
                    a[(rr, c)] = T::zero();
                }
            }
            continue;
        };
        a.swap_rows(r, p);
        let inv = T::one() / a[(r, c)].clone();
        for x in a.row_mut(r) {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = a.row(r).to_vec();
        for rr in 0..rows {
            if rr == r {
                continue;
            }
            let factor = a[(rr, c)].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in a.row_mut(rr).iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
            a[(rr, c)] = T::zero();
        }
        pivots.push(c);
        r += 1;
    }
    if !T::EXACT {
        for rr in r..rows {
            for x in a.row_mut(rr) {
                *x = T::zero();
            }
        }
    }
    Echelon {
        reduced: a,
        rank: r,
        pivots,
    }
}

fn find_pivot<T: Scalar>(a: &Matrix<T>, from: usize, col: usize, threshold: f64) -> Option<usize> {
    if T::EXACT {
        return (from..a.rows()).find(|&r| !a[(r, col)].is_zero());
    }
    let (best, mag) = (from..a.rows())
        .map(|r| (r, a[(r, col)].to_f64().abs()))
        .fold((from, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    (mag > threshold).then_some(best)
}

pub fn rank<T: Scalar>(m: &Matrix<T>, tol: f64) -> usize {
    rref_tol(m, tol).rank
}

/// Basis of the right kernel `{x : m·x = 0}`, one basis vector per row.
pub fn nullspace<T: Scalar>(m: &Matrix<T>, tol: f64) -> Matrix<T> {
    let ech = rref_tol(m, tol);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    let mut basis = Matrix::zeros(free.len(), cols);
    for (b, &f) in free.iter().enumerate() {
        basis[(b, f)] = T::one();
        for (r, &p) in ech.pivots.iter().enumerate() {
            basis[(b, p)] = -ech.reduced[(r, f)].clone();
        }
    }
    basis
}

pub fn inverse<T: Scalar>(m: &Matrix<T>, tol: f64) -> Result<Matrix<T>> {
    let n = m.require_square()?;
    let augmented = Matrix::from_fn(n, 2 * n, |r, c| {
        if c < n {
            m[(r, c)].clone()
        } else if c - n == r {
            T::one()
        } else {
            T::zero()
        }
    });
    let ech = rref_tol(&augmented, tol);
    if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, n, |r, c| ech.reduced[(r, c + n)].clone()))
}

/// Orthogonal projector `H (HᵀH)⁻¹ Hᵀ` onto the column space of `h`.
pub fn column_space_projector<T: Scalar>(h: &Matrix<T>, tol: f64) -> Result<Matrix<T>> {
    let ht = h.transpose();
    let gram = ht.mul(h)?;
    let r = rank(h, tol);
    if r < h.cols() {
        return Err(Error::RankDeficient { rank: r, cols: h.cols() });
    }
    let gram_inv = inverse(&gram, tol).map_err(|_| Error::RankDeficient {
        rank: r,
        cols: h.cols(),
    })?;
    h.mul(&gram_inv)?.mul(&ht)
}
