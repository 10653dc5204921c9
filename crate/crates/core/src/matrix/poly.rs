use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{integer, Matrix, Rational, Scalar};
use crate::error::{Error, Result};

/// Univariate polynomial, coefficients in ascending degree order with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T = Rational> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::new(vec![T::one()])
    }

    /// The monic linear factor `x - root`.
    pub fn linear(root: T) -> Self {
        Polynomial::new(vec![-root, T::one()])
    }

    /// `Π (x - rootᵢ)^{multᵢ}`.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = (&'a T, usize)>) -> Self
    where
        T: 'a,
    {
        roots.into_iter().fold(Polynomial::one(), |acc, (r, m)| {
            (0..m).fold(acc, |p, _| p.mul(&Polynomial::linear(r.clone())))
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(T::zero);
        Polynomial::new((0..n).map(|i| get(self, i) - get(other, i)).collect())
    }

    pub fn scale(&self, factor: &T) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect())
    }

    /// Long division: `self = divisor·quotient + remainder` with
    /// `deg(remainder) < deg(divisor)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return Ok((Polynomial::zero(), self.clone()));
        };
        let mut quot = vec![T::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
            }
            rem[k + dd] = T::zero();
            quot[k] = c;
        }
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// `self` evaluated at a square matrix (Horner scheme).
    pub fn eval_matrix(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        let n = m.require_square()?;
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?;
            for i in 0..n {
                acc[(i, i)] = acc[(i, i)].clone() + c.clone();
            }
        }
        Ok(acc)
    }
}

impl Polynomial<Rational> {
    /// True iff every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer roots with their multiplicities, in decreasing order, along
    /// with the cofactor left after dividing them out. For a monic integer
    /// polynomial these are all of its rational roots.
    pub fn integer_roots(&self) -> (Vec<(i64, usize)>, Polynomial) {
        let mut rest = self.clone();
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return (roots, rest);
        }
        let bound = self.root_bound();
        for r in (-bound..=bound).rev() {
            let factor = Polynomial::linear(integer(r));
            let mut mult = 0;
            while !rest.is_zero() && rest.degree() > Some(0) && rest.eval(&integer(r)).is_zero() {
                let (q, _) = rest
                    .div_rem(&factor)
                    .expect("linear factor is nonzero");
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
        (roots, rest)
    }

    /// True iff the polynomial is a product of rational linear factors
    /// (decided for monic integer polynomials, whose rational roots are
    /// integers).
    pub fn splits_over_integers(&self) -> bool {
        let (_, rest) = self.integer_roots();
        rest.degree() == Some(0)
    }

    /// Fujiwara's bound on root magnitude, rounded up.
    fn root_bound(&self) -> i64 {
        let n = self.coeffs.len() - 1;
        let lead = ln_abs(&self.coeffs[n]);
        let mut best = f64::NEG_INFINITY;
        for k in 1..=n {
            let c = &self.coeffs[n - k];
            if c.is_zero() {
                continue;
            }
            let mut l = ln_abs(c) - lead;
            if k == n {
                l -= std::f64::consts::LN_2;
            }
            best = best.max(l / k as f64);
        }
        if best == f64::NEG_INFINITY {
            return 0;
        }
        let bound = 2.0 * best.exp();
        if bound > 1e7 {
            // Too wide to sweep; callers fall back to numerics.
            return 10_000_000;
        }
        bound.ceil() as i64 + 1
    }
}

fn ln_abs(q: &Rational) -> f64 {
    ln_abs_int(q.numer()) - ln_abs_int(q.denom())
}

fn ln_abs_int(n: &BigInt) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits <= 960 {
        return num_traits::ToPrimitive::to_f64(&n).unwrap_or(f64::MAX).ln();
    }
    let shift = bits - 960;
    let top: BigInt = &n >> shift;
    num_traits::ToPrimitive::to_f64(&top).unwrap_or(f64::MAX).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Monic characteristic polynomial `det(xI - M)`.
///
/// Reduces `m` to upper Hessenberg form by elimination similarities, then
/// expands the determinant along the Hessenberg structure. Exact over the
/// rationals; only field operations are used.
pub fn char_poly<T: Scalar>(m: &Matrix<T>) -> Result<Polynomial<T>> {
    let n = m.require_square()?;
    let mut h = m.clone();
    for col in 0..n.saturating_sub(2) {
        let below = col + 1;
        let pivot = if T::EXACT {
            (below..n).find(|&r| !h[(r, col)].is_zero())
        } else {
            (below..n)
                .max_by(|&a, &b| h[(a, col)].to_f64().abs().total_cmp(&h[(b, col)].to_f64().abs()))
                .filter(|&r| h[(r, col)].to_f64() != 0.0)
        };
        let Some(p) = pivot else { continue };
        h.swap_rows(p, below);
        h.swap_cols(p, below);
        let pv = h[(below, col)].clone();
        for r in below + 1..n {
            let u = h[(r, col)].clone() / pv.clone();
            if u.is_zero() {
                continue;
            }
            for c in 0..n {
                let t = h[(below, c)].clone();
                h[(r, c)] = h[(r, c)].clone() - u.clone() * t;
            }
            for rr in 0..n {
                let t = h[(rr, r)].clone();
                h[(rr, below)] = h[(rr, below)].clone() + u.clone() * t;
            }
        }
    }

    // p[k] = characteristic polynomial of the leading k×k block.
    let mut p: Vec<Polynomial<T>> = Vec::with_capacity(n + 1);
    p.push(Polynomial::one());
    for k in 0..n {
        let mut next = p[k].mul(&Polynomial::linear(h[(k, k)].clone()));
        let mut sub = T::one();
        for i in (0..k).rev() {
            sub = sub * h[(i + 1, i)].clone();
            if sub.is_zero() {
                break;
            }
            let coef = h[(i, k)].clone() * sub.clone();
            next = next.sub(&p[i].scale(&coef));
        }
        p.push(next);
    }
    Ok(p.pop().expect("at least the constant polynomial"))
}

/// Exact divisibility test: does `p` divide `q`?
pub fn poly_divides(p: &Polynomial, q: &Polynomial) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, rem) = q.div_rem(p)?;
    Ok(rem.is_zero())
}

impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag == "1";
            match deg {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{mag}*x")?,
                _ if unit => write!(f, "x^{deg}")?,
                _ => write!(f, "{mag}*x^{deg}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}
