//! Spectral data of the Bose-Mesner algebra: common eigenspaces `W_j`,
//! primitive idempotents `E_j`, eigenmatrices `P` and `Q`, multiplicities.
//!
//! Exact rational arithmetic is used whenever every adjacency matrix needed
//! to separate the eigenspaces has a characteristic polynomial that splits
//! over the integers; otherwise the computation falls back to `f64` with
//! explicit tolerances.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{
    char_poly, integer, inner_product, inverse, nullspace, symmetric_eigen, FloatMatrix, Matrix, Rational,
    RationalMatrix, Scalar, SymmetricMatrix,
};
use crate::scheme::AssociationScheme;

/// Numeric tolerances for the floating-point path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues closer than this (relative to the matrix scale) are merged.
    pub eigen: f64,
    /// `|x - round(x)|` below this counts as an integer.
    pub integrality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eigen: 1e-9,
            integrality: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// Eigenspaces, idempotents and eigenmatrices over one scalar type.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    /// Rows of the `j`-th matrix span `W_j`; rows are pairwise orthogonal
    /// (orthonormal in float mode).
    pub eigenspaces: Vec<Matrix<T>>,
    pub idempotents: Vec<Matrix<T>>,
    /// `P[(j, i)]` is the eigenvalue of `A_i` on `W_j`.
    pub p: Matrix<T>,
    pub q: Matrix<T>,
    pub multiplicities: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Spectra {
    Exact(Spectrum<Rational>),
    Float(Spectrum<f64>),
}

/// Common eigenspaces in canonical order, before idempotents are formed.
#[derive(Clone, Debug, PartialEq)]
pub enum Eigenspaces {
    Exact(Vec<RationalMatrix>),
    Float(Vec<FloatMatrix>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub spectra: Spectra,
    pub tolerances: Tolerances,
    pub warnings: Vec<String>,
}

/// Largest deviations found by [`SpectralData::check_duality`].
#[derive(Clone, Debug, PartialEq)]
pub struct DualityCheck {
    /// `max |PQ - vI|`.
    pub pq: f64,
    /// `max |Q_ij v_i - P_ji f_j|`.
    pub pq_relation: f64,
    /// `max |Σ E_j - I|`.
    pub idempotent_sum: f64,
    /// `max |E_i E_j - δ_ij E_i|`.
    pub idempotent_products: f64,
    /// `max |A_i - Σ_j P_ji E_j|`.
    pub reconstruction: f64,
    /// In exact mode, whether every identity held with zero error.
    pub exact: Option<bool>,
}

impl DualityCheck {
    pub fn max_error(&self) -> f64 {
        [
            self.pq,
            self.pq_relation,
            self.idempotent_sum,
            self.idempotent_products,
            self.reconstruction,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Exact equality in exact mode, `max_error < bound` in float mode.
    pub fn passes(&self, bound: f64) -> bool {
        match self.exact {
            Some(all) => all,
            None => self.max_error() < bound,
        }
    }
}

/// Result of projecting a matrix onto the Bose-Mesner algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraProjection {
    /// `⟨A_i, M⟩ / (v v_i)` for each `i`.
    pub coefficients: Vec<Rational>,
    pub projection: RationalMatrix,
    /// Largest deviation between the A-basis and E-basis forms.
    pub basis_agreement: f64,
}

impl SpectralData {
    /// Full pipeline: eigenspaces, idempotents, eigenmatrices.
    pub fn compute(s: &AssociationScheme, tolerances: Tolerances) -> Result<Self> {
        let mut warnings = Vec::new();
        let spectra = match common_eigenspaces(s, tolerances)? {
            Eigenspaces::Exact(spaces) => Spectra::Exact(assemble(s, spaces, tolerances.eigen)?),
            Eigenspaces::Float(spaces) => {
                warnings.push(format!(
                    "spectrum is not rational; using floating-point arithmetic (eigen tolerance {:e}, integrality tolerance {:e})",
                    tolerances.eigen, tolerances.integrality
                ));
                Spectra::Float(assemble(s, spaces, tolerances.eigen)?)
            }
        };
        Ok(SpectralData {
            spectra,
            tolerances,
            warnings,
        })
    }

    pub fn mode(&self) -> Mode {
        match self.spectra {
            Spectra::Exact(_) => Mode::Exact,
            Spectra::Float(_) => Mode::Float,
        }
    }

    pub fn multiplicities(&self) -> &[usize] {
        match &self.spectra {
            Spectra::Exact(sp) => &sp.multiplicities,
            Spectra::Float(sp) => &sp.multiplicities,
        }
    }

    pub fn exact(&self) -> Option<&Spectrum<Rational>> {
        match &self.spectra {
            Spectra::Exact(sp) => Some(sp),
            Spectra::Float(_) => None,
        }
    }

    pub fn float(&self) -> Option<&Spectrum<f64>> {
        match &self.spectra {
            Spectra::Float(sp) => Some(sp),
            Spectra::Exact(_) => None,
        }
    }

    /// `P` rendered entrywise (`p/q` strings in exact mode).
    pub fn p_strings(&self) -> Vec<Vec<String>> {
        match &self.spectra {
            Spectra::Exact(sp) => render(&sp.p, |x| x.to_string()),
            Spectra::Float(sp) => render(&sp.p, |x| format_float(*x)),
        }
    }

    pub fn q_strings(&self) -> Vec<Vec<String>> {
        match &self.spectra {
            Spectra::Exact(sp) => render(&sp.q, |x| x.to_string()),
            Spectra::Float(sp) => render(&sp.q, |x| format_float(*x)),
        }
    }

    /// Verifies `PQ = vI`, `Q_ij v_i = P_ji f_j`, `Σ E_j = I`,
    /// `E_i E_j = δ_ij E_i` and `A_i = Σ_j P_ji E_j`.
    pub fn check_duality(&self, s: &AssociationScheme) -> Result<DualityCheck> {
        match &self.spectra {
            Spectra::Exact(sp) => duality_errors(s, sp),
            Spectra::Float(sp) => duality_errors(s, sp),
        }
    }
}

/// Renders a float with enough digits to be reproducible and readable.
pub fn format_float(x: f64) -> String {
    let rounded = (x * 1e12).round() / 1e12;
    let r = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{r}")
}

fn render<T>(m: &Matrix<T>, f: impl Fn(&T) -> String) -> Vec<Vec<String>> {
    m.iter_rows().map(|row| row.iter().map(&f).collect()).collect()
}

/// Orders the common eigenspaces of `s`: `W_0` (constants) first, the rest
/// by decreasing eigenvalue on `A_1`, ties broken on `A_2`, `A_3`, ….
pub fn common_eigenspaces(s: &AssociationScheme, tolerances: Tolerances) -> Result<Eigenspaces> {
    if let Some(spaces) = exact_eigenspaces(s)? {
        return Ok(Eigenspaces::Exact(spaces));
    }
    float_eigenspaces(s, tolerances.eigen).map(Eigenspaces::Float)
}

/// Primitive idempotents `E_j = B_jᵀ (B_j B_jᵀ)⁻¹ B_j`.
pub fn idempotents<T: Scalar>(spaces: &[Matrix<T>], tol: f64) -> Result<Vec<Matrix<T>>> {
    spaces
        .iter()
        .map(|b| {
            let bt = b.transpose();
            let gram_inv = inverse(&b.mul(&bt)?, tol)?;
            bt.mul(&gram_inv)?.mul(b)
        })
        .collect()
}

/// `P` from Rayleigh quotients and `Q = vP⁻¹`, after checking that a second
/// basis vector of each space (when there is one) sees the same eigenvalue,
/// that `PQ = vI` and that `Q_ij v_i = P_ji f_j`.
pub fn eigenmatrices<T: Scalar>(
    s: &AssociationScheme,
    spaces: &[Matrix<T>],
    tol: f64,
) -> Result<(Matrix<T>, Matrix<T>)> {
    let size = s.classes() + 1;
    let v = s.vertex_count();
    let check_tol = tol * v.max(1) as f64;
    let relations: Vec<Matrix<T>> = s.relations().iter().map(|a| a.to_scalar()).collect();
    let mut p = Matrix::zeros(size, size);
    for (j, basis) in spaces.iter().enumerate() {
        for (i, a) in relations.iter().enumerate() {
            let value = rayleigh(basis.row(0), a);
            if basis.rows() > 1 {
                let other = rayleigh(basis.row(1), a);
                if !(other - value.clone()).is_negligible(check_tol) {
                    return Err(Error::Inconsistent(format!(
                        "A_{i} has two different eigenvalues on W_{j}"
                    )));
                }
            }
            p[(j, i)] = value;
        }
    }
    let vt = T::from_i64(v as i64);
    let q = inverse(&p, tol)
        .map_err(|_| Error::Inconsistent("eigenmatrix P is singular".into()))?
        .scale(&vt);
    let pq = p.mul(&q)?;
    let target = Matrix::identity(size).scale(&vt);
    let mismatch = if T::EXACT {
        pq != target
    } else {
        pq.max_abs_diff(&target)? > check_tol
    };
    if mismatch {
        return Err(Error::Inconsistent("PQ differs from vI".into()));
    }
    let f: Vec<T> = spaces.iter().map(|b| T::from_i64(b.rows() as i64)).collect();
    for i in 0..size {
        for j in 0..size {
            let lhs = q[(i, j)].clone() * T::from_i64(s.valencies()[i] as i64);
            let rhs = p[(j, i)].clone() * f[j].clone();
            if !(lhs - rhs).is_negligible(check_tol) {
                return Err(Error::Inconsistent(format!("Q_{i}{j} v_{i} differs from P_{j}{i} f_{j}")));
            }
        }
    }
    Ok((p, q))
}

fn assemble<T: Scalar>(s: &AssociationScheme, spaces: Vec<Matrix<T>>, tol: f64) -> Result<Spectrum<T>> {
    let idempotents = idempotents(&spaces, tol)?;
    let (p, q) = eigenmatrices(s, &spaces, tol)?;
    let multiplicities = spaces.iter().map(Matrix::rows).collect();
    Ok(Spectrum {
        eigenspaces: spaces,
        idempotents,
        p,
        q,
        multiplicities,
    })
}

fn rayleigh<T: Scalar>(w: &[T], a: &Matrix<T>) -> T {
    let n = w.len();
    let mut num = T::zero();
    for x in 0..n {
        if w[x].is_zero() {
            continue;
        }
        let mut aw = T::zero();
        for y in 0..n {
            if !a[(x, y)].is_zero() && !w[y].is_zero() {
                aw = aw + a[(x, y)].clone() * w[y].clone();
            }
        }
        num = num + w[x].clone() * aw;
    }
    let den = w.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone());
    num / den
}

/// Exact refinement by the integer eigenvalues of `A_1, A_2, …`. Returns
/// `None` as soon as a needed characteristic polynomial fails to split.
fn exact_eigenspaces(s: &AssociationScheme) -> Result<Option<Vec<RationalMatrix>>> {
    let v = s.vertex_count();
    let target = s.classes() + 1;
    let mut spaces = vec![RationalMatrix::identity(v)];
    for a in s.relations().iter().skip(1) {
        if spaces.len() == target {
            break;
        }
        let a = a.to_rational();
        let cp = char_poly(&a)?;
        let (roots, rest) = cp.integer_roots();
        if rest.degree() != Some(0) {
            return Ok(None);
        }
        let mut refined = Vec::new();
        for basis in &spaces {
            let mut found = 0;
            for &(lambda, _) in &roots {
                let mut shifted = a.clone();
                for x in 0..v {
                    shifted[(x, x)] = shifted[(x, x)].clone() - integer(lambda);
                }
                // Coefficient vectors c with (c·B)(A - λI) = 0.
                let image = basis.mul(&shifted)?;
                let coeffs = nullspace(&image.transpose(), 0.0);
                if coeffs.rows() > 0 {
                    found += coeffs.rows();
                    refined.push(coeffs.mul(basis)?);
                }
            }
            if found != basis.rows() {
                return Err(Error::Inconsistent(
                    "eigenspaces of a relation do not split a common eigenspace".into(),
                ));
            }
        }
        spaces = refined;
    }
    if spaces.len() != target {
        return Err(Error::Refinement {
            expected: target,
            found: spaces.len(),
        });
    }
    let mut spaces: Vec<RationalMatrix> = spaces.iter().map(orthogonalize).collect();
    order_spaces(s, &mut spaces, 0.0)?;
    spaces[0] = RationalMatrix::ones(1, v);
    Ok(Some(spaces))
}

/// Refinement of orthonormal bases by numeric eigendecomposition of each
/// relation restricted to the current spaces.
fn float_eigenspaces(s: &AssociationScheme, tol: f64) -> Result<Vec<FloatMatrix>> {
    let v = s.vertex_count();
    let target = s.classes() + 1;
    let mut spaces = vec![FloatMatrix::identity(v)];
    for a in s.relations().iter().skip(1) {
        if spaces.len() == target {
            break;
        }
        let a = a.to_float();
        let mut refined = Vec::new();
        for basis in &spaces {
            let restricted = basis.mul(&a)?.mul(&basis.transpose())?;
            for group in symmetric_eigen(&SymmetricMatrix::symmetrize(&restricted)?, tol)? {
                refined.push(group.vectors.mul(basis)?);
            }
        }
        spaces = refined;
    }
    if spaces.len() != target {
        return Err(Error::Refinement {
            expected: target,
            found: spaces.len(),
        });
    }
    order_spaces(s, &mut spaces, tol * v as f64)?;
    let unit = 1.0 / (v as f64).sqrt();
    spaces[0] = FloatMatrix::filled(1, v, unit);
    Ok(spaces)
}

fn order_spaces<T: Scalar>(s: &AssociationScheme, spaces: &mut Vec<Matrix<T>>, tol: f64) -> Result<()> {
    let relations: Vec<Matrix<T>> = s.relations().iter().map(|a| a.to_scalar()).collect();
    let rows: Vec<Vec<T>> = spaces
        .iter()
        .map(|b| relations.iter().map(|a| rayleigh(b.row(0), a)).collect())
        .collect();
    let valencies: Vec<T> = s.valencies().iter().map(|&k| T::from_i64(k as i64)).collect();
    let distance = |row: &[T]| {
        row.iter()
            .zip(&valencies)
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().abs())
            .fold(0.0, f64::max)
    };
    let trivial = (0..spaces.len())
        .min_by(|&a, &b| distance(&rows[a]).total_cmp(&distance(&rows[b])))
        .expect("at least one space");
    if distance(&rows[trivial]) > tol.max(0.0) * 10.0 || spaces[trivial].rows() != 1 {
        return Err(Error::Inconsistent("no one-dimensional space of constant vectors".into()));
    }
    let cmp = |a: &usize, b: &usize| -> Ordering {
        if *a == trivial || *b == trivial {
            return (*b == trivial).cmp(&(*a == trivial));
        }
        for (pa, pb) in rows[*a].iter().zip(&rows[*b]).skip(1) {
            let diff = (pb.clone() - pa.clone()).to_f64();
            if diff.abs() > tol {
                return diff.total_cmp(&0.0);
            }
        }
        Ordering::Equal
    };
    let mut order: Vec<usize> = (0..spaces.len()).collect();
    order.sort_by(cmp);
    let old = std::mem::take(spaces);
    let mut slots: Vec<Option<Matrix<T>>> = old.into_iter().map(Some).collect();
    *spaces = order.iter().map(|&k| slots[k].take().expect("permutation")).collect();
    Ok(())
}

/// Exact Gram-Schmidt without normalisation; each row is then scaled to a
/// primitive integer vector.
fn orthogonalize(basis: &RationalMatrix) -> RationalMatrix {
    let mut out: Vec<Vec<Rational>> = Vec::with_capacity(basis.rows());
    for row in basis.iter_rows() {
        let mut u = row.to_vec();
        for prev in &out {
            let num = dot(&u, prev);
            if num == integer(0) {
                continue;
            }
            let coef = num / dot(prev, prev);
            for (x, p) in u.iter_mut().zip(prev) {
                *x = x.clone() - coef.clone() * p.clone();
            }
        }
        out.push(primitive(u));
    }
    Matrix::from_rows(out).expect("rows share a length")
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(integer(0), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn primitive(row: Vec<Rational>) -> Vec<Rational> {
    let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return row;
    }
    // First nonzero entry positive.
    if ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        g = -g;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

fn duality_errors<T: Scalar>(s: &AssociationScheme, sp: &Spectrum<T>) -> Result<DualityCheck> {
    let size = s.classes() + 1;
    let v = s.vertex_count();
    let vt = T::from_i64(v as i64);
    let mut exact = true;
    let mut track = |m: &Matrix<T>, target: &Matrix<T>| -> Result<f64> {
        if T::EXACT && m != target {
            exact = false;
        }
        m.max_abs_diff(target)
    };

    let pq = track(&sp.p.mul(&sp.q)?, &Matrix::identity(size).scale(&vt))?;

    let lhs = Matrix::from_fn(size, size, |i, j| sp.q[(i, j)].clone() * T::from_i64(s.valencies()[i] as i64));
    let rhs = Matrix::from_fn(size, size, |i, j| sp.p[(j, i)].clone() * T::from_i64(sp.multiplicities[j] as i64));
    let pq_relation = track(&lhs, &rhs)?;

    let sum = sp
        .idempotents
        .iter()
        .try_fold(Matrix::zeros(v, v), |acc, e| acc.add(e))?;
    let idempotent_sum = track(&sum, &Matrix::identity(v))?;

    let mut idempotent_products: f64 = 0.0;
    for (i, ei) in sp.idempotents.iter().enumerate() {
        for (j, ej) in sp.idempotents.iter().enumerate() {
            let target = if i == j { ei.clone() } else { Matrix::zeros(v, v) };
            idempotent_products = idempotent_products.max(track(&ei.mul(ej)?, &target)?);
        }
    }

    let mut reconstruction: f64 = 0.0;
    for (i, a) in s.relations().iter().enumerate() {
        let built = sp
            .idempotents
            .iter()
            .enumerate()
            .try_fold(Matrix::zeros(v, v), |acc: Matrix<T>, (j, e)| acc.add(&e.scale(&sp.p[(j, i)])))?;
        reconstruction = reconstruction.max(track(&built, &a.to_scalar())?);
    }

    Ok(DualityCheck {
        pq,
        pq_relation,
        idempotent_sum,
        idempotent_products,
        reconstruction,
        exact: T::EXACT.then_some(exact),
    })
}

/// Orthogonal projection of `m` onto the Bose-Mesner algebra,
/// `M̂ = Σ_i ⟨A_i, M⟩ / (v v_i) A_i`, cross-checked against
/// `Σ_j ⟨E_j, M⟩ / f_j E_j`.
pub fn project_onto_algebra(
    m: &RationalMatrix,
    s: &AssociationScheme,
    spec: &SpectralData,
) -> Result<AlgebraProjection> {
    let v = s.vertex_count();
    if m.dims() != (v, v) {
        return Err(Error::DimensionMismatch {
            op: "project onto algebra",
            left: m.dims(),
            right: (v, v),
        });
    }
    let mut coefficients = Vec::with_capacity(s.classes() + 1);
    let mut projection = RationalMatrix::zeros(v, v);
    for (a, &k) in s.relations().iter().zip(s.valencies()) {
        let a = a.to_rational();
        let c = inner_product(&a, m)? / integer((v * k) as i64);
        projection = projection.add(&a.scale(&c))?;
        coefficients.push(c);
    }
    let (identical, basis_agreement) = match &spec.spectra {
        Spectra::Exact(sp) => e_basis_gap(&sp.idempotents, &sp.multiplicities, m, &projection)?,
        Spectra::Float(sp) => e_basis_gap(&sp.idempotents, &sp.multiplicities, &m.to_float(), &projection.to_float())?,
    };
    let agrees = match spec.mode() {
        Mode::Exact => identical,
        Mode::Float => basis_agreement <= spec.tolerances.eigen * v as f64,
    };
    if !agrees {
        return Err(Error::Inconsistent("A-basis and E-basis projections disagree".into()));
    }
    Ok(AlgebraProjection {
        coefficients,
        projection,
        basis_agreement,
    })
}

/// Whether the E-basis form equals `expected` exactly, and the largest gap.
fn e_basis_gap<T: Scalar>(
    idempotents: &[Matrix<T>],
    f: &[usize],
    m: &Matrix<T>,
    expected: &Matrix<T>,
) -> Result<(bool, f64)> {
    let n = m.rows();
    let mut acc = Matrix::zeros(n, n);
    for (e, &fj) in idempotents.iter().zip(f) {
        let c = inner_product(e, m)? / T::from_i64(fj as i64);
        acc = acc.add(&e.scale(&c))?;
    }
    Ok((acc == *expected, acc.max_abs_diff(expected)?))
}
