//! Feasibility conditions for equitable partitions and automorphisms.
//!
//! * Lloyd: `char_poly(N_i)` divides `char_poly(A_i)` for every quotient.
//! * Projector integrality: `⟨F, E_j⟩ = (f_j / v) Σ_i (P_ji / v_i) ⟨F, A_i⟩`
//!   must be a non-negative integer when `F` commutes with the algebra.
//! * For equitable partitions `⟨F, E_j⟩ = m_j = dim(W_j H)`, so the
//!   integrality condition never says more than Lloyd.
//! * Higman: `⟨P_σ, E_j⟩` must be an algebraic integer for an automorphism `σ`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{
    char_poly, integer, poly_divides, rank, IntMatrix, Matrix, Polynomial, Rational, Scalar,
};
use crate::partition::{is_equitable, projector_inner_with_relations, Partition};
use crate::scheme::AssociationScheme;
use crate::spectra::{format_float, Mode, SpectralData, Spectra, Spectrum, Tolerances};

/// A number produced in the scheme's arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => Scalar::to_f64(q),
            Value::Float(x) => *x,
        }
    }

    /// Exact integer test, or `|x - round(x)| < tol` for floats.
    pub fn is_integer(&self, tol: f64) -> bool {
        match self {
            Value::Exact(q) => q.is_integer(),
            Value::Float(x) => (x - x.round()).abs() < tol,
        }
    }

    pub fn is_nonnegative_integer(&self, tol: f64) -> bool {
        self.is_integer(tol)
            && match self {
                Value::Exact(q) => !q.is_negative(),
                Value::Float(x) => x.round() >= 0.0,
            }
    }

    fn from_scalar<T: Scalar>(x: T) -> Value {
        match x.as_rational() {
            Some(q) => Value::Exact(q),
            None => Value::Float(x.to_f64()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{q}"),
            Value::Float(x) => write!(f, "{}", format_float(*x)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// Cannot be decided in this arithmetic mode.
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    fn all(verdicts: &[Verdict]) -> Verdict {
        if verdicts.contains(&Verdict::Fail) {
            Verdict::Fail
        } else if verdicts.contains(&Verdict::Indeterminate) {
            Verdict::Indeterminate
        } else {
            Verdict::Pass
        }
    }
}

/// `⟨F, A_i⟩ = tr(F A_i)` for `i = 0, …, d`, where `F` is the partition's
/// projector. Equals `(tr N_0, …, tr N_d)` when the partition is equitable.
pub fn trace_profile(s: &AssociationScheme, pi: &Partition) -> Result<Vec<Rational>> {
    if pi.vertex_count() != s.vertex_count() {
        return Err(Error::DimensionMismatch {
            op: "trace profile",
            left: (pi.vertex_count(), pi.cell_count()),
            right: (s.vertex_count(), s.vertex_count()),
        });
    }
    Ok(projector_inner_with_relations(s, pi))
}

/// `(f_j / v) Σ_i (P_ji / v_i) c_i` for each `j`.
fn eigen_combination<T: Scalar>(s: &AssociationScheme, sp: &Spectrum<T>, c: &[Rational]) -> Vec<T> {
    let v = T::from_i64(s.vertex_count() as i64);
    (0..sp.multiplicities.len())
        .map(|j| {
            let sum = c
                .iter()
                .zip(s.valencies())
                .enumerate()
                .fold(T::zero(), |acc, (i, (ci, &vi))| {
                    acc + sp.p[(j, i)].clone() * T::from_rational(ci) / T::from_i64(vi as i64)
                });
            T::from_i64(sp.multiplicities[j] as i64) * sum / v.clone()
        })
        .collect()
}

/// `⟨F, E_j⟩` straight from the block form of `F`.
fn projector_against_idempotents<T: Scalar>(pi: &Partition, sp: &Spectrum<T>) -> Vec<T> {
    sp.idempotents
        .iter()
        .map(|e| {
            pi.cells().iter().fold(T::zero(), |acc, cell| {
                let block = cell.iter().fold(T::zero(), |a, &x| {
                    cell.iter().fold(a, |b, &y| b + e[(x, y)].clone())
                });
                acc + block / T::from_i64(cell.len() as i64)
            })
        })
        .collect()
}

fn agree<T: Scalar>(a: &[T], b: &[T], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible(tol))
}

fn check_tolerance(s: &AssociationScheme, t: &Tolerances) -> f64 {
    t.eigen * s.vertex_count().max(1) as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct GodsilOutcome {
    /// `⟨F, E_j⟩` from the trace profile.
    pub values: Vec<Value>,
    /// `⟨F, E_j⟩` computed directly from `F` and `E_j`.
    pub direct: Vec<Value>,
    pub verdicts: Vec<Verdict>,
    pub overall: Verdict,
    pub mode: Mode,
    /// Integrality tolerance used (float mode only).
    pub tolerance: Option<f64>,
}

/// The projector integrality condition, evaluated for any partition.
pub fn godsil_condition(s: &AssociationScheme, spec: &SpectralData, pi: &Partition) -> Result<GodsilOutcome> {
    let traces = trace_profile(s, pi)?;
    let tol = check_tolerance(s, &spec.tolerances);
    let (values, direct) = match &spec.spectra {
        Spectra::Exact(sp) => godsil_values(s, sp, pi, &traces, tol)?,
        Spectra::Float(sp) => godsil_values(s, sp, pi, &traces, tol)?,
    };
    let int_tol = spec.tolerances.integrality;
    let verdicts: Vec<Verdict> = values
        .iter()
        .map(|x| Verdict::from_bool(x.is_nonnegative_integer(int_tol)))
        .collect();
    Ok(GodsilOutcome {
        overall: Verdict::all(&verdicts),
        values,
        direct,
        verdicts,
        mode: spec.mode(),
        tolerance: (spec.mode() == Mode::Float).then_some(int_tol),
    })
}

fn godsil_values<T: Scalar>(
    s: &AssociationScheme,
    sp: &Spectrum<T>,
    pi: &Partition,
    traces: &[Rational],
    tol: f64,
) -> Result<(Vec<Value>, Vec<Value>)> {
    let formula = eigen_combination(s, sp, traces);
    let direct = projector_against_idempotents(pi, sp);
    if !agree(&formula, &direct, tol) {
        return Err(Error::Inconsistent("trace-profile formula disagrees with tr(F E_j)".into()));
    }
    Ok((
        formula.into_iter().map(Value::from_scalar).collect(),
        direct.into_iter().map(Value::from_scalar).collect(),
    ))
}

/// `m_j = dim(W_j H) = rank(B_j H)` where the rows of `B_j` span `W_j`.
pub fn subduced_multiplicities(s: &AssociationScheme, spec: &SpectralData, pi: &Partition) -> Result<Vec<usize>> {
    if pi.vertex_count() != s.vertex_count() {
        return Err(Error::DimensionMismatch {
            op: "subduced multiplicities",
            left: (pi.vertex_count(), pi.cell_count()),
            right: (s.vertex_count(), s.vertex_count()),
        });
    }
    let h = pi.characteristic_matrix();
    let tol = spec.tolerances.eigen;
    match &spec.spectra {
        Spectra::Exact(sp) => ranks(&sp.eigenspaces, &h, tol),
        Spectra::Float(sp) => ranks(&sp.eigenspaces, &h, tol),
    }
}

fn ranks<T: Scalar>(spaces: &[Matrix<T>], h: &IntMatrix, tol: f64) -> Result<Vec<usize>> {
    let h: Matrix<T> = h.to_scalar();
    spaces.iter().map(|b| Ok(rank(&b.mul(&h)?, tol))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LloydOutcome {
    /// `char_poly(N_i)` for each relation.
    pub quotient_polys: Vec<Polynomial>,
    /// Whether `char_poly(N_i)` divides `char_poly(A_i)`.
    pub divides: Vec<bool>,
    pub passes: bool,
}

/// Lloyd's theorem on the quotients of an equitable partition.
pub fn lloyd_check(s: &AssociationScheme, pi: &Partition) -> Result<LloydOutcome> {
    let eq = is_equitable(s, pi)?;
    let quotients = eq.quotients.ok_or(Error::NotEquitable)?;
    lloyd_check_quotients(s, &quotients)
}

/// Lloyd's divisibility test for explicit quotient matrices `N_0, …`.
pub fn lloyd_check_quotients(s: &AssociationScheme, quotients: &[IntMatrix]) -> Result<LloydOutcome> {
    if quotients.len() != s.classes() + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} quotient matrices for {} relations",
            quotients.len(),
            s.classes() + 1
        )));
    }
    let mut quotient_polys = Vec::with_capacity(quotients.len());
    let mut divides = Vec::with_capacity(quotients.len());
    for (n, full) in quotients.iter().zip(s.char_polys()) {
        let cp = char_poly(&n.to_rational())?;
        divides.push(poly_divides(&cp, full)?);
        quotient_polys.push(cp);
    }
    Ok(LloydOutcome {
        passes: divides.iter().all(|&d| d),
        quotient_polys,
        divides,
    })
}

/// Single-matrix form: does `char_poly(quotient)` divide `char_poly(a)`?
pub fn lloyd_divides(a: &IntMatrix, quotient: &IntMatrix) -> Result<bool> {
    poly_divides(&char_poly(&quotient.to_rational())?, &char_poly(&a.to_rational())?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem2Outcome {
    pub godsil_values: Vec<Value>,
    pub subduced: Vec<usize>,
    /// `⟨F, E_j⟩ = m_j` for every `j`.
    pub equality: bool,
    /// Per relation: spectrum of `N_i` is `{P_ji with multiplicity m_j}`.
    pub spectra_match: Vec<bool>,
    pub holds: bool,
}

/// Checks `⟨F, E_j⟩ = dim(W_j H)` on an equitable partition, together with
/// the spectral description of each quotient matrix.
pub fn verify_theorem2(s: &AssociationScheme, spec: &SpectralData, pi: &Partition) -> Result<Theorem2Outcome> {
    let eq = is_equitable(s, pi)?;
    let quotients = eq.quotients.ok_or(Error::NotEquitable)?;
    let godsil = godsil_condition(s, spec, pi)?;
    let subduced = subduced_multiplicities(s, spec, pi)?;
    let tol = spec.tolerances.integrality;
    let equality = godsil
        .values
        .iter()
        .zip(&subduced)
        .all(|(g, &m)| match g {
            Value::Exact(q) => *q == integer(m as i64),
            Value::Float(x) => (x - m as f64).abs() < tol,
        });
    let spectra_match = quotients
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let cp = char_poly(&n.to_rational())?;
            Ok(match &spec.spectra {
                Spectra::Exact(sp) => {
                    let expected = Polynomial::from_roots((0..subduced.len()).map(|j| (&sp.p[(j, i)], subduced[j])));
                    expected == cp
                }
                Spectra::Float(sp) => {
                    let expected = Polynomial::from_roots((0..subduced.len()).map(|j| (&sp.p[(j, i)], subduced[j])));
                    float_poly_matches(&expected, &cp, tol)
                }
            })
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(Theorem2Outcome {
        holds: equality && spectra_match.iter().all(|&b| b),
        godsil_values: godsil.values,
        subduced,
        equality,
        spectra_match,
    })
}

fn float_poly_matches(expected: &Polynomial<f64>, exact: &Polynomial, tol: f64) -> bool {
    let n = expected.coeffs().len().max(exact.coeffs().len());
    (0..n).all(|k| {
        let a = expected.coeffs().get(k).copied().unwrap_or(0.0);
        let b = exact.coeffs().get(k).map_or(0.0, Scalar::to_f64);
        (a - b).abs() <= tol * b.abs().max(1.0)
    })
}

/// A vertex permutation together with its fixed-relation counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeAutomorphism {
    /// `permutation[x] = σ(x)`.
    pub permutation: Vec<usize>,
    /// `α_i(σ) = |{x : (x, σ(x)) ∈ R_i}|`.
    pub alpha: Vec<usize>,
    /// Whether `P_σ` commutes with every `A_i`.
    pub preserves_relations: bool,
}

impl SchemeAutomorphism {
    pub fn new(s: &AssociationScheme, permutation: Vec<usize>) -> Result<Self> {
        let v = s.vertex_count();
        if permutation.len() != v {
            return Err(Error::NotBijection(format!(
                "{} images for {v} vertices",
                permutation.len()
            )));
        }
        let mut seen = vec![false; v];
        for &y in &permutation {
            if y >= v {
                return Err(Error::NotBijection(format!("image {y} out of range")));
            }
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::NotBijection(format!("{} is hit twice", s.label(y))));
            }
        }
        let mut alpha = vec![0; s.classes() + 1];
        for (x, &y) in permutation.iter().enumerate() {
            alpha[s.relation_of(x, y)] += 1;
        }
        let preserves_relations = (0..v).all(|x| {
            (0..v).all(|y| s.relation_of(x, y) == s.relation_of(permutation[x], permutation[y]))
        });
        Ok(SchemeAutomorphism {
            permutation,
            alpha,
            preserves_relations,
        })
    }

    /// `P_σ` with a one in position `(x, σ(x))`.
    pub fn permutation_matrix(&self) -> IntMatrix {
        let v = self.permutation.len();
        IntMatrix::from_fn(v, v, |x, y| i64::from(self.permutation[x] == y))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HigmanOutcome {
    pub alpha: Vec<usize>,
    pub is_automorphism: bool,
    /// False when the commutation pre-check was requested and failed.
    pub evaluated: bool,
    /// `⟨P_σ, E_j⟩` from the fixed-relation counts.
    pub values: Vec<Value>,
    /// `⟨P_σ, E_j⟩` computed directly.
    pub direct: Vec<Value>,
    pub verdicts: Vec<Verdict>,
    pub overall: Verdict,
    pub caveat: Option<String>,
}

/// Higman's condition on a putative automorphism. With `precheck`, a
/// permutation that does not preserve every relation is reported without
/// evaluating the condition.
pub fn higman_condition(
    s: &AssociationScheme,
    spec: &SpectralData,
    permutation: &[usize],
    precheck: bool,
) -> Result<HigmanOutcome> {
    let sigma = SchemeAutomorphism::new(s, permutation.to_vec())?;
    if precheck && !sigma.preserves_relations {
        return Ok(HigmanOutcome {
            alpha: sigma.alpha,
            is_automorphism: false,
            evaluated: false,
            values: Vec::new(),
            direct: Vec::new(),
            verdicts: Vec::new(),
            overall: Verdict::Fail,
            caveat: None,
        });
    }
    let alpha: Vec<Rational> = sigma.alpha.iter().map(|&a| integer(a as i64)).collect();
    let tol = check_tolerance(s, &spec.tolerances);
    let (values, direct) = match &spec.spectra {
        Spectra::Exact(sp) => higman_values(s, sp, &sigma.permutation, &alpha, tol)?,
        Spectra::Float(sp) => higman_values(s, sp, &sigma.permutation, &alpha, tol)?,
    };
    let (verdicts, caveat) = match spec.mode() {
        Mode::Exact => (
            values
                .iter()
                .map(|x| Verdict::from_bool(x.is_integer(0.0)))
                .collect(),
            None,
        ),
        Mode::Float => {
            let near: Vec<bool> = values.iter().map(|x| x.is_integer(spec.tolerances.integrality)).collect();
            (
                vec![Verdict::Indeterminate; values.len()],
                Some(format!(
                    "irrational spectrum: algebraic integrality not decided; nearest-integer test (rational spectrum assumed, tolerance {:e}): {}",
                    spec.tolerances.integrality,
                    near.iter().map(|&b| if b { "integer" } else { "non-integer" }).collect::<Vec<_>>().join(", ")
                )),
            )
        }
    };
    Ok(HigmanOutcome {
        alpha: sigma.alpha,
        is_automorphism: sigma.preserves_relations,
        evaluated: true,
        overall: Verdict::all(&verdicts),
        values,
        direct,
        verdicts,
        caveat,
    })
}

fn higman_values<T: Scalar>(
    s: &AssociationScheme,
    sp: &Spectrum<T>,
    permutation: &[usize],
    alpha: &[Rational],
    tol: f64,
) -> Result<(Vec<Value>, Vec<Value>)> {
    let formula = eigen_combination(s, sp, alpha);
    // ⟨P, E_j⟩ = Σ_x E_j[x][σ(x)]; it equals the formula for any permutation
    // since E_j lies in the algebra.
    let direct: Vec<T> = sp
        .idempotents
        .iter()
        .map(|e| {
            permutation
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (x, &y)| acc + e[(x, y)].clone())
        })
        .collect();
    if !agree(&formula, &direct, tol) {
        return Err(Error::Inconsistent("fixed-relation formula disagrees with tr(P E_j)".into()));
    }
    Ok((
        formula.into_iter().map(Value::from_scalar).collect(),
        direct.into_iter().map(Value::from_scalar).collect(),
    ))
}

/// Everything the feasibility conditions say about one partition.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub trace_profile: Vec<Rational>,
    pub godsil: GodsilOutcome,
    pub subduced: Option<Vec<usize>>,
    /// Present when the partition is equitable.
    pub lloyd: Option<LloydOutcome>,
    pub mode: Mode,
    pub tolerances: Tolerances,
}

impl FeasibilityReport {
    pub fn godsil_values(&self) -> &[Value] {
        &self.godsil.values
    }
}

pub fn feasibility_report(
    s: &AssociationScheme,
    spec: &SpectralData,
    pi: &Partition,
    with_subduced: bool,
) -> Result<FeasibilityReport> {
    let trace_profile = trace_profile(s, pi)?;
    let godsil = godsil_condition(s, spec, pi)?;
    let subduced = with_subduced
        .then(|| subduced_multiplicities(s, spec, pi))
        .transpose()?;
    let eq = is_equitable(s, pi)?;
    let lloyd = eq
        .quotients
        .as_deref()
        .map(|q| lloyd_check_quotients(s, q))
        .transpose()?;
    Ok(FeasibilityReport {
        trace_profile,
        godsil,
        subduced,
        lloyd,
        mode: spec.mode(),
        tolerances: spec.tolerances,
    })
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_zero(),
            Value::Float(x) => *x == 0.0,
        }
    }
}
