//! Cross-checks against independent reference computations.

use equipart_core::matrix::{char_poly, column_space_projector, inner_product, integer, nullspace, rank, rref, Polynomial};
use equipart_core::scheme::from_distance_regular_graph;
use equipart_core::{named_scheme, verify_axioms, AssociationScheme, Family, IntMatrix, Rational, RationalMatrix};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn catalog() -> Vec<AssociationScheme> {
    [
        "petersen",
        "hamming,3,2",
        "hamming,2,3",
        "johnson,4,2",
        "johnson,5,2",
        "cycle,5",
        "cycle,6",
        "cycle,7",
        "complete,4",
    ]
    .iter()
    .map(|f| named_scheme(f.parse::<Family>().unwrap(), 512).unwrap())
    .collect()
}

/// Faddeev–LeVerrier: ascending coefficients of det(xI - A).
fn faddeev_leverrier(a: &RationalMatrix) -> Vec<Rational> {
    let n = a.rows();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        let shift = RationalMatrix::identity(n).scale(&c[n + 1 - k]);
        m = a.mul(&m).unwrap().add(&shift).unwrap();
        c[n - k] = -a.mul(&m).unwrap().trace() / integer(k as i64);
    }
    c
}

fn poly_of_matrix(p: &Polynomial, a: &RationalMatrix) -> RationalMatrix {
    let n = a.rows();
    // Horner on matrices.
    p.coeffs().iter().rev().fold(RationalMatrix::zeros(n, n), |acc, c| {
        a.mul(&acc).unwrap().add(&RationalMatrix::identity(n).scale(c)).unwrap()
    })
}

#[test]
fn char_poly_matches_faddeev_leverrier_on_catalog() {
    for s in catalog() {
        for (a, cp) in s.relations().iter().zip(s.char_polys()) {
            assert_eq!(cp.coeffs(), &faddeev_leverrier(&a.to_rational())[..]);
        }
    }
}

#[test]
fn cayley_hamilton_on_catalog() {
    for s in catalog() {
        for (a, cp) in s.relations().iter().zip(s.char_polys()) {
            let a = a.to_rational();
            assert!(poly_of_matrix(cp, &a).entries().iter().all(Zero::is_zero));
        }
    }
}

#[test]
fn intersection_number_identities() {
    for s in catalog() {
        let p = s.intersection_numbers();
        let v = s.valencies();
        let d = s.classes();
        for i in 0..=d {
            for j in 0..=d {
                // Row sums of A_i A_j.
                let total: u64 = (0..=d).map(|k| p.get(i, j, k) * v[k] as u64).sum();
                assert_eq!(total, (v[i] * v[j]) as u64);
                for k in 0..=d {
                    assert_eq!(p.get(i, j, k), p.get(j, i, k));
                    assert_eq!(v[k] as u64 * p.get(i, j, k), v[i] as u64 * p.get(k, j, i));
                }
            }
            assert_eq!(p.get(i, i, 0), v[i] as u64);
        }
    }
}

#[test]
fn products_expand_in_relation_basis() {
    for s in catalog() {
        let p = s.intersection_numbers();
        let d = s.classes();
        for i in 0..=d {
            for j in 0..=d {
                let prod = s.relation(i).mul(s.relation(j)).unwrap();
                let expected = (0..=d).fold(IntMatrix::zeros(s.vertex_count(), s.vertex_count()), |acc, k| {
                    acc.add(&s.relation(k).scale(&(p.get(i, j, k) as i64))).unwrap()
                });
                assert_eq!(prod, expected);
            }
        }
    }
}

#[test]
fn graph_route_and_matrix_route_agree() {
    for s in catalog() {
        let again = verify_axioms(s.relations().to_vec(), Some(s.labels().to_vec())).unwrap();
        assert_eq!(again, s);
        let edges: Vec<(String, String)> = (0..s.vertex_count())
            .flat_map(|x| s.neighbours(1, x).filter(move |&y| y > x).map(move |y| (x, y)))
            .map(|(x, y)| (s.label(x).to_string(), s.label(y).to_string()))
            .collect();
        let g = equipart_core::LabeledGraph::from_labeled_edges(&edges).unwrap();
        let t = from_distance_regular_graph(&g).unwrap();
        assert_eq!(t.valencies(), s.valencies());
        assert_eq!(t.vertex_count(), s.vertex_count());
        for x in 0..s.vertex_count() {
            for y in 0..s.vertex_count() {
                let (tx, ty) = (t.vertex(s.label(x)).unwrap(), t.vertex(s.label(y)).unwrap());
                assert_eq!(t.relation_of(tx, ty), s.relation_of(x, y));
            }
        }
    }
}

fn small_int_matrix(max_n: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(-4i64..=4, n * n)
            .prop_map(move |xs| IntMatrix::from_fn(n, n, |r, c| xs[r * n + c]).to_rational())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hessenberg_agrees_with_faddeev_leverrier(a in small_int_matrix(6)) {
        let cp = char_poly(&a).unwrap();
        prop_assert_eq!(cp.coeffs(), &faddeev_leverrier(&a)[..]);
    }

    #[test]
    fn rank_nullity(a in small_int_matrix(6)) {
        let r = rank(&a, 0.0);
        let k = nullspace(&a, 0.0);
        prop_assert_eq!(r + k.rows(), a.cols());
        prop_assert!(a.mul(&k.transpose()).unwrap().entries().iter().all(Zero::is_zero));
        prop_assert_eq!(rref(&a).rank, r);
    }

    #[test]
    fn rref_is_idempotent_and_rank_is_transpose_invariant(a in small_int_matrix(6)) {
        let once = rref(&a).reduced;
        prop_assert_eq!(&rref(&once).reduced, &once);
        prop_assert_eq!(rank(&a, 0.0), rank(&a.transpose(), 0.0));
    }

    #[test]
    fn inner_product_is_entrywise_sum(a in small_int_matrix(5), seed in any::<i64>()) {
        let b = a.map(|q| q.clone() * integer(seed % 7) + integer(1));
        let via_trace = a.transpose().mul(&b).unwrap().trace();
        prop_assert_eq!(inner_product(&a, &b).unwrap(), via_trace);
    }

    #[test]
    fn projector_properties(cols in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 6), 1..=4)) {
        let h = IntMatrix::from_fn(6, cols.len(), |r, c| cols[c][r]).to_rational();
        match column_space_projector(&h, 0.0) {
            Ok(f) => {
                prop_assert_eq!(&f.mul(&f).unwrap(), &f);
                prop_assert_eq!(&f.transpose(), &f);
                prop_assert_eq!(&f.mul(&h).unwrap(), &h);
            }
            Err(_) => prop_assert!(rank(&h, 0.0) < h.cols()),
        }
    }

    #[test]
    fn float_rank_matches_exact_on_integer_matrices(a in small_int_matrix(5)) {
        prop_assert_eq!(rank(&a.map(equipart_core::Scalar::to_f64), 1e-9), rank(&a, 0.0));
    }
}
