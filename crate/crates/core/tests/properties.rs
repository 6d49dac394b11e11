//! Property tests for the algebraic and numerical invariants.

use cuntz_kms::ckwords::{
    multiply, nonzero_monomials, normalize, normalize_with, termination_measure, Letter, Monomial, NormalForm,
    Strategy as Rewrite, TraceStep,
};
use cuntz_kms::classify::{detect_lambda, HeuristicConfig};
use cuntz_kms::matrix01::{ZeroOneMatrix, DEFAULT_DIMENSION_CAP};
use cuntz_kms::perron::{
    in_lambda, pf_data, solve_beta, FrequencyVector, Membership, NonnegMatrix, DEFAULT_MAX_ITERATIONS,
};
use cuntz_kms::scalars::{rat, Scalar};
use cuntz_kms::states::{eval_state, StateSpec};
use cuntz_kms::tensorops::{embedding_preserves_admissibility, kronecker_intervals};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn pool() -> Vec<ZeroOneMatrix> {
    vec![
        ZeroOneMatrix::full(2).unwrap(),
        ZeroOneMatrix::full(3).unwrap(),
        ZeroOneMatrix::new(&[vec![1, 1], vec![1, 0]]).unwrap(),
        ZeroOneMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap(),
    ]
}

fn matrix() -> impl Strategy<Value = ZeroOneMatrix> {
    (0..4usize).prop_map(|i| pool()[i].clone())
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=n, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(index, starred)| Letter { index, starred }).collect())
}

fn matrix_and_word(max_len: usize) -> impl Strategy<Value = (ZeroOneMatrix, Vec<Letter>)> {
    matrix().prop_flat_map(move |a| {
        let n = a.dim();
        (Just(a), word(n, max_len))
    })
}

fn monomial_of(a: &ZeroOneMatrix, seed: usize) -> Monomial {
    let ms = nonzero_monomials(a, 2);
    ms[seed % ms.len()].clone()
}

/// Positive rationals with denominators up to 12 summing to 1.
fn simplex_point(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(1i64..=12, n).prop_map(|w| {
        let total: i64 = w.iter().sum();
        w.into_iter().map(|x| rat(x, total)).collect()
    })
}

fn exact_state(n: usize, a: &[BigRational]) -> StateSpec {
    let f = ZeroOneMatrix::full(n).unwrap();
    let v: Vec<Scalar> = a.iter().cloned().map(Scalar::Rational).collect();
    match in_lambda(&f, &v, 1e-9).unwrap() {
        Membership::Accepted(p) => StateSpec::new(&p, 1e-13).unwrap(),
        Membership::Rejected { pfe } => panic!("simplex point rejected: {pfe}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rewriting_is_confluent_and_terminating((a, w) in matrix_and_word(7)) {
        let mut trace: Vec<TraceStep> = Vec::new();
        let left = normalize_with(&a, &w, Rewrite::Leftmost, Some(&mut trace)).unwrap();
        let right = normalize_with(&a, &w, Rewrite::Rightmost, None).unwrap();
        prop_assert_eq!(&left, &right);
        for step in &trace {
            prop_assert!(step.after.iter().all(|&m| m + 1 == step.before));
        }
        prop_assert!(trace.first().is_none_or(|s| s.before == termination_measure(&w)));
    }

    #[test]
    fn multiplication_is_associative(a in matrix(), i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let (x, y, z) = (
            NormalForm::monomial(monomial_of(&a, i)),
            NormalForm::monomial(monomial_of(&a, j)),
            NormalForm::monomial(monomial_of(&a, k)),
        );
        let left = multiply(&a, &multiply(&a, &x, &y).unwrap(), &z).unwrap();
        let right = multiply(&a, &x, &multiply(&a, &y, &z).unwrap()).unwrap();
        prop_assert!(left.equivalent(&right, &a), "{} vs {}", left, right);
    }

    #[test]
    fn adjoint_reverses_products(a in matrix(), i in 0usize..1000, j in 0usize..1000) {
        let x = NormalForm::monomial(monomial_of(&a, i));
        let y = NormalForm::monomial(monomial_of(&a, j));
        let lhs = multiply(&a, &x, &y).unwrap().adjoint();
        let rhs = multiply(&a, &y.adjoint(), &x.adjoint()).unwrap();
        prop_assert!(lhs.equivalent(&rhs, &a));
    }

    #[test]
    fn range_projections_sum_to_unit(a in matrix()) {
        let mut total = NormalForm::zero();
        for i in 1..=a.dim() {
            total = total.add(&NormalForm::monomial(Monomial::new(vec![i], vec![i])));
        }
        prop_assert!(total.equivalent(&NormalForm::unit(), &a));
        for i in 1..=a.dim() {
            let lhs = normalize(&a, &[Letter::s_star(i), Letter::s(i)]).unwrap();
            let mut rhs = NormalForm::zero();
            for j in (1..=a.dim()).filter(|&j| a.at(i, j)) {
                rhs.add_term(Monomial::new(vec![j], vec![j]), BigRational::one());
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn states_are_positive(
        (n, point) in (2usize..=3).prop_flat_map(|n| (Just(n), simplex_point(n))),
        picks in prop::collection::vec((0usize..1000, -3i64..=3), 1..4),
    ) {
        let spec = exact_state(n, &point);
        let f = spec.matrix().clone();
        let mut x = NormalForm::zero();
        for (seed, c) in picks {
            x.add_term(monomial_of(&f, seed), BigRational::from_integer(c.into()));
        }
        let value = eval_state(&spec, &multiply(&f, &x.adjoint(), &x).unwrap()).unwrap();
        let exact = value.exact().cloned().expect("rational state");
        prop_assert!(!exact.is_negative(), "ρ(x*x) = {}", exact);
        let unit = eval_state(&spec, &NormalForm::unit()).unwrap();
        prop_assert_eq!(unit.exact().cloned(), Some(BigRational::one()));
    }

    #[test]
    fn label_ignores_order(v in prop::collection::vec(1i64..=40, 2..6), rot in 0usize..6) {
        let total: i64 = v.iter().sum();
        let a: Vec<Scalar> = v.iter().map(|&x| Scalar::rational(x, total)).collect();
        let mut b = a.clone();
        let len = b.len();
        b.rotate_left(rot % len);
        b.reverse();
        let cfg = HeuristicConfig::default();
        prop_assert_eq!(detect_lambda(&a, &cfg).unwrap().lambda, detect_lambda(&b, &cfg).unwrap().lambda);
    }

    #[test]
    fn simplex_points_are_members((n, point) in (2usize..=5).prop_flat_map(|n| (Just(n), simplex_point(n)))) {
        let f = ZeroOneMatrix::full(n).unwrap();
        let v: Vec<Scalar> = point.into_iter().map(Scalar::Rational).collect();
        prop_assert!(matches!(in_lambda(&f, &v, 1e-9).unwrap(), Membership::Accepted(_)));
        let doubled: Vec<Scalar> = v.iter().map(|s| s.mul(&Scalar::rational(1, 2))).collect();
        let rejected = matches!(in_lambda(&f, &doubled, 1e-9).unwrap(), Membership::Rejected { .. });
        prop_assert!(rejected);
    }

    #[test]
    fn inverse_temperature_scales(a in matrix(), w in prop::collection::vec(1i64..=6, 3), g in 1i64..=5) {
        let omega: Vec<BigRational> = w.iter().take(a.dim()).map(|&x| rat(x, 2)).collect();
        let f = FrequencyVector::from_rationals(&omega).unwrap();
        let scaled = f.scaled(&rat(g, 1)).unwrap();
        let b1 = solve_beta(&a, &f, 1e-12).unwrap().beta;
        let bg = solve_beta(&a, &scaled, 1e-12).unwrap().beta;
        prop_assert!((b1.mid() - bg.mid() * g as f64).abs() <= 1e-9 * b1.mid().max(1.0));
    }

    #[test]
    fn kronecker_is_associative(i in 0usize..4, j in 0usize..4, k in 0usize..4) {
        let p = pool();
        let cap = DEFAULT_DIMENSION_CAP;
        let left = p[i].kronecker(&p[j], cap).unwrap().kronecker(&p[k], cap).unwrap();
        let right = p[i].kronecker(&p[j].kronecker(&p[k], cap).unwrap(), cap).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn perron_data_is_multiplicative(i in 0usize..4, j in 0usize..4) {
        let p = pool();
        let pf = |m: &ZeroOneMatrix| pf_data(&NonnegMatrix::from_zero_one(m), 1e-13, DEFAULT_MAX_ITERATIONS).unwrap();
        let (da, db) = (pf(&p[i]), pf(&p[j]));
        let dab = pf(&p[i].kronecker(&p[j], DEFAULT_DIMENSION_CAP).unwrap());
        prop_assert!((dab.eigenvalue.mid() - da.eigenvalue.mid() * db.eigenvalue.mid()).abs() <= 1e-10);
        let product = kronecker_intervals(&da.eigenvector, &db.eigenvector);
        for (x, y) in dab.eigenvector.iter().zip(&product) {
            prop_assert!((x.mid() - y.mid()).abs() <= 1e-9);
        }
    }

    #[test]
    fn embedding_preserves_admissibility_law(
        i in 0usize..4,
        j in 0usize..4,
        w in prop::collection::vec(0usize..100, 0..5),
    ) {
        let p = pool();
        let ab = p[i].kronecker(&p[j], DEFAULT_DIMENSION_CAP).unwrap();
        let word: Vec<usize> = w.iter().map(|&u| u % ab.dim() + 1).collect();
        prop_assert!(embedding_preserves_admissibility(&p[i], &p[j], &ab, &word).unwrap());
    }
}

#[test]
fn zero_has_no_terms() {
    assert!(NormalForm::zero().is_empty());
    assert!(rat(0, 1).is_zero());
}

#[test]
fn nonzero_monomial_count_matches_enumeration() {
    let a = ZeroOneMatrix::full(2).unwrap();
    // The unit, s_i, s_i* and every s_i s_j*.
    assert_eq!(nonzero_monomials(&a, 1).len(), 1 + 2 + 2 + 4);
}
