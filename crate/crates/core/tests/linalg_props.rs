use num_traits::Zero;
use proptest::prelude::*;
use rinehart_core::linalg::{quotient_basis, rank_of};
use rinehart_core::{Matrix, Rational, Scalar};

fn small_matrix(max: usize) -> impl Strategy<Value = Matrix<Rational>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec((-4i64..=4, 1i64..=3), r * c).prop_map(move |entries| {
            let data = entries
                .into_iter()
                .map(|(n, d)| Rational::from_int(n) / Rational::from_int(d))
                .collect();
            Matrix::from_vec(r, c, data).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(m in small_matrix(8)) {
        let (r, pivots) = m.rref();
        let (rr, pivots2) = r.rref();
        prop_assert_eq!(rr, r);
        prop_assert_eq!(pivots, pivots2);
    }

    #[test]
    fn kernel_vectors_are_annihilated_and_independent(m in small_matrix(8)) {
        let ker = m.kernel_basis();
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(rank_of(m.cols(), &ker).unwrap(), ker.len());
        prop_assert_eq!(ker.len() + m.rank(), m.cols());
    }

    #[test]
    fn solutions_are_exact(m in small_matrix(6), seed in prop::collection::vec(-3i64..=3, 6)) {
        let x: Vec<Rational> = seed.iter().take(m.cols()).map(|&v| Rational::from_int(v)).chain(std::iter::repeat(Rational::zero())).take(m.cols()).collect();
        let b = m.mul_vec(&x);
        let sol = m.solve(&b).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&sol), b);
    }

    #[test]
    fn quotient_basis_completes_subspace(m in small_matrix(6)) {
        let total: Vec<Vec<Rational>> = (0..m.cols()).map(|j| rinehart_core::scalar::unit_vec(m.cols(), j)).collect();
        let sub = m.transpose().columns();
        let reps = quotient_basis(m.cols(), &sub, &total).unwrap();
        prop_assert_eq!(reps.len() + m.rank(), m.cols());
        let mut all = sub.clone();
        all.extend(reps.clone());
        prop_assert_eq!(rank_of(m.cols(), &all).unwrap(), m.cols());
        prop_assert_eq!(quotient_basis(m.cols(), &sub, &total).unwrap(), reps);
    }
}
