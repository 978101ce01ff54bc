use knotkit::exactlinalg::{ExactMatrix, ScalarDomain};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

#[test]
fn hand_examples() {
    let m = ExactMatrix::from_rows_i64(&[vec![2, 4], vec![1, 2]], ScalarDomain::Rationals);
    assert_eq!(m.rank().unwrap(), 1);
    let m2 = m.with_domain(ScalarDomain::PrimeField(2)).unwrap();
    assert_eq!(m2.rank().unwrap(), 1);
    assert_eq!(ExactMatrix::zeros(0, 0, ScalarDomain::Rationals).rank().unwrap(), 0);
    assert_eq!(ExactMatrix::identity(7, ScalarDomain::PrimeField(5)).rank().unwrap(), 7);

    let snf = |rows: &[Vec<i64>]| {
        ExactMatrix::from_rows_i64(rows, ScalarDomain::Integers)
            .smith_normal_form()
            .unwrap()
    };
    assert_eq!(snf(&[vec![2, 0], vec![0, 3]]), vec![BigInt::one(), BigInt::from(6)]);
    assert_eq!(snf(&[vec![2]]), vec![BigInt::from(2)]);
    assert_eq!(
        ExactMatrix::identity(4, ScalarDomain::Integers).smith_normal_form().unwrap(),
        vec![BigInt::one(); 4]
    );
}

#[test]
fn prime_field_requires_a_prime() {
    assert!(ScalarDomain::prime_field(7).is_ok());
    assert!(ScalarDomain::prime_field(9).is_err());
    assert!(ScalarDomain::prime_field(1).is_err());
}

fn sparse_matrix(seed: u64, rows: usize, cols: usize, density: f64, bound: i64) -> Vec<Vec<i64>> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-bound..=bound) } else { 0 })
                .collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn rational_rank_counts_invariant_factors(seed in any::<u64>(), density in 0.05f64..0.4) {
        let rows = sparse_matrix(seed, 20, 20, density, 9);
        let q = ExactMatrix::from_rows_i64(&rows, ScalarDomain::Rationals).rank().unwrap();
        let z = ExactMatrix::from_rows_i64(&rows, ScalarDomain::Integers).smith_normal_form().unwrap();
        prop_assert_eq!(q, z.len());
        for w in z.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
    }

    #[test]
    fn rank_is_permutation_invariant(seed in any::<u64>(), p_idx in 0usize..4) {
        let p = [0, 2, 3, 97][p_idx];
        let domain = if p == 0 { ScalarDomain::Rationals } else { ScalarDomain::PrimeField(p) };
        let rows = sparse_matrix(seed, 15, 18, 0.2, 5);
        let m = ExactMatrix::from_rows_i64(&rows, domain);
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed ^ 0x5eed);
        let mut rp: Vec<usize> = (0..15).collect();
        let mut cp: Vec<usize> = (0..18).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        prop_assert_eq!(m.rank().unwrap(), m.permuted(&rp, &cp).rank().unwrap());
        prop_assert_eq!(m.rank().unwrap(), m.transpose().rank().unwrap());
    }

    #[test]
    fn prime_rank_drops_by_p_divisible_factors(seed in any::<u64>(), p_idx in 0usize..3) {
        let p = [2u64, 3, 5][p_idx];
        let rows = sparse_matrix(seed, 12, 12, 0.3, 6);
        let fp = ExactMatrix::from_rows_i64(&rows, ScalarDomain::PrimeField(p)).rank().unwrap();
        let z = ExactMatrix::from_rows_i64(&rows, ScalarDomain::Integers).smith_normal_form().unwrap();
        let divisible = z.iter().filter(|f| (*f % BigInt::from(p)) == BigInt::from(0)).count();
        prop_assert_eq!(fp, z.len() - divisible);
    }

    #[test]
    fn large_entries_do_not_overflow(seed in any::<u64>()) {
        let rows = sparse_matrix(seed, 10, 10, 0.9, i64::MAX / 4);
        let q = ExactMatrix::from_rows_i64(&rows, ScalarDomain::Rationals).rank().unwrap();
        let z = ExactMatrix::from_rows_i64(&rows, ScalarDomain::Integers).smith_normal_form().unwrap();
        prop_assert_eq!(q, z.len());
    }
}
