use grassmann_cw::complex::snf::{invariant_factors, rank, rank_mod2, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-max_entry..=max_entry, r * c).prop_map(move |v| IntMatrix::from_row_slice(r, c, &v))
    })
}

/// Rank and, for square input, the determinant by fraction-free elimination.
fn bareiss(m: &IntMatrix) -> (usize, Option<BigInt>) {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| (0..cols).map(|c| BigInt::from(m[(r, c)])).collect()).collect();
    let mut prev = BigInt::from(1);
    let mut sign = 1;
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                a[i][j] = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = (rows == cols).then(|| if r < rows { BigInt::zero() } else { prev * sign });
    (r, det)
}

proptest! {
    #[test]
    fn rank_matches_elimination(m in matrix(7, 5)) {
        prop_assert_eq!(rank(&m), bareiss(&m).0);
    }

    #[test]
    fn factors_divide_successively(m in matrix(7, 9)) {
        let f = invariant_factors(&m);
        prop_assert!(f.iter().all(|x| x.is_positive()));
        for w in f.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]), "{:?}", f);
        }
    }

    #[test]
    fn first_factor_is_the_gcd_of_the_entries(m in matrix(6, 12)) {
        let g = m.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        let f = invariant_factors(&m);
        if g == 0 {
            prop_assert!(f.is_empty());
        } else {
            prop_assert_eq!(&f[0], &BigInt::from(g));
        }
    }

    #[test]
    fn product_is_the_determinant(n in 1usize..=6, v in prop::collection::vec(-6i64..=6, 36)) {
        let m = IntMatrix::from_row_slice(n, n, &v[..n * n]);
        let (_, det) = bareiss(&m);
        let det = det.unwrap();
        let f = invariant_factors(&m);
        if det.is_zero() {
            prop_assert!(f.len() < n);
        } else {
            prop_assert_eq!(f.iter().product::<BigInt>(), det.abs());
        }
    }

    #[test]
    fn machine_and_big_integers_agree(m in matrix(6, 20)) {
        let small: Vec<i64> = smith_normal_form(&m).unwrap();
        let wide: Vec<i128> = smith_normal_form(&m).unwrap();
        let big: Vec<BigInt> = smith_normal_form(&m).unwrap();
        prop_assert_eq!(small.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(), big.clone());
        prop_assert_eq!(wide.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(), big);
    }

    #[test]
    fn mod2_rank_counts_odd_factors(m in matrix(8, 4)) {
        let odd = invariant_factors(&m).iter().filter(|x| x.is_odd()).count();
        prop_assert_eq!(rank_mod2(&m), odd);
    }

    #[test]
    fn unimodular_changes_do_not_move_factors(m in matrix(5, 6), i in 0usize..5, j in 0usize..5, q in -3i64..=3) {
        let (rows, _) = m.shape();
        let (i, j) = (i % rows, j % rows);
        prop_assume!(i != j);
        let mut e = IntMatrix::identity(rows, rows);
        e[(i, j)] = q;
        prop_assert_eq!(invariant_factors(&(&e * &m)), invariant_factors(&m));
    }
}

#[test]
fn wide_matrix_with_large_entries() {
    let m = IntMatrix::from_row_slice(2, 3, &[i64::MAX / 3, 7, 1, i64::MAX / 5, 11, 0]);
    let f = invariant_factors(&m);
    assert_eq!(f.len(), 2);
    assert_eq!(f[0], BigInt::from(1));
}
