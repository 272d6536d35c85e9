//! Smith normal form and ranks of integer matrices.

use std::fmt::Debug;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};
use thiserror::Error;

/// Integers usable by [`smith_normal_form`].
pub trait SnfInteger: Clone + Debug + Integer + Signed + CheckedMul + CheckedSub + From<i64> {}

impl<T> SnfInteger for T where T: Clone + Debug + Integer + Signed + CheckedMul + CheckedSub + From<i64> {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("integer overflow during Smith normal form")]
pub struct Overflow;

/// Integer matrix with machine entries; boundary matrices use this type.
pub type IntMatrix = DMatrix<i64>;

struct Work<T> {
    a: Vec<Vec<T>>,
    rows: usize,
    cols: usize,
}

impl<T: SnfInteger> Work<T> {
    /// `row[dst] -= q * row[src]`, from column `from` on.
    fn row_sub(&mut self, dst: usize, src: usize, q: &T, from: usize) -> Result<(), Overflow> {
        for c in from..self.cols {
            let prod = q.checked_mul(&self.a[src][c]).ok_or(Overflow)?;
            self.a[dst][c] = self.a[dst][c].checked_sub(&prod).ok_or(Overflow)?;
        }
        Ok(())
    }

    fn col_sub(&mut self, dst: usize, src: usize, q: &T, from: usize) -> Result<(), Overflow> {
        for r in from..self.rows {
            let prod = q.checked_mul(&self.a[r][src]).ok_or(Overflow)?;
            self.a[r][dst] = self.a[r][dst].checked_sub(&prod).ok_or(Overflow)?;
        }
        Ok(())
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        for row in &mut self.a {
            row.swap(x, y);
        }
    }

    /// Position of the smallest nonzero entry in the block from `(t, t)`.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.rows {
            for c in t..self.cols {
                let x = &self.a[r][c];
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < self.a[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        best
    }

    fn move_to_pivot(&mut self, t: usize, (r, c): (usize, usize)) {
        self.a.swap(t, r);
        self.swap_cols(t, c);
    }
}

/// Nonzero invariant factors `d₁ | d₂ | …` (all positive) of an integer matrix.
///
/// Pivots on the smallest entry in absolute value and reduces rows and columns by
/// floor division. Fails with [`Overflow`] if `T` cannot hold an intermediate value.
pub fn smith_normal_form<T: SnfInteger>(m: &IntMatrix) -> Result<Vec<T>, Overflow> {
    let (rows, cols) = m.shape();
    let a = (0..rows)
        .map(|r| (0..cols).map(|c| T::from(m[(r, c)])).collect())
        .collect();
    let mut w = Work { a, rows, cols };
    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        let Some(pos) = w.min_entry(t) else {
            break;
        };
        w.move_to_pivot(t, pos);
        loop {
            let p = w.a[t][t].clone();
            for r in (t + 1)..rows {
                if !w.a[r][t].is_zero() {
                    let q = w.a[r][t].div_floor(&p);
                    w.row_sub(r, t, &q, t)?;
                }
            }
            for c in (t + 1)..cols {
                if !w.a[t][c].is_zero() {
                    let q = w.a[t][c].div_floor(&p);
                    w.col_sub(c, t, &q, t)?;
                }
            }
            // Remainders smaller than the pivot go back into the pivot slot.
            let col_rest = ((t + 1)..rows).filter(|&r| !w.a[r][t].is_zero()).map(|r| (r, t));
            let row_rest = ((t + 1)..cols).filter(|&c| !w.a[t][c].is_zero()).map(|c| (t, c));
            if let Some(pos) = col_rest.chain(row_rest).min_by_key(|&(r, c)| w.a[r][c].abs()) {
                w.move_to_pivot(t, pos);
                continue;
            }
            let bad = ((t + 1)..rows).find(|&r| ((t + 1)..cols).any(|c| !w.a[r][c].is_multiple_of(&p)));
            match bad {
                Some(r) => {
                    let minus_one = T::from(-1);
                    w.row_sub(t, r, &minus_one, t)?;
                }
                None => break,
            }
        }
        factors.push(w.a[t][t].abs());
    }
    Ok(factors)
}

/// Invariant factors with exact arithmetic, widening from `i64` to `i128` to
/// arbitrary precision when intermediate values overflow.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    if let Ok(f) = smith_normal_form::<i64>(m) {
        return f.into_iter().map(BigInt::from).collect();
    }
    if let Ok(f) = smith_normal_form::<i128>(m) {
        return f.into_iter().map(BigInt::from).collect();
    }
    smith_normal_form::<BigInt>(m).expect("arbitrary precision does not overflow")
}

/// Rank over ℚ.
pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}

/// Rank over the field with two elements.
pub fn rank_mod2(m: &IntMatrix) -> usize {
    let (rows, cols) = m.shape();
    let words = cols.div_ceil(64);
    let mut bits: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row = vec![0u64; words];
            for c in 0..cols {
                if m[(r, c)].rem_euclid(2) == 1 {
                    row[c / 64] |= 1 << (c % 64);
                }
            }
            row
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows).find(|&r| bits[r][w] & b != 0) else {
            continue;
        };
        bits.swap(rank, p);
        let pivot = bits[rank].clone();
        for (r, row) in bits.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, v: &[i64]) -> IntMatrix {
        IntMatrix::from_row_slice(rows, cols, v)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(smith_normal_form::<i64>(&IntMatrix::identity(3, 3)), Ok(vec![1, 1, 1]));
        assert_eq!(smith_normal_form::<i64>(&mat(2, 2, &[1, 2, 3, 4])), Ok(vec![1, 2]));
        assert_eq!(smith_normal_form::<i64>(&IntMatrix::zeros(2, 3)), Ok(vec![]));
    }

    #[test]
    fn divisibility_is_enforced() {
        assert_eq!(smith_normal_form::<i64>(&mat(2, 2, &[2, 0, 0, 3])), Ok(vec![1, 6]));
        assert_eq!(smith_normal_form::<i128>(&mat(2, 2, &[4, 0, 0, 6])), Ok(vec![2, 12]));
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 2;
        let m = mat(2, 2, &[big, big - 1, big - 3, big]);
        assert!(invariant_factors(&m).len() == 2);
        let f: Vec<BigInt> = smith_normal_form(&m).unwrap();
        let det = BigInt::from(big) * BigInt::from(big) - BigInt::from(big - 1) * BigInt::from(big - 3);
        assert_eq!(f.iter().product::<BigInt>(), det.abs());
    }

    #[test]
    fn mod2_rank() {
        assert_eq!(rank_mod2(&mat(2, 2, &[2, 0, 0, 1])), 1);
        assert_eq!(rank_mod2(&mat(3, 3, &[1, 1, 0, 0, 1, 1, 1, 0, 1])), 2);
        assert_eq!(rank(&mat(3, 3, &[1, 1, 0, 0, 1, 1, 1, 0, 1])), 3);
    }
}
