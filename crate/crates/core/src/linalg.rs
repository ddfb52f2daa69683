//! Exact rank computation over the rationals.
//!
//! Ranks are computed by fraction-free (Bareiss-style) elimination over
//! arbitrary-precision integers after clearing denominators row by row:
//! intermediate entries are minors of the original matrix, every division is
//! exact, and no precision is ever lost. Matrix sizes here are desk scale
//! (at most a few hundred rows and columns).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::geometry::Rational;

/// Rank of an integer matrix by fraction-free elimination with row and
/// column pivoting.
pub fn integer_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    debug_assert!(m.iter().all(|r| r.len() == cols));

    let mut rank = 0usize;
    let mut prev_pivot = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue; // no pivot in this column; move on
        };
        m.swap(rank, pivot_row);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                // One-step Bareiss update; the division by the previous pivot
                // is exact (Sylvester's identity).
                let num = &m[r][c] * &m[rank][col] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev_pivot;
            }
            m[r][col] = BigInt::zero();
        }
        prev_pivot = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Rank of a rational matrix: scales each row by the lcm of its denominators
/// and ranks the resulting integer matrix.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let cleared = rows.iter().map(|row| clear_denominators(row)).collect();
    integer_rank(cleared)
}

/// Multiplies a row by the (positive) lcm of its denominators, returning the
/// integer row. Row scaling does not change the rank.
pub fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for entry in row {
        lcm = lcm.lcm(entry.denom());
    }
    row.iter()
        .map(|entry| {
            let scaled = entry * Rational::from_integer(lcm.clone());
            debug_assert!(scaled.denom().is_one());
            scaled.numer().clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    /// Independent oracle: plain Gaussian elimination over the rationals.
    #[allow(clippy::needless_range_loop)]
    fn gauss_rank(mut m: Vec<Vec<Rational>>) -> usize {
        let rows = m.len();
        if rows == 0 {
            return 0;
        }
        let cols = m[0].len();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for r in rank + 1..rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &pivot;
                for c in col..cols {
                    let sub = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn known_ranks() {
        assert_eq!(integer_rank(int_matrix(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(integer_rank(int_matrix(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(integer_rank(int_matrix(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(integer_rank(vec![]), 0);
        // Wide matrix with a zero column in the middle.
        assert_eq!(integer_rank(int_matrix(&[&[0, 1, 2, 3], &[0, 2, 4, 7]])), 2);
        // Tall rank-1 matrix.
        assert_eq!(integer_rank(int_matrix(&[&[3], &[6], &[9]])), 1);
    }

    #[test]
    fn clears_denominators_by_row_lcm() {
        let row = vec![
            Rational::new(1.into(), 2.into()),
            Rational::new(1.into(), 3.into()),
            Rational::from_integer(5.into()),
        ];
        assert_eq!(
            clear_denominators(&row),
            vec![BigInt::from(3), BigInt::from(2), BigInt::from(30)]
        );
    }

    #[test]
    fn agrees_with_gaussian_oracle_on_random_matrices() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..300 {
            let rows = rng.int_in(1, 6) as usize;
            let cols = rng.int_in(1, 6) as usize;
            let m: Vec<Vec<Rational>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| {
                            let num = rng.int_in(-4, 4);
                            let den = rng.int_in(1, 4);
                            Rational::new(num.into(), den.into())
                        })
                        .collect()
                })
                .collect();
            assert_eq!(rational_rank(&m), gauss_rank(m.clone()), "matrix {m:?}");
        }
    }

    #[test]
    fn agrees_on_structured_low_rank_matrices() {
        // Outer products have rank exactly 1; sums of k of them rank <= k.
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let n = rng.int_in(2, 6) as usize;
            let u: Vec<i64> = (0..n).map(|_| rng.int_in(-3, 3)).collect();
            let v: Vec<i64> = (0..n).map(|_| rng.int_in(-3, 3)).collect();
            let m: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| Rational::from_integer((u[i] * v[j]).into()))
                        .collect()
                })
                .collect();
            let expected = gauss_rank(m.clone());
            assert!(expected <= 1);
            assert_eq!(rational_rank(&m), expected);
        }
    }
}
