use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form.
///
/// Returns `(s, u, v)` with `u`, `v` unimodular, `u · m · v = s`, `s`
/// diagonal with non-negative entries and `s[i][i] | s[i+1][i+1]`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest non-zero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (s, u, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &-&q);
                u.add_row_multiple(i, t, &-&q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &-&q);
                v.add_col_multiple(j, t, &-&q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // enforce divisibility against the rest of the block
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)]))
            });
            match bad {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::from(1));
                    u.add_row_multiple(t, i, &BigInt::from(1));
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> IntMatrix {
        let (s, u, v) = snf(m);
        assert_eq!(u.mul(m).mul(&v), s);
        assert_eq!(u.det().abs(), BigInt::from(1));
        assert_eq!(v.det().abs(), BigInt::from(1));
        let k = s.rows().min(s.cols());
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if i != j {
                    assert!(s[(i, j)].is_zero());
                }
            }
        }
        for i in 0..k {
            assert!(!s[(i, i)].is_negative());
            if i + 1 < k && !s[(i, i)].is_zero() {
                assert!(s[(i + 1, i + 1)].is_multiple_of(&s[(i, i)]));
            }
        }
        s
    }

    #[test]
    fn identity() {
        let (s, u, v) = snf(&IntMatrix::identity(3));
        assert_eq!(s, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
        assert_eq!(v, IntMatrix::identity(3));
    }

    #[test]
    fn one_by_one() {
        let s = check(&IntMatrix::from_rows(1, [[6]]));
        assert_eq!(s, IntMatrix::from_rows(1, [[6]]));
    }

    #[test]
    fn diag_two_three() {
        let s = check(&IntMatrix::from_rows(2, [[2, 0], [0, 3]]));
        assert_eq!(s, IntMatrix::from_rows(2, [[1, 0], [0, 6]]));
    }

    #[test]
    fn rectangular_and_singular() {
        check(&IntMatrix::from_rows(3, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        check(&IntMatrix::from_rows(2, [[1, 1], [1, -1], [3, 5]]));
        check(&IntMatrix::from_rows(4, [[0, 0, 0, 0], [0, 4, 0, 8]]));
        check(&IntMatrix::zeros(2, 2));
    }
}
