use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Row Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u · m = h`. Non-zero rows of `h`
/// come first, each pivot is positive, and the entries above a pivot lie in
/// `[0, pivot)`. Zero rows are kept at the bottom so `h` has the shape of `m`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pivot_row = 0;

    for col in 0..m.cols() {
        if pivot_row == m.rows() {
            break;
        }
        // Euclid down the column until a single non-zero entry remains.
        loop {
            let best = (pivot_row..m.rows())
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(best, pivot_row);
            u.swap_rows(best, pivot_row);

            let mut done = true;
            for i in pivot_row + 1..m.rows() {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
                h.add_row_multiple(i, pivot_row, &-&q);
                u.add_row_multiple(i, pivot_row, &-&q);
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q: BigInt = h[(i, col)].div_floor(&h[(pivot_row, col)]);
            if !q.is_zero() {
                h.add_row_multiple(i, pivot_row, &-&q);
                u.add_row_multiple(i, pivot_row, &-&q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Checks the row-HNF shape conditions that [`hnf`] guarantees.
pub fn is_hnf(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        let row = h.row(i);
        match row.iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(p) => {
                if seen_zero || last_pivot.is_some_and(|lp| p <= lp) {
                    return false;
                }
                if !row[p].is_positive() {
                    return false;
                }
                for k in 0..i {
                    let x = &h[(k, p)];
                    if x.is_negative() || x >= &row[p] {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    fn m(cols: usize, rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(cols, rows)
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntMatrix::identity(2);
        let (h, u) = hnf(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn small_example() {
        let a = m(2, vec![vec![2, 4], vec![1, 3]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(2, vec![vec![1, 1], vec![0, 2]]));
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.det().abs(), BigInt::from(1));
    }

    #[test]
    fn zero_matrix() {
        let z = IntMatrix::zeros(2, 3);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn rank_deficient_rows_sink() {
        let a = m(3, vec![vec![0, 0, 0], vec![2, 4, 6], vec![1, 2, 3]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(3, vec![vec![1, 2, 3], vec![0, 0, 0], vec![0, 0, 0]]));
        assert_eq!(u.mul(&a), h);
        assert!(is_hnf(&h));
    }

    #[test]
    fn shape_checker_rejects_unreduced() {
        assert!(!is_hnf(&m(2, vec![vec![1, 3], vec![0, 2]])));
        assert!(!is_hnf(&m(2, vec![vec![-1, 0], vec![0, 2]])));
        assert!(!is_hnf(&m(2, vec![vec![0, 0], vec![0, 2]])));
        assert!(is_hnf(&m(2, vec![vec![1, 1], vec![0, 2]])));
    }
}
