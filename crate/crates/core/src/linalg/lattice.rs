use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{hnf, IntMatrix, RatVector};

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    let (h, _) = hnf(m);
    h.iter_rows()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .count()
}

/// Basis of the saturated integer kernel `{v : m · vᵀ = 0}`, in HNF.
///
/// Rows of the result are kernel vectors. The lattice they span is already
/// saturated because it is cut out of `Z^cols` by a unimodular transform.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    if m.rows() == 0 {
        return IntMatrix::identity(n);
    }
    let (h, u) = hnf(&m.transpose());
    let r = h
        .iter_rows()
        .take_while(|row| row.iter().any(|x| !x.is_zero()))
        .count();
    let kernel: Vec<usize> = (r..n).collect();
    let (k, _) = hnf(&u.select_rows(&kernel));
    k.without_zero_rows()
}

/// HNF basis of the smallest saturated sublattice containing the row span.
///
/// Computed as the kernel of the kernel.
pub fn saturate(basis: &IntMatrix) -> IntMatrix {
    let orth = kernel_basis(basis);
    kernel_basis(&orth)
}

/// Finds some rational `x` with `x · m = b`, or `None` if inconsistent.
///
/// Free variables are set to zero, so the answer is deterministic.
pub fn solve_rational(m: &IntMatrix, b: &RatVector) -> Option<RatVector> {
    assert_eq!(m.cols(), b.len(), "dimension mismatch in solve");
    let unknowns = m.rows();
    let eqs = m.cols();
    // augmented system mᵀ x = b, one equation per column of m
    let mut a: Vec<Vec<BigRational>> = (0..eqs)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..unknowns)
                .map(|i| BigRational::from_integer(m[(i, j)].clone()))
                .collect();
            row.push(b.0[j].clone());
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..eqs).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = BigRational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..eqs {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let pivot = a[r].clone();
            for (x, y) in a[i][c..=unknowns].iter_mut().zip(&pivot[c..=unknowns]) {
                *x -= y * &f;
            }
        }
        pivots.push(c);
        r += 1;
        if r == eqs {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut x = RatVector::zeros(unknowns);
    for (i, &c) in pivots.iter().enumerate() {
        x.0[c] = a[i][unknowns].clone();
    }
    Some(x)
}

/// Integer solution of `x · m = b` when `m` has independent rows spanning a
/// saturated lattice containing `b`.
pub fn lattice_coordinates(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let x = solve_rational(m, &RatVector::from_big(b))?;
    x.0.iter()
        .map(|q| q.is_integer().then(|| q.to_integer()))
        .collect()
}
