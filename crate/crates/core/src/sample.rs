//! Seeded random problem generators for batch checks.

use num_bigint::BigInt;
use rand::Rng;

use crate::git::GitProblem;
use crate::linalg::IntMatrix;

/// A random full-rank problem with `n` weights in `Z^r`, entries in
/// `[-bound, bound]`. Zero weights may occur.
pub fn random_problem<R: Rng>(rng: &mut R, r: usize, n: usize, bound: i64) -> GitProblem {
    assert!(n >= r, "need at least r weights");
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..r).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        if let Ok(p) = GitProblem::from_matrix(IntMatrix::from_rows(r, rows)) {
            return p;
        }
    }
}

/// A random rank-2 problem with between 3 and `max_n` weights.
pub fn random_rank2<R: Rng>(rng: &mut R, max_n: usize, bound: i64) -> GitProblem {
    let n = rng.gen_range(3..=max_n.max(3));
    random_problem(rng, 2, n, bound)
}

/// A random Calabi–Yau problem: `n - 1` random non-zero weights and their
/// negated sum. Problems with a zero weight, deficient rank, coinciding rays
/// or weights generating a proper sublattice are rejected and redrawn.
pub fn random_calabi_yau<R: Rng>(rng: &mut R, r: usize, n: usize, bound: i64) -> GitProblem {
    assert!(n > r, "a Calabi-Yau problem of rank r needs more than r weights");
    loop {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        while rows.len() < n - 1 {
            let w: Vec<i64> = (0..r).map(|_| rng.gen_range(-bound..=bound)).collect();
            if w.iter().any(|&x| x != 0) {
                rows.push(w.into_iter().map(BigInt::from).collect());
            }
        }
        let last: Vec<BigInt> = (0..r).map(|k| -rows.iter().map(|w| &w[k]).sum::<BigInt>()).collect();
        rows.push(last);
        let Ok(p) = GitProblem::from_matrix(IntMatrix::from_big_rows(r, rows)) else {
            continue;
        };
        if p.check_no_zero_weights().is_ok() && p.check_distinct_rays().is_ok() && p.lattice_index() == BigInt::from(1) {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_rank2(&mut rng, 7, 3);
            assert_eq!(p.r(), 2);
            assert!((3..=7).contains(&p.n()));
            let c = random_calabi_yau(&mut rng, 2, 5, 3);
            assert!(c.is_calabi_yau());
            assert!(c.zero_weights().is_empty());
            assert!(c.check_distinct_rays().is_ok());
            assert_eq!(c.lattice_index(), BigInt::from(1));
        }
    }

    #[test]
    fn same_seed_same_problems() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            assert_eq!(random_rank2(&mut a, 6, 3), random_rank2(&mut b, 6, 3));
        }
    }
}
