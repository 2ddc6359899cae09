use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wallcross::discriminant::horn_eval;
use wallcross::linalg::{
    hnf, is_hnf, kernel_basis, rank, saturate, snf, solve_rational, strict_feasible, IntMatrix, LinearSystem,
    RatVector,
};
use wallcross::{sample, sod, SecondaryFan, SubspaceKey};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c)
            .prop_map(move |v| IntMatrix::from_rows(c, v.chunks(c).map(|x| x.to_vec())))
    })
}

fn is_unimodular(u: &IntMatrix) -> bool {
    u.det().abs().is_one()
}

proptest! {
    #[test]
    fn hnf_is_a_unimodular_normal_form(m in matrix(4, 4)) {
        let (h, u) = hnf(&m);
        prop_assert!(is_hnf(&h));
        prop_assert!(is_unimodular(&u));
        prop_assert_eq!(u.mul(&m), h.clone());
        prop_assert_eq!(hnf(&h).0, h);
    }

    #[test]
    fn snf_diagonalizes(m in matrix(4, 4)) {
        let (s, u, v) = snf(&m);
        prop_assert!(is_unimodular(&u) && is_unimodular(&v));
        prop_assert_eq!(u.mul(&m).mul(&v), s.clone());
        let k = s.rows().min(s.cols());
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if i != j {
                    prop_assert!(s[(i, j)].is_zero());
                }
            }
        }
        for i in 1..k {
            if !s[(i, i)].is_zero() {
                prop_assert!((&s[(i, i)] % &s[(i - 1, i - 1)]).is_zero());
            }
        }
    }

    #[test]
    fn kernel_is_saturated_and_complementary(m in matrix(3, 5)) {
        let k = kernel_basis(&m);
        prop_assert!(m.mul(&k.transpose()).is_zero());
        prop_assert_eq!(rank(&k) + rank(&m), m.cols());
        prop_assert_eq!(saturate(&k), k);
    }

    #[test]
    fn solve_recovers_a_consistent_right_hand_side(m in matrix(4, 3), x in prop::collection::vec(-5i64..=5, 4)) {
        let x: Vec<BigInt> = x.into_iter().take(m.rows()).map(BigInt::from).collect();
        prop_assume!(x.len() == m.rows());
        let b = m.left_mul_vec(&x);
        let y = solve_rational(&m, &RatVector::from_big(&b)).expect("consistent");
        let back: Vec<BigRational> = (0..m.cols())
            .map(|j| (0..m.rows()).map(|i| &y.0[i] * BigRational::from_integer(m[(i, j)].clone())).sum())
            .collect();
        prop_assert_eq!(RatVector(back), RatVector::from_big(&b));
    }

    #[test]
    fn feasibility_agrees_with_grid_search(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..5)) {
        let mut sys = LinearSystem::new(2);
        for r in &rows {
            sys.strict_int(&r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        }
        let witness = strict_feasible(&sys);
        if let Some(w) = &witness {
            prop_assert!(sys.is_satisfied_by(w));
        }
        // an open cone in the plane contains an integer point of norm ≤ 40
        // once its angle is at least that of coefficients bounded by 3
        let found = (-40i64..=40).any(|x| (-40i64..=40).any(|y| sys.is_satisfied_by(&RatVector::from_ints([x, y]))));
        prop_assert_eq!(witness.is_some(), found);
    }

    #[test]
    fn subspace_keys_ignore_generators(a in -4i64..=4, b in -4i64..=4, s in 1i64..=3) {
        prop_assume!(a != 0 || b != 0);
        let k1 = SubspaceKey::span(&IntMatrix::from_rows(2, [[a, b]]));
        let k2 = SubspaceKey::span(&IntMatrix::from_rows(2, [[-s * a, -s * b], [a, b]]));
        prop_assert_eq!(k1, k2);
    }

    #[test]
    fn horn_map_is_scale_invariant(seed in 0u64..500, t in 1i64..=9, l1 in -5i64..=5, l2 in -5i64..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample::random_calabi_yau(&mut rng, 2, 5, 3);
        let lambda = RatVector::from_ints([l1, l2]);
        let scaled = lambda.scale(&BigRational::new(BigInt::from(t), BigInt::from(3)));
        match (horn_eval(&p, &lambda), horn_eval(&p, &scaled)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "scaling changed whether a form vanishes"),
        }
    }

    #[test]
    fn bfs_decomposition_matches_every_path(seed in 0u64..300) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample::random_rank2(&mut rng, 6, 3);
        let fan = SecondaryFan::build(&p).unwrap();
        for c in fan.chambers() {
            let bfs = sod::decompose(&fan, c.id, &sod::PathPolicy::Bfs).unwrap();
            let (paths, _) = sod::monotone_paths(&fan, c.id, 50).unwrap();
            for path in paths {
                prop_assert_eq!(&sod::decompose(&fan, c.id, &sod::PathPolicy::Explicit(path)).unwrap(), &bfs);
            }
            let depth = sod::decompose_traced(&fan, c.id, &sod::PathPolicy::Bfs).unwrap().depth;
            prop_assert!(depth <= p.r());
        }
    }

    #[test]
    fn walls_separate_exactly_one_sign(seed in 0u64..300) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample::random_problem(&mut rng, 2, 5, 3);
        let fan = SecondaryFan::build(&p).unwrap();
        for w in fan.walls() {
            let a = &fan.chambers()[w.plus_chamber].signs;
            let b = &fan.chambers()[w.minus_chamber].signs;
            let differ: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
            prop_assert_eq!(differ, vec![w.hyperplane]);
            prop_assert!(!w.kappa.is_negative());
        }
    }
}
