//! Horn uniformization of the discriminant and intersection multiplicities
//! of its components with the boundary divisors at minimal faces.
//!
//! Everything here requires a Calabi–Yau problem. The comparison in
//! [`conjecture_check`] sets the multiplicity `n` of a factor in the Higgs
//! phase of a wall against the intersection multiplicity `m` computed from
//! the Coulomb weights of the corresponding face.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::fan::{SecondaryFan, Wall};
use crate::git::{Embedding, GitProblem, MinimalFace, SubspaceKey};
use crate::linalg::{solve_rational, RatVector};
use crate::sod;
use crate::{Error, Result};

/// The Horn map `λ ↦ (∏_i (q_i · λ)^{Q_ik})_k`.
///
/// It is homogeneous of degree `Σ_i Q_ik = 0` in `λ`, so it factors through
/// projective space exactly in the Calabi–Yau case.
pub fn horn_eval(problem: &GitProblem, lambda: &RatVector) -> Result<RatVector> {
    problem.require_calabi_yau()?;
    if lambda.len() != problem.r() {
        return Err(Error::LengthMismatch {
            expected: problem.r(),
            found: lambda.len(),
        });
    }
    let forms: Vec<BigRational> = (0..problem.n()).map(|i| lambda.dot_int(problem.weight(i))).collect();
    if let Some(index) = forms.iter().position(Zero::is_zero) {
        return Err(Error::VanishingForm { index });
    }
    let coords = (0..problem.r())
        .map(|k| {
            forms
                .iter()
                .enumerate()
                .map(|(i, l)| rat_pow(l, &problem.weights()[(i, k)]))
                .product()
        })
        .collect();
    Ok(RatVector(coords))
}

/// `∏_i q_i^{q_i}` for a rank-one problem: the single point of the
/// discriminant.
pub fn rank1_point(problem: &GitProblem) -> Result<BigRational> {
    if problem.r() != 1 {
        return Err(Error::WrongRank {
            expected: 1,
            found: problem.r(),
        });
    }
    problem.check_no_zero_weights()?;
    Ok((0..problem.n())
        .map(|i| {
            let q = &problem.weight(i)[0];
            rat_pow(&BigRational::from_integer(q.clone()), q)
        })
        .product())
}

fn rat_pow(base: &BigRational, exp: &BigInt) -> BigRational {
    let e: i32 = exp.try_into().expect("weight exponent fits in i32");
    Pow::pow(base.clone(), e)
}

/// Result of intersecting a discriminant component with a boundary divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionValue {
    /// The face subspace is not contained in the wall, so the divisors miss
    /// each other.
    NotContained,
    Computed(BigInt),
}

impl IntersectionValue {
    pub fn value(&self) -> BigInt {
        match self {
            IntersectionValue::NotContained => BigInt::zero(),
            IntersectionValue::Computed(m) => m.clone(),
        }
    }
}

/// A unimodular `2 × 2` matrix taking the primitive vector `w` to `(1, 0)`.
pub fn unimodular_normalizer(w: &[BigInt; 2]) -> [[BigInt; 2]; 2] {
    let [a, b] = w;
    let e = a.extended_gcd(b);
    debug_assert!(e.gcd.is_one(), "normalizer needs a primitive vector");
    // a·x + b·y = 1
    let (x, y) = (e.x, e.y);
    [[x, y], [-b.clone(), a.clone()]]
}

fn apply(u: &[[BigInt; 2]; 2], v: &[BigInt; 2]) -> [BigInt; 2] {
    [
        &u[0][0] * &v[0] + &u[0][1] * &v[1],
        &u[1][0] * &v[0] + &u[1][1] * &v[1],
    ]
}

/// Intersection multiplicity `m` of the component of `wall` with the
/// boundary divisor of `face`, for Coulomb rank at most two.
pub fn intersection_multiplicity(problem: &GitProblem, wall: &Wall, wall_space: &SubspaceKey, face: &MinimalFace) -> Result<IntersectionValue> {
    intersection_multiplicity_with(problem, wall, wall_space, face, None)
}

/// Same as [`intersection_multiplicity`] but post-composes the normalizer
/// with an extra unimodular matrix fixing `(1, 0)` up to sign. The answer
/// must not change; this exists so the invariance can be tested.
pub fn intersection_multiplicity_with(
    problem: &GitProblem,
    wall: &Wall,
    wall_space: &SubspaceKey,
    face: &MinimalFace,
    twist: Option<&[[BigInt; 2]; 2]>,
) -> Result<IntersectionValue> {
    problem.require_calabi_yau()?;
    if !face.subspace.is_subspace_of(wall_space) {
        return Ok(IntersectionValue::NotContained);
    }
    match face.coulomb_rank {
        0 => Err(Error::Internal("minimal face without relations".into())),
        1 => Ok(IntersectionValue::Computed(BigInt::one())),
        2 => {
            let sub = problem.coulomb_problem(&face.indices)?;
            let Embedding::Coulomb(rel) = &sub.embedding else {
                unreachable!("coulomb_problem returns a Coulomb embedding")
            };
            // lift each relation l ∈ L_Γ ⊂ Z^n to λ_l ∈ L∨_Q with q_i · λ_l = l_i
            let qt = problem.weights().transpose();
            let mut projection = Vec::with_capacity(2);
            for row in rel.iter_rows() {
                let mut l = RatVector::zeros(problem.n());
                for (j, &i) in face.indices.iter().enumerate() {
                    l.0[i] = BigRational::from_integer(row[j].clone());
                }
                let lam = solve_rational(&qt, &l)
                    .ok_or_else(|| Error::Internal("Coulomb relation is not a weight functional".into()))?;
                projection.push(lam);
            }
            let theta = &wall.interior_point;
            let image: Vec<BigRational> = projection
                .iter()
                .map(|lam| crate::linalg::dot_rat(&lam.0, &theta.0))
                .collect();
            let w = crate::linalg::primitive_direction(&image);
            if w.iter().all(Zero::is_zero) {
                return Err(Error::Internal("wall point projects to zero".into()));
            }
            let mut u = unimodular_normalizer(&[w[0].clone(), w[1].clone()]);
            if let Some(t) = twist {
                u = [
                    [
                        &t[0][0] * &u[0][0] + &t[0][1] * &u[1][0],
                        &t[0][0] * &u[0][1] + &t[0][1] * &u[1][1],
                    ],
                    [
                        &t[1][0] * &u[0][0] + &t[1][1] * &u[1][0],
                        &t[1][0] * &u[0][1] + &t[1][1] * &u[1][1],
                    ],
                ];
            }
            let mut m = BigInt::zero();
            for j in 0..face.indices.len() {
                let c = [rel[(0, j)].clone(), rel[(1, j)].clone()];
                let uc = apply(&u, &c);
                if uc[1].is_zero() {
                    m += &uc[0];
                }
            }
            Ok(IntersectionValue::Computed(if m.is_positive() { m } else { BigInt::zero() }))
        }
        k => Err(Error::UnsupportedRank(k)),
    }
}

/// Multiplicity `n` of the factor `H` in the decomposition of the Higgs
/// phase on `wall`.
pub fn n_multiplicity(fan: &SecondaryFan, wall: &Wall, h: &SubspaceKey) -> Result<BigInt> {
    Ok(sod::wall_higgs_decomposition(fan, wall)?.get(h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    One(usize),
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowVerdict {
    Equal,
    Unequal,
    /// Coulomb rank above two; `m` is not computed.
    Skipped,
}

impl fmt::Display for RowVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowVerdict::Equal => "EQUAL",
            RowVerdict::Unequal => "UNEQUAL",
            RowVerdict::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureRow {
    pub wall: usize,
    /// Position of the face in [`GitProblem::minimal_faces`].
    pub face: usize,
    pub subspace: SubspaceKey,
    pub coulomb_rank: usize,
    pub n: BigInt,
    pub m: Option<BigInt>,
    pub verdict: RowVerdict,
}

/// Compares `n` and `m` for every minimal face whose subspace lies in the
/// wall, for one wall or all of them.
///
/// The weights must generate the character lattice. With a finite generic
/// stabilizer every factor on the Higgs side is repeated once per character
/// of the stabilizer, which the discriminant cannot see.
pub fn conjecture_check(fan: &SecondaryFan, scope: Scope) -> Result<Vec<ConjectureRow>> {
    let problem = fan.problem();
    problem.require_calabi_yau()?;
    problem.check_no_zero_weights()?;
    let index = problem.lattice_index();
    if !index.is_one() {
        return Err(Error::Torsion {
            index: index.to_string(),
        });
    }
    let faces = problem.minimal_faces()?;
    let walls: Vec<&Wall> = match scope {
        Scope::One(id) => vec![fan
            .wall(id)
            .ok_or_else(|| Error::InvalidPath(format!("wall {id} does not exist")))?],
        Scope::All => fan.walls().iter().collect(),
    };
    let mut rows = Vec::new();
    for w in walls {
        let space = fan.hyperplanes()[w.hyperplane].subspace();
        let higgs = sod::wall_higgs_decomposition(fan, w)?;
        for (fi, face) in faces.iter().enumerate() {
            if !face.subspace.is_subspace_of(&space) {
                continue;
            }
            let n = higgs.get(&face.subspace);
            let (m, verdict) = match intersection_multiplicity(problem, w, &space, face) {
                Ok(v) => {
                    let m = v.value();
                    let verdict = if m == n { RowVerdict::Equal } else { RowVerdict::Unequal };
                    (Some(m), verdict)
                }
                Err(Error::UnsupportedRank(_)) => (None, RowVerdict::Skipped),
                Err(e) => return Err(e),
            };
            rows.push(ConjectureRow {
                wall: w.id,
                face: fi,
                subspace: face.subspace.clone(),
                coulomb_rank: face.coulomb_rank,
                n,
                m,
                verdict,
            });
        }
    }
    Ok(rows)
}

/// Overall verdict of a list of rows: unequal if any row is, otherwise equal
/// (skipped rows are ignored).
pub fn overall(rows: &[ConjectureRow]) -> RowVerdict {
    if rows.iter().any(|r| r.verdict == RowVerdict::Unequal) {
        RowVerdict::Unequal
    } else {
        RowVerdict::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn local_p1p1() -> GitProblem {
        GitProblem::new(vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1], vec![-2, -2]]).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rank_one_points() {
        let p = GitProblem::new(vec![vec![1], vec![1], vec![-2]]).unwrap();
        assert_eq!(rank1_point(&p).unwrap(), q(1, 4));
        for t in [1, 2, -3, 7] {
            let h = horn_eval(&p, &RatVector::from_ints([t])).unwrap();
            assert_eq!(h.0, vec![q(1, 4)]);
        }
        let p = GitProblem::new(vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(rank1_point(&p).unwrap(), q(-1, 1));
        let p = GitProblem::new(vec![vec![2], vec![-2]]).unwrap();
        assert_eq!(rank1_point(&p).unwrap(), q(1, 1));
        let p = GitProblem::new(vec![vec![1], vec![1]]).unwrap();
        assert!(matches!(horn_eval(&p, &RatVector::from_ints([1])), Err(Error::NotCalabiYau { .. })));
    }

    #[test]
    fn horn_of_local_p1p1() {
        let p = local_p1p1();
        let h = horn_eval(&p, &RatVector::from_ints([1, 1])).unwrap();
        assert_eq!(h.0, vec![q(1, 16), q(1, 16)]);
        assert_eq!(
            horn_eval(&p, &RatVector::from_ints([1, 0])),
            Err(Error::VanishingForm { index: 2 })
        );
    }

    #[test]
    fn normalizer_is_unimodular() {
        for (a, b) in [(1, 0), (0, 1), (3, -2), (-5, 7), (2, 3)] {
            let w = [BigInt::from(a), BigInt::from(b)];
            let u = unimodular_normalizer(&w);
            let det = &u[0][0] * &u[1][1] - &u[0][1] * &u[1][0];
            assert!(det.is_one());
            assert_eq!(apply(&u, &w), [BigInt::one(), BigInt::zero()]);
        }
    }

    #[test]
    fn local_p1p1_conjecture() {
        let p = local_p1p1();
        let fan = SecondaryFan::build(&p).unwrap();
        let rows = conjecture_check(&fan, Scope::All).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.verdict == RowVerdict::Equal), "{rows:?}");
        // the wall on the vertical axis, on its genuine side
        let vertical = fan
            .walls()
            .iter()
            .find(|w| {
                fan.hyperplanes()[w.hyperplane].normal == crate::linalg::to_big(&[1, 0]) && w.genuine
            })
            .unwrap();
        let rows = conjecture_check(&fan, Scope::One(vertical.id)).unwrap();
        let zero = rows.iter().find(|r| r.subspace == SubspaceKey::zero(2)).unwrap();
        assert_eq!(zero.n, BigInt::from(2));
        assert_eq!(zero.m, Some(BigInt::from(2)));
        let diagonal = fan
            .walls()
            .iter()
            .find(|w| fan.hyperplanes()[w.hyperplane].normal == crate::linalg::to_big(&[1, -1]) && w.genuine)
            .unwrap();
        let rows = conjecture_check(&fan, Scope::One(diagonal.id)).unwrap();
        assert_eq!(rows[0].n, BigInt::from(2));
        assert_eq!(rows[0].m, Some(BigInt::from(2)));
    }

    #[test]
    fn twisting_the_normalizer() {
        let p = local_p1p1();
        let fan = SecondaryFan::build(&p).unwrap();
        let faces = p.minimal_faces().unwrap();
        for w in fan.walls() {
            let space = fan.hyperplanes()[w.hyperplane].subspace();
            for f in &faces {
                let base = intersection_multiplicity(&p, w, &space, f).unwrap();
                for t in -3..=3 {
                    for s in [1, -1] {
                        let twist = [
                            [BigInt::one(), BigInt::from(t)],
                            [BigInt::zero(), BigInt::from(s)],
                        ];
                        let v = intersection_multiplicity_with(&p, w, &space, f, Some(&twist)).unwrap();
                        assert_eq!(v, base);
                    }
                }
            }
        }
    }
}
