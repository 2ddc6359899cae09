//! The secondary fan: chambers and walls in the space of stability
//! conditions `L∨_R`.
//!
//! Chambers are the open cones of the arrangement of hyperplanes spanned by
//! `r - 1` weights. They are found by flipping across facets, starting from a
//! random generic point, so nothing depends on a fixed grid or on floating
//! point. After enumeration the chambers are sorted by sign vector, which
//! makes ids independent of the starting point.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::git::{GitProblem, SubspaceKey};
use crate::linalg::{
    canonical_sign, dot, kernel_basis, primitive, rank, solve_rational, strict_feasible, IntMatrix, LinearSystem,
    RatVector,
};
use crate::{Error, Result};

/// Seed used by [`SecondaryFan::build`].
pub const DEFAULT_SEED: u64 = 0;

/// A hyperplane of the arrangement, spanned by weights.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    /// Primitive normal covector whose first non-zero entry is positive.
    pub normal: Vec<BigInt>,
    /// Indices of the weights lying on the hyperplane.
    pub weights: Vec<usize>,
}

impl Hyperplane {
    pub fn subspace(&self) -> SubspaceKey {
        SubspaceKey::orthogonal_to(&self.normal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn of(x: &BigInt) -> Option<Sign> {
        if x.is_positive() {
            Some(Sign::Plus)
        } else if x.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn factor(self) -> BigInt {
        match self {
            Sign::Plus => BigInt::one(),
            Sign::Minus => -BigInt::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub id: usize,
    /// Side of each hyperplane, in hyperplane order.
    pub signs: Vec<Sign>,
    /// A primitive integer point of the open chamber.
    pub interior: RatVector,
    /// The chamber lies in the cone spanned by the weights, so its GIT
    /// quotient is non-empty.
    pub nonempty: bool,
    /// `-det V` lies in the closure of the chamber.
    pub minimal: bool,
    /// Non-empty chambers separated only by walls with an empty Higgs phase
    /// give the same quotient; they share a phase id.
    pub phase: Option<usize>,
}

/// A codimension-one face shared by two adjacent chambers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub id: usize,
    pub hyperplane: usize,
    /// The chamber on the side where `lambda` is positive.
    pub plus_chamber: usize,
    pub minus_chamber: usize,
    /// Primitive normal, oriented so that `lambda · det V ≥ 0`.
    pub lambda: Vec<BigInt>,
    /// `lambda · det V`.
    pub kappa: BigInt,
    /// A primitive integer point in the relative interior of the wall.
    pub interior_point: RatVector,
    /// The wall point lies in the cone of the weights on the wall, i.e. the
    /// Higgs phase of the wall is non-empty.
    pub genuine: bool,
}

impl Wall {
    pub fn other_side(&self, chamber: usize) -> Option<usize> {
        if chamber == self.plus_chamber {
            Some(self.minus_chamber)
        } else if chamber == self.minus_chamber {
            Some(self.plus_chamber)
        } else {
            None
        }
    }

    /// Whether `chamber` lies on the positive side of `lambda`.
    pub fn is_plus(&self, chamber: usize) -> bool {
        chamber == self.plus_chamber
    }
}

#[derive(Clone, Debug)]
pub struct SecondaryFan {
    problem: GitProblem,
    hyperplanes: Vec<Hyperplane>,
    chambers: Vec<Chamber>,
    walls: Vec<Wall>,
    by_signs: BTreeMap<Vec<Sign>, usize>,
    seed: u64,
}

impl SecondaryFan {
    pub fn build(problem: &GitProblem) -> Result<Self> {
        Self::build_seeded(problem, DEFAULT_SEED)
    }

    /// Builds the fan, drawing the starting point from a ChaCha8 stream with
    /// the given seed. The result does not depend on the seed.
    pub fn build_seeded(problem: &GitProblem, seed: u64) -> Result<Self> {
        let hyperplanes = weight_hyperplanes(problem);
        let normals: Vec<&[BigInt]> = hyperplanes.iter().map(|h| h.normal.as_slice()).collect();

        let start = random_generic_point(problem.r(), &normals, seed);
        let start_signs: Vec<Sign> = normals
            .iter()
            .map(|n| Sign::of(&dot(n, &start)).expect("generic point"))
            .collect();

        // flip-BFS over sign vectors
        let mut seen: BTreeSet<Vec<Sign>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start_signs.clone());
        queue.push_back(start_signs);
        while let Some(s) = queue.pop_front() {
            for h in 0..normals.len() {
                if facet_point(&normals, &s, h).is_some() {
                    let mut t = s.clone();
                    t[h] = t[h].flip();
                    if seen.insert(t.clone()) {
                        queue.push_back(t);
                    }
                }
            }
        }

        let neg_det: Vec<BigInt> = problem.det_v().iter().map(|x| -x).collect();
        let mut chambers = Vec::with_capacity(seen.len());
        let mut by_signs = BTreeMap::new();
        for (id, signs) in seen.into_iter().enumerate() {
            let interior = open_point(&normals, &signs)
                .ok_or_else(|| Error::Internal(format!("chamber {id} has no interior point")))?;
            let nonempty = in_cone(problem, &(0..problem.n()).collect_vec(), &interior);
            let minimal = normals
                .iter()
                .zip(&signs)
                .all(|(n, s)| !(s.factor() * dot(n, &neg_det)).is_negative());
            by_signs.insert(signs.clone(), id);
            chambers.push(Chamber {
                id,
                signs,
                interior,
                nonempty,
                minimal,
                phase: None,
            });
        }

        let det_v = problem.det_v();
        let mut walls = Vec::new();
        for (c, chamber) in chambers.iter().enumerate() {
            for h in 0..normals.len() {
                let mut t = chamber.signs.clone();
                t[h] = t[h].flip();
                let Some(&d) = by_signs.get(&t) else { continue };
                if d < c {
                    continue;
                }
                let Some(point) = facet_point(&normals, &chamber.signs, h) else {
                    continue;
                };
                let mut lambda = hyperplanes[h].normal.clone();
                if dot(&lambda, &det_v).is_negative() {
                    lambda = lambda.iter().map(|x| -x).collect();
                }
                let kappa = dot(&lambda, &det_v);
                let c_positive = chamber.interior.dot_int(&lambda).is_positive();
                let (plus_chamber, minus_chamber) = if c_positive { (c, d) } else { (d, c) };
                let genuine = in_cone(problem, &hyperplanes[h].weights, &point);
                walls.push(Wall {
                    id: walls.len(),
                    hyperplane: h,
                    plus_chamber,
                    minus_chamber,
                    lambda,
                    kappa,
                    interior_point: point,
                    genuine,
                });
            }
        }

        let mut fan = SecondaryFan {
            problem: problem.clone(),
            hyperplanes,
            chambers,
            walls,
            by_signs,
            seed,
        };
        fan.assign_phases();
        Ok(fan)
    }

    fn assign_phases(&mut self) {
        let n = self.chambers.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for w in &self.walls {
            let (a, b) = (w.plus_chamber, w.minus_chamber);
            if !w.genuine && self.chambers[a].nonempty && self.chambers[b].nonempty {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                // smaller id becomes the root so phase numbering follows chamber ids
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        for c in 0..n {
            if !self.chambers[c].nonempty {
                continue;
            }
            let root = find(&mut parent, c);
            let next = ids.len();
            let phase = *ids.entry(root).or_insert(next);
            self.chambers[c].phase = Some(phase);
        }
    }

    pub fn problem(&self) -> &GitProblem {
        &self.problem
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    pub fn chamber(&self, id: usize) -> Result<&Chamber> {
        self.chambers.get(id).ok_or(Error::NoSuchChamber(id))
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall(&self, id: usize) -> Option<&Wall> {
        self.walls.get(id)
    }

    /// Walls bounding a chamber, in wall order.
    pub fn walls_of(&self, chamber: usize) -> impl Iterator<Item = &Wall> + '_ {
        self.walls
            .iter()
            .filter(move |w| w.plus_chamber == chamber || w.minus_chamber == chamber)
    }

    /// Neighbouring chambers, ascending.
    pub fn adjacency(&self, chamber: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.walls_of(chamber).filter_map(|w| w.other_side(chamber)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_minimal(&self, chamber: usize) -> bool {
        self.chambers.get(chamber).is_some_and(|c| c.minimal)
    }

    /// Number of distinct phases (non-empty chambers up to walls with empty
    /// Higgs phase).
    pub fn phase_count(&self) -> usize {
        self.chambers.iter().filter_map(|c| c.phase).max().map_or(0, |m| m + 1)
    }

    /// The chamber containing a generic stability condition.
    pub fn chamber_of(&self, theta: &RatVector) -> Result<usize> {
        if theta.len() != self.problem.r() {
            return Err(Error::LengthMismatch {
                expected: self.problem.r(),
                found: theta.len(),
            });
        }
        let mut signs = Vec::with_capacity(self.hyperplanes.len());
        for h in &self.hyperplanes {
            let v = theta.dot_int(&h.normal);
            if v.is_positive() {
                signs.push(Sign::Plus);
            } else if v.is_negative() {
                signs.push(Sign::Minus);
            } else {
                return Err(Error::NonGeneric(theta.to_string()));
            }
        }
        self.by_signs
            .get(&signs)
            .copied()
            .ok_or_else(|| Error::Internal(format!("no chamber with the signs of {theta}")))
    }

    /// The unique minimal chamber in the non-Calabi–Yau case, when it is
    /// non-empty.
    pub fn minimal_chambers(&self) -> Vec<usize> {
        self.chambers.iter().filter(|c| c.minimal).map(|c| c.id).collect()
    }
}

/// Hyperplanes spanned by `r - 1` linearly independent weights, sorted by
/// normal. In rank one the only hyperplane is the origin; in rank zero there
/// are none.
pub fn weight_hyperplanes(problem: &GitProblem) -> Vec<Hyperplane> {
    let r = problem.r();
    if r == 0 {
        return Vec::new();
    }
    let mut normals: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    if r == 1 {
        normals.insert(vec![BigInt::one()]);
    } else {
        let lines: Vec<Vec<BigInt>> = problem
            .weights()
            .iter_rows()
            .filter(|w| w.iter().any(|x| !x.is_zero()))
            .map(|w| canonical_sign(&primitive(w)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for subset in lines.iter().combinations(r - 1) {
            let m = IntMatrix::from_rows(r, subset.into_iter().cloned());
            if rank(&m) == r - 1 {
                let k = kernel_basis(&m);
                normals.insert(canonical_sign(k.row(0)));
            }
        }
    }
    normals
        .into_iter()
        .map(|normal| {
            let weights = (0..problem.n())
                .filter(|&i| dot(&normal, problem.weight(i)).is_zero())
                .collect();
            Hyperplane { normal, weights }
        })
        .collect()
}

/// Whether `theta` is a non-negative combination of the chosen weights.
pub fn in_cone(problem: &GitProblem, indices: &[usize], theta: &RatVector) -> bool {
    let r = problem.r();
    let m = indices.len();
    // unknowns (k_1..k_m, t): Σ k_j q_j − t θ = 0, k ≥ 0, t > 0
    let mut sys = LinearSystem::new(m + 1);
    for c in 0..r {
        let mut row: Vec<_> = indices
            .iter()
            .map(|&i| num_rational::BigRational::from_integer(problem.weights()[(i, c)].clone()))
            .collect();
        row.push(-theta.0[c].clone());
        sys.equality(row);
    }
    for j in 0..=m {
        let mut e = vec![BigInt::zero(); m + 1];
        e[j] = BigInt::one();
        if j == m {
            sys.strict_int(&e);
        } else {
            sys.nonstrict_int(&e);
        }
    }
    strict_feasible(&sys).is_some()
}

/// `Σ |det Q_B|` over bases `B` of `r` weights whose cone contains `theta` in
/// its interior: the number of torus fixed points of the quotient.
pub fn fixed_point_count(problem: &GitProblem, theta: &RatVector) -> BigInt {
    let r = problem.r();
    if r == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for b in (0..problem.n()).combinations(r) {
        let qb = problem.weights().select_rows(&b);
        let d = qb.det();
        if d.is_zero() {
            continue;
        }
        let Some(c) = solve_rational(&qb, theta) else { continue };
        if c.0.iter().all(Signed::is_positive) {
            total += d.abs();
        }
    }
    total
}

fn open_point(normals: &[&[BigInt]], signs: &[Sign]) -> Option<RatVector> {
    let dim = normals.first().map_or(0, |n| n.len());
    let mut sys = LinearSystem::new(dim);
    for (n, s) in normals.iter().zip(signs) {
        let row: Vec<BigInt> = n.iter().map(|x| x * s.factor()).collect();
        sys.strict_int(&row);
    }
    strict_feasible(&sys)
}

/// A point on hyperplane `h` strictly inside the other half-spaces of the
/// sign vector, if that facet exists.
fn facet_point(normals: &[&[BigInt]], signs: &[Sign], h: usize) -> Option<RatVector> {
    let dim = normals[h].len();
    let mut sys = LinearSystem::new(dim);
    sys.equality_int(normals[h]);
    for (j, (n, s)) in normals.iter().zip(signs).enumerate() {
        if j != h {
            let row: Vec<BigInt> = n.iter().map(|x| x * s.factor()).collect();
            sys.strict_int(&row);
        }
    }
    strict_feasible(&sys)
}

fn random_generic_point(r: usize, normals: &[&[BigInt]], seed: u64) -> Vec<BigInt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p: Vec<BigInt> = (0..r).map(|_| BigInt::from(rng.gen_range(-1000i64..=1000))).collect();
        if normals.iter().all(|n| !dot(n, &p).is_zero()) {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_34() -> GitProblem {
        GitProblem::new(vec![
            vec![1, 0],
            vec![1, 0],
            vec![-1, 1],
            vec![0, 1],
            vec![0, 1],
            vec![0, -1],
        ])
        .unwrap()
    }

    fn local_p1p1() -> GitProblem {
        GitProblem::new(vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1], vec![-2, -2]]).unwrap()
    }

    fn pt(v: [i64; 2]) -> RatVector {
        RatVector::from_ints(v)
    }

    #[test]
    fn example_sectors_and_phases() {
        let fan = SecondaryFan::build(&example_34()).unwrap();
        assert_eq!(fan.hyperplanes().len(), 3);
        assert_eq!(fan.chambers().len(), 6);
        assert!(fan.chambers().iter().all(|c| c.nonempty));
        assert_eq!(fan.walls().len(), 6);
        assert_eq!(fan.walls().iter().filter(|w| !w.genuine).count(), 2);
        assert_eq!(fan.phase_count(), 4);
        assert_eq!(fan.minimal_chambers().len(), 1);

        let c1 = fan.chamber_of(&pt([-1, -2])).unwrap();
        let c1b = fan.chamber_of(&pt([-2, 1])).unwrap();
        let c2 = fan.chamber_of(&pt([-1, 2])).unwrap();
        let c3 = fan.chamber_of(&pt([2, -1])).unwrap();
        let c3b = fan.chamber_of(&pt([1, -2])).unwrap();
        let c4 = fan.chamber_of(&pt([1, 1])).unwrap();
        assert!(fan.is_minimal(c1));
        let phase = |c: usize| fan.chamber(c).unwrap().phase.unwrap();
        assert_eq!(phase(c1), phase(c1b));
        assert_eq!(phase(c3), phase(c3b));
        assert_eq!(
            [c1, c2, c3, c4].iter().map(|&c| phase(c)).collect::<BTreeSet<_>>().len(),
            4
        );
        assert!(matches!(fan.chamber_of(&pt([1, 0])), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn wall_orientation() {
        let fan = SecondaryFan::build(&example_34()).unwrap();
        let det = example_34().det_v();
        for w in fan.walls() {
            assert!(!dot(&w.lambda, &det).is_negative());
            assert_eq!(dot(&w.lambda, &det), w.kappa);
            assert!(w.interior_point.dot_int(&w.lambda).is_zero());
            let plus = &fan.chamber(w.plus_chamber).unwrap().interior;
            let minus = &fan.chamber(w.minus_chamber).unwrap().interior;
            assert!(plus.dot_int(&w.lambda).is_positive());
            assert!(minus.dot_int(&w.lambda).is_negative());
        }
        // the wall on the ray through (-1,1) separates phases (1) and (2)
        let c1 = fan.chamber_of(&pt([-2, 1])).unwrap();
        let w = fan
            .walls_of(c1)
            .find(|w| w.lambda == crate::linalg::to_big(&[1, 1]))
            .expect("wall on x + y = 0");
        assert_eq!(w.kappa, BigInt::from(3));
    }

    #[test]
    fn seed_does_not_change_fan() {
        let a = SecondaryFan::build_seeded(&local_p1p1(), 1).unwrap();
        let b = SecondaryFan::build_seeded(&local_p1p1(), 99).unwrap();
        assert_eq!(a.chambers(), b.chambers());
        assert_eq!(a.walls(), b.walls());
        assert_eq!(a.chambers().len(), 6);
        assert_eq!(a.walls().len(), 6);
        assert_eq!(a.phase_count(), 3);
        assert!(a.chambers().iter().all(|c| c.minimal));
    }

    #[test]
    fn rank_one_and_zero() {
        let p = GitProblem::new(vec![vec![1], vec![1], vec![1]]).unwrap();
        let fan = SecondaryFan::build(&p).unwrap();
        assert_eq!(fan.chambers().len(), 2);
        let pos = fan.chamber_of(&RatVector::from_ints([1])).unwrap();
        let neg = fan.chamber_of(&RatVector::from_ints([-1])).unwrap();
        assert!(fan.chamber(pos).unwrap().nonempty);
        assert!(!fan.chamber(neg).unwrap().nonempty);
        assert!(fan.is_minimal(neg));
        assert_eq!(fan.walls().len(), 1);
        assert_eq!(fan.walls()[0].kappa, BigInt::from(3));
        // the Higgs phase at the origin is a point
        assert!(fan.walls()[0].genuine);

        let point = GitProblem::from_matrix(IntMatrix::zeros(0, 0)).unwrap();
        let fan = SecondaryFan::build(&point).unwrap();
        assert_eq!(fan.chambers().len(), 1);
        assert!(fan.chambers()[0].nonempty && fan.chambers()[0].minimal);
        assert_eq!(fan.chamber_of(&RatVector::zeros(0)).unwrap(), 0);
    }

    #[test]
    fn fixed_points() {
        let p = example_34();
        let expect = [([-1, -2], 1), ([-1, 2], 4), ([2, -1], 2), ([1, 1], 6)];
        for (theta, n) in expect {
            assert_eq!(fixed_point_count(&p, &pt(theta)), BigInt::from(n), "{theta:?}");
        }
        let pn = GitProblem::new(vec![vec![1]; 4]).unwrap();
        assert_eq!(fixed_point_count(&pn, &RatVector::from_ints([1])), BigInt::from(4));
    }
}
