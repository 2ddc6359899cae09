//! Toric GIT problems, their rays, and the sub-problems cut out of them.
//!
//! A [`GitProblem`] stores the weights `q_1, …, q_n ∈ Z^r` as the rows of an
//! `n × r` matrix. The dual description (the rays `a_i` spanning `N`) comes
//! from a saturated kernel basis and is computed on demand by
//! [`GitProblem::rays`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::{
    self, canonical_sign, kernel_basis, primitive, rank, saturate, solve_rational,
    strict_feasible, IntMatrix, LinearSystem, RatVector,
};
use crate::{Error, Result};

/// The weight data of a torus action `T ⟳ C^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GitProblem {
    weights: IntMatrix,
}

impl GitProblem {
    /// Validates a list of weights.
    ///
    /// Zero weights are accepted here; the discriminant operations reject
    /// them separately.
    pub fn new<T: Into<BigInt>>(weights: Vec<Vec<T>>) -> Result<Self> {
        let Some(first) = weights.first() else {
            return Err(Error::Empty);
        };
        let r = first.len();
        if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| w.len() != r) {
            return Err(Error::DimensionMismatch {
                index,
                expected: r,
                found: w.len(),
            });
        }
        Self::from_matrix(IntMatrix::from_rows(r, weights))
    }

    /// Wraps an `n × r` weight matrix. Unlike [`GitProblem::new`] this allows
    /// `n = 0` (only meaningful when `r = 0`, the problem of a point).
    pub fn from_matrix(weights: IntMatrix) -> Result<Self> {
        let rk = rank(&weights);
        if rk != weights.cols() {
            return Err(Error::RankDeficient {
                rank: rk,
                dim: weights.cols(),
            });
        }
        Ok(GitProblem { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.rows()
    }

    /// Rank of the character lattice `L∨`.
    pub fn r(&self) -> usize {
        self.weights.cols()
    }

    pub fn weights(&self) -> &IntMatrix {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &[BigInt] {
        self.weights.row(i)
    }

    /// `det V`, the sum of all weights.
    pub fn det_v(&self) -> Vec<BigInt> {
        (0..self.r())
            .map(|k| self.weights.iter_rows().map(|w| &w[k]).sum())
            .collect()
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.det_v().iter().all(Zero::is_zero)
    }

    /// Index of the sublattice generated by the weights, i.e. the order of
    /// the finite group `L∨ / Im Q` (1 when the weights generate `L∨`).
    pub fn lattice_index(&self) -> BigInt {
        let (s, _, _) = linalg::snf(&self.weights);
        (0..self.r()).map(|k| s[(k, k)].abs()).product()
    }

    pub fn zero_weights(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.weight(i).iter().all(Zero::is_zero))
            .collect()
    }

    /// Rows of a saturated basis of `M = ker Q ⊂ Z^n`.
    fn kernel(&self) -> IntMatrix {
        kernel_basis(&self.weights.transpose())
    }

    /// The rays `a_i ∈ N` and, in the Calabi–Yau case, the height functional.
    pub fn rays(&self) -> RayData {
        let k = self.kernel();
        let ones = vec![BigInt::one(); self.n()];
        let height = if self.is_calabi_yau() {
            linalg::lattice_coordinates(&k, &ones)
        } else {
            None
        };
        RayData {
            ray_matrix: k.transpose(),
            height,
        }
    }

    /// Saturated basis of the relation lattice `L = ker A ⊂ Z^n` among the
    /// rays, restricted to the given indices.
    fn relations_among(&self, indices: &[usize]) -> IntMatrix {
        let a = self.kernel().select_cols(indices);
        kernel_basis(&a)
    }

    /// All relevant subspaces, largest rank first.
    ///
    /// A subspace `H` is relevant when it is spanned by the weights it
    /// contains and those weights admit a strictly positive linear relation.
    /// Zero weights lie in every subspace.
    pub fn relevant_subspaces(&self) -> Vec<SubspaceKey> {
        self.weight_spanned_subspaces()
            .into_iter()
            .filter(|h| self.positive_relation(h).is_some())
            .collect()
    }

    /// Every subspace spanned by some subset of the weights.
    pub fn weight_spanned_subspaces(&self) -> BTreeSet<SubspaceKey> {
        let r = self.r();
        // one representative per line through the origin
        let lines: Vec<Vec<BigInt>> = self
            .weights
            .iter_rows()
            .filter(|w| w.iter().any(|x| !x.is_zero()))
            .map(|w| canonical_sign(&primitive(w)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut out = BTreeSet::new();
        for k in 0..=r.min(lines.len()) {
            for subset in lines.iter().combinations(k) {
                let m = IntMatrix::from_rows(r, subset.into_iter().cloned());
                if rank(&m) == k {
                    out.insert(SubspaceKey::span(&m));
                }
            }
        }
        out
    }

    /// Indices of the weights lying in `h`, together with a strictly positive
    /// relation among them, if one exists.
    pub fn positive_relation(&self, h: &SubspaceKey) -> Option<(Vec<usize>, RatVector)> {
        let inside = self.indices_in(h);
        let mut sys = LinearSystem::new(inside.len());
        for c in 0..self.r() {
            let row: Vec<BigInt> = inside.iter().map(|&i| self.weights[(i, c)].clone()).collect();
            sys.equality_int(&row);
        }
        for j in 0..inside.len() {
            let mut e = vec![BigInt::zero(); inside.len()];
            e[j] = BigInt::one();
            sys.strict_int(&e);
        }
        strict_feasible(&sys).map(|k| (inside, k))
    }

    pub fn indices_in(&self, h: &SubspaceKey) -> Vec<usize> {
        (0..self.n()).filter(|&i| h.contains(self.weight(i))).collect()
    }

    /// The Higgs problem of `h`: the weights lying in `h`, written in the
    /// coordinates of the saturated basis of `L∨ ∩ h`.
    pub fn higgs_problem(&self, h: &SubspaceKey) -> Result<SubProblem> {
        assert_eq!(h.ambient(), self.r(), "subspace of the wrong lattice");
        let indices = self.indices_in(h);
        let rows = indices
            .iter()
            .map(|&i| {
                linalg::lattice_coordinates(h.basis(), self.weight(i))
                    .ok_or_else(|| Error::Internal(format!("weight {i} not integral in {h}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let problem = GitProblem::from_matrix(IntMatrix::from_big_rows(h.rank(), rows))?;
        Ok(SubProblem {
            problem,
            embedding: Embedding::Higgs(h.basis().clone()),
            origin_indices: indices,
        })
    }

    /// The Coulomb problem of an index subset `s`: its lattice is the
    /// relation lattice `L_s` among the rays `a_i, i ∈ s`.
    ///
    /// The weight of `i ∈ s` is the vector of `i`-th coordinates of the HNF
    /// basis of `L_s`.
    pub fn coulomb_problem(&self, s: &[usize]) -> Result<SubProblem> {
        if s.is_empty() {
            return Err(Error::Empty);
        }
        let rel = self.relations_among(s);
        let problem = GitProblem::from_matrix(rel.transpose())?;
        Ok(SubProblem {
            problem,
            embedding: Embedding::Coulomb(rel),
            origin_indices: s.to_vec(),
        })
    }

    /// Rank of `L_Γ`: `|Γ|` minus the rank of the rays in `Γ`.
    pub fn coulomb_rank(&self, s: &[usize]) -> usize {
        if s.is_empty() {
            return 0;
        }
        s.len() - rank(&self.kernel().select_cols(s))
    }

    /// Checks that the rays are pairwise distinct.
    pub fn check_distinct_rays(&self) -> Result<()> {
        let rays = self.rays().ray_matrix;
        for (i, j) in (0..self.n()).tuple_combinations() {
            if rays.row(i) == rays.row(j) {
                return Err(Error::IndistinctRays(i, j));
            }
        }
        Ok(())
    }

    pub fn check_no_zero_weights(&self) -> Result<()> {
        match self.zero_weights().first() {
            Some(&i) => Err(Error::ZeroWeight(i)),
            None => Ok(()),
        }
    }

    pub fn require_calabi_yau(&self) -> Result<()> {
        if self.is_calabi_yau() {
            Ok(())
        } else {
            Err(Error::NotCalabiYau {
                det_v: format!("{:?}", self.det_v().iter().map(ToString::to_string).collect_vec()),
            })
        }
    }

    /// Minimal faces of the ray polytope, one per relevant subspace.
    ///
    /// Each face `Γ = {i : q_i ∉ H}` is re-verified directly: every ray in
    /// `Γ` must depend linearly on the others, and a covector must vanish
    /// on `Γ` while staying positive on the other rays.
    pub fn minimal_faces(&self) -> Result<Vec<MinimalFace>> {
        self.require_calabi_yau()?;
        self.check_distinct_rays()?;
        let rays = self.rays().ray_matrix;
        self.relevant_subspaces()
            .into_iter()
            .map(|h| {
                let gamma: Vec<usize> = (0..self.n()).filter(|&i| !h.contains(self.weight(i))).collect();
                if !is_minimal_subset(&rays, &gamma) {
                    return Err(Error::Internal(format!("face for {h} is not minimal")));
                }
                if !is_face(&rays, &gamma) {
                    return Err(Error::Internal(format!("index set for {h} is not a face")));
                }
                let coulomb_rank = self.coulomb_rank(&gamma);
                Ok(MinimalFace {
                    indices: gamma,
                    subspace: h,
                    coulomb_rank,
                })
            })
            .collect()
    }
}

/// Every ray in `s` lies in the span of the other rays of `s`.
pub fn is_minimal_subset(rays: &IntMatrix, s: &[usize]) -> bool {
    let full = rank(&rays.select_rows(s));
    s.iter().all(|&i| {
        let rest: Vec<usize> = s.iter().copied().filter(|&j| j != i).collect();
        rank(&rays.select_rows(&rest)) == full
    })
}

/// There is a covector vanishing on the rays in `s` and strictly positive on
/// all other rays.
pub fn is_face(rays: &IntMatrix, s: &[usize]) -> bool {
    let mut sys = LinearSystem::new(rays.cols());
    for i in 0..rays.rows() {
        if s.contains(&i) {
            sys.equality_int(rays.row(i));
        } else {
            sys.strict_int(rays.row(i));
        }
    }
    strict_feasible(&sys).is_some()
}

/// Rays `a_i` (rows of `ray_matrix`) and the height covector `u` with
/// `u · a_i = 1`, present exactly in the Calabi–Yau case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayData {
    pub ray_matrix: IntMatrix,
    pub height: Option<Vec<BigInt>>,
}

impl RayData {
    pub fn ray(&self, i: usize) -> &[BigInt] {
        self.ray_matrix.row(i)
    }
}

/// A saturated sublattice of `L∨`, stored as its HNF basis.
///
/// Two keys are equal exactly when they describe the same subspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubspaceKey {
    basis: IntMatrix,
}

impl SubspaceKey {
    /// Saturated span of the rows of `m`.
    pub fn span(m: &IntMatrix) -> Self {
        SubspaceKey { basis: saturate(m) }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceKey {
            basis: IntMatrix::identity(ambient),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        SubspaceKey {
            basis: IntMatrix::zeros(0, ambient),
        }
    }

    /// The hyperplane orthogonal to a non-zero covector.
    pub fn orthogonal_to(normal: &[BigInt]) -> Self {
        let n = IntMatrix::from_rows(normal.len(), [normal.to_vec()]);
        SubspaceKey {
            basis: kernel_basis(&n),
        }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_rational(&self.basis, &RatVector::from_big(v)).is_some()
    }

    pub fn contains_rat(&self, v: &RatVector) -> bool {
        solve_rational(&self.basis, v).is_some()
    }

    pub fn is_subspace_of(&self, other: &SubspaceKey) -> bool {
        self.basis.iter_rows().all(|r| other.contains(r))
    }

    /// Pushes a key of a Higgs sub-problem forward along its embedding.
    pub fn push_forward(&self, embedding: &IntMatrix) -> SubspaceKey {
        assert_eq!(self.ambient(), embedding.rows());
        SubspaceKey::span(&self.basis.mul(embedding))
    }

    /// Primitive normal covector of a codimension-one key, canonical sign.
    pub fn normal(&self) -> Option<Vec<BigInt>> {
        if self.rank() + 1 != self.ambient() {
            return None;
        }
        let k = kernel_basis(&self.basis);
        Some(canonical_sign(k.row(0)))
    }

    /// Coordinates of a rational vector of the subspace in this basis.
    pub fn coordinates(&self, v: &RatVector) -> Option<RatVector> {
        solve_rational(&self.basis, v)
    }
}

impl Ord for SubspaceKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .rank()
            .cmp(&self.rank())
            .then_with(|| self.ambient().cmp(&other.ambient()))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl PartialOrd for SubspaceKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubspaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 0 {
            write!(f, "zero")
        } else if self.rank() == self.ambient() {
            write!(f, "full")
        } else {
            write!(f, "span{}", self.basis)
        }
    }
}

impl fmt::Debug for SubspaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubspaceKey({}; {})", self.ambient(), self.basis)
    }
}

/// How a sub-problem's lattice sits relative to its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Embedding {
    /// Rows form a saturated basis of `L∨ ∩ H`; sub-coordinates `c` map to
    /// `c · basis` in the parent.
    Higgs(IntMatrix),
    /// Rows form the HNF basis of the relation lattice `L_S ⊂ Z^S`.
    Coulomb(IntMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubProblem {
    pub problem: GitProblem,
    pub embedding: Embedding,
    /// Parent indices of the surviving weights, in order.
    pub origin_indices: Vec<usize>,
}

impl SubProblem {
    /// The embedding matrix of a Higgs sub-problem.
    pub fn higgs_basis(&self) -> Option<&IntMatrix> {
        match &self.embedding {
            Embedding::Higgs(b) => Some(b),
            Embedding::Coulomb(_) => None,
        }
    }
}

/// A minimal face `Γ` of the ray polytope and its relevant subspace
/// `H_{Γᶜ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalFace {
    pub indices: Vec<usize>,
    pub subspace: SubspaceKey,
    pub coulomb_rank: usize,
}
