//! Wall-crossing decompositions of a phase and their path independence.
//!
//! Walking from a chamber towards a minimal chamber, every wall with
//! `κ = λ · det V > 0` contributes `κ` copies of the decomposition of the
//! Higgs phase on the wall, pushed forward into the ambient lattice. The
//! minimal chamber at the end contributes the full factor once if it is
//! non-empty. The result is a [`MultiplicityMap`] from relevant subspaces to
//! multiplicities.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::fan::{fixed_point_count, SecondaryFan, Wall};
use crate::git::{GitProblem, SubspaceKey};
use crate::linalg::{solve_rational, RatVector};
use crate::{Error, Result};

/// Multiplicities of irreducible factors, keyed by relevant subspace.
/// Zero entries are never stored.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiplicityMap(BTreeMap<SubspaceKey, BigInt>);

impl MultiplicityMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: SubspaceKey) -> Self {
        let mut m = Self::new();
        m.add(key, BigInt::from(1));
        m
    }

    pub fn add(&mut self, key: SubspaceKey, mult: BigInt) {
        if mult.is_zero() {
            return;
        }
        let e = self.0.entry(key).or_default();
        *e += mult;
        if e.is_zero() {
            self.0.retain(|_, v| !v.is_zero());
        }
    }

    /// Adds `factor` times every entry of `other`.
    pub fn add_scaled(&mut self, other: &MultiplicityMap, factor: &BigInt) {
        for (k, v) in &other.0 {
            self.add(k.clone(), v * factor);
        }
    }

    pub fn get(&self, key: &SubspaceKey) -> BigInt {
        self.0.get(key).cloned().unwrap_or_default()
    }

    /// Sum of all multiplicities.
    pub fn total(&self) -> BigInt {
        self.0.values().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SubspaceKey, &BigInt)> + '_ {
        self.0.iter()
    }

    /// Re-expresses keys of a Higgs sub-problem in the parent lattice.
    pub fn push_forward(&self, embedding: &crate::linalg::IntMatrix) -> MultiplicityMap {
        let mut out = MultiplicityMap::new();
        for (k, v) in &self.0 {
            out.add(k.push_forward(embedding), v.clone());
        }
        out
    }
}

impl fmt::Display for MultiplicityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for MultiplicityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<(SubspaceKey, BigInt)> for MultiplicityMap {
    fn from_iter<I: IntoIterator<Item = (SubspaceKey, BigInt)>>(iter: I) -> Self {
        let mut m = MultiplicityMap::new();
        for (k, v) in iter {
            m.add(k, v);
        }
        m
    }
}

/// How to pick the path from the starting chamber to a minimal chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathPolicy {
    /// A shortest monotone path, ties broken towards smaller chamber ids.
    Bfs,
    /// An explicit chamber sequence, starting at the chamber being decomposed.
    Explicit(Vec<usize>),
}

/// One wall crossing along a decomposition path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub wall: usize,
    pub from: usize,
    pub to: usize,
    pub kappa: BigInt,
    /// Subspace spanned by the wall.
    pub subspace: SubspaceKey,
    /// Decomposition of the Higgs phase on the wall, in ambient coordinates.
    /// Empty when `κ = 0` or the Higgs phase is empty.
    pub higgs: MultiplicityMap,
    /// Recursion depth of the Higgs decomposition.
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub chamber: usize,
    pub path: Vec<usize>,
    pub crossings: Vec<Crossing>,
    pub map: MultiplicityMap,
    /// Number of nested Higgs decompositions; never exceeds the rank.
    pub depth: usize,
}

/// Decomposes the phase of `chamber`.
pub fn decompose(fan: &SecondaryFan, chamber: usize, policy: &PathPolicy) -> Result<MultiplicityMap> {
    Ok(decompose_traced(fan, chamber, policy)?.map)
}

/// Like [`decompose`], keeping the path and every crossing.
pub fn decompose_traced(fan: &SecondaryFan, chamber: usize, policy: &PathPolicy) -> Result<Decomposition> {
    fan.chamber(chamber)?;
    let path = match policy {
        PathPolicy::Bfs => bfs_path(fan, chamber)?,
        PathPolicy::Explicit(p) => {
            validate_path(fan, chamber, p)?;
            p.clone()
        }
    };
    let mut map = MultiplicityMap::new();
    let mut crossings = Vec::new();
    let mut depth = 0;
    for step in path.windows(2) {
        let w = wall_between(fan, step[0], step[1])?;
        let (higgs, d) = if w.kappa.is_positive() {
            let (h, d) = higgs_decomposition(fan, w)?;
            map.add_scaled(&h, &w.kappa);
            (h, d)
        } else {
            (MultiplicityMap::new(), 0)
        };
        depth = depth.max(d);
        crossings.push(Crossing {
            wall: w.id,
            from: step[0],
            to: step[1],
            kappa: w.kappa.clone(),
            subspace: fan.hyperplanes()[w.hyperplane].subspace(),
            higgs,
            depth: d,
        });
    }
    let last = *path.last().expect("paths are non-empty");
    if fan.chamber(last)?.nonempty {
        map.add(SubspaceKey::full(fan.problem().r()), BigInt::from(1));
    }
    Ok(Decomposition {
        chamber,
        path,
        crossings,
        map,
        depth,
    })
}

/// The Higgs sub-problem on a wall together with the sub-fan chamber that
/// contains the wall point.
struct HiggsPhase {
    fan: SecondaryFan,
    chamber: usize,
    embedding: crate::linalg::IntMatrix,
}

fn higgs_phase(fan: &SecondaryFan, w: &Wall) -> Result<HiggsPhase> {
    let h = fan.hyperplanes()[w.hyperplane].subspace();
    let sub = fan.problem().higgs_problem(&h)?;
    let embedding = sub.higgs_basis().expect("Higgs embedding").clone();
    let coords = solve_rational(&embedding, &w.interior_point)
        .ok_or_else(|| Error::Internal(format!("wall point {} not on its wall", w.interior_point)))?;
    let sub_fan = SecondaryFan::build_seeded(&sub.problem, fan.seed())?;
    let chamber = sub_fan.chamber_of(&coords)?;
    Ok(HiggsPhase {
        fan: sub_fan,
        chamber,
        embedding,
    })
}

fn higgs_decomposition(fan: &SecondaryFan, w: &Wall) -> Result<(MultiplicityMap, usize)> {
    let hp = higgs_phase(fan, w)?;
    if !hp.fan.chamber(hp.chamber)?.nonempty {
        return Ok((MultiplicityMap::new(), 0));
    }
    let d = decompose_traced(&hp.fan, hp.chamber, &PathPolicy::Bfs)?;
    Ok((d.map.push_forward(&hp.embedding), d.depth + 1))
}

/// Decomposition of the Higgs phase on a wall, in ambient coordinates.
/// Empty when the wall point lies outside the cone of the weights on it.
pub fn wall_higgs_decomposition(fan: &SecondaryFan, w: &Wall) -> Result<MultiplicityMap> {
    Ok(higgs_decomposition(fan, w)?.0)
}

/// Chamber moves allowed on a monotone path, ascending by target id.
fn moves(fan: &SecondaryFan, chamber: usize) -> Vec<usize> {
    let mut out: Vec<usize> = fan
        .walls_of(chamber)
        .filter(|w| w.kappa.is_zero() || w.is_plus(chamber))
        .filter_map(|w| w.other_side(chamber))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn bfs_path(fan: &SecondaryFan, start: usize) -> Result<Vec<usize>> {
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some(c) = queue.pop_front() {
        if fan.is_minimal(c) {
            let mut path = vec![c];
            let mut cur = c;
            while let Some(&p) = parent.get(&cur) {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Ok(path);
        }
        for d in moves(fan, c) {
            if seen.insert(d) {
                parent.insert(d, c);
                queue.push_back(d);
            }
        }
    }
    Err(Error::NoMonotonePath(start))
}

fn validate_path(fan: &SecondaryFan, start: usize, path: &[usize]) -> Result<()> {
    match path.first() {
        Some(&c) if c == start => {}
        _ => return Err(Error::InvalidPath(format!("path must start at chamber {start}"))),
    }
    for step in path.windows(2) {
        fan.chamber(step[1])?;
        if !moves(fan, step[0]).contains(&step[1]) {
            return Err(Error::InvalidPath(format!(
                "{} -> {} is not a monotone crossing",
                step[0], step[1]
            )));
        }
    }
    let last = *path.last().unwrap();
    if !fan.is_minimal(last) {
        return Err(Error::InvalidPath(format!("chamber {last} is not minimal")));
    }
    Ok(())
}

fn wall_between(fan: &SecondaryFan, a: usize, b: usize) -> Result<&Wall> {
    fan.walls_of(a)
        .find(|w| w.other_side(a) == Some(b))
        .ok_or_else(|| Error::InvalidPath(format!("chambers {a} and {b} are not adjacent")))
}

/// Monotone paths from `chamber` to the first minimal chamber reached, in
/// depth-first order. Returns the paths and whether `limit` cut the search
/// short.
pub fn monotone_paths(fan: &SecondaryFan, chamber: usize, limit: usize) -> Result<(Vec<Vec<usize>>, bool)> {
    fan.chamber(chamber)?;
    let mut out = Vec::new();
    let mut stack = vec![chamber];
    let truncated = dfs(fan, &mut stack, &mut out, limit);
    Ok((out, truncated))
}

fn dfs(fan: &SecondaryFan, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) -> bool {
    let c = *stack.last().unwrap();
    if fan.is_minimal(c) {
        if out.len() == limit {
            return true;
        }
        out.push(stack.clone());
        return false;
    }
    for d in moves(fan, c) {
        if stack.contains(&d) {
            continue;
        }
        stack.push(d);
        let cut = dfs(fan, stack, out, limit);
        stack.pop();
        if cut {
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The path budget ran out before every path was examined.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JhReport {
    pub chamber: usize,
    /// Top-level monotone paths that were examined.
    pub paths: Vec<Vec<usize>>,
    /// Decomposition along each top-level path (nested Higgs phases use the
    /// default path).
    pub per_path: Vec<MultiplicityMap>,
    /// Every distinct decomposition reachable by choosing paths at all
    /// recursion levels.
    pub distinct: Vec<MultiplicityMap>,
    pub verdict: Verdict,
}

impl JhReport {
    /// The decomposition shared by all paths, when the check passed.
    pub fn common(&self) -> Option<&MultiplicityMap> {
        (self.verdict == Verdict::Pass).then(|| &self.distinct[0])
    }
}

/// Checks that every choice of monotone path (at every recursion level)
/// yields the same multiplicities. `budget` caps the number of paths
/// examined in total.
pub fn jh_check(fan: &SecondaryFan, chamber: usize, budget: usize) -> Result<JhReport> {
    let (paths, truncated) = monotone_paths(fan, chamber, budget)?;
    let per_path = paths
        .iter()
        .map(|p| decompose(fan, chamber, &PathPolicy::Explicit(p.clone())))
        .collect::<Result<Vec<_>>>()?;
    let mut remaining = budget;
    let all = all_decompositions(fan, chamber, &mut remaining)?;
    let (distinct, exhausted) = match all {
        Some(set) => (set.into_iter().collect::<Vec<_>>(), false),
        None => {
            let set: BTreeSet<_> = per_path.iter().cloned().collect();
            (set.into_iter().collect(), true)
        }
    };
    let verdict = if distinct.len() > 1 {
        Verdict::Fail
    } else if truncated || exhausted {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(JhReport {
        chamber,
        paths,
        per_path,
        distinct,
        verdict,
    })
}

/// Every decomposition obtainable by choosing monotone paths at all levels,
/// or `None` if more than `budget` paths would be needed.
pub fn all_decompositions(
    fan: &SecondaryFan,
    chamber: usize,
    budget: &mut usize,
) -> Result<Option<BTreeSet<MultiplicityMap>>> {
    let (paths, truncated) = monotone_paths(fan, chamber, *budget)?;
    if truncated {
        return Ok(None);
    }
    *budget -= paths.len();
    let full = SubspaceKey::full(fan.problem().r());
    let mut result = BTreeSet::new();
    for path in &paths {
        let mut partial = BTreeSet::from([MultiplicityMap::new()]);
        for step in path.windows(2) {
            let w = wall_between(fan, step[0], step[1])?;
            if !w.kappa.is_positive() {
                continue;
            }
            let hp = higgs_phase(fan, w)?;
            if !hp.fan.chamber(hp.chamber)?.nonempty {
                continue;
            }
            let Some(options) = all_decompositions(&hp.fan, hp.chamber, budget)? else {
                return Ok(None);
            };
            let mut next = BTreeSet::new();
            for base in &partial {
                for opt in &options {
                    let mut m = base.clone();
                    m.add_scaled(&opt.push_forward(&hp.embedding), &w.kappa);
                    next.insert(m);
                }
            }
            partial = next;
        }
        let last = *path.last().unwrap();
        let terminal = fan.chamber(last)?.nonempty;
        for mut m in partial {
            if terminal {
                m.add(full.clone(), BigInt::from(1));
            }
            result.insert(m);
        }
    }
    Ok(Some(result))
}

/// Closed-form multiplicity of a codimension-one subspace in the
/// decomposition of a chamber: `max(λ_H · det V, 0)` with `λ_H` the primitive
/// normal of `H`, positive on the chamber.
pub fn codim1_multiplicity(fan: &SecondaryFan, chamber: usize, h: &SubspaceKey) -> Result<BigInt> {
    let r = fan.problem().r();
    if h.ambient() != r {
        return Err(Error::LengthMismatch {
            expected: r,
            found: h.ambient(),
        });
    }
    let Some(mut lambda) = h.normal() else {
        return Err(Error::NotCodimOne {
            expected: r.saturating_sub(1),
            found: h.rank(),
        });
    };
    let theta = &fan.chamber(chamber)?.interior;
    let side = theta.dot_int(&lambda);
    if side.is_zero() {
        return Err(Error::NonGeneric(theta.to_string()));
    }
    if side.is_negative() {
        lambda = lambda.iter().map(|x| -x).collect();
    }
    let k = crate::linalg::dot(&lambda, &fan.problem().det_v());
    Ok(if k.is_positive() { k } else { BigInt::zero() })
}

/// Number of torus fixed points of the factor `Z_H`: the quotient of the
/// Higgs problem of `H` at its first non-empty minimal chamber.
pub fn factor_fixed_points(problem: &GitProblem, h: &SubspaceKey) -> Result<BigInt> {
    let sub = problem.higgs_problem(h)?;
    let fan = SecondaryFan::build(&sub.problem)?;
    let c = fan
        .chambers()
        .iter()
        .find(|c| c.minimal && c.nonempty)
        .ok_or_else(|| Error::Internal(format!("factor for {h} has no non-empty minimal chamber")))?;
    Ok(fixed_point_count(&sub.problem, &c.interior))
}

/// `Σ mult(H) · #fixed points(Z_H)`, which matches the fixed-point count of
/// the decomposed phase.
pub fn weighted_fixed_points(problem: &GitProblem, map: &MultiplicityMap) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for (h, m) in map.iter() {
        total += m * factor_fixed_points(problem, h)?;
    }
    Ok(total)
}

/// Fixed-point count of the phase containing `theta`.
pub fn phase_fixed_points(problem: &GitProblem, theta: &RatVector) -> BigInt {
    fixed_point_count(problem, theta)
}
