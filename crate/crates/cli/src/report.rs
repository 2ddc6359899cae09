//! Serializable report documents.
//!
//! Every exact number is rendered as a string (`"3"`, `"-1/4"`) so that the
//! JSON is lossless and the byte output only depends on the input. Field
//! order is the struct order, and maps are only ever `Vec`s of rows, so
//! serialization is deterministic.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use wallcross::discriminant::ConjectureRow;
use wallcross::fan::{Chamber, Hyperplane, Sign, Wall};
use wallcross::linalg::{IntMatrix, RatVector};
use wallcross::sod::{Decomposition, JhReport};
use wallcross::{GitProblem, MinimalFace, MultiplicityMap, SubspaceKey};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub weights: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: CommandEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSummary>,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
    pub seed: u64,
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub name: String,
    pub n: usize,
    pub r: usize,
    pub det_v: Vec<String>,
    pub calabi_yau: bool,
}

impl ProblemSummary {
    pub fn new(name: &str, p: &GitProblem) -> Self {
        ProblemSummary {
            name: name.to_string(),
            n: p.n(),
            r: p.r(),
            det_v: ints(&p.det_v()),
            calabi_yau: p.is_calabi_yau(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Analyze(AnalyzePayload),
    Decompose(DecomposePayload),
    Jh(JhPayload),
    JhBatch(JhBatchPayload),
    Conjecture(ConjecturePayload),
    Horn(HornPayload),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzePayload {
    pub rank_n: usize,
    pub rays: Vec<Vec<String>>,
    pub height: Option<Vec<String>>,
    pub rays_distinct: bool,
    pub lattice_index: String,
    pub hyperplanes: Vec<HyperplaneRow>,
    pub chambers: Vec<ChamberRow>,
    pub nonempty_chambers: usize,
    pub phases: usize,
    pub walls: Vec<WallRow>,
    pub relevant_subspaces: Vec<SubspaceRow>,
    /// Present for Calabi–Yau problems with distinct rays.
    pub minimal_faces: Option<Vec<FaceRow>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneRow {
    pub id: usize,
    pub normal: Vec<String>,
    pub weights: Vec<usize>,
}

impl HyperplaneRow {
    pub fn new(id: usize, h: &Hyperplane) -> Self {
        HyperplaneRow {
            id,
            normal: ints(&h.normal),
            weights: h.weights.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberRow {
    pub id: usize,
    pub signs: String,
    pub interior: Vec<String>,
    pub nonempty: bool,
    pub minimal: bool,
    pub phase: Option<usize>,
}

impl From<&Chamber> for ChamberRow {
    fn from(c: &Chamber) -> Self {
        ChamberRow {
            id: c.id,
            signs: c
                .signs
                .iter()
                .map(|s| match s {
                    Sign::Plus => '+',
                    Sign::Minus => '-',
                })
                .collect(),
            interior: rats(&c.interior),
            nonempty: c.nonempty,
            minimal: c.minimal,
            phase: c.phase,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallRow {
    pub id: usize,
    pub hyperplane: usize,
    pub plus_chamber: usize,
    pub minus_chamber: usize,
    pub lambda: Vec<String>,
    pub kappa: String,
    pub interior_point: Vec<String>,
    pub genuine: bool,
}

impl From<&Wall> for WallRow {
    fn from(w: &Wall) -> Self {
        WallRow {
            id: w.id,
            hyperplane: w.hyperplane,
            plus_chamber: w.plus_chamber,
            minus_chamber: w.minus_chamber,
            lambda: ints(&w.lambda),
            kappa: w.kappa.to_string(),
            interior_point: rats(&w.interior_point),
            genuine: w.genuine,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceRow {
    pub key: String,
    pub rank: usize,
    pub basis: Vec<Vec<String>>,
}

impl From<&SubspaceKey> for SubspaceRow {
    fn from(h: &SubspaceKey) -> Self {
        SubspaceRow {
            key: h.to_string(),
            rank: h.rank(),
            basis: matrix(h.basis()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRow {
    pub indices: Vec<usize>,
    pub subspace: String,
    pub coulomb_rank: usize,
}

impl From<&MinimalFace> for FaceRow {
    fn from(f: &MinimalFace) -> Self {
        FaceRow {
            indices: f.indices.clone(),
            subspace: f.subspace.to_string(),
            coulomb_rank: f.coulomb_rank,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRow {
    pub subspace: String,
    pub rank: usize,
    pub basis: Vec<Vec<String>>,
    pub multiplicity: String,
    /// Weights of the Higgs problem whose minimal phase is the factor.
    pub higgs_weights: Vec<Vec<String>>,
}

pub fn factor_rows(problem: &GitProblem, map: &MultiplicityMap) -> anyhow::Result<Vec<FactorRow>> {
    map.iter()
        .map(|(h, m)| {
            let sub = problem.higgs_problem(h)?;
            Ok(FactorRow {
                subspace: h.to_string(),
                rank: h.rank(),
                basis: matrix(h.basis()),
                multiplicity: m.to_string(),
                higgs_weights: matrix(sub.problem.weights()),
            })
        })
        .collect()
}

/// Compact form of a multiplicity map: `(key, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub subspace: String,
    pub multiplicity: String,
}

pub fn map_entries(map: &MultiplicityMap) -> Vec<MapEntry> {
    map.iter()
        .map(|(h, m)| MapEntry {
            subspace: h.to_string(),
            multiplicity: m.to_string(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposePayload {
    pub chamber: usize,
    pub interior: Vec<String>,
    pub path: Vec<usize>,
    pub crossings: Vec<CrossingRow>,
    pub depth: usize,
    pub factors: Vec<FactorRow>,
    pub total: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingRow {
    pub wall: usize,
    pub from: usize,
    pub to: usize,
    pub kappa: String,
    pub subspace: String,
    pub higgs: Vec<MapEntry>,
}

impl DecomposePayload {
    pub fn new(problem: &GitProblem, chamber: &Chamber, d: &Decomposition) -> anyhow::Result<Self> {
        Ok(DecomposePayload {
            chamber: d.chamber,
            interior: rats(&chamber.interior),
            path: d.path.clone(),
            crossings: d
                .crossings
                .iter()
                .map(|c| CrossingRow {
                    wall: c.wall,
                    from: c.from,
                    to: c.to,
                    kappa: c.kappa.to_string(),
                    subspace: c.subspace.to_string(),
                    higgs: map_entries(&c.higgs),
                })
                .collect(),
            depth: d.depth,
            factors: factor_rows(problem, &d.map)?,
            total: d.map.total().to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JhPayload {
    pub chamber: usize,
    pub path_count: usize,
    pub paths: Vec<PathRow>,
    pub distinct: Vec<Vec<MapEntry>>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRow {
    pub chambers: Vec<usize>,
    pub map: Vec<MapEntry>,
}

impl From<&JhReport> for JhPayload {
    fn from(r: &JhReport) -> Self {
        JhPayload {
            chamber: r.chamber,
            path_count: r.paths.len(),
            paths: r
                .paths
                .iter()
                .zip(&r.per_path)
                .map(|(p, m)| PathRow {
                    chambers: p.clone(),
                    map: map_entries(m),
                })
                .collect(),
            distinct: r.distinct.iter().map(map_entries).collect(),
            verdict: r.verdict.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JhBatchPayload {
    pub instances: usize,
    pub chambers_checked: usize,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub verdict: String,
    /// Weight matrices of the instances that did not pass.
    pub failures: Vec<BatchFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchFailure {
    pub weights: Vec<Vec<String>>,
    pub chamber: usize,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjecturePayload {
    pub rows: Vec<ConjectureRowOut>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRowOut {
    pub wall: usize,
    pub face: usize,
    pub face_indices: Vec<usize>,
    pub subspace: String,
    pub coulomb_rank: usize,
    pub n: String,
    pub m: Option<String>,
    pub verdict: String,
}

impl ConjectureRowOut {
    pub fn new(row: &ConjectureRow, faces: &[MinimalFace]) -> Self {
        ConjectureRowOut {
            wall: row.wall,
            face: row.face,
            face_indices: faces[row.face].indices.clone(),
            subspace: row.subspace.to_string(),
            coulomb_rank: row.coulomb_rank,
            n: row.n.to_string(),
            m: row.m.as_ref().map(ToString::to_string),
            verdict: row.verdict.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornPayload {
    pub lambda: Vec<String>,
    pub point: Vec<String>,
    /// `∏ q_i^{q_i}` for rank-one problems.
    pub rank1_point: Option<String>,
}

pub fn ints(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// `num_rational` already prints `p/q` with `q > 0`, and bare `p` when
/// `q = 1`.
pub fn rats(v: &RatVector) -> Vec<String> {
    v.0.iter().map(ToString::to_string).collect()
}

pub fn matrix(m: &IntMatrix) -> Vec<Vec<String>> {
    m.iter_rows().map(ints).collect()
}
