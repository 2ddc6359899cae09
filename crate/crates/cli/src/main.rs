//! `wallcross` command-line front end.
//!
//! Exit codes: 0 success / PASS / EQUAL, 1 usage, parse or precondition
//! error, 2 FAIL / UNEQUAL, 3 INCONCLUSIVE (path budget exhausted).

mod render;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wallcross::discriminant::{self, RowVerdict, Scope};
use wallcross::linalg::RatVector;
use wallcross::sod::{self, PathPolicy, Verdict};
use wallcross::{sample, GitProblem, SecondaryFan};

use report::*;

#[derive(Parser, Debug)]
#[command(name = "wallcross", version, about = "Exact toric GIT wall-crossing calculator")]
struct Cli {
    /// Emit the report as JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized choices (fan start point, batch instances).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Maximum number of monotone paths examined by path enumeration.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice data, hyperplanes, chambers, walls, relevant subspaces, minimal faces.
    Analyze {
        file: PathBuf,
    },
    /// Wall-crossing decomposition of one phase.
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        select: ChamberSelect,
    },
    /// Check that every monotone path gives the same decomposition.
    Jh {
        /// Problem file; omit when using --random.
        file: Option<PathBuf>,
        #[command(flatten)]
        select: OptionalChamberSelect,
        /// `all`, or the largest number of top-level paths to examine.
        #[arg(long, default_value = "all")]
        paths: String,
        /// Check every chamber of N random rank-2 problems (n ≤ 7, entries in [-3, 3]).
        #[arg(long, value_name = "N", conflicts_with = "file")]
        random: Option<usize>,
    },
    /// Compare Higgs multiplicities with discriminant intersection multiplicities.
    Conjecture {
        file: PathBuf,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        wall: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Evaluate the Horn uniformization at a point.
    Horn {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_name = "CSV")]
        lambda: String,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ChamberSelect {
    /// A generic stability condition, e.g. `1,1` or `-1/2,3`.
    #[arg(long, allow_hyphen_values = true, value_name = "CSV")]
    point: Option<String>,
    /// A chamber id as listed by `analyze`.
    #[arg(long)]
    chamber: Option<usize>,
}

#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
struct OptionalChamberSelect {
    #[arg(long, allow_hyphen_values = true, value_name = "CSV")]
    point: Option<String>,
    #[arg(long)]
    chamber: Option<usize>,
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; 2 is reserved for FAIL / UNEQUAL here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((doc, code)) => {
            if cli.json {
                match serde_json::to_string_pretty(&doc) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
            } else {
                print!("{}", render::render(&doc));
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn echo(cli: &Cli, name: &str, args: Vec<String>) -> CommandEcho {
    CommandEcho {
        name: name.to_string(),
        args,
        seed: cli.seed,
        budget: cli.budget,
    }
}

fn load(path: &Path) -> anyhow::Result<(ProblemFile, GitProblem)> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file: ProblemFile =
        serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))?;
    let p = GitProblem::new(file.weights.clone()).with_context(|| format!("invalid problem in {}", path.display()))?;
    Ok((file, p))
}

pub fn parse_csv_rationals(s: &str) -> anyhow::Result<RatVector> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<num_rational::BigRational>()
                .with_context(|| format!("`{t}` is not an integer or fraction p/q"))
        })
        .collect::<anyhow::Result<Vec<_>>>()
        .map(RatVector)
}

fn select_chamber(fan: &SecondaryFan, point: Option<&str>, chamber: Option<usize>) -> anyhow::Result<usize> {
    let id = match (point, chamber) {
        (Some(p), _) => fan.chamber_of(&parse_csv_rationals(p)?)?,
        (None, Some(c)) => {
            fan.chamber(c)?;
            c
        }
        (None, None) => bail!("select a chamber with --point or --chamber"),
    };
    if !fan.chamber(id)?.nonempty {
        return Err(wallcross::Error::EmptyChamber(id).into());
    }
    Ok(id)
}

fn selector_args(point: Option<&str>, chamber: Option<usize>) -> Vec<String> {
    match (point, chamber) {
        (Some(p), _) => vec!["--point".into(), p.into()],
        (None, Some(c)) => vec!["--chamber".into(), c.to_string()],
        (None, None) => Vec::new(),
    }
}

fn run(cli: &Cli) -> anyhow::Result<(ReportDocument, u8)> {
    match &cli.command {
        Command::Analyze { file } => analyze(cli, file),
        Command::Decompose { file, select } => decompose(cli, file, select.point.as_deref(), select.chamber),
        Command::Jh {
            file,
            select,
            paths,
            random,
        } => match (file, random) {
            (_, Some(n)) => jh_batch(cli, *n, paths),
            (Some(f), None) => jh(cli, f, select.point.as_deref(), select.chamber, paths),
            (None, None) => bail!("jh needs a problem file or --random N"),
        },
        Command::Conjecture { file, wall, all } => conjecture(cli, file, *wall, *all),
        Command::Horn { file, lambda } => horn(cli, file, lambda),
    }
}

fn analyze(cli: &Cli, path: &Path) -> anyhow::Result<(ReportDocument, u8)> {
    let (file, p) = load(path)?;
    let fan = SecondaryFan::build_seeded(&p, cli.seed)?;
    let rays = p.rays();
    let rays_distinct = p.check_distinct_rays().is_ok();
    let minimal_faces = if p.is_calabi_yau() && rays_distinct {
        Some(p.minimal_faces()?.iter().map(FaceRow::from).collect())
    } else {
        None
    };
    let payload = AnalyzePayload {
        rank_n: p.n() - p.r(),
        rays: matrix(&rays.ray_matrix),
        height: rays.height.as_deref().map(ints),
        rays_distinct,
        lattice_index: p.lattice_index().to_string(),
        hyperplanes: fan
            .hyperplanes()
            .iter()
            .enumerate()
            .map(|(i, h)| HyperplaneRow::new(i, h))
            .collect(),
        chambers: fan.chambers().iter().map(ChamberRow::from).collect(),
        nonempty_chambers: fan.chambers().iter().filter(|c| c.nonempty).count(),
        phases: fan.phase_count(),
        walls: fan.walls().iter().map(WallRow::from).collect(),
        relevant_subspaces: p.relevant_subspaces().iter().map(SubspaceRow::from).collect(),
        minimal_faces,
    };
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: echo(cli, "analyze", vec![path.display().to_string()]),
        problem: Some(ProblemSummary::new(&file.name, &p)),
        payload: Payload::Analyze(payload),
    };
    Ok((doc, 0))
}

fn decompose(cli: &Cli, path: &Path, point: Option<&str>, chamber: Option<usize>) -> anyhow::Result<(ReportDocument, u8)> {
    let (file, p) = load(path)?;
    let fan = SecondaryFan::build_seeded(&p, cli.seed)?;
    let id = select_chamber(&fan, point, chamber)?;
    let d = sod::decompose_traced(&fan, id, &PathPolicy::Bfs)?;
    let payload = DecomposePayload::new(&p, fan.chamber(id)?, &d)?;
    let mut args = vec![path.display().to_string()];
    args.extend(selector_args(point, chamber));
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: echo(cli, "decompose", args),
        problem: Some(ProblemSummary::new(&file.name, &p)),
        payload: Payload::Decompose(payload),
    };
    Ok((doc, 0))
}

fn path_limit(cli: &Cli, paths: &str) -> anyhow::Result<usize> {
    if paths == "all" {
        return Ok(cli.budget);
    }
    let n: usize = paths
        .parse()
        .with_context(|| format!("--paths expects `all` or a count, got `{paths}`"))?;
    Ok(n.min(cli.budget))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 2,
        Verdict::Inconclusive => 3,
    }
}

fn jh(cli: &Cli, path: &Path, point: Option<&str>, chamber: Option<usize>, paths: &str) -> anyhow::Result<(ReportDocument, u8)> {
    let (file, p) = load(path)?;
    let fan = SecondaryFan::build_seeded(&p, cli.seed)?;
    let id = select_chamber(&fan, point, chamber)?;
    let report = sod::jh_check(&fan, id, path_limit(cli, paths)?)?;
    let code = verdict_code(report.verdict);
    let mut args = vec![path.display().to_string()];
    args.extend(selector_args(point, chamber));
    args.extend(["--paths".to_string(), paths.to_string()]);
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: echo(cli, "jh", args),
        problem: Some(ProblemSummary::new(&file.name, &p)),
        payload: Payload::Jh(JhPayload::from(&report)),
    };
    Ok((doc, code))
}

fn jh_batch(cli: &Cli, instances: usize, paths: &str) -> anyhow::Result<(ReportDocument, u8)> {
    let limit = path_limit(cli, paths)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let (mut pass, mut fail, mut inconclusive, mut checked) = (0, 0, 0, 0);
    let mut failures = Vec::new();
    for _ in 0..instances {
        let p = sample::random_rank2(&mut rng, 7, 3);
        let fan = SecondaryFan::build_seeded(&p, cli.seed)?;
        let mut instance = Verdict::Pass;
        for c in fan.chambers().iter().filter(|c| c.nonempty) {
            checked += 1;
            let r = sod::jh_check(&fan, c.id, limit)?;
            if r.verdict != Verdict::Pass {
                failures.push(BatchFailure {
                    weights: matrix(p.weights()),
                    chamber: c.id,
                    verdict: r.verdict.to_string(),
                });
                if instance != Verdict::Fail {
                    instance = r.verdict;
                }
            }
        }
        match instance {
            Verdict::Pass => pass += 1,
            Verdict::Fail => fail += 1,
            Verdict::Inconclusive => inconclusive += 1,
        }
    }
    let verdict = if fail > 0 {
        Verdict::Fail
    } else if inconclusive > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: echo(
            cli,
            "jh",
            vec!["--random".into(), instances.to_string(), "--paths".into(), paths.to_string()],
        ),
        problem: None,
        payload: Payload::JhBatch(JhBatchPayload {
            instances,
            chambers_checked: checked,
            pass,
            fail,
            inconclusive,
            verdict: verdict.to_string(),
            failures,
        }),
    };
    Ok((doc, verdict_code(verdict)))
}

fn conjecture(cli: &Cli, path: &Path, wall: Option<usize>, all: bool) -> anyhow::Result<(ReportDocument, u8)> {
    let (file, p) = load(path)?;
    if !p.is_calabi_yau() {
        bail!(
            "the conjecture check needs a Calabi-Yau problem (weights summing to zero); {} sums to ({})",
            file.name,
            ints(&p.det_v()).join(",")
        );
    }
    let fan = SecondaryFan::build_seeded(&p, cli.seed)?;
    let scope = match (wall, all) {
        (Some(w), _) => Scope::One(w),
        (None, true) => Scope::All,
        (None, false) => bail!("pass --wall <id> or --all"),
    };
    let rows = discriminant::conjecture_check(&fan, scope)?;
    let faces = p.minimal_faces()?;
    let verdict = discriminant::overall(&rows);
    let mut args = vec![path.display().to_string()];
    match wall {
        Some(w) => args.extend(["--wall".to_string(), w.to_string()]),
        None => args.push("--all".into()),
    }
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: echo(cli, "conjecture", args),
        problem: Some(ProblemSummary::new(&file.name, &p)),
        payload: Payload::Conjecture(ConjecturePayload {
            rows: rows.iter().map(|r| ConjectureRowOut::new(r, &faces)).collect(),
            verdict: verdict.to_string(),
        }),
    };
    let code = if verdict == RowVerdict::Unequal { 2 } else { 0 };
    Ok((doc, code))
}

fn horn(cli: &Cli, path: &Path, lambda: &str) -> anyhow::Result<(ReportDocument, u8)> {
    let (file, p) = load(path)?;
    let l = parse_csv_rationals(lambda)?;
    if l.is_zero() && !l.is_empty() {
        bail!("--lambda must be non-zero");
    }
    let point = discriminant::horn_eval(&p, &l)?;
    let rank1 = if p.r() == 1 {
        Some(discriminant::rank1_point(&p)?.to_string())
    } else {
        None
    };
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        command: echo(cli, "horn", vec![path.display().to_string(), "--lambda".into(), lambda.into()]),
        problem: Some(ProblemSummary::new(&file.name, &p)),
        payload: Payload::Horn(HornPayload {
            lambda: rats(&l),
            point: rats(&point),
            rank1_point: rank1,
        }),
    };
    Ok((doc, 0))
}
