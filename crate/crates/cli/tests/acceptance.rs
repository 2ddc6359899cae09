//! End-to-end acceptance suite. Prints one line per criterion and exits
//! non-zero if any criterion fails or overruns its time limit.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wallcross::discriminant::{self, RowVerdict, Scope};
use wallcross::fan::fixed_point_count;
use wallcross::linalg::{dot, IntMatrix, RatVector};
use wallcross::sod::{self, MultiplicityMap, PathPolicy, Verdict};
use wallcross::{sample, GitProblem, SecondaryFan, SubspaceKey};

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str) -> GitProblem {
    let text = std::fs::read_to_string(fixture(name)).expect("fixture exists");
    let v: serde_json::Value = serde_json::from_str(&text).expect("fixture is JSON");
    let weights: Vec<Vec<i64>> = serde_json::from_value(v["weights"].clone()).expect("weights");
    GitProblem::new(weights).expect("valid fixture")
}

fn map(entries: &[(SubspaceKey, i64)]) -> MultiplicityMap {
    let mut m = MultiplicityMap::new();
    for (k, v) in entries {
        m.add(k.clone(), BigInt::from(*v));
    }
    m
}

/// The randomized rank-2 suite shared by criteria 2, 4 and 5.
fn random_suite() -> Vec<GitProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..100).map(|_| sample::random_rank2(&mut rng, 7, 3)).collect()
}

fn example_chamber(fan: &SecondaryFan, x: i64, y: i64) -> Result<usize, String> {
    fan.chamber_of(&RatVector::from_ints([x, y])).map_err(fail)
}

fn six_weights() -> Check {
    let p = load("six-weights.json");
    let fan = SecondaryFan::build(&p).map_err(fail)?;
    ensure!(fan.phase_count() == 4, "{} phases", fan.phase_count());
    let kappa3 = fan
        .walls()
        .iter()
        .filter(|w| w.lambda == [BigInt::from(1), BigInt::from(1)] && w.kappa == BigInt::from(3))
        .count();
    ensure!(kappa3 >= 1, "no wall with lambda (1,1) and kappa 3");

    let full = SubspaceKey::full(2);
    let axis = SubspaceKey::span(&IntMatrix::from_rows(2, [[0, 1]]));
    let zero = SubspaceKey::zero(2);
    let expected = [
        ((-1, -1), map(&[(full.clone(), 1)])),
        ((-1, 2), map(&[(full.clone(), 1), (zero.clone(), 3)])),
        ((2, -1), map(&[(full.clone(), 1), (axis.clone(), 1)])),
        ((1, 1), map(&[(full, 1), (axis, 1), (zero, 4)])),
    ];
    for ((x, y), want) in expected {
        let c = example_chamber(&fan, x, y)?;
        let got = sod::decompose(&fan, c, &PathPolicy::Bfs).map_err(fail)?;
        ensure!(got == want, "chamber at ({x},{y}): {got}, expected {want}");
    }
    Ok("4 phases, kappa-3 wall, 4 decompositions".into())
}

fn jordan_holder(suite: &[GitProblem]) -> Check {
    let p = load("six-weights.json");
    let fan = SecondaryFan::build(&p).map_err(fail)?;
    let r = sod::jh_check(&fan, example_chamber(&fan, 1, 1)?, 10_000).map_err(fail)?;
    ensure!(r.paths.len() == 2, "{} paths from chamber (1,1)", r.paths.len());
    ensure!(r.verdict == Verdict::Pass, "example verdict {}", r.verdict);

    let mut chambers = 0;
    for p in suite {
        let fan = SecondaryFan::build(p).map_err(fail)?;
        for c in fan.chambers().iter().filter(|c| c.nonempty) {
            chambers += 1;
            let r = sod::jh_check(&fan, c.id, 100_000).map_err(fail)?;
            ensure!(r.verdict == Verdict::Pass, "{:?} chamber {}: {}", p.weights(), c.id, r.verdict);
        }
    }
    Ok(format!("example: 2 paths; {} problems, {chambers} chambers", suite.len()))
}

fn projective_spaces() -> Check {
    for n in 1..=6 {
        let p = GitProblem::new(vec![vec![1]; n + 1]).map_err(fail)?;
        let fan = SecondaryFan::build(&p).map_err(fail)?;
        let c = fan.chamber_of(&RatVector::from_ints([1])).map_err(fail)?;
        let got = sod::decompose(&fan, c, &PathPolicy::Bfs).map_err(fail)?;
        let want = map(&[(SubspaceKey::zero(1), n as i64 + 1)]);
        ensure!(got == want, "P^{n}: {got}");
    }
    Ok("P^1 .. P^6".into())
}

fn codim_one(suite: &[GitProblem]) -> Check {
    let mut checked = 0;
    for p in suite {
        let fan = SecondaryFan::build(p).map_err(fail)?;
        let det = p.det_v();
        for c in fan.chambers().iter().filter(|c| c.nonempty) {
            let m = sod::decompose(&fan, c.id, &PathPolicy::Bfs).map_err(fail)?;
            for h in p.relevant_subspaces().iter().filter(|h| h.rank() == 1) {
                let b = h.basis().row(0);
                let mut lambda = vec![-b[1].clone(), b[0].clone()];
                if c.interior.dot_int(&lambda) < BigRational::from_integer(0.into()) {
                    lambda = lambda.into_iter().map(|x| -x).collect();
                }
                let closed = dot(&lambda, &det).max(BigInt::from(0));
                ensure!(m.get(h) == closed, "{:?} chamber {} {h}: {} vs {closed}", p.weights(), c.id, m.get(h));
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (chamber, line) pairs"))
}

fn fixed_points(suite: &[GitProblem]) -> Check {
    let p = load("six-weights.json");
    let fan = SecondaryFan::build(&p).map_err(fail)?;
    for ((x, y), want) in [((-1, -1), 1), ((-1, 2), 4), ((2, -1), 2), ((1, 1), 6)] {
        let c = example_chamber(&fan, x, y)?;
        let m = sod::decompose(&fan, c, &PathPolicy::Bfs).map_err(fail)?;
        let lhs = sod::weighted_fixed_points(&p, &m).map_err(fail)?;
        let rhs = fixed_point_count(&p, &fan.chambers()[c].interior);
        ensure!(lhs == BigInt::from(want) && rhs == BigInt::from(want), "({x},{y}): {lhs} vs {rhs}");
    }
    for p in suite {
        let fan = SecondaryFan::build(p).map_err(fail)?;
        for c in fan.chambers().iter().filter(|c| c.nonempty) {
            let m = sod::decompose(&fan, c.id, &PathPolicy::Bfs).map_err(fail)?;
            let lhs = sod::weighted_fixed_points(p, &m).map_err(fail)?;
            let rhs = fixed_point_count(p, &c.interior);
            ensure!(lhs == rhs, "{:?} chamber {}: {lhs} vs {rhs}", p.weights(), c.id);
        }
    }
    Ok("example 1, 4, 2, 6 and the random suite".into())
}

fn rank_two_conjecture() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut rows = 0;
    for i in 0..60 {
        let p = sample::random_calabi_yau(&mut rng, 2, 4 + i % 3, 3);
        let fan = SecondaryFan::build(&p).map_err(fail)?;
        for r in discriminant::conjecture_check(&fan, Scope::All).map_err(fail)? {
            ensure!(r.verdict == RowVerdict::Equal, "{:?} wall {}: n={} m={:?}", p.weights(), r.wall, r.n, r.m);
            rows += 1;
        }
    }

    let p = load("local-p1xp1.json");
    let fan = SecondaryFan::build(&p).map_err(fail)?;
    let checks = discriminant::conjecture_check(&fan, Scope::All).map_err(fail)?;
    ensure!(checks.iter().all(|r| r.verdict == RowVerdict::Equal), "local P1xP1 not EQUAL");
    let vertical = fan
        .walls()
        .iter()
        .find(|w| w.lambda[1] == BigInt::from(0) && w.genuine)
        .ok_or("no genuine vertical wall")?;
    let row = checks.iter().find(|r| r.wall == vertical.id).ok_or("no row for the vertical wall")?;
    ensure!(
        row.n == BigInt::from(2) && row.m == Some(BigInt::from(2)),
        "vertical wall n={} m={:?}",
        row.n,
        row.m
    );
    Ok(format!("60 problems, {rows} rows; local P1xP1 vertical wall n = m = 2"))
}

fn horn() -> Check {
    let p = load("local-p1.json");
    let quarter = BigRational::new(1.into(), 4.into());
    ensure!(discriminant::rank1_point(&p).map_err(fail)? == quarter, "rank1_point");
    for (a, b) in [(1, 1), (-1, 1), (5, 3), (-7, 2), (100, 1)] {
        let lambda = RatVector(vec![BigRational::new(a.into(), b.into())]);
        let z = discriminant::horn_eval(&p, &lambda).map_err(fail)?;
        ensure!(z.0 == [quarter.clone()], "lambda {a}/{b}: {:?}", z.0);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut instances = 0;
    while instances < 10 {
        let p = sample::random_calabi_yau(&mut rng, 2, 5, 3);
        let lambda = RatVector::from_ints([rng.gen_range(-9i64..=9), rng.gen_range(-9i64..=9)]);
        let Ok(base) = discriminant::horn_eval(&p, &lambda) else {
            continue;
        };
        for _ in 0..10 {
            let mut t = BigRational::new(rng.gen_range(-50i64..=50).into(), rng.gen_range(1i64..=20).into());
            if t == BigRational::from_integer(0.into()) {
                t = BigRational::from_integer(1.into());
            }
            let scaled = discriminant::horn_eval(&p, &lambda.scale(&t)).map_err(fail)?;
            ensure!(scaled == base, "{:?} lambda {:?} t {t}", p.weights(), lambda.0);
        }
        instances += 1;
    }
    Ok("1/4 at 5 points; 10 instances x 10 scalings".into())
}

fn determinism() -> Check {
    let runs: [Vec<String>; 4] = [
        vec!["analyze".into(), fixture("six-weights.json").display().to_string()],
        vec!["jh".into(), "--random".into(), "5".into()],
        vec!["conjecture".into(), fixture("local-p1xp1.json").display().to_string(), "--all".into()],
        vec!["decompose".into(), fixture("local-p1xp1.json").display().to_string(), "--point".into(), "1,2".into()],
    ];
    for args in runs {
        let once = || {
            Command::new(env!("CARGO_BIN_EXE_wallcross"))
                .args(["--json", "--seed", "42"])
                .args(&args)
                .output()
                .map(|o| o.stdout)
                .map_err(fail)
        };
        let (a, b) = (once()?, once()?);
        ensure!(!a.is_empty() && a == b, "output differs for {args:?}");
    }
    Ok("4 commands byte-identical".into())
}

fn main() {
    let suite = random_suite();
    let criteria: Vec<Criterion> = vec![
        ("1 example end-to-end", Duration::from_secs(1), Box::new(six_weights)),
        ("2 Jordan-Hoelder", Duration::from_secs(60), Box::new(|| jordan_holder(&suite))),
        ("3 projective spaces", Duration::from_secs(1), Box::new(projective_spaces)),
        ("4 codim-1 closed form", Duration::from_secs(60), Box::new(|| codim_one(&suite))),
        ("5 fixed-point additivity", Duration::from_secs(60), Box::new(|| fixed_points(&suite))),
        ("6 rank-2 conjecture", Duration::from_secs(60), Box::new(rank_two_conjecture)),
        ("7 Horn evaluation", Duration::from_secs(60), Box::new(horn)),
        ("8 determinism", Duration::from_secs(60), Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, limit, check) in &criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took longer than {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {name:<26} {status}  {:>8.3}s  {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
