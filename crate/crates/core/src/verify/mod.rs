//! Seeded Monte Carlo and fixture checks for the planners and rings.
//!
//! Every trial draws from its own ChaCha8 stream, so results do not depend on
//! how rayon schedules the work and reports are byte-identical across runs.

mod fixtures;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{nakaoka_sp2, ring_of_rp, ring_of_sphere, GradedRing};
use crate::geometry::{max_abs_diff, max_deviation, UnitPoint};
use crate::planners::{
    classify_pair, classify_tuple, plan_pair, plan_tuple, plan_tuple_even, Plan, PlanError,
    WaypointTuple,
};

pub use fixtures::{adversarial_fixtures, Fixtures, PairFixture, TupleFixture, NEAR};

pub const SUITES: [&str; 8] = [
    "pair_equivariance",
    "pair_endpoints",
    "tuple_equivariance",
    "tuple_waypoints",
    "domain_symmetry",
    "sphere_membership",
    "continuity",
    "ring_axioms",
];

pub const STREAM_SCHEME: &str =
    "ChaCha8 seeded from the 64-bit seed; trial stream = suite_index << 48 | case_index << 32 | trial";

/// Failures beyond this many are counted but not stored.
const MAX_STORED_FAILURES: usize = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown suite '{0}' (known: {known})", known = SUITES.join(", "))]
    UnknownSuite(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Trials per case.
    pub trials: usize,
    pub seed: u64,
    /// Sphere dimensions for the pair planner.
    pub pair_dims: Vec<usize>,
    /// `(n, m)` cases for the waypoint planner.
    pub tuple_cases: Vec<(usize, usize)>,
    /// Samples on `[0, 1]` for path comparisons.
    pub grid: usize,
    pub tolerance: f64,
}

impl VerifyConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        VerifyConfig {
            trials,
            seed,
            pair_dims: vec![1, 2, 3, 4, 5],
            tuple_cases: vec![(3, 1), (3, 3), (3, 5), (5, 1), (5, 3), (5, 5)],
            grid: 201,
            tolerance: 1e-9,
        }
    }
}

/// A counterexample with its serialized input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// `random` trial or `fixture`.
    pub source: String,
    pub case: String,
    pub trial: Option<usize>,
    pub input: serde_json::Value,
    /// `None` when the planner returned an error.
    pub deviation: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    /// Random trials per case.
    pub trials: usize,
    pub seed: u64,
    pub stream_scheme: String,
    pub tolerance: f64,
    pub cases: Vec<String>,
    pub fixtures_checked: usize,
    /// Largest deviation over successful checks.
    pub max_deviation: f64,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// Runs one suite with the default case lists.
pub fn run_suite(name: &str, trials: usize, seed: u64) -> Result<VerificationReport, VerifyError> {
    run_suite_with(name, &VerifyConfig::new(trials, seed))
}

/// Runs every suite in order.
pub fn run_all(config: &VerifyConfig) -> Vec<VerificationReport> {
    SUITES
        .iter()
        .map(|s| run_suite_with(s, config).expect("known suite"))
        .collect()
}

/// Outcome of one check: deviation, or an error message.
type Outcome = Result<f64, String>;

struct Check {
    source: &'static str,
    case: String,
    trial: Option<usize>,
    input: serde_json::Value,
    outcome: Outcome,
    detail: String,
}

pub fn run_suite_with(name: &str, cfg: &VerifyConfig) -> Result<VerificationReport, VerifyError> {
    let suite_index = SUITES
        .iter()
        .position(|s| *s == name)
        .ok_or_else(|| VerifyError::UnknownSuite(name.to_string()))? as u64;
    let fx = adversarial_fixtures();
    let (cases, checks, fixtures_checked) = match name {
        "pair_equivariance" | "pair_endpoints" => {
            let prop = if name == "pair_equivariance" {
                pair_equivariance
            } else {
                pair_endpoints
            };
            let (cases, mut checks) = random_pairs(cfg, suite_index, prop);
            let fixture_checks: Vec<Check> = fx.pairs.iter().map(|f| pair_fixture_check(f, prop)).collect();
            let k = fixture_checks.len();
            checks.extend(fixture_checks);
            (cases, checks, k)
        }
        "tuple_equivariance" | "tuple_waypoints" => {
            let prop = if name == "tuple_equivariance" {
                tuple_equivariance
            } else {
                tuple_waypoints
            };
            let (cases, mut checks) = random_tuples(cfg, suite_index, prop);
            let fixture_checks: Vec<Check> = fx.tuples.iter().map(|f| tuple_fixture_check(f, prop, cfg)).collect();
            let k = fixture_checks.len();
            checks.extend(fixture_checks);
            (cases, checks, k)
        }
        "domain_symmetry" | "sphere_membership" | "continuity" => {
            let (pp, tp): (PairProp, TupleProp) = match name {
                "domain_symmetry" => (pair_domain_symmetry, tuple_domain_symmetry),
                "sphere_membership" => (pair_membership, tuple_membership),
                _ => (pair_continuity, tuple_continuity),
            };
            let (mut cases, mut checks) = random_pairs(cfg, suite_index, pp);
            let (tc, tchecks) = random_tuples(cfg, suite_index, tp);
            cases.extend(tc);
            checks.extend(tchecks);
            let mut fixture_checks: Vec<Check> =
                fx.pairs.iter().map(|f| pair_fixture_check(f, pp)).collect();
            fixture_checks.extend(fx.tuples.iter().map(|f| tuple_fixture_check(f, tp, cfg)));
            if name == "domain_symmetry" {
                fixture_checks.extend(fx.pairs.iter().map(pair_flag_check));
                fixture_checks.extend(fx.tuples.iter().map(tuple_flag_check));
            }
            let k = fixture_checks.len();
            checks.extend(fixture_checks);
            (cases, checks, k)
        }
        "ring_axioms" => {
            let checks = ring_checks();
            let cases = checks.iter().map(|c| c.case.clone()).collect();
            (cases, checks, 0)
        }
        _ => unreachable!("suite names checked above"),
    };
    Ok(aggregate(name, cfg, cases, checks, fixtures_checked))
}

fn aggregate(
    suite: &str,
    cfg: &VerifyConfig,
    cases: Vec<String>,
    checks: Vec<Check>,
    fixtures_checked: usize,
) -> VerificationReport {
    let mut max_dev: f64 = 0.0;
    let mut failures = Vec::new();
    for c in checks {
        let failed = match &c.outcome {
            Ok(d) => {
                max_dev = max_dev.max(*d);
                // NaN counts as a failure
                !(*d < cfg.tolerance)
            }
            Err(_) => true,
        };
        if failed {
            failures.push(Failure {
                source: c.source.to_string(),
                case: c.case,
                trial: c.trial,
                input: c.input,
                deviation: c.outcome.as_ref().ok().copied(),
                detail: match c.outcome {
                    Ok(_) => c.detail,
                    Err(e) => e,
                },
            });
        }
    }
    let failure_count = failures.len();
    failures.truncate(MAX_STORED_FAILURES);
    VerificationReport {
        suite: suite.to_string(),
        trials: if suite == "ring_axioms" { cases.len() } else { cfg.trials },
        seed: cfg.seed,
        stream_scheme: STREAM_SCHEME.to_string(),
        tolerance: cfg.tolerance,
        cases,
        fixtures_checked,
        max_deviation: max_dev,
        failure_count,
        failures,
    }
}

fn trial_rng(seed: u64, suite: u64, case: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite << 48 | case << 32 | trial);
    rng
}

/// Uniform point on S^m by normalizing a Gaussian vector.
pub fn random_point(rng: &mut impl Rng, m: usize) -> UnitPoint {
    loop {
        let v: Vec<f64> = (0..=m).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return UnitPoint::normalized(v);
        }
    }
}

/// Random tuple in which consecutive points are equal or antipodal with
/// probability 1/5 each, so every pair rule is exercised.
pub fn random_tuple(rng: &mut impl Rng, n: usize, m: usize) -> WaypointTuple {
    let mut pts = vec![random_point(rng, m)];
    for _ in 1..n {
        let prev = pts.last().expect("nonempty").clone();
        let r: f64 = rng.random();
        pts.push(if r < 0.2 {
            prev
        } else if r < 0.4 {
            prev.antipode()
        } else {
            random_point(rng, m)
        });
    }
    WaypointTuple::new(pts).expect("tuple of same-dimension points")
}

type PairProp = fn(&UnitPoint, &UnitPoint, usize) -> Outcome;
type TupleProp = fn(&WaypointTuple, usize) -> Outcome;

fn random_pairs(cfg: &VerifyConfig, suite: u64, prop: PairProp) -> (Vec<String>, Vec<Check>) {
    let cases: Vec<String> = cfg.pair_dims.iter().map(|m| format!("pair S^{m}")).collect();
    let checks = cfg
        .pair_dims
        .iter()
        .enumerate()
        .flat_map(|(ci, &m)| (0..cfg.trials).map(move |t| (ci, m, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(ci, m, t)| {
            let mut rng = trial_rng(cfg.seed, suite, ci as u64, t as u64);
            let x = random_point(&mut rng, m);
            let y = random_point(&mut rng, m);
            Check {
                source: "random",
                case: format!("pair S^{m}"),
                trial: Some(t),
                input: serde_json::json!({ "x": x, "y": y }),
                outcome: prop(&x, &y, cfg.grid),
                detail: String::new(),
            }
        })
        .collect();
    (cases, checks)
}

fn random_tuples(cfg: &VerifyConfig, suite: u64, prop: TupleProp) -> (Vec<String>, Vec<Check>) {
    let cases: Vec<String> = cfg
        .tuple_cases
        .iter()
        .map(|(n, m)| format!("tuple n={n} S^{m}"))
        .collect();
    // pair cases take the low case indices
    let offset = cfg.pair_dims.len();
    let checks = cfg
        .tuple_cases
        .iter()
        .enumerate()
        .flat_map(|(ci, &(n, m))| (0..cfg.trials).map(move |t| (ci + offset, n, m, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(ci, n, m, t)| {
            let mut rng = trial_rng(cfg.seed, suite, ci as u64, t as u64);
            let w = random_tuple(&mut rng, n, m);
            Check {
                source: "random",
                case: format!("tuple n={n} S^{m}"),
                trial: Some(t),
                input: serde_json::to_value(&w).expect("tuple serializes"),
                outcome: prop(&w, cfg.grid),
                detail: String::new(),
            }
        })
        .collect();
    (cases, checks)
}

fn pair_fixture_check(f: &PairFixture, prop: PairProp) -> Check {
    Check {
        source: "fixture",
        case: f.name.clone(),
        trial: None,
        input: serde_json::json!({ "x": f.x, "y": f.y }),
        outcome: prop(&f.x, &f.y, 201),
        detail: String::new(),
    }
}

fn tuple_fixture_check(f: &TupleFixture, prop: TupleProp, cfg: &VerifyConfig) -> Check {
    Check {
        source: "fixture",
        case: f.name.clone(),
        trial: None,
        input: serde_json::to_value(&f.tuple).expect("tuple serializes"),
        outcome: prop(&f.tuple, cfg.grid),
        detail: String::new(),
    }
}

fn missing_flags(expected: &[String], got: &[String]) -> Outcome {
    let missing: Vec<&String> = expected.iter().filter(|f| !got.contains(f)).collect();
    if missing.is_empty() {
        Ok(0.0)
    } else {
        Err(format!("missing flags {missing:?}, got {got:?}"))
    }
}

fn pair_flag_check(f: &PairFixture) -> Check {
    let outcome = plan_pair(&f.x, &f.y)
        .map_err(|e| e.to_string())
        .and_then(|p| missing_flags(&f.expect_flags, &p.metadata.flags));
    Check {
        source: "fixture",
        case: format!("{} flags", f.name),
        trial: None,
        input: serde_json::json!({ "x": f.x, "y": f.y }),
        outcome,
        detail: String::new(),
    }
}

fn tuple_flag_check(f: &TupleFixture) -> Check {
    let outcome = plan_any(&f.tuple)
        .map_err(|e| e.to_string())
        .and_then(|p| missing_flags(&f.expect_flags, &p.metadata.flags));
    Check {
        source: "fixture",
        case: format!("{} flags", f.name),
        trial: None,
        input: serde_json::to_value(&f.tuple).expect("tuple serializes"),
        outcome,
        detail: String::new(),
    }
}

/// Odd lengths go to the waypoint planner, even lengths through the basepoint adapter.
pub fn plan_any(w: &WaypointTuple) -> Result<Plan, PlanError> {
    if w.len() % 2 == 1 {
        plan_tuple(w)
    } else {
        plan_tuple_even(w, None)
    }
}

fn grid_points(grid: usize) -> impl Iterator<Item = f64> {
    let last = (grid.max(2) - 1) as f64;
    (0..grid.max(2)).map(move |k| k as f64 / last)
}

fn err(e: PlanError) -> String {
    e.to_string()
}

fn equivariance(fwd: &Plan, bwd: &Plan, grid: usize) -> f64 {
    max_deviation(
        |t| bwd.path.evaluate(t).expect("t in range"),
        |t| fwd.path.evaluate(1.0 - t).expect("t in range"),
        grid,
    )
}

fn pair_equivariance(x: &UnitPoint, y: &UnitPoint, grid: usize) -> Outcome {
    let fwd = plan_pair(x, y).map_err(err)?;
    let bwd = plan_pair(y, x).map_err(err)?;
    Ok(equivariance(&fwd, &bwd, grid))
}

fn pair_endpoints(x: &UnitPoint, y: &UnitPoint, _grid: usize) -> Outcome {
    let p = plan_pair(x, y).map_err(err)?;
    Ok(p.waypoint_deviation(&[x.clone(), y.clone()]))
}

fn tuple_equivariance(w: &WaypointTuple, grid: usize) -> Outcome {
    let fwd = plan_any(w).map_err(err)?;
    let bwd = plan_any(&w.reversal()).map_err(err)?;
    Ok(equivariance(&fwd, &bwd, grid))
}

fn tuple_waypoints(w: &WaypointTuple, _grid: usize) -> Outcome {
    let p = plan_any(w).map_err(err)?;
    Ok(p.waypoint_deviation(w.points()))
}

fn pair_domain_symmetry(x: &UnitPoint, y: &UnitPoint, _grid: usize) -> Outcome {
    let a = classify_pair(x, y).map_err(err)?;
    let b = classify_pair(y, x).map_err(err)?;
    if a.tag != b.tag {
        return Err(format!("domain {} for (x, y) but {} for (y, x)", a.tag, b.tag));
    }
    Ok((a.margin - b.margin).abs())
}

fn tuple_domain_symmetry(w: &WaypointTuple, _grid: usize) -> Outcome {
    if w.len() % 2 == 0 {
        // the adapter classifies the padded odd tuple; check that instead
        let p = plan_any(w).map_err(err)?;
        let q = plan_any(&w.reversal()).map_err(err)?;
        return if p.metadata.domain == q.metadata.domain {
            Ok(0.0)
        } else {
            Err(format!("domain {} vs {} after reversal", p.metadata.domain, q.metadata.domain))
        };
    }
    let a = classify_tuple(w).map_err(err)?;
    let b = classify_tuple(&w.reversal()).map_err(err)?;
    let mirrored: Vec<_> = a.rules.iter().rev().map(|r| r.reversal_partner()).collect();
    if a.j != b.j || mirrored != b.rules {
        return Err(format!("rules {:?} vs reversed {:?}", a.rules, b.rules));
    }
    Ok(0.0)
}

fn membership(p: &Plan, grid: usize) -> f64 {
    grid_points(grid)
        .map(|t| p.path.evaluate(t).expect("t in range").norm_deviation())
        .fold(0.0, f64::max)
}

fn pair_membership(x: &UnitPoint, y: &UnitPoint, grid: usize) -> Outcome {
    Ok(membership(&plan_pair(x, y).map_err(err)?, grid))
}

fn tuple_membership(w: &WaypointTuple, grid: usize) -> Outcome {
    Ok(membership(&plan_any(w).map_err(err)?, grid))
}

fn continuity(p: &Plan) -> f64 {
    let gaps = p.path.join_gaps().into_iter().fold(0.0, f64::max);
    // endpoints of the whole path against its first and last segments
    let segs = p.path.segments();
    let start = max_abs_diff(&p.path.evaluate(0.0).expect("in range"), &segs[0].eval(0.0));
    let end = max_abs_diff(
        &p.path.evaluate(1.0).expect("in range"),
        &segs[segs.len() - 1].eval(1.0),
    );
    gaps.max(start).max(end)
}

fn pair_continuity(x: &UnitPoint, y: &UnitPoint, _grid: usize) -> Outcome {
    Ok(continuity(&plan_pair(x, y).map_err(err)?))
}

fn tuple_continuity(w: &WaypointTuple, _grid: usize) -> Outcome {
    Ok(continuity(&plan_any(w).map_err(err)?))
}

/// Rings checked by `ring_axioms`: spheres, projective spaces, and their symmetric squares.
fn ring_checks() -> Vec<Check> {
    let mut rings: Vec<GradedRing> = Vec::new();
    for m in 1..=5 {
        rings.push(ring_of_sphere(m).expect("m >= 1"));
    }
    for m in 1..=6 {
        rings.push(ring_of_rp(m).expect("m >= 1"));
    }
    let squares: Vec<GradedRing> = rings
        .iter()
        .map(|r| nakaoka_sp2(r).expect("base rings carry squares"))
        .collect();
    rings.extend(squares);
    rings
        .par_iter()
        .map(|r| {
            let full = r.dim() <= 40;
            Check {
                source: "ring",
                case: r.name().to_string(),
                trial: None,
                input: serde_json::json!({ "ring": r.name(), "full_associativity": full }),
                outcome: r.check_axioms(full).map(|_| 0.0).map_err(|e| e.to_string()),
                detail: String::new(),
            }
        })
        .collect()
}
