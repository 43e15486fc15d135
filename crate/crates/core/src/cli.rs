//! The `tcb` command line: `plan`, `sp2`, `bounds` and `verify`.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 domain error,
//! 4 verification failure. Every failure writes one JSON object to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{explain, parse_space, BoundInterval, BoundsEngine, Flavor, SpaceSpec};
use crate::cohomology::{cup_length_with_witness, nakaoka_sp2};
use crate::geometry::UnitPoint;
use crate::planners::{plan_pair, Plan, WaypointTuple};
use crate::verify::{plan_any, run_all, run_suite_with, VerifyConfig, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Waypoints must be hit this closely before a plan is written.
const WAYPOINT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "tcb", version, about = "Bidirectional motion planning on spheres and topological complexity bounds")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan a path through waypoints on a sphere.
    Plan {
        /// Sphere, e.g. `S(3)`.
        #[arg(long)]
        space: String,
        /// Waypoint JSON: `{"m": 3, "points": [[...], ...]}` or a bare list of points.
        #[arg(long)]
        input: PathBuf,
        /// Write the full plan (path and metadata) as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a sampled polyline as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Cohomology of the symmetric square of a space.
    Sp2 {
        #[arg(long)]
        space: String,
        /// Print the basis elements whose product realizes the cup-length.
        #[arg(long)]
        witness: bool,
        /// Write the ring (basis, products, squares) as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Bounds on TC_n, TC^β_n and TC^Σ_n with derivations.
    Bounds {
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: usize,
        /// `tc`, `beta`, `sigma` or `all`.
        #[arg(long, default_value = "all")]
        flavor: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Seeded property suites for the planners and rings.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, env = "TCB_SEED", default_value_t = 42)]
        seed: u64,
        /// Write the report JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// A failure with its exit code and JSON body.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub body: Value,
}

impl CliError {
    fn new(code: i32, kind: &str, message: impl ToString) -> CliError {
        CliError {
            code,
            body: json!({ "error": kind, "message": message.to_string() }),
        }
    }

    fn usage(kind: &str, message: impl ToString) -> CliError {
        CliError::new(EXIT_USAGE, kind, message)
    }

    fn domain(kind: &str, message: impl ToString) -> CliError {
        CliError::new(EXIT_DOMAIN, kind, message)
    }

    fn with(mut self, key: &str, value: Value) -> CliError {
        self.body[key] = value;
        self
    }
}

type CmdResult = Result<i32, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let body = json!({ "error": "usage", "message": e.render().to_string().trim_end() });
            let _ = writeln!(err, "{body}");
            return EXIT_USAGE;
        }
    };
    match execute(&config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.body);
            e.code
        }
    }
}

pub fn execute(config: &CliConfig, out: &mut dyn Write) -> CmdResult {
    match &config.command {
        Command::Plan {
            space,
            input,
            out: path_out,
            csv,
            samples,
        } => cmd_plan(space, input, path_out.as_deref(), csv.as_deref(), *samples, out),
        Command::Sp2 {
            space,
            witness,
            dump,
            format,
        } => cmd_sp2(space, *witness, dump.as_deref(), *format, out),
        Command::Bounds {
            space,
            n,
            flavor,
            format,
        } => cmd_bounds(space, *n, flavor, *format, out),
        Command::Verify {
            suite,
            trials,
            seed,
            out: report_out,
        } => cmd_verify(suite, *trials, *seed, report_out.as_deref(), out),
    }
}

fn space_arg(text: &str) -> Result<SpaceSpec, CliError> {
    parse_space(text).map_err(|e| {
        CliError::usage("parse", &e)
            .with("position", json!(e.position))
            .with("expected", json!(e.expected))
    })
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::domain("io", format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError::domain("io", e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

/// Accepts `{"m": .., "points": [..]}` or a bare list of coordinate lists.
fn read_waypoints(path: &Path) -> Result<WaypointTuple, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::usage("input", format!("{}: {e}", path.display())))?;
    let parsed = if value.is_array() {
        serde_json::from_value::<Vec<UnitPoint>>(value)
            .map_err(|e| e.to_string())
            .and_then(|pts| WaypointTuple::new(pts).map_err(|e| e.to_string()))
    } else {
        serde_json::from_value::<WaypointTuple>(value).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| CliError::usage("input", format!("{}: {e}", path.display())))
}

pub fn cmd_plan(
    space: &str,
    input: &Path,
    path_out: Option<&Path>,
    csv: Option<&Path>,
    samples: usize,
    out: &mut dyn Write,
) -> CmdResult {
    let spec = space_arg(space)?;
    let SpaceSpec::Sphere(m) = spec else {
        return Err(CliError::usage("space", format!("plan needs a sphere S(m), got {spec}")));
    };
    let w = read_waypoints(input)?;
    if w.dim() != m {
        return Err(CliError::usage(
            "input",
            format!("waypoints lie on S^{} but the space is S({m})", w.dim()),
        ));
    }
    let planned: Result<Plan, _> = if w.len() == 2 {
        plan_pair(&w.points()[0], &w.points()[1])
    } else {
        plan_any(&w)
    };
    let plan = planned.map_err(|e| CliError::domain("planner", &e).with("n", json!(w.len())).with("m", json!(m)))?;
    let deviation = plan.waypoint_deviation(w.points());
    if !(deviation < WAYPOINT_TOLERANCE) {
        return Err(CliError::new(EXIT_VERIFY, "waypoints", "plan misses its waypoints")
            .with("deviation", json!(deviation)));
    }
    if let Some(p) = path_out {
        write_file(p, &to_json(&plan))?;
    }
    if let Some(p) = csv {
        let mut text = String::from("t");
        for k in 0..=m {
            text.push_str(&format!(",x{k}"));
        }
        text.push('\n');
        for (t, x) in plan.path.sample(samples.max(2)) {
            text.push_str(&format!("{t}"));
            for c in x.coords() {
                text.push_str(&format!(",{c}"));
            }
            text.push('\n');
        }
        write_file(p, &text)?;
    }
    let summary = json!({
        "domain": plan.metadata.domain,
        "rules": plan.metadata.rules,
        "flags": plan.metadata.flags,
        "segments": plan.path.segments().len(),
        "waypoint_times": plan.waypoint_times,
        "waypoint_deviation": deviation,
    });
    emit(out, &to_json(&summary))?;
    Ok(EXIT_OK)
}

pub fn cmd_sp2(
    space: &str,
    witness: bool,
    dump: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let spec = space_arg(space)?;
    let base = spec
        .ring()
        .ok_or_else(|| CliError::domain("ring", format!("no cohomology ring is built for {spec}")))?;
    let ring = nakaoka_sp2(&base).map_err(|e| CliError::domain("ring", e))?;
    let cl = cup_length_with_witness(&ring);
    let names: Vec<String> = cl.witness.iter().map(|&id| ring.label_name(id)).collect();
    if let Some(p) = dump {
        write_file(p, &to_json(&ring.dump()))?;
    }
    match format {
        Format::Json => {
            let mut v = json!({
                "space": spec.to_string(),
                "basis_size": ring.dim(),
                "poincare_polynomial": ring.poincare_polynomial(),
                "cup_length": cl.length,
            });
            if witness {
                v["witness"] = json!(names);
            }
            emit(out, &to_json(&v))?;
        }
        Format::Table => {
            let mut text = format!(
                "SP²({spec})\npoincare polynomial: {}\nbasis size: {}\ncup-length: {}",
                ring.poincare_polynomial(),
                ring.dim(),
                cl.length
            );
            if witness {
                text.push_str(&format!("\nwitness: {}", names.join(" · ")));
            }
            emit(out, &text)?;
        }
    }
    Ok(EXIT_OK)
}

fn flavors_arg(text: &str) -> Result<Vec<Flavor>, CliError> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(Flavor::ALL.to_vec());
    }
    text.parse::<Flavor>()
        .map(|f| vec![f])
        .map_err(|e| CliError::usage("flavor", e))
}

fn interval_json(b: &BoundInterval) -> Value {
    json!({
        "space": b.space.to_string(),
        "flavor": b.flavor.to_string(),
        "n": b.n,
        "lower": b.lower,
        "upper": b.upper,
        "exact": b.is_exact(),
        "derivations": b.derivations.iter().map(|d| json!({
            "rule": d.rule,
            "target": d.target,
            "side": d.side,
            "value": d.value,
            "inputs": d.inputs,
            "citation": d.citation,
        })).collect::<Vec<_>>(),
        "skipped": b.skipped,
    })
}

pub fn cmd_bounds(space: &str, n: usize, flavor: &str, format: Format, out: &mut dyn Write) -> CmdResult {
    let spec = space_arg(space)?;
    let flavors = flavors_arg(flavor)?;
    let engine = BoundsEngine::new();
    let all = engine.compute_all(&spec, n).map_err(|e| {
        let code = match e {
            crate::bounds::BoundsError::InvalidN(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        CliError::new(code, "bounds", e)
    })?;
    let chosen: Vec<&BoundInterval> = all.iter().filter(|b| flavors.contains(&b.flavor)).collect();
    match format {
        Format::Json => {
            let v: Vec<Value> = chosen.iter().map(|b| interval_json(b)).collect();
            let v = if v.len() == 1 { v.into_iter().next().expect("one") } else { Value::Array(v) };
            emit(out, &to_json(&v))?;
        }
        Format::Table => {
            let text: Vec<String> = chosen.iter().map(|b| explain(b)).collect();
            emit(out, &text.join("\n"))?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(
    suite: &str,
    trials: usize,
    seed: u64,
    report_out: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let cfg = VerifyConfig::new(trials, seed);
    let reports = if suite == "all" {
        run_all(&cfg)
    } else {
        vec![run_suite_with(suite, &cfg)
            .map_err(|e| CliError::usage("suite", e).with("known", json!(SUITES)))?]
    };
    let passed = reports.iter().all(|r| r.passed());
    let doc = json!({ "seed": seed, "trials": trials, "passed": passed, "reports": reports });
    match report_out {
        Some(p) => {
            write_file(p, &to_json(&doc))?;
            let lines: Vec<String> = reports
                .iter()
                .map(|r| {
                    format!(
                        "{:<20} {} max_deviation={:.3e} failures={}",
                        r.suite,
                        if r.passed() { "ok  " } else { "FAIL" },
                        r.max_deviation,
                        r.failure_count
                    )
                })
                .collect();
            emit(out, &lines.join("\n"))?;
        }
        None => emit(out, &to_json(&doc))?,
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
}
