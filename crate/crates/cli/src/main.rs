use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cremona::bundles::{fixed_curve_class, halphen_check, is_del_pezzo_bundle};
use cremona::classifier::{classify, link_feasibility, GSurfaceDescriptor};
use cremona::geometry::P1Point;
use cremona::picard::{enumerate_minus_one_classes, BlowupLattice, DivisorClass, LatticeAction};
use cremona::square_class::{delta_canonical_form, triplet_canonical_form, RamificationTriplet};
use cremona::{json as js, verify};
use log::{debug, info};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "cremona",
    version,
    about = "Classify maximal groups of birational maps of the plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a surface-with-group descriptor.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also report numerical obstructions to elementary links.
        #[arg(long)]
        links: bool,
    },
    /// Build a conic bundle model and report its invariants.
    Construct {
        kind: ConstructKind,
        #[command(flatten)]
        io: Io,
    },
    /// Picard lattice computations.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Möbius-canonical forms over Q.
    Canonical {
        kind: CanonicalKind,
        #[command(flatten)]
        io: Io,
    },
    /// Run the invariant suites.
    Verify {
        /// One of geometry, lattice, square_class, bundles, classifier or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Io {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    FourLines,
    ThreeLinesConic,
    Z22,
    Exceptional,
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonicalKind {
    Triplet,
    Delta,
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Number of (−1)-classes on the blowup of r points.
    MinusOneCount {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Invariant sublattice and order of an action given as `{r, generators}`.
    InvariantRank {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Arithmetic genus of a class given by its coordinates in (L, E_1..E_r).
    Genus {
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Exit status of a run that produced a report.
enum Status {
    Ok,
    Indeterminate,
    Violation,
}

/// Marks an error as a broken internal invariant (exit 3).
#[derive(Debug)]
struct Internal(String);

impl std::fmt::Display for Internal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "internal invariant violated: {}", self.0)
    }
}

impl std::error::Error for Internal {}

fn core(e: impl Into<cremona::Error>) -> anyhow::Error {
    let e = e.into();
    if e.is_internal() {
        anyhow::Error::new(Internal(e.to_string()))
    } else {
        anyhow::Error::new(e)
    }
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "malformed JSON in {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })
}

fn write_report(v: &Value, output: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Wraps construction parameters into a descriptor so that all inputs share
/// one parser.
fn construction_descriptor(
    kind: ConstructKind,
    input: Value,
) -> anyhow::Result<GSurfaceDescriptor> {
    let with_kind = |mut v: Value, k: &str| -> anyhow::Result<Value> {
        let obj = v
            .as_object_mut()
            .ok_or_else(|| anyhow!("expected a JSON object"))?;
        obj.insert("kind".to_string(), json!(k));
        Ok(v)
    };
    let v = match kind {
        ConstructKind::FourLines => {
            json!({ "kind": "z22", "construction": with_kind(input, "four_lines")? })
        }
        ConstructKind::ThreeLinesConic => {
            json!({ "kind": "z22", "construction": with_kind(input, "three_lines_conic")? })
        }
        ConstructKind::Z22 => json!({ "kind": "z22", "triplet": input }),
        ConstructKind::Exceptional => with_kind(input, "exceptional")?,
    };
    GSurfaceDescriptor::from_json(&v).map_err(core)
}

fn construct(kind: ConstructKind, io: &Io) -> anyhow::Result<Status> {
    let d = construction_descriptor(kind, read_json(&io.input)?)?;
    let report = match &d {
        GSurfaceDescriptor::Z22(m) => {
            info!("built a (Z/2)²-conic bundle with {} singular fibers", m.k());
            let curves = (1..=3)
                .map(|i| fixed_curve_class(m, i).map(|c| c.to_json()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(core)?;
            let mut v = json!({
                "model": m.to_json(),
                "fixed_curves": curves,
                "del_pezzo": is_del_pezzo_bundle(m).to_json(),
            });
            if let Some(h) = halphen_check(m.triplet()) {
                v["halphen"] = h.to_json();
            }
            v
        }
        GSurfaceDescriptor::Exceptional(m) => {
            info!(
                "built an exceptional conic bundle with |Δ| = {}",
                m.delta().len()
            );
            let (plus, minus) = m.eigen_multiplicities().map_err(core)?;
            json!({
                "model": m.to_json(),
                "eigen_multiplicities": { "plus": plus, "minus": minus },
            })
        }
        _ => unreachable!("constructions produce conic bundles"),
    };
    write_report(&report, io.output.as_deref())?;
    Ok(Status::Ok)
}

fn run_classify(input: &Path, output: Option<&Path>, links: bool) -> anyhow::Result<Status> {
    let d = GSurfaceDescriptor::from_json(&read_json(input)?).map_err(core)?;
    let verdict = classify(&d).map_err(core)?;
    info!("{verdict}");
    let mut report = verdict.to_json();
    if links {
        let r = link_feasibility(&d).map_err(core)?;
        report = json!({ "verdict": report, "links": r.to_json() });
    }
    write_report(&report, output)?;
    Ok(if verdict.is_indeterminate() {
        Status::Indeterminate
    } else {
        Status::Ok
    })
}

fn lattice(cmd: &LatticeCommand) -> anyhow::Result<Status> {
    match cmd {
        LatticeCommand::MinusOneCount { r, output } => {
            let lat = BlowupLattice::new(*r).map_err(core)?;
            let n = enumerate_minus_one_classes(&lat).map_err(core)?.len();
            write_report(&json!({ "r": r, "count": n }), output.as_deref())?;
        }
        LatticeCommand::InvariantRank { input, output } => {
            let action = LatticeAction::from_json(&read_json(input)?).map_err(core)?;
            let inv = action.invariant_sublattice().map_err(core)?;
            let order = action.order().map_err(core)?;
            debug!("group of order {order}");
            let mut v = inv.to_json();
            v["order"] = json!(order);
            write_report(&v, output.as_deref())?;
        }
        LatticeCommand::Genus { class, output } => {
            let raw: Value = serde_json::from_str(class)
                .map_err(|e| anyhow!("malformed class at column {}: {e}", e.column()))?;
            let d = DivisorClass::from_json(&raw).map_err(core)?;
            let r = d
                .len()
                .checked_sub(1)
                .ok_or_else(|| anyhow!("empty class"))?;
            let lat = BlowupLattice::new(r).map_err(core)?;
            let v = json!({
                "class": d.to_json(),
                "square": lat.square(&d).map_err(core)?,
                "K_degree": lat.intersect(&d, &lat.canonical()).map_err(core)?,
                "genus": lat.adjunction_genus(&d).map_err(core)?,
            });
            write_report(&v, output.as_deref())?;
        }
    }
    Ok(Status::Ok)
}

fn canonical(kind: CanonicalKind, io: &Io) -> anyhow::Result<Status> {
    let input = read_json(&io.input)?;
    let v = match kind {
        CanonicalKind::Triplet => {
            let t = RamificationTriplet::from_json(&input).map_err(core)?;
            let c = triplet_canonical_form(&t).map_err(core)?;
            json!({ "profile": c.profile(), "canonical": c.to_json() })
        }
        CanonicalKind::Delta => {
            let pts = js::array(&input)
                .map_err(core)?
                .iter()
                .enumerate()
                .map(|(i, p)| P1Point::from_json(p).with_context(|| format!("at [{i}]")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let c = delta_canonical_form(&pts).map_err(core)?;
            json!({ "canonical": c.iter().map(P1Point::to_json).collect::<Vec<_>>() })
        }
    };
    write_report(&v, io.output.as_deref())?;
    Ok(Status::Ok)
}

fn run_verify(suite: &str, output: Option<&Path>) -> anyhow::Result<Status> {
    let reports = if suite == "all" {
        verify::run_all()
    } else {
        vec![verify::run_suite(suite).ok_or_else(|| {
            anyhow!(
                "unknown suite {suite:?}; expected one of {} or all",
                verify::SUITES.join(", ")
            )
        })?]
    };
    let passed = reports.iter().all(|r| r.passed());
    for r in &reports {
        info!(
            "suite {}: {}",
            r.suite,
            if r.passed() { "passed" } else { "FAILED" }
        );
    }
    let suites: serde_json::Map<String, Value> = reports
        .iter()
        .map(|r| (r.suite.to_string(), r.to_json()))
        .collect();
    write_report(&json!({ "passed": passed, "suites": suites }), output)?;
    Ok(if passed {
        Status::Ok
    } else {
        Status::Violation
    })
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    match &cli.command {
        Command::Classify {
            input,
            output,
            links,
        } => run_classify(input, output.as_deref(), *links),
        Command::Construct { kind, io } => construct(*kind, io),
        Command::Lattice { command } => lattice(command),
        Command::Canonical { kind, io } => canonical(*kind, io),
        Command::Verify { suite, output } => run_verify(suite, output.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CREMONA_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Indeterminate) => ExitCode::from(2),
        Ok(Status::Violation) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Internal>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
