use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use relnorm::dsl::{parse_spec, SurfaceSpec};
use relnorm::euclid::Thresholds;
use relnorm::harness::{
    catalog, emit_report, fd_oracle, find, frame_of, resolve_support, run_pair_suite, run_suite, HarnessError,
    IdentityReport, ReportFormat, SampleConfig,
};
use relnorm::jet::eval_expr_jet;
use relnorm::relative::{oneform_pairings, relative_at, PairRelation};

#[derive(Parser)]
#[command(name = "relnorm", version, about = "Relative normalizations of parametric hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a surface and check every identity for one support function.
    Check(CheckArgs),
    /// Sample a surface and compare two support functions.
    Pair(PairArgs),
    /// Print one computed quantity at a single point as JSON.
    Eval(EvalArgs),
    /// List the built-in surfaces.
    Catalog,
    /// Compare finite differences with the jet pipeline at a point.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct SurfaceArgs {
    /// Spec file.
    #[arg(long, conflicts_with = "surface", required_unless_present = "surface")]
    spec: Option<PathBuf>,
    /// Built-in surface name.
    #[arg(long)]
    surface: Option<String>,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 1e-5)]
    fd_step: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Comma-separated identity names to keep.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Support function label or expression.
    #[arg(long, required_unless_present = "alpha", conflicts_with = "alpha")]
    q: Option<String>,
    /// Use q = |K|^alpha.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    None,
    Power,
    Affine,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    q1: String,
    #[arg(long)]
    q2: String,
    /// Declared relation between q1 and q2.
    #[arg(long, value_enum, default_value_t = Relation::None)]
    relation: Relation,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    mu: f64,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Tchebychev,
    Frame,
    Relative,
    Pairings,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    q: String,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    point: Vec<f64>,
    #[arg(long, value_enum)]
    quantity: Quantity,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Support function for the relative normal derivatives.
    #[arg(long, default_value = "euclidean")]
    q: String,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    point: Vec<f64>,
    #[arg(long, default_value_t = 1e-5)]
    fd_step: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum Failure {
    Usage(String),
    Violation,
    AllSkipped(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::AllSamplesSkipped { .. } => Failure::AllSkipped(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn load(args: &SurfaceArgs) -> Result<SurfaceSpec, Failure> {
    if let Some(name) = &args.surface {
        return find(name).ok_or_else(|| Failure::Usage(format!("unknown surface `{name}`")));
    }
    let path = args.spec.as_ref().expect("clap enforces spec or surface");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn config(s: &SamplingArgs) -> SampleConfig {
    SampleConfig {
        sample_count: s.samples,
        seed: s.seed,
        tol: s.tol,
        fd_step: s.fd_step,
        thresholds: Thresholds::default(),
        checks: s.checks.as_ref().map(|c| c.iter().filter(|n| !n.is_empty()).cloned().collect()),
        workers: s.workers,
    }
}

fn finish(report: &IdentityReport, s: &SamplingArgs) -> Result<(), Failure> {
    let format = match s.format {
        Format::Json => ReportFormat::Json,
        Format::Text => ReportFormat::Text,
    };
    match &s.report {
        Some(path) => emit_report(report, format, path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => match format {
            ReportFormat::Json => print!("{}", report.to_json()),
            ReportFormat::Text => print!("{}", report.to_text()),
        },
    }
    for v in report.violations(report.config.tol) {
        eprintln!("violation: {} max residual {:e}", v.name, v.max_residual);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn vec_json(v: &nalgebra::DVector<f64>) -> Value {
    json!(v.iter().collect::<Vec<_>>())
}

fn mat_json(m: &nalgebra::DMatrix<f64>) -> Value {
    json!((0..m.nrows()).map(|i| m.row(i).iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn eval(args: &EvalArgs) -> Result<Value, Failure> {
    let spec = load(&args.surface)?;
    if args.point.len() != spec.n {
        return Err(Failure::Usage(format!("point needs {} coordinates", spec.n)));
    }
    let q = resolve_support(&spec, &args.q)?;
    let thr = Thresholds::default();
    let geometry = |e: relnorm::euclid::GeometryError| Failure::Usage(e.to_string());
    let (seeds, frame) = frame_of(&spec, &args.point, &thr).map_err(geometry)?;
    let q_jet = eval_expr_jet(&q, &seeds, Some(&frame.k_jet)).map_err(|e| geometry(e.into()))?;
    let rel = relative_at(&frame, &q_jet, &thr).map_err(geometry)?;
    Ok(match args.quantity {
        Quantity::Frame => json!({
            "x": vec_json(&frame.x.value()),
            "xi": vec_json(&frame.xi),
            "g": mat_json(&frame.g.m),
            "h": mat_json(&frame.h.m),
            "e": mat_json(&frame.e.m),
            "curvature": frame.curvature(),
            "mean_curvature": frame.mean_curvature,
        }),
        Quantity::Relative => json!({
            "q": rel.q,
            "y": vec_json(&rel.y),
            "conormal": vec_json(&rel.conormal),
            "metric": mat_json(&rel.metric.m),
            "shape_operator": mat_json(&rel.shape),
            "mean_curvature": rel.mean_curvature,
            "mean_curvature_formula": rel.mean_curvature_formula,
            "darboux": rel.darboux,
            "phi": rel.phi,
            "laplace_x": vec_json(&rel.laplace_x),
            "laplace_xi": vec_json(&rel.laplace_xi),
        }),
        Quantity::Tchebychev => json!({
            "darboux": vec_json(&rel.tchebychev_darboux),
            "closed": vec_json(&rel.tchebychev_closed),
            "decomposition": vec_json(&rel.tchebychev_decomp),
            "euclidean": vec_json(&rel.tchebychev_euclidean),
            "q_field": vec_json(&rel.q_field),
        }),
        Quantity::Pairings => {
            let p = oneform_pairings(&rel, &frame);
            json!({
                "laplace_x_xi": p.p1,
                "laplace_xi_x": p.p2,
                "tchebychev_xi": p.p3,
                "residuals": {
                    "laplace_x": p.laplace_x,
                    "laplace_xi": p.laplace_xi,
                    "tchebychev": p.tchebychev,
                    "sum": p.sum,
                    "difference": p.difference,
                },
            })
        }
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check(args) => {
            let spec = load(&args.surface)?;
            let label = match (&args.q, args.alpha) {
                (Some(q), _) => q.clone(),
                (None, Some(a)) => format!("abs(K)^({a:?})"),
                (None, None) => unreachable!("clap requires q or alpha"),
            };
            let report = run_suite(&spec, &label, &config(&args.sampling))?;
            finish(&report, &args.sampling)
        }
        Command::Pair(args) => {
            let spec = load(&args.surface)?;
            let relation = match args.relation {
                Relation::None => PairRelation::None,
                Relation::Power => PairRelation::Power { lambda: args.lambda, alpha: args.alpha },
                Relation::Affine => PairRelation::Affine { alpha: args.alpha, mu: args.mu },
            };
            let report = run_pair_suite(&spec, &args.q1, &args.q2, relation, &config(&args.sampling))?;
            finish(&report, &args.sampling)
        }
        Command::Eval(args) => {
            println!("{}", serde_json::to_string_pretty(&eval(&args)?).expect("json"));
            Ok(())
        }
        Command::Catalog => {
            for spec in catalog() {
                let labels: Vec<&str> = spec.labels().collect();
                println!("{:<22} n = {}  q: {}", spec.name, spec.n, labels.join(", "));
            }
            Ok(())
        }
        Command::Oracle(args) => {
            let spec = load(&args.surface)?;
            let q = resolve_support(&spec, &args.q)?;
            let report = fd_oracle(&spec, &q, &args.point, args.fd_step)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::AllSkipped(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
