//! Sampling, suite execution and reporting.

mod catalog;
mod oracle;
mod report;

pub use catalog::{catalog, find, sphere};
pub use oracle::{fd_oracle, MarginError, OracleReport};
pub use report::{
    emit_report, ConfigEcho, DiagnosticStats, IdentityReport, IdentityStats, ReportFormat, SkipCount, ValueSummary,
    NON_FINITE, NOT_APPLICABLE,
};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dsl::{parse_expr, Expr, SpecError, SurfaceSpec};
use crate::euclid::{frame_at, EuclideanFrame, GeometryError, Thresholds};
use crate::jet::{eval_expr_jet, seed_point, Jet, MapJet};
use crate::relative::{
    euclidean_checks, manhart_checks, relative_at, relative_checks, two_normalizations, PairRelation,
};
use crate::residual::{Check, Diagnostic};

/// Jet order used for the immersion.
pub const JET_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub sample_count: usize,
    pub seed: u64,
    pub tol: f64,
    pub fd_step: f64,
    pub thresholds: Thresholds,
    /// Identity names to keep; `None` keeps all.
    pub checks: Option<Vec<String>>,
    /// Worker threads; 0 uses the rayon default, 1 runs sequentially.
    pub workers: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            sample_count: 200,
            seed: 0,
            tol: 1e-7,
            fd_step: 1e-5,
            thresholds: Thresholds::default(),
            checks: None,
            workers: 0,
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.sample_count < 1 {
            return Err(HarnessError::InvalidConfig("sample count must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(HarnessError::InvalidConfig("tol must be positive".into()));
        }
        if !(self.fd_step > 0.0) {
            return Err(HarnessError::InvalidConfig("fd_step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown support function `{0}`")]
    UnknownLabel(String),
    #[error("unknown identity `{0}`")]
    UnknownCheck(String),
    #[error("all {attempted} samples were skipped")]
    AllSamplesSkipped { attempted: usize },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error(transparent)]
    Margin(#[from] MarginError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Resolves a support function by label, falling back to parsing `text`
/// as an expression.
pub fn resolve_support(spec: &SurfaceSpec, text: &str) -> Result<Expr, HarnessError> {
    if let Some(e) = spec.support(text) {
        return Ok(e.clone());
    }
    let expr = parse_expr(text).map_err(|_| HarnessError::UnknownLabel(text.to_string()))?;
    if expr.max_var().is_some_and(|v| v >= spec.n) {
        return Err(HarnessError::UnknownLabel(text.to_string()));
    }
    Ok(expr)
}

/// Uniform samples in the domain box, drawn sequentially from a seeded
/// ChaCha8 stream.
pub fn sample_points(spec: &SurfaceSpec, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| spec.domain.iter().map(|&(a, b)| rng.gen_range(a..b)).collect())
        .collect()
}

/// Maps `f` over the points, in parallel when enabled and `workers != 1`.
/// Output order always matches input order.
pub fn map_points<T, F>(points: &[Vec<f64>], workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[f64]) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers != 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
        return pool.install(|| points.par_iter().map(|p| f(p)).collect());
    }
    let _ = workers;
    points.iter().map(|p| f(p)).collect()
}

/// Immersion jet of order [`JET_ORDER`] at `u`.
pub fn immersion_jet(spec: &SurfaceSpec, u: &[f64]) -> Result<(Vec<Jet>, MapJet), GeometryError> {
    let seeds = seed_point(u, JET_ORDER);
    let comps = spec
        .immersion
        .iter()
        .map(|e| eval_expr_jet(e, &seeds, None))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((seeds, MapJet::new(comps)))
}

/// Euclidean frame of `spec` at `u`.
pub fn frame_of(spec: &SurfaceSpec, u: &[f64], thresholds: &Thresholds) -> Result<(Vec<Jet>, EuclideanFrame), GeometryError> {
    let (seeds, x) = immersion_jet(spec, u)?;
    Ok((seeds, frame_at(&x, thresholds)?))
}

/// What to evaluate at each sample.
#[derive(Debug, Clone, PartialEq)]
pub enum Suite {
    Single { q: Expr },
    Pair { q1: Expr, q2: Expr, relation: PairRelation },
}

/// Checks and diagnostics at one accepted point.
#[derive(Debug, Clone, Default)]
pub struct PointResult {
    pub checks: Vec<Check>,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn evaluate_point(spec: &SurfaceSpec, suite: &Suite, u: &[f64], thresholds: &Thresholds) -> Result<PointResult, GeometryError> {
    let (seeds, frame) = frame_of(spec, u, thresholds)?;
    let mut out = PointResult { checks: euclidean_checks(&frame), diagnostics: Vec::new() };
    match suite {
        Suite::Single { q } => {
            let q_jet = eval_expr_jet(q, &seeds, Some(&frame.k_jet))?;
            let rel = relative_at(&frame, &q_jet, thresholds)?;
            out.checks.extend(relative_checks(&frame, &rel));
            if let Some((lambda, alpha)) = q.as_manhart() {
                out.checks.extend(manhart_checks(&frame, &rel, lambda, alpha, thresholds)?);
            }
            out.diagnostics = vec![
                Diagnostic { name: "tchebychev_norm", value: rel.tchebychev_darboux.norm() },
                Diagnostic {
                    name: "mean_curvature_formula_difference",
                    value: rel.mean_curvature - rel.mean_curvature_formula,
                },
                Diagnostic {
                    name: "mean_curvature_formula_half_coefficient_difference",
                    value: rel.mean_curvature - rel.mean_curvature_formula_alt,
                },
                Diagnostic {
                    name: "mean_curvature_reference_difference",
                    value: rel.mean_curvature - rel.mean_curvature_reference,
                },
            ];
        }
        Suite::Pair { q1, q2, relation } => {
            let q1_jet = eval_expr_jet(q1, &seeds, Some(&frame.k_jet))?;
            let q2_jet = eval_expr_jet(q2, &seeds, Some(&frame.k_jet))?;
            let report = two_normalizations(&frame, &q1_jet, &q2_jet, *relation, thresholds)?;
            out.checks.extend(report.checks);
            out.diagnostics = report.diagnostics;
        }
    }
    Ok(out)
}

/// Runs the single-normalization suite for the support function labelled
/// `q_label` (or given as an expression).
pub fn run_suite(spec: &SurfaceSpec, q_label: &str, config: &SampleConfig) -> Result<IdentityReport, HarnessError> {
    let q = resolve_support(spec, q_label)?;
    run(spec, q_label, &Suite::Single { q }, config)
}

/// Runs the two-normalization suite.
pub fn run_pair_suite(
    spec: &SurfaceSpec,
    q1_label: &str,
    q2_label: &str,
    relation: PairRelation,
    config: &SampleConfig,
) -> Result<IdentityReport, HarnessError> {
    let q1 = resolve_support(spec, q1_label)?;
    let q2 = resolve_support(spec, q2_label)?;
    run(spec, &format!("{q1_label} | {q2_label}"), &Suite::Pair { q1, q2, relation }, config)
}

/// Samples, evaluates and aggregates.
pub fn run(spec: &SurfaceSpec, q_label: &str, suite: &Suite, config: &SampleConfig) -> Result<IdentityReport, HarnessError> {
    config.validate()?;
    let points = sample_points(spec, config.sample_count, config.seed);
    let outcomes = map_points(&points, config.workers, |u| evaluate_point(spec, suite, u, &config.thresholds));
    aggregate(spec, q_label, config, &points, &outcomes)
}

fn aggregate(
    spec: &SurfaceSpec,
    q_label: &str,
    config: &SampleConfig,
    points: &[Vec<f64>],
    outcomes: &[Result<PointResult, GeometryError>],
) -> Result<IdentityReport, HarnessError> {
    let attempted = points.len();
    if outcomes.iter().all(|o| o.is_err()) {
        return Err(HarnessError::AllSamplesSkipped { attempted });
    }
    for (u, o) in points.iter().zip(outcomes) {
        if let Err(e) = o {
            log::debug!("skipping sample {u:?}: {e}");
        }
    }

    // identity names in order of first appearance
    let mut names: Vec<(&'static str, &'static str)> = Vec::new();
    let mut diag_names: Vec<&'static str> = Vec::new();
    for r in outcomes.iter().flatten() {
        for c in &r.checks {
            if !names.iter().any(|(n, _)| *n == c.name) {
                names.push((c.name, c.formula));
            }
        }
        for d in &r.diagnostics {
            if !diag_names.contains(&d.name) {
                diag_names.push(d.name);
            }
        }
    }
    if let Some(selected) = &config.checks {
        for s in selected {
            if !names.iter().any(|(n, _)| n == s) {
                return Err(HarnessError::UnknownCheck(s.clone()));
            }
        }
        names.retain(|(n, _)| selected.iter().any(|s| s == n));
    }

    let identities = names
        .iter()
        .map(|&(name, formula)| {
            let mut skipped: BTreeMap<&str, usize> = BTreeMap::new();
            let (mut accepted, mut sum, mut max) = (0usize, 0.0f64, 0.0f64);
            let mut worst_point = Vec::new();
            for (u, o) in points.iter().zip(outcomes) {
                let reason = match o {
                    Err(e) => e.reason(),
                    Ok(r) => match r.checks.iter().find(|c| c.name == name) {
                        None => NOT_APPLICABLE,
                        Some(c) if !c.residual.is_finite() => NON_FINITE,
                        Some(c) => {
                            accepted += 1;
                            sum += c.residual;
                            if c.residual > max || worst_point.is_empty() {
                                max = c.residual;
                                worst_point = u.clone();
                            }
                            continue;
                        }
                    },
                };
                *skipped.entry(reason).or_default() += 1;
            }
            IdentityStats {
                name: name.to_string(),
                eq: formula.to_string(),
                attempted,
                accepted,
                skipped: skipped.into_iter().map(|(reason, count)| SkipCount { reason: reason.to_string(), count }).collect(),
                max_residual: max,
                mean_residual: if accepted > 0 { sum / accepted as f64 } else { 0.0 },
                worst_point,
            }
        })
        .collect();

    let diagnostics = diag_names
        .iter()
        .map(|&name| {
            let (mut count, mut sum, mut max) = (0usize, 0.0f64, 0.0f64);
            for r in outcomes.iter().flatten() {
                if let Some(d) = r.diagnostics.iter().find(|d| d.name == name) {
                    if d.value.is_finite() {
                        count += 1;
                        sum += d.value.abs();
                        max = max.max(d.value.abs());
                    }
                }
            }
            DiagnosticStats {
                name: name.to_string(),
                value_summary: ValueSummary { max_abs: max, mean_abs: if count > 0 { sum / count as f64 } else { 0.0 } },
            }
        })
        .collect();

    Ok(IdentityReport {
        spec: spec.name.clone(),
        q_label: q_label.to_string(),
        n: spec.n,
        config: ConfigEcho {
            samples: config.sample_count,
            seed: config.seed,
            tol: config.tol,
            fd_step: config.fd_step,
        },
        identities,
        diagnostics,
    })
}
