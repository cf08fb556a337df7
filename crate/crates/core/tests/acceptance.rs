use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relnorm::dsl::SurfaceSpec;
use relnorm::harness::{
    catalog, fd_oracle, find, resolve_support, run_pair_suite, run_suite, IdentityReport, SampleConfig,
};
use relnorm::relative::PairRelation;

const FAMILY: [&str; 4] = ["euclidean", "manhart", "scaled", "generic"];
const SECOND_SUPPORT: &str = "0.8*(1 + exp(0.2*u1 - 0.1*u2)) + 0.7*abs(K)^(1/4)";
const TCHEBYCHEV_ROUTES: [&str; 3] =
    ["tchebychev_darboux_closed", "tchebychev_darboux_decomposition", "tchebychev_closed_decomposition"];

struct Ledger {
    failed: Vec<String>,
}

impl Ledger {
    fn record(&mut self, id: &str, ok: bool, detail: String) {
        let line = format!("{} {id}: {detail}\n", if ok { "PASS" } else { "FAIL" });
        let _ = std::io::stdout().write_all(line.as_bytes());
        if !ok {
            self.failed.push(id.to_string());
        }
    }
}

fn config(workers: usize) -> SampleConfig {
    SampleConfig { sample_count: 200, workers, ..SampleConfig::default() }
}

fn suite(name: &str, label: &str) -> IdentityReport {
    let spec = find(name).unwrap();
    run_suite(&spec, label, &config(0)).unwrap_or_else(|e| panic!("{name}/{label}: {e}"))
}

fn pair_report() -> IdentityReport {
    let spec = find("ellipsoid").unwrap();
    let relation = PairRelation::Affine { alpha: 0.8, mu: 0.7 };
    run_pair_suite(&spec, "generic", SECOND_SUPPORT, relation, &config(0)).unwrap()
}

fn max_of(report: &IdentityReport, names: &[&str]) -> f64 {
    names
        .iter()
        .map(|n| report.identity(n).unwrap_or_else(|| panic!("{} lacks {n}", report.q_label)).max_residual)
        .fold(0.0, f64::max)
}

/// Largest residual over all identities, with the worst identity name.
fn worst(report: &IdentityReport) -> (f64, String) {
    report
        .identities
        .iter()
        .map(|i| (i.max_residual, format!("{}/{}: {}", report.spec, report.q_label, i.name)))
        .fold((0.0, String::new()), |a, b| if b.0 > a.0 || b.0.is_nan() { b } else { a })
}

fn suite_ok(reports: &[IdentityReport], tol: f64) -> (bool, String) {
    let mut max = (0.0, String::new());
    let mut clean = true;
    for r in reports {
        let w = worst(r);
        if w.0 > max.0 || w.0.is_nan() {
            max = w;
        }
        clean &= r.identities.iter().all(|i| i.accepted > 0 && i.skip_count("non-finite residual") == 0);
    }
    (max.0 <= tol && clean, format!("max residual {:.2e} ({}) over {} reports", max.0, max.1, reports.len()))
}

fn oracle_points(spec: &SurfaceSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..10)
        .map(|_| {
            spec.domain
                .iter()
                .map(|(a, b)| {
                    let pad = 0.05 * (b - a);
                    rng.gen_range(a + pad..b - pad)
                })
                .collect()
        })
        .collect()
}

#[test]
fn acceptance() {
    let mut ledger = Ledger { failed: Vec::new() };

    // 1
    let start = Instant::now();
    let equiaffine = suite("ellipsoid", "affine");
    let elapsed = start.elapsed();
    let routes = max_of(&equiaffine, &["equiaffine_tchebychev_zero"]);
    ledger.record(
        "equiaffine_vanishing",
        routes <= 1e-7 && elapsed < Duration::from_secs(5),
        format!("max |T| over three routes {routes:.2e} (tol 1e-7), {:.2} s", elapsed.as_secs_f64()),
    );

    // 2
    let planar: Vec<IdentityReport> = ["sphere", "ellipsoid", "elliptic_paraboloid", "hyperbolic_paraboloid"]
        .iter()
        .flat_map(|s| FAMILY.iter().map(move |q| suite(s, q)))
        .collect();
    let (ok, detail) = suite_ok(&planar, 1e-7);
    ledger.record("identity_suite_n2", ok, detail);

    // 3
    let mut spatial: Vec<IdentityReport> = FAMILY.iter().map(|q| suite("ellipsoid4", q)).collect();
    let inverse = suite("ellipsoid4", "inverse");
    let linear = suite("ellipsoid4", "linear");
    let p1 = max_of(&inverse, &["laplace_x_pairing_zero"]);
    let p2 = max_of(&linear, &["laplace_xi_pairing_zero"]);
    spatial.push(inverse);
    spatial.push(linear);
    let (ok, detail) = suite_ok(&spatial, 1e-7);
    ledger.record(
        "identity_suite_n3",
        ok && p1 <= 1e-7 && p2 <= 1e-7,
        format!("{detail}; max |<lap x, xi_i>| {p1:.2e}, max |<lap xi, x_i>| {p2:.2e}"),
    );

    // 4
    let runs: Vec<&IdentityReport> = std::iter::once(&equiaffine).chain(&planar).chain(&spatial).collect();
    let route_max = runs.iter().map(|r| max_of(r, &TCHEBYCHEV_ROUTES)).fold(0.0, f64::max);
    let symmetry = runs.iter().map(|r| max_of(r, &["darboux_symmetry"])).fold(0.0, f64::max);
    ledger.record(
        "darboux_cross_validation",
        route_max <= 1e-8 && symmetry <= 1e-8,
        format!("route difference {route_max:.2e}, symmetry defect {symmetry:.2e} (tol 1e-8) over {} runs", runs.len()),
    );

    // 5
    let pair = pair_report();
    let relations = max_of(
        &pair,
        &["affine_tchebychev", "affine_mean_curvature", "affine_laplace_x", "affine_relative_normal"],
    );
    let inner = max_of(&pair, &["pair_inner_product"]);
    let invariance = max_of(&pair, &["invariance_laplace_x", "invariance_laplace_xi"]);
    let (all_ok, all_detail) = suite_ok(std::slice::from_ref(&pair), 1e-7);
    ledger.record(
        "two_normalizations",
        relations <= 1e-7 && inner <= 1e-8 && invariance <= 1e-7 && all_ok,
        format!("relations {relations:.2e}, inner product {inner:.2e}, invariance {invariance:.2e}; {all_detail}"),
    );

    // 6
    let all_runs: Vec<&IdentityReport> = runs.iter().copied().chain(std::iter::once(&pair)).collect();
    let independence = all_runs
        .iter()
        .flat_map(|r| r.identities.iter().filter(|i| i.name.starts_with("normalization_independence")))
        .map(|i| i.max_residual)
        .fold(0.0, f64::max);
    let covered = all_runs.iter().all(|r| r.identity("normalization_independence").is_some()
        || r.identity("normalization_independence_1").is_some());
    ledger.record(
        "normalization_independence",
        independence <= 1e-8 && covered,
        format!("max residual {independence:.2e} (tol 1e-8) over {} runs", all_runs.len()),
    );

    // 7
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut oracle_max = (0.0, String::new());
    let mut oracle_count = 0;
    for spec in catalog() {
        let labels: Vec<String> = spec.labels().map(String::from).collect();
        for point in oracle_points(&spec, &mut rng) {
            for label in &labels {
                let q = resolve_support(&spec, label).unwrap();
                let r = fd_oracle(&spec, &q, &point, 1e-5).unwrap();
                oracle_count += 1;
                if r.max_delta() > oracle_max.0 || r.max_delta().is_nan() {
                    oracle_max = (r.max_delta(), format!("{} {label} at {point:?}", spec.name));
                }
            }
        }
    }
    ledger.record(
        "oracle_agreement",
        oracle_max.0 <= 1e-5,
        format!("max relative delta {:.2e} ({}) over {oracle_count} evaluations", oracle_max.0, oracle_max.1),
    );

    // 8
    let spec = find("ellipsoid").unwrap();
    let a = run_suite(&spec, "affine", &config(0)).unwrap().to_json();
    let b = run_suite(&spec, "affine", &config(0)).unwrap().to_json();
    let one = run_suite(&spec, "affine", &config(1)).unwrap().to_json();
    let eight = run_suite(&spec, "affine", &config(8)).unwrap().to_json();
    ledger.record(
        "determinism",
        a == b && one == eight && a == one,
        format!("repeat identical {}, 1 vs 8 workers identical {}", a == b, one == eight),
    );

    // 9
    let missing: Vec<String> = all_runs
        .iter()
        .filter(|r| r.diagnostic("mean_curvature_formula_difference").is_none())
        .map(|r| format!("{}/{}", r.spec, r.q_label))
        .collect();
    let largest = all_runs
        .iter()
        .filter_map(|r| r.diagnostic("mean_curvature_formula_difference"))
        .map(|d| d.value_summary.max_abs)
        .fold(0.0, f64::max);
    ledger.record(
        "mean_curvature_diagnostic",
        missing.is_empty(),
        format!("present in {}/{} reports, largest max |diff| {largest:.2e}", all_runs.len() - missing.len(), all_runs.len()),
    );

    assert!(ledger.failed.is_empty(), "failed criteria: {:?}", ledger.failed);
}
