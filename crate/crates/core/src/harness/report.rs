use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub fd_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipCount {
    pub reason: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityStats {
    pub name: String,
    /// Statement of the identity.
    pub eq: String,
    pub attempted: usize,
    pub accepted: usize,
    pub skipped: Vec<SkipCount>,
    pub max_residual: f64,
    pub mean_residual: f64,
    /// Parameter point of the largest residual (empty if nothing accepted).
    pub worst_point: Vec<f64>,
}

impl IdentityStats {
    pub fn skipped_total(&self) -> usize {
        self.skipped.iter().map(|s| s.count).sum()
    }

    pub fn skip_count(&self, reason: &str) -> usize {
        self.skipped.iter().filter(|s| s.reason == reason).map(|s| s.count).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueSummary {
    pub max_abs: f64,
    pub mean_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticStats {
    pub name: String,
    pub value_summary: ValueSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub spec: String,
    pub q_label: String,
    pub n: usize,
    pub config: ConfigEcho,
    pub identities: Vec<IdentityStats>,
    pub diagnostics: Vec<DiagnosticStats>,
}

/// Skip reason recorded for a residual that evaluated to NaN or infinity.
pub const NON_FINITE: &str = "non-finite residual";
/// Skip reason for points where an identity does not apply.
pub const NOT_APPLICABLE: &str = "not applicable";

impl IdentityReport {
    pub fn identity(&self, name: &str) -> Option<&IdentityStats> {
        self.identities.iter().find(|i| i.name == name)
    }

    pub fn diagnostic(&self, name: &str) -> Option<&DiagnosticStats> {
        self.diagnostics.iter().find(|d| d.name == name)
    }

    /// Identities whose max residual exceeds `tol` or that produced a
    /// non-finite residual.
    pub fn violations(&self, tol: f64) -> Vec<&IdentityStats> {
        self.identities
            .iter()
            .filter(|i| !(i.max_residual <= tol) || i.skip_count(NON_FINITE) > 0)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.violations(self.config.tol).is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut rows: Vec<&IdentityStats> = self.identities.iter().collect();
        rows.sort_by(|a, b| b.max_residual.total_cmp(&a.max_residual).then_with(|| a.name.cmp(&b.name)));
        let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(8).max(8);
        let mut out = String::new();
        let _ = writeln!(out, "spec {} | q {} | n = {}", self.spec, self.q_label, self.n);
        let _ = writeln!(
            out,
            "samples {} | seed {} | tol {:e} | fd_step {:e}",
            self.config.samples, self.config.seed, self.config.tol, self.config.fd_step
        );
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>9}  {:>12}  {:>12}  statement",
            "identity", "status", "accepted", "max", "mean"
        );
        for r in rows {
            let ok = r.max_residual <= self.config.tol && r.skip_count(NON_FINITE) == 0;
            let _ = writeln!(
                out,
                "{:<width$}  {:>6}  {:>9}  {:>12.3e}  {:>12.3e}  {}",
                r.name,
                if ok { "ok" } else { "FAIL" },
                format!("{}/{}", r.accepted, r.attempted),
                r.max_residual,
                r.mean_residual,
                r.eq
            );
        }
        if !self.diagnostics.is_empty() {
            let dw = self.diagnostics.iter().map(|d| d.name.len()).max().unwrap_or(8).max(10);
            let _ = writeln!(out);
            let _ = writeln!(out, "{:<dw$}  {:>12}  {:>12}", "diagnostic", "max |v|", "mean |v|");
            for d in &self.diagnostics {
                let _ = writeln!(
                    out,
                    "{:<dw$}  {:>12.3e}  {:>12.3e}",
                    d.name, d.value_summary.max_abs, d.value_summary.mean_abs
                );
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

/// Writes the report to `path`.
pub fn emit_report(report: &IdentityReport, format: ReportFormat, path: &Path) -> io::Result<()> {
    let body = match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Text => report.to_text(),
    };
    std::fs::write(path, body)
}
