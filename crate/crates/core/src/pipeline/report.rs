//! Report documents: one record per evaluated point, a machine-readable JSON
//! rendering (schema `cr-warp-lab/1`), and an aligned plain-text table.

use serde::Serialize;

use crate::chen::{CorollaryCheck, EqualityClassification, Inequality, InequalityTwo};
use crate::numeric::SearchBudget;
use crate::tol::Tolerances;
use crate::warped::WarpData;

pub const SCHEMA: &str = "cr-warp-lab/1";

/// Every scalar the inequalities mention, evaluated at one point.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub n1: usize,
    pub n2: usize,
    pub n: usize,
    pub c: f64,
    pub tau_m: f64,
    pub tau_nt: f64,
    pub tau_nperp: f64,
    pub delta_hat_nt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_hat_nperp: Option<f64>,
    pub delta_nt_intrinsic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_nperp_intrinsic: Option<f64>,
    pub h_norm_sq: f64,
    pub h_mean_norm_sq: f64,
    /// n₂Δf/f, geometer's sign (Δ = −div grad).
    pub warp_term: f64,
    pub warp: WarpData,
    /// True infimum of ambient sectional curvature over planes of each
    /// factor subspace (closed form; c for a holomorphic 2-plane).
    pub kmin_nt: f64,
    pub kmin_nperp: f64,
    /// The coefficient the theorem's right side carries: min(c/4, c).
    pub kmin_nt_bound: f64,
    pub inequality_i: Inequality,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inequality_ii: Option<InequalityTwo>,
    pub theta_i: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_ii: Option<f64>,
    /// Θ for version (ii) is the index-mirrored construction.
    pub theta_ii_mirrored: bool,
    pub upsilon1: f64,
}

/// Residuals of the identities checked at the point.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ResidualReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fundamental_identity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warp_identity: Option<f64>,
    /// max over fiber planes of |Gauss-route K − Bishop–O'Neill K|.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bo_fiber: Option<f64>,
    /// |(Σ_a h⁰_aa)² − (n₁−1)(Υ₁ + ‖h‖²)|.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upsilon_closure: Option<f64>,
    /// |transfer-derived δ_{N_⊥} − closed-form δ of the constant-curvature
    /// fiber| (only when the fiber curvature is known).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_transfer: Option<f64>,
}

/// The slack decomposition of one inequality replayed term by term:
/// slack = Θ + defect + (K̃(π*) − K̃ bound) up to roundoff.
#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub version: &'static str,
    pub slack: f64,
    pub theta: f64,
    /// Defect of the algebraic-lemma application (half its raw slack).
    pub lemma1_defect: f64,
    pub lemma1_slack: f64,
    pub ktilde_pi_star: f64,
    pub ktilde_bound: f64,
    pub residual: f64,
}

/// Equality analysis of one inequality version at the point.
#[derive(Debug, Clone, Serialize)]
pub struct EqualityReport {
    pub version: &'static str,
    /// The infimum is attained on a plane with the ambient minimum value.
    pub e1_attained: bool,
    pub classification: EqualityClassification,
    /// E1 and the canonical structure together.
    pub equality: bool,
}

/// Minimality corollary margins plus the Ricci condition (flat ambient).
#[derive(Debug, Clone, Serialize)]
pub struct CorollaryReport {
    #[serde(flatten)]
    pub check: CorollaryCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ricci_max_eig: Option<f64>,
}

/// Closed-form versus sampled ambient plane minimum over a factor subspace.
#[derive(Debug, Clone, Serialize)]
pub struct KminReport {
    pub subspace: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    pub sampled: f64,
    pub provenance: &'static str,
    pub mismatch: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    /// Slack inside [−tol, 0): an equality case sitting on the boundary.
    Boundary,
    Fail,
}

/// One pass/fail line of the verification, with the measured value and the
/// threshold it was held against.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub status: CheckStatus,
}

impl CheckLine {
    /// Residual-style check: |value| must not exceed the threshold.
    pub fn residual(name: impl Into<String>, value: f64, threshold: f64) -> CheckLine {
        CheckLine {
            name: name.into(),
            value,
            threshold,
            status: if value.abs() <= threshold {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        }
    }

    /// Slack-style check: value must be ≥ 0, with a boundary band of width
    /// `tol` below zero counted as a boundary equality case, not a failure.
    pub fn slack(name: impl Into<String>, value: f64, tol: f64) -> CheckLine {
        let status = if value >= 0.0 {
            CheckStatus::Pass
        } else if value >= -tol {
            CheckStatus::Boundary
        } else {
            CheckStatus::Fail
        };
        CheckLine {
            name: name.into(),
            value,
            threshold: tol,
            status,
        }
    }

    /// Upper-bound check: value must be ≤ tol (minimality conditions).
    pub fn upper(name: impl Into<String>, value: f64, tol: f64) -> CheckLine {
        CheckLine {
            name: name.into(),
            value,
            threshold: tol,
            status: if value <= tol {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        }
    }
}

/// Everything evaluated at one point.
#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub point: Vec<f64>,
    /// Whether the CR structure tests passed at the point; when false only
    /// the metric-level identities are evaluated.
    pub cr: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cr_violation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantReport>,
    pub residuals: ResidualReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_i: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_ii: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equality_i: Option<EqualityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equality_ii: Option<EqualityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollaries: Option<CorollaryReport>,
    pub kmin: Vec<KminReport>,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckLine>,
}

impl PointRecord {
    pub fn worst_status(&self) -> CheckStatus {
        let mut worst = CheckStatus::Pass;
        for c in &self.checks {
            match c.status {
                CheckStatus::Fail => return CheckStatus::Fail,
                CheckStatus::Boundary => worst = CheckStatus::Boundary,
                CheckStatus::Pass => {}
            }
        }
        worst
    }
}

/// Outcome of the lemma suite.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaSummary {
    pub seed: u64,
    pub count: usize,
    pub lemma1_min_slack: f64,
    pub lemma1_max_constraint_residual: f64,
    pub lemma1_equality_family_detected: usize,
    pub lemma1_equality_family_total: usize,
    pub profiles: Vec<(usize, usize)>,
    pub lemma2_max_residual: f64,
    pub lemma3_max_residual: f64,
    pub violations: usize,
}

/// The full report document.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub mode: String,
    pub source: String,
    pub seed: u64,
    pub budget: SearchBudget,
    pub tolerances: Tolerances,
    pub records: Vec<PointRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaSummary>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub points: usize,
    pub passed: usize,
    pub boundary: usize,
    pub failed: usize,
    pub failing_checks: Vec<String>,
}

impl ReportDocument {
    pub fn finalize(mut self) -> Self {
        let mut passed = 0;
        let mut boundary = 0;
        let mut failed = 0;
        let mut failing = Vec::new();
        for rec in &self.records {
            match rec.worst_status() {
                CheckStatus::Pass => passed += 1,
                CheckStatus::Boundary => boundary += 1,
                CheckStatus::Fail => {
                    failed += 1;
                    for c in rec.checks.iter().filter(|c| c.status == CheckStatus::Fail) {
                        failing.push(format!("point {}: {} = {:e}", rec.index, c.name, c.value));
                    }
                }
            }
        }
        if let Some(lem) = &self.lemmas {
            if lem.violations > 0 {
                failed += lem.violations;
                failing.push(format!("lemma suite: {} violations", lem.violations));
            }
        }
        self.summary = Summary {
            points: self.records.len(),
            passed,
            boundary,
            failed,
            failing_checks: failing,
        };
        self
    }

    pub fn has_hard_failure(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Aligned plain-text table, one row per point.
    pub fn to_table(&self) -> String {
        let value = serde_json::to_value(self).expect("report serialization cannot fail");
        table_from_value(&value)
    }
}

/// Renders the table from the JSON form of a report, so saved reports can be
/// re-rendered without the typed document.
pub fn table_from_value(doc: &serde_json::Value) -> String {
    let s = |v: &serde_json::Value| v.as_str().unwrap_or("?").to_string();
    let num = |v: Option<&serde_json::Value>| v.and_then(serde_json::Value::as_f64);
    let mut out = String::new();
    out.push_str(&format!(
        "# {} | mode {} | source {} | seed {}\n",
        s(&doc["schema"]),
        s(&doc["mode"]),
        s(&doc["source"]),
        doc["seed"].as_u64().unwrap_or(0)
    ));
    let records = doc["records"].as_array().cloned().unwrap_or_default();
    if !records.is_empty() {
        out.push_str(&format!(
            "{:>4}  {:<24} {:>12} {:>12} {:>11} {:>11} {:>11} {:>6} {:>8}\n",
            "idx", "point", "slack_i", "slack_ii", "fund_res", "warp_res", "theta_i", "eq", "status"
        ));
    }
    for rec in &records {
        let point = rec["point"]
            .as_array()
            .map(|p| {
                p.iter()
                    .filter_map(serde_json::Value::as_f64)
                    .map(|x| format!("{x:.3}"))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .unwrap_or_default();
        let inv = &rec["invariants"];
        let fmt = |v: Option<f64>, w: usize| match v {
            Some(x) => format!("{x:>w$.5e}"),
            None => format!("{:>w$}", "-"),
        };
        let slack_i = fmt(num(inv.pointer("/inequality_i/slack")), 12);
        let slack_ii = fmt(num(inv.pointer("/inequality_ii/leafwise/slack")), 12);
        let fund = fmt(num(rec.pointer("/residuals/fundamental_identity")), 11);
        let warp = fmt(num(rec.pointer("/residuals/warp_identity")), 11);
        let theta = fmt(num(inv.pointer("/theta_i")), 11);
        let eq = match rec.pointer("/equality_i/equality").and_then(serde_json::Value::as_bool) {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        // Worst check status.
        let mut status = "pass";
        if let Some(checks) = rec["checks"].as_array() {
            for c in checks {
                match c["status"].as_str() {
                    Some("fail") => {
                        status = "FAIL";
                        break;
                    }
                    Some("boundary") if status == "pass" => status = "boundary",
                    _ => {}
                }
            }
        }
        out.push_str(&format!(
            "{:>4}  {:<24} {} {} {} {} {} {:>6} {:>8}\n",
            rec["index"].as_u64().unwrap_or(0),
            point,
            slack_i,
            slack_ii,
            fund,
            warp,
            theta,
            eq,
            status
        ));
    }
    if let Some(lem) = doc.get("lemmas").filter(|l| !l.is_null()) {
        out.push_str(&format!(
            "lemma suite: count {} | lemma1 min slack {:.3e} | lemma2 max {:.3e} | lemma3 max {:.3e} | equality family {}/{} | violations {}\n",
            lem["count"].as_u64().unwrap_or(0),
            num(lem.get("lemma1_min_slack")).unwrap_or(f64::NAN),
            num(lem.get("lemma2_max_residual")).unwrap_or(f64::NAN),
            num(lem.get("lemma3_max_residual")).unwrap_or(f64::NAN),
            lem["lemma1_equality_family_detected"].as_u64().unwrap_or(0),
            lem["lemma1_equality_family_total"].as_u64().unwrap_or(0),
            lem["violations"].as_u64().unwrap_or(0)
        ));
    }
    let sum = &doc["summary"];
    out.push_str(&format!(
        "summary: {} points | {} pass | {} boundary | {} fail\n",
        sum["points"].as_u64().unwrap_or(0),
        sum["passed"].as_u64().unwrap_or(0),
        sum["boundary"].as_u64().unwrap_or(0),
        sum["failed"].as_u64().unwrap_or(0)
    ));
    out
}
