//! Scenario ingestion, batch verification over point grids, the lemma
//! suite, and report emission. This is the engine behind the CLI.

pub mod point;
pub mod report;

pub use point::{evaluate_immersion_point, evaluate_synthetic, EvalOptions};
pub use report::{
    CheckStatus, LemmaSummary, PointRecord, ReportDocument, Summary, SCHEMA,
};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ambient::AmbientModel;
use crate::chen::lemmas::{lemma1_check, lemma_identity_residual, LemmaKind};
use crate::chen::synthetic::SyntheticScenario;
use crate::dsl::parse;
use crate::error::{Error, Result};
use crate::gallery::{default_grid, gallery_chart, GalleryKey};
use crate::immersion::{ImmersionChart, SecondFundamentalForm};
use crate::numeric::grassmann::SearchBudget;
use crate::numeric::SymMat;
use crate::tol::Tolerances;

/// Hard cap on grid sizes (desk-scale guard).
pub const MAX_GRID_POINTS: usize = 100_000;

/// One coordinate axis of a grid specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Fixed(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Axis {
    fn stations(&self) -> Vec<f64> {
        match self {
            Axis::Fixed(v) => vec![*v],
            Axis::List(vs) => vs.clone(),
            Axis::Range { start, stop, count } => {
                if *count <= 1 {
                    vec![*start]
                } else {
                    (0..*count)
                        .map(|i| start + (stop - start) * i as f64 / (*count as f64 - 1.0))
                        .collect()
                }
            }
        }
    }
}

/// Evaluation points: an explicit list, a per-coordinate grid, or the
/// gallery default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsSpec {
    List { list: Vec<Vec<f64>> },
    Grid { grid: Vec<Axis> },
}

/// Chart payload: a gallery key or a custom parametrization.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChartSpec {
    Gallery {
        gallery: String,
    },
    Custom {
        n1: usize,
        n2: usize,
        variables: Vec<String>,
        components: Vec<String>,
        #[serde(default)]
        warp: Option<String>,
        domain: Vec<(f64, f64)>,
        /// Complex dimension of the flat target C^m.
        m: usize,
        #[serde(default)]
        fiber_curvature: Option<f64>,
    },
}

/// A scenario file (JSON): mode plus mode-specific payload, tolerance
/// overrides, sampling budget, and the seed for every sampled minimization.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScenarioMode {
    Immersion {
        chart: ChartSpec,
        #[serde(default)]
        points: Option<PointsSpec>,
    },
    Synthetic {
        synthetic: SyntheticScenario,
    },
    Lemmas {
        #[serde(default = "default_lemma_count")]
        count: usize,
    },
}

fn default_lemma_count() -> usize {
    10_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(flatten)]
    pub mode: ScenarioMode,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub budget: Option<SearchBudget>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        serde_json::from_str(text)
            .map_err(|e| Error::config("scenario", format!("invalid scenario JSON: {e}")))
    }

    pub fn gallery(key: GalleryKey, seed: u64) -> Scenario {
        Scenario {
            mode: ScenarioMode::Immersion {
                chart: ChartSpec::Gallery {
                    gallery: key.as_str().to_string(),
                },
                points: None,
            },
            tolerances: None,
            budget: None,
            seed: Some(seed),
        }
    }
}

fn build_chart(spec: &ChartSpec) -> Result<(ImmersionChart, String, Option<GalleryKey>)> {
    match spec {
        ChartSpec::Gallery { gallery } => {
            let key = GalleryKey::parse_key(gallery)?;
            Ok((gallery_chart(key)?, format!("gallery:{}", key.as_str()), Some(key)))
        }
        ChartSpec::Custom {
            n1,
            n2,
            variables,
            components,
            warp,
            domain,
            m,
            fiber_curvature,
        } => {
            let vars: Vec<&str> = variables.iter().map(|s| s.as_str()).collect();
            let comps = components
                .iter()
                .map(|src| parse(src, &vars))
                .collect::<Result<Vec<_>>>()?;
            let f_expr = warp
                .as_ref()
                .map(|src| parse(src, &vars[..*n1]))
                .transpose()?;
            let mut chart = ImmersionChart::new(
                *n1,
                *n2,
                variables.clone(),
                comps,
                f_expr,
                domain.clone(),
                AmbientModel::flat(*m),
            )?;
            if let Some(k) = fiber_curvature {
                chart = chart.with_fiber_curvature(*k);
            }
            Ok((chart, "custom-chart".to_string(), None))
        }
    }
}

fn expand_points(
    spec: &Option<PointsSpec>,
    gallery: Option<GalleryKey>,
    dim: usize,
) -> Result<Vec<Vec<f64>>> {
    let points = match spec {
        None => match gallery {
            Some(key) => default_grid(key),
            None => {
                return Err(Error::config(
                    "points",
                    "custom charts need an explicit point list or grid",
                ))
            }
        },
        Some(PointsSpec::List { list }) => list.clone(),
        Some(PointsSpec::Grid { grid }) => {
            if grid.len() != dim {
                return Err(Error::config(
                    "points.grid",
                    format!("expected {dim} axes, got {}", grid.len()),
                ));
            }
            let stations: Vec<Vec<f64>> = grid.iter().map(Axis::stations).collect();
            let total: usize = stations.iter().map(Vec::len).product();
            if total > MAX_GRID_POINTS {
                return Err(Error::config(
                    "points.grid",
                    format!("grid size {total} exceeds the cap of {MAX_GRID_POINTS}"),
                ));
            }
            let mut out = Vec::with_capacity(total);
            let mut idx = vec![0usize; dim];
            'outer: loop {
                out.push(
                    idx.iter()
                        .enumerate()
                        .map(|(axis, &i)| stations[axis][i])
                        .collect(),
                );
                // Odometer increment, last axis fastest.
                for axis in (0..dim).rev() {
                    idx[axis] += 1;
                    if idx[axis] < stations[axis].len() {
                        continue 'outer;
                    }
                    idx[axis] = 0;
                }
                break;
            }
            out
        }
    };
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::config(
                format!("points[{i}]"),
                format!("expected {dim} coordinates, got {}", p.len()),
            ));
        }
    }
    if points.is_empty() {
        return Err(Error::config("points", "no evaluation points"));
    }
    if points.len() > MAX_GRID_POINTS {
        return Err(Error::config(
            "points",
            format!("point list exceeds the cap of {MAX_GRID_POINTS}"),
        ));
    }
    Ok(points)
}

/// Runs a scenario end to end, producing the report document. The caller
/// maps `has_hard_failure` onto the process exit status.
pub fn run_scenario(scenario: &Scenario) -> Result<ReportDocument> {
    let tol = scenario.tolerances.unwrap_or_default();
    let budget = scenario.budget.unwrap_or_default();
    match &scenario.mode {
        ScenarioMode::Immersion { chart, points } => {
            let (chart, source, gallery) = build_chart(chart)?;
            let pts = expand_points(points, gallery, chart.dim())?;
            let seed = require_seed(scenario.seed, chart.n1.max(chart.n2) >= 3)?;
            let opts = EvalOptions { budget, seed, tol };
            let mut records = Vec::with_capacity(pts.len());
            for (index, p) in pts.iter().enumerate() {
                let rec = evaluate_immersion_point(&chart, p, index, &opts).map_err(|e| {
                    Error::config(format!("point[{index}] = {p:?}"), e.to_string())
                })?;
                records.push(rec);
            }
            Ok(ReportDocument {
                schema: SCHEMA,
                mode: "immersion".into(),
                source,
                seed,
                budget,
                tolerances: tol,
                records,
                lemmas: None,
                summary: empty_summary(),
            }
            .finalize())
        }
        ScenarioMode::Synthetic { synthetic } => {
            let compiled = synthetic.compile()?;
            let seed = require_seed(scenario.seed, compiled.h.n1.max(compiled.h.n2) >= 3)?;
            let opts = EvalOptions { budget, seed, tol };
            let rec = evaluate_synthetic(&compiled, 0, &opts)?;
            Ok(ReportDocument {
                schema: SCHEMA,
                mode: "synthetic".into(),
                source: "synthetic".into(),
                seed,
                budget,
                tolerances: tol,
                records: vec![rec],
                lemmas: None,
                summary: empty_summary(),
            }
            .finalize())
        }
        ScenarioMode::Lemmas { count } => {
            let seed = scenario.seed.unwrap_or(0);
            let lemmas = run_lemma_suite(seed, *count)?;
            Ok(ReportDocument {
                schema: SCHEMA,
                mode: "lemmas".into(),
                source: "lemma-suite".into(),
                seed,
                budget,
                tolerances: tol,
                records: Vec::new(),
                lemmas: Some(lemmas),
                summary: empty_summary(),
            }
            .finalize())
        }
    }
}

fn empty_summary() -> Summary {
    Summary {
        points: 0,
        passed: 0,
        boundary: 0,
        failed: 0,
        failing_checks: Vec::new(),
    }
}

fn require_seed(seed: Option<u64>, sampling_runs: bool) -> Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None if !sampling_runs => Ok(0),
        None => Err(Error::config(
            "seed",
            "a seed is mandatory when any sampled minimization runs (factor dimension >= 3)",
        )),
    }
}

/// Dimension profiles exercised by the rearrangement-identity sweep.
pub const LEMMA_PROFILES: [(usize, usize); 4] = [(2, 1), (2, 2), (4, 2), (4, 3)];

/// Generates `count` constrained instances of the product bound (plus an
/// equality family of the same size) and at least `count/10` random h per
/// dimension profile for the rearrangement identities; reports extreme
/// residuals. Deterministic for a fixed seed.
pub fn run_lemma_suite(seed: u64, count: usize) -> Result<LemmaSummary> {
    if count < 1 {
        return Err(Error::config("count", "lemma suite needs count >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_slack = f64::INFINITY;
    let mut max_constraint = 0.0f64;
    let mut violations = 0usize;
    for _ in 0..count {
        let n = rng.gen_range(2..=9);
        let alphas: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let sum: f64 = alphas.iter().sum();
        let sum_sq: f64 = alphas.iter().map(|a| a * a).sum();
        let beta = sum * sum / (n as f64 - 1.0) - sum_sq;
        let out = lemma1_check(&alphas, beta);
        min_slack = min_slack.min(out.slack);
        max_constraint = max_constraint.max(out.constraint_residual);
        if out.slack < -crate::tol::TOL_EXACT {
            violations += 1;
        }
    }
    // Equality family: α₁ + α₂ = α₃ = … = α_n by construction.
    let mut equality_detected = 0usize;
    let equality_total = count;
    for _ in 0..equality_total {
        let n = rng.gen_range(2..=9);
        let a1 = rng.gen_range(-2.0..2.0);
        let a2 = rng.gen_range(-2.0..2.0);
        let mut alphas = vec![a1, a2];
        let s = a1 + a2;
        alphas.resize(n, s);
        let sum: f64 = alphas.iter().sum();
        let sum_sq: f64 = alphas.iter().map(|a| a * a).sum();
        let beta = sum * sum / (n as f64 - 1.0) - sum_sq;
        let out = lemma1_check(&alphas, beta);
        if out.equality && out.slack.abs() <= 1e-10 {
            equality_detected += 1;
        }
    }
    if equality_detected != equality_total {
        violations += equality_total - equality_detected;
    }

    let h_count = (count / 10).max(100);
    let mut max2 = 0.0f64;
    let mut max3 = 0.0f64;
    for &(n1, n2) in &LEMMA_PROFILES {
        let n = n1 + n2;
        for _ in 0..h_count {
            let nd = rng.gen_range(1..=4);
            let slices: Vec<SymMat> = (0..nd)
                .map(|_| SymMat::from_fn(n, |_, _| rng.gen_range(-2.0..2.0)))
                .collect();
            let h = SecondFundamentalForm::new(n1, n2, slices)?;
            let r2 = lemma_identity_residual(LemmaKind::Lemma2, &h)?;
            let r3 = lemma_identity_residual(LemmaKind::Lemma3, &h)?;
            max2 = max2.max(r2);
            max3 = max3.max(r3);
            if r2 > crate::tol::TOL_EXACT || r3 > crate::tol::TOL_EXACT {
                violations += 1;
            }
        }
    }

    Ok(LemmaSummary {
        seed,
        count,
        lemma1_min_slack: min_slack,
        lemma1_max_constraint_residual: max_constraint,
        lemma1_equality_family_detected: equality_detected,
        lemma1_equality_family_total: equality_total,
        profiles: LEMMA_PROFILES.to_vec(),
        lemma2_max_residual: max2,
        lemma3_max_residual: max3,
        violations,
    })
}
