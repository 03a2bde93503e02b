//! Command-line harness: scenario verification, gallery access, the lemma
//! suite, and report re-rendering.
//!
//! Exit status: 0 when every hard check passes (boundary equality cases
//! included), 1 on any hard failure, 2 on configuration or usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cr_warp_core::gallery::GalleryKey;
use cr_warp_core::numeric::SearchBudget;
use cr_warp_core::pipeline::{
    run_scenario, Axis, ChartSpec, PointsSpec, ReportDocument, Scenario, ScenarioMode,
};

#[derive(Parser)]
#[command(name = "cr-warp-lab")]
#[command(about = "Curvature invariants and sharp inequalities for CR-warped product submanifolds")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Commands {
    /// Run a scenario file (JSON) and report per-point results.
    Verify {
        /// Path to the scenario file.
        scenario: PathBuf,
        /// Write the JSON report here in addition to stdout output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Evaluate a built-in gallery immersion over its default or a custom grid.
    Gallery {
        /// Gallery key: chen_c2, chen_c3, product, cone.
        key: String,
        /// Grid override, e.g. "x=0.5:2:3;y=0;t=0,0.785" (per-axis: a single
        /// value, a comma list, or start:stop:count).
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampling budget for the plane searches.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        refine: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run the algebraic lemma suite on random constrained instances.
    Lemmas {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Re-render a saved JSON report.
    Report {
        report: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Commands::Verify { scenario, out, format } => {
            let text = fs::read_to_string(&scenario)
                .map_err(|e| format!("cannot read {}: {e}", scenario.display()))?;
            let scenario = Scenario::from_json(&text).map_err(|e| e.to_string())?;
            let doc = run_scenario(&scenario).map_err(|e| e.to_string())?;
            emit(&doc, out, format)
        }
        Commands::Gallery {
            key,
            grid,
            seed,
            samples,
            refine,
            out,
            format,
        } => {
            let gallery = GalleryKey::parse_key(&key).map_err(|e| e.to_string())?;
            let points = match grid {
                Some(spec) => Some(parse_grid(&spec, gallery)?),
                None => None,
            };
            let scenario = Scenario {
                mode: ScenarioMode::Immersion {
                    chart: ChartSpec::Gallery {
                        gallery: gallery.as_str().to_string(),
                    },
                    points,
                },
                tolerances: None,
                budget: Some(SearchBudget {
                    samples,
                    refine_steps: refine,
                }),
                seed: Some(seed),
            };
            let doc = run_scenario(&scenario).map_err(|e| e.to_string())?;
            emit(&doc, out, format)
        }
        Commands::Lemmas {
            seed,
            count,
            out,
            format,
        } => {
            let scenario = Scenario {
                mode: ScenarioMode::Lemmas { count },
                tolerances: None,
                budget: None,
                seed: Some(seed),
            };
            let doc = run_scenario(&scenario).map_err(|e| e.to_string())?;
            emit(&doc, out, format)
        }
        Commands::Report { report, format } => {
            let text = fs::read_to_string(&report)
                .map_err(|e| format!("cannot read {}: {e}", report.display()))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| format!("invalid report JSON: {e}"))?;
            if value["schema"].as_str() != Some(cr_warp_core::pipeline::SCHEMA) {
                return Err(format!(
                    "unsupported report schema {:?} (expected {})",
                    value["schema"],
                    cr_warp_core::pipeline::SCHEMA
                ));
            }
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?
                ),
                Format::Table => {
                    print!("{}", cr_warp_core::pipeline::report::table_from_value(&value))
                }
            }
            let failed = value
                .pointer("/summary/failed")
                .and_then(serde_json::Value::as_u64)
                .unwrap_or(0);
            Ok(if failed > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn emit(doc: &ReportDocument, out: Option<PathBuf>, format: Format) -> Result<ExitCode, String> {
    match format {
        Format::Json => println!("{}", doc.to_json()),
        Format::Table => print!("{}", doc.to_table()),
    }
    if let Some(path) = out {
        fs::write(&path, doc.to_json())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(if doc.has_hard_failure() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

/// Parses "x=0.5:2:3;y=0;t=0,0.785" against the chart's variable order.
fn parse_grid(spec: &str, gallery: GalleryKey) -> Result<PointsSpec, String> {
    let chart = cr_warp_core::gallery::gallery_chart(gallery).map_err(|e| e.to_string())?;
    let mut axes: Vec<Option<Axis>> = vec![None; chart.dim()];
    for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
        let (name, body) = part
            .split_once('=')
            .ok_or_else(|| format!("grid axis `{part}` must look like name=spec"))?;
        let name = name.trim();
        let idx = chart
            .variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| {
                format!(
                    "unknown axis `{name}` (chart variables: {})",
                    chart.variables.join(", ")
                )
            })?;
        let body = body.trim();
        let axis = if body.contains(':') {
            let parts: Vec<&str> = body.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("range axis `{body}` must be start:stop:count"));
            }
            Axis::Range {
                start: parts[0]
                    .parse()
                    .map_err(|e| format!("bad start in `{body}`: {e}"))?,
                stop: parts[1]
                    .parse()
                    .map_err(|e| format!("bad stop in `{body}`: {e}"))?,
                count: parts[2]
                    .parse()
                    .map_err(|e| format!("bad count in `{body}`: {e}"))?,
            }
        } else if body.contains(',') {
            Axis::List(
                body.split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| format!("bad list in `{body}`: {e}"))?,
            )
        } else {
            Axis::Fixed(body.parse().map_err(|e| format!("bad value `{body}`: {e}"))?)
        };
        axes[idx] = Some(axis);
    }
    let axes: Vec<Axis> = axes
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.ok_or_else(|| format!("grid is missing axis `{}`", chart.variables[i])))
        .collect::<Result<_, _>>()?;
    Ok(PointsSpec::Grid { grid: axes })
}
