//! `isolens` — all-image solver and figure generator for the lens
//! equation `z - k/sin(conj z) = w` in the strip |Re z| < pi/2.
//!
//! Exit codes: 0 success, 1 internal inconsistency (diagnostic JSON on
//! stdout) or I/O failure, 2 invalid usage.

mod emit;

use clap::{Args, Parser, Subcommand};
use isolens_core::acceptance;
use isolens_core::basins::render_basins_with;
use isolens_core::caustic::{boundary_image, trace_caustic};
use isolens_core::classify::{classify, sweep};
use isolens_core::critical::trace_critical;
use isolens_core::map::LensParams;
use isolens_core::solver::{find_all_seeded, find_all_shear_seeded, oracle_find_all, same_root_set};
use isolens_core::{parse_complex, Complex64, Rect};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "isolens", version, about)]
struct Cli {
    /// Worker threads for parallel maps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug)]
struct ComplexArg(Complex64);

impl FromStr for ComplexArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_complex(s).map(ComplexArg)
    }
}

#[derive(Clone, Copy, Debug)]
struct WindowArg(Rect);

impl FromStr for WindowArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        if parts.len() != 4 {
            return Err("window must be x_min,x_max,y_min,y_max".into());
        }
        if parts[0] >= parts[1] || parts[2] >= parts[3] {
            return Err("window must satisfy x_min < x_max and y_min < y_max".into());
        }
        Ok(WindowArg(Rect {
            x_min: parts[0],
            x_max: parts[1],
            y_min: parts[2],
            y_max: parts[3],
        }))
    }
}

#[derive(Args)]
struct LensArgs {
    /// Mass-scale parameter k > 0.
    #[arg(long)]
    k: f64,
    /// Shear parameter (complex literal, e.g. 0.1+0i).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: ComplexArg,
}

impl LensArgs {
    fn params(&self) -> Result<LensParams, String> {
        LensParams::with_shear(self.k, self.alpha.0).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Find all solutions of f(z) = w.
    Solve {
        #[command(flatten)]
        lens: LensArgs,
        /// Source position (complex literal, e.g. 0+0.67i).
        #[arg(long, allow_hyphen_values = true)]
        w: ComplexArg,
        /// Jitter stream for the Newton stall rule.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cross-check against the grid oracle and record agreement.
        #[arg(long)]
        oracle_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Independent grid-scan oracle for f(z) = w.
    Oracle {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, allow_hyphen_values = true)]
        w: ComplexArg,
        /// Grid columns across the strip.
        #[arg(long, default_value_t = 2000)]
        density: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the critical curve.
    Critical {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the caustic (and the strip-boundary image in SVG).
    Caustic {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the cusps of the caustic.
    Cusps {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict (m, n) for one source and cross-check with the solver.
    Classify {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, allow_hyphen_values = true)]
        w: ComplexArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a grid of sources; writes CSV and an SVG choropleth.
    Sweep {
        #[command(flatten)]
        lens: LensArgs,
        /// x_min,x_max,y_min,y_max
        #[arg(long, default_value = "-2.5,2.5,-2.5,2.5", allow_hyphen_values = true)]
        window: WindowArg,
        #[arg(long, default_value_t = 41)]
        resolution: usize,
        /// Output prefix: writes <prefix>.csv and <prefix>.svg.
        #[arg(long)]
        out: PathBuf,
    },
    /// Render attraction basins of T(z) = w + k/sin(conj z) as a PPM.
    Basins {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, allow_hyphen_values = true)]
        w: ComplexArg,
        /// x_min,x_max,y_min,y_max viewport in the z-plane.
        #[arg(long, default_value = "-3,3,-3,3", allow_hyphen_values = true)]
        window: WindowArg,
        #[arg(long, default_value_t = 400)]
        width: usize,
        #[arg(long, default_value_t = 400)]
        height: usize,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance suite (nonzero exit on any failure).
    Verify {
        /// Suite name; only "acceptance" exists.
        #[arg(long, default_value = "acceptance")]
        suite: String,
        /// Comma-separated criterion ids, e.g. 1,3,9 (default: all).
        #[arg(long)]
        criteria: Option<String>,
    },
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn fail_usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn fail_internal(diagnostic: serde_json::Value) -> ExitCode {
    println!("{}", serde_json::to_string_pretty(&diagnostic).unwrap());
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            return fail_usage("could not configure the worker pool");
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => fail_internal(serde_json::json!({"error": e.to_string()})),
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Solve {
            lens,
            w,
            seed,
            oracle_check,
            out,
        } => {
            let params = match lens.params() {
                Ok(p) => p,
                Err(e) => return Ok(fail_usage(&e)),
            };
            let mut report = if params.has_shear() {
                find_all_shear_seeded(&params, w.0, seed)?
            } else {
                find_all_seeded(&params, w.0, seed)?
            };
            if oracle_check && !params.has_shear() {
                let oracle = oracle_find_all(&params, w.0, 2000);
                report.oracle_agreement =
                    Some(same_root_set(&report.solutions, &oracle, 1e-6));
            }
            let doc = emit::solve_report_json(&params, w.0, seed, &report);
            write_or_print(&out, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            if report.violation.is_some() || report.oracle_agreement == Some(false) {
                return Ok(fail_internal(doc));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            lens,
            w,
            density,
            out,
        } => {
            let params = match lens.params() {
                Ok(p) => p,
                Err(e) => return Ok(fail_usage(&e)),
            };
            if params.has_shear() {
                return Ok(fail_usage("the oracle requires alpha = 0"));
            }
            let solutions = oracle_find_all(&params, w.0, density);
            let doc = serde_json::json!({
                "k": params.k(),
                "w": {"re": w.0.re, "im": w.0.im},
                "density": density,
                "count": solutions.len(),
                "solutions": solutions.iter().map(|s| serde_json::json!({
                    "z": {"re": s.z.re, "im": s.z.im},
                    "orientation": emit::orientation_str(s.orientation),
                    "residual": s.residual,
                    "jacobian": s.jacobian,
                })).collect::<Vec<_>>(),
            });
            write_or_print(&out, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Critical {
            lens,
            samples,
            format,
            out,
        } => {
            let params = match lens.params() {
                Ok(p) => p,
                Err(e) => return Ok(fail_usage(&e)),
            };
            let curve = match trace_critical(&params, samples) {
                Ok(c) => c,
                Err(e) => return Ok(fail_usage(&e.to_string())),
            };
            let text = match format.as_str() {
                "csv" => emit::critical_csv(&params, &curve, samples),
                "svg" => emit::critical_svg(&params, &curve),
                other => return Ok(fail_usage(&format!("unknown format {other:?}"))),
            };
            write_or_print(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Caustic {
            lens,
            samples,
            format,
            out,
        } => {
            let params = match lens.params() {
                Ok(p) => p,
                Err(e) => return Ok(fail_usage(&e)),
            };
            let caustic = match trace_caustic(&params, samples) {
                Ok(c) => c,
                Err(e) => return Ok(fail_usage(&e.to_string())),
            };
            let text = match format.as_str() {
                "csv" => emit::caustic_csv(&params, &caustic, samples),
                "svg" => {
                    let reach = caustic
                        .arcs
                        .iter()
                        .flat_map(|a| a.points.iter())
                        .map(|p| p.im.abs())
                        .fold(1.0f64, f64::max)
                        + 1.0;
                    let boundary = boundary_image(&params, reach, 1024);
                    emit::caustic_svg(&params, &caustic, &boundary)
                }
                other => return Ok(fail_usage(&format!("unknown format {other:?}"))),
            };
            write_or_print(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cusps { lens, format, out } => {
            let params = match lens.params() {
                Ok(p) => p,
                Err(e) => return Ok(fail_usage(&e)),
            };
            let caustic = match trace_caustic(&params, 64) {
                Ok(c) => c,
                Err(e) => return Ok(fail_usage(&e.to_string())),
            };
            let text = match format.as_str() {
                "json" => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&emit::cusps_json(&params, &caustic))?
                ),
                "csv" => emit::cusps_csv(&params, &caustic),
                other => return Ok(fail_usage(&format!("unknown format {other:?}"))),
            };
            write_or_print(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { lens, w, out } => {
            let params = match lens.params() {
                Ok(p) => p,
                Err(e) => return Ok(fail_usage(&e)),
            };
            let report = match classify(&params, w.0) {
                Ok(r) => r,
                Err(e) => return Ok(fail_usage(&e.to_string())),
            };
            let doc = serde_json::to_value(&report)?;
            write_or_print(&out, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            if report.consistent == Some(false) {
                return Ok(fail_internal(serde_json::json!({
                    "error": "classifier/solver disagreement",
                    "report": doc,
                })));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            lens,
            window,
            resolution,
            out,
        } => {
            let params = match lens.params() {
                Ok(p) => p,
                Err(e) => return Ok(fail_usage(&e)),
            };
            let grid = match sweep(&params, window.0, resolution) {
                Ok(g) => g,
                Err(e) => return Ok(fail_usage(&e.to_string())),
            };
            let csv_path = out.with_extension("csv");
            let svg_path = out.with_extension("svg");
            std::fs::write(&csv_path, emit::sweep_csv(&params, &grid))?;
            std::fs::write(&svg_path, emit::sweep_svg(&params, &grid))?;
            eprintln!(
                "wrote {} and {}",
                csv_path.display(),
                svg_path.display()
            );
            if !grid.spot_check_failures.is_empty() {
                return Ok(fail_internal(serde_json::json!({
                    "error": "sweep spot-check disagreement with the solver",
                    "cells": grid.spot_check_failures
                        .iter()
                        .map(|w| serde_json::json!({"re": w.re, "im": w.im}))
                        .collect::<Vec<_>>(),
                })));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Basins {
            lens,
            w,
            window,
            width,
            height,
            max_iter,
            out,
        } => {
            let params = match lens.params() {
                Ok(p) => p,
                Err(e) => return Ok(fail_usage(&e)),
            };
            if params.has_shear() {
                return Ok(fail_usage("basins require alpha = 0"));
            }
            let attractors = isolens_core::basins::attractors(&params, w.0)?;
            let image = match render_basins_with(
                &params, w.0, &attractors, window.0, width, height, max_iter,
            ) {
                Ok(i) => i,
                Err(e) => return Ok(fail_usage(&e.to_string())),
            };
            let mut file = std::fs::File::create(&out)?;
            file.write_all(&emit::basins_ppm(&image))?;
            let meta = emit::basins_metadata(&params, w.0, &image, &out.display().to_string());
            println!("{}", serde_json::to_string_pretty(&meta)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, criteria } => {
            if suite != "acceptance" {
                return Ok(fail_usage(&format!("unknown suite {suite:?}")));
            }
            let ids: Vec<usize> = match criteria {
                None => (1..=10).collect(),
                Some(list) => {
                    let mut ids = Vec::new();
                    for part in list.split(',') {
                        match part.trim().parse::<usize>() {
                            Ok(id) if (1..=10).contains(&id) => ids.push(id),
                            _ => return Ok(fail_usage(&format!("bad criterion id {part:?}"))),
                        }
                    }
                    ids
                }
            };
            let data = if ids.iter().any(|&id| acceptance::needs_sweep(id)) {
                eprintln!("building the theorem sweep (minutes-scale)...");
                Some(acceptance::sweep_data())
            } else {
                None
            };
            let mut all_passed = true;
            for id in ids {
                let result = acceptance::criterion(id, data.as_ref());
                println!("{}", result.line());
                all_passed &= result.passed;
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
