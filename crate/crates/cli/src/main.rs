//! `geo3`: curvature, Cotton-tensor and soliton checks for three-dimensional
//! metrics given in spec files.

mod commands;
mod output;
mod specfile;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use geo3_core::analysis::SolitonKind;
use geo3_core::numoracle::{CompareOptions, Point};

use commands::{CheckKind, ClassifyOptions, OracleOptions, UsageError};
use specfile::{read_spec, SpecFile};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "geo3", version, about = "Exact curvature and Cotton-tensor verification for 3D metrics")]
struct Cli {
    /// Emit one JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Γ, R, ρ, τ, S, C, C̃ and Ĉ of the metric.
    Curvature {
        spec: PathBuf,
        /// Evaluate every component at a point `t,x,y` (repeatable).
        #[arg(long, value_parser = parse_point)]
        at: Vec<Point>,
    },
    /// A structural predicate of the metric.
    Check {
        spec: PathBuf,
        #[arg(value_enum)]
        what: CheckKind,
    },
    /// Jordan types of ρ̂ and Ĉ over sampled points.
    Classify {
        spec: PathBuf,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to $GEO3_TOL, else 1e-9.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        hi: f64,
        /// Fail unless every point has this Jordan tag.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Residual of a soliton equation.
    Soliton {
        spec: PathBuf,
        /// killing, homothetic, cotton, ricci, gradient-cotton or gradient-ricci.
        #[arg(long, value_parser = parse_kind)]
        kind: SolitonKind,
        /// File with a [field] section; defaults to the one in SPEC.
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
    },
    /// Checks that MAP pulls TARGET back to SOURCE.
    Isometry {
        source: PathBuf,
        target: PathBuf,
        /// File with a [map] section.
        #[arg(long)]
        map: PathBuf,
    },
    /// Symbolic curvature against central finite differences.
    Oracle {
        spec: PathBuf,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Step for Γ, ρ and τ.
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Relative tolerance for Γ, ρ and τ; defaults to $GEO3_TOL, else 1e-5.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 5e-3)]
        h_cotton: f64,
        #[arg(long, default_value_t = 1e-3)]
        tol_cotton: f64,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        hi: f64,
        /// Skip sample points with |x| below this.
        #[arg(long, default_value_t = 0.1)]
        avoid_x: f64,
    },
    /// The built-in verification suite.
    #[command(name = "verify-paper")]
    Verify {
        #[arg(long, default_value_t = 20240611)]
        seed: u64,
        /// Oracle points per metric.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

fn parse_point(s: &str) -> Result<Point, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "a point has three coordinates".to_string())
}

fn parse_kind(s: &str) -> Result<SolitonKind, String> {
    SolitonKind::parse(s).ok_or_else(|| format!("unknown soliton kind `{s}`"))
}

/// Tolerance from `GEO3_TOL`, if set.
fn env_tol() -> Result<Option<f64>, UsageError> {
    match std::env::var("GEO3_TOL") {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0 && t.is_finite())
            .map(Some)
            .ok_or_else(|| UsageError(format!("GEO3_TOL must be a positive number, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn spec(path: &Path) -> Result<SpecFile, UsageError> {
    Ok(read_spec(path)?)
}

fn run(cmd: Cmd) -> Result<output::Outcome, UsageError> {
    let tol_env = env_tol()?;
    match cmd {
        Cmd::Curvature { spec: p, at } => commands::curvature(&spec(&p)?, &at),
        Cmd::Check { spec: p, what } => commands::check(&spec(&p)?, what),
        Cmd::Classify { spec: p, points, seed, tol, lo, hi, expect } => {
            let tol = tol.or(tol_env).unwrap_or(1e-9);
            commands::classify(&spec(&p)?, &ClassifyOptions { points, seed, tol, lo, hi, expect })
        }
        Cmd::Soliton { spec: p, kind, field, lambda } => {
            let f = field.map(|f| spec(&f)).transpose()?;
            commands::soliton(&spec(&p)?, f.as_ref(), kind, &lambda)
        }
        Cmd::Isometry { source, target, map } => commands::isometry(&spec(&source)?, &spec(&target)?, &spec(&map)?),
        Cmd::Oracle { spec: p, points, seed, h, tol, h_cotton, tol_cotton, lo, hi, avoid_x } => {
            let compare = CompareOptions {
                h_first: h,
                tol_first: tol.or(tol_env).unwrap_or(1e-5),
                h_cotton,
                tol_cotton,
            };
            commands::oracle(&spec(&p)?, &OracleOptions { points, seed, compare, lo, hi, avoid_x })
        }
        Cmd::Verify { seed, points } => {
            let mut opts = CompareOptions::default();
            if let Some(t) = tol_env {
                opts.tol_first = t;
            }
            commands::verify_suite(seed, points, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut outcome = match run(cli.cmd) {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            eprintln!("geo3: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    outcome.sort();
    let wall = start.elapsed().as_secs_f64();
    let stdout = io::stdout();
    let mut w = stdout.lock();
    let written = if cli.json {
        writeln!(w, "{}", outcome.to_json(wall))
    } else {
        outcome.write_text(&mut w, wall)
    };
    if written.is_err() {
        return ExitCode::from(EXIT_USAGE);
    }
    if outcome.failed() {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}
