//! `compute` and `bounds` subcommands, returning process exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};

use jsr_core::bounds::{bound_report, DEFAULT_PRODUCT_CAP};
use jsr_core::engine::{run, IterationRecord};
use jsr_core::{AveragingRule, Interpolation, JsrError, RunResult, RunStatus};
use serde::Serialize;

use crate::emit;
use crate::error::CliError;
use crate::problem::{parse_problem, Problem};

/// Process exit codes.
pub mod exit {
    pub const CONVERGED: i32 = 0;
    /// An output file could not be written.
    pub const OUTPUT_ERROR: i32 = 1;
    pub const REDUCIBLE: i32 = 2;
    pub const MAX_ITERATIONS: i32 = 3;
    /// Unreadable or invalid input, bad arguments, or enumeration cap exceeded.
    pub const INPUT_ERROR: i32 = 4;
}

pub const PRODUCT_CAP_ENV: &str = "JSR_PRODUCT_CAP";

/// Command-line overrides and artifact paths for `compute`.
#[derive(Debug, Clone, Default)]
pub struct ComputeFlags {
    pub nodes: Option<usize>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub averaging: Option<AveragingRule>,
    pub interpolation: Option<Interpolation>,
    pub allow_reducible: bool,
    pub history: Option<PathBuf>,
    pub ball: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub show_images: bool,
    pub json: bool,
}

impl ComputeFlags {
    fn apply(&self, problem: &mut Problem) -> Result<(), JsrError> {
        let cfg = &mut problem.config;
        if let Some(n) = self.nodes {
            cfg.node_count = n;
        }
        if let Some(t) = self.tol {
            cfg.tol_abs = t;
        }
        if let Some(k) = self.max_iters {
            cfg.max_iterations = k;
        }
        if let Some(rule) = self.averaging {
            cfg.averaging = rule;
        }
        if let Some(mode) = self.interpolation {
            cfg.interpolation = mode;
        }
        cfg.allow_reducible |= self.allow_reducible;
        cfg.validate()
    }
}

#[derive(Debug, Serialize)]
struct ComputeSummary<'a> {
    status: RunStatus,
    rho_estimate: f64,
    rho_lower: f64,
    rho_upper: f64,
    iterations: usize,
    residual: f64,
    nodes: usize,
    averaging: AveragingRule,
    interpolation: Interpolation,
    history: &'a [IterationRecord],
}

/// `rho_estimate=<v> rho_lower=<v> rho_upper=<v> iterations=<n> residual=<v> status=<s>`
pub fn summary_line(result: &RunResult) -> String {
    format!(
        "rho_estimate={} rho_lower={} rho_upper={} iterations={} residual={} status={}",
        result.rho_estimate,
        result.rho_lower,
        result.rho_upper,
        result.iterations(),
        result.residual,
        result.status
    )
}

fn write_artifacts(result: &RunResult, flags: &ComputeFlags) -> Result<(), CliError> {
    if let Some(path) = &flags.history {
        emit::emit_history_csv(result, path)?;
    }
    if let Some(path) = &flags.ball {
        emit::emit_ball_csv(&result.norm, path)?;
    }
    if let Some(path) = &flags.svg {
        emit::emit_ball_svg(
            &result.norm,
            &result.tables,
            result.rho_estimate,
            path,
            flags.show_images,
        )?;
    }
    Ok(())
}

/// Runs the iteration on a problem file and reports the result.
pub fn cmd_compute(
    path: &Path,
    flags: &ComputeFlags,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut problem = match parse_problem(path) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::INPUT_ERROR;
        }
    };
    if let Err(e) = flags.apply(&mut problem) {
        let _ = writeln!(err, "error: {e}");
        return exit::INPUT_ERROR;
    }
    let result = match run(&problem.set, &problem.config) {
        Ok(r) => r,
        Err(e @ JsrError::Reducible { .. }) => {
            let _ = writeln!(err, "error: {e} (pass --allow-reducible to iterate anyway)");
            return exit::REDUCIBLE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::INPUT_ERROR;
        }
    };
    if let Err(e) = write_artifacts(&result, flags) {
        let _ = writeln!(err, "error: {e}");
        return exit::OUTPUT_ERROR;
    }
    let printed = if flags.json {
        let summary = ComputeSummary {
            status: result.status,
            rho_estimate: result.rho_estimate,
            rho_lower: result.rho_lower,
            rho_upper: result.rho_upper,
            iterations: result.iterations(),
            residual: result.residual,
            nodes: problem.config.node_count,
            averaging: problem.config.averaging,
            interpolation: problem.config.interpolation,
            history: &result.history,
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&summary).expect("summary serializes")
        )
    } else {
        writeln!(out, "{}", summary_line(&result))
    };
    if printed.is_err() {
        return exit::OUTPUT_ERROR;
    }
    match result.status {
        RunStatus::Converged => exit::CONVERGED,
        RunStatus::MaxItersExceeded => {
            let _ = writeln!(
                err,
                "warning: gap {:.3e} still above tolerance after {} iterations",
                result.rho_upper - result.rho_lower,
                result.iterations()
            );
            exit::MAX_ITERATIONS
        }
    }
}

/// Enumeration cap, from [`PRODUCT_CAP_ENV`] when set.
pub fn product_cap(env_value: Option<&str>) -> Result<u64, CliError> {
    match env_value {
        None => Ok(DEFAULT_PRODUCT_CAP),
        Some(v) => v.trim().parse().map_err(|_| CliError::Env {
            name: PRODUCT_CAP_ENV,
            value: v.to_owned(),
        }),
    }
}

/// Prints brute-force bounds for products of length `length`.
pub fn cmd_bounds(
    path: &Path,
    length: usize,
    cap: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let problem = match parse_problem(path) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::INPUT_ERROR;
        }
    };
    match bound_report(&problem.set, length, cap) {
        Ok(r) => {
            let line = format!(
                "n={} lower={} upper={} trace={} products={}",
                r.n, r.lower, r.upper, r.trace, r.products_evaluated
            );
            if writeln!(out, "{line}").is_err() {
                return exit::OUTPUT_ERROR;
            }
            exit::CONVERGED
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit::INPUT_ERROR
        }
    }
}
