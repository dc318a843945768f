use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jsr_cli::commands::{self, exit, ComputeFlags, PRODUCT_CAP_ENV};
use jsr_core::{AveragingRule, Interpolation};

/// Joint spectral radius of 2x2 matrix sets via Barabanov norm iteration.
#[derive(Debug, Parser)]
#[command(name = "jsr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate to a Barabanov norm and report two-sided bounds.
    Compute {
        /// JSON problem file.
        problem: PathBuf,
        /// Grid size (even, at least 8) [default: 3000].
        #[arg(long)]
        nodes: Option<usize>,
        /// Stop once rho_upper - rho_lower is at most this [default: 1e-3].
        #[arg(long)]
        tol: Option<f64>,
        /// Maximum number of updates [default: 1000].
        #[arg(long = "max-iters")]
        max_iters: Option<usize>,
        /// Relaxation factor rule: arithmetic, geometric or harmonic.
        #[arg(long, value_parser = clap::value_parser!(AveragingRule))]
        averaging: Option<AveragingRule>,
        /// Continuation of the gauge between nodes: angular or chord.
        #[arg(long, value_parser = clap::value_parser!(Interpolation))]
        interpolation: Option<Interpolation>,
        /// Iterate on sets with a common invariant line instead of rejecting them.
        #[arg(long)]
        allow_reducible: bool,
        /// Write the per-iteration bounds as CSV.
        #[arg(long)]
        history: Option<PathBuf>,
        /// Write the unit-ball polyline as CSV.
        #[arg(long)]
        ball: Option<PathBuf>,
        /// Write an SVG plot of the unit ball.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Add the curves ‖A_i x‖ = ρ to the SVG.
        #[arg(long)]
        show_images: bool,
        /// Print the summary and full history as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Brute-force bounds from all products of a given length.
    Bounds {
        /// JSON problem file.
        problem: PathBuf,
        /// Product length n.
        #[arg(long)]
        length: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::INPUT_ERROR as u8
            } else {
                0
            });
        }
    };
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = match cli.command {
        Command::Compute {
            problem,
            nodes,
            tol,
            max_iters,
            averaging,
            interpolation,
            allow_reducible,
            history,
            ball,
            svg,
            show_images,
            json,
        } => {
            let flags = ComputeFlags {
                nodes,
                tol,
                max_iters,
                averaging,
                interpolation,
                allow_reducible,
                history,
                ball,
                svg,
                show_images,
                json,
            };
            commands::cmd_compute(&problem, &flags, &mut out, &mut err)
        }
        Command::Bounds { problem, length } => {
            let env = std::env::var(PRODUCT_CAP_ENV).ok();
            match commands::product_cap(env.as_deref()) {
                Ok(cap) => commands::cmd_bounds(&problem, length, cap, &mut out, &mut err),
                Err(e) => {
                    eprintln!("error: {e}");
                    exit::INPUT_ERROR
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
