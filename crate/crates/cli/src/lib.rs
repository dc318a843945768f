//! Problem-file parsing, result emitters and subcommands behind the `jsr` binary.

pub mod commands;
pub mod emit;
pub mod error;
pub mod problem;

pub use commands::{cmd_bounds, cmd_compute, exit, ComputeFlags};
pub use error::CliError;
pub use problem::{parse_problem, parse_problem_str, write_problem, Problem, ProblemFile};
