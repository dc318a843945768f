//! Joint spectral radius of finite sets of 2×2 real matrices.
//!
//! The main entry point is [`engine::run`], which builds a Barabanov norm by
//! max-relaxation on a polar grid and reports two-sided bounds that tighten
//! monotonically. [`bounds`] holds an independent brute-force oracle over
//! all products of a fixed length.

pub mod bounds;
pub mod engine;
pub mod error;
pub mod matset;
pub mod polar;

pub use bounds::{bound_report, lower_bound, trace_estimate, upper_bound, BoundReport};
pub use engine::{
    run, AveragingRule, IterationRecord, RunConfig, RunResult, RunStatus, TransformTables,
};
pub use error::{JsrError, Result};
pub use matset::{Mat2, MatrixSet, Vec2};
pub use polar::{Interpolation, PolarNorm};
