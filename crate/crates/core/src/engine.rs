//! Max-relaxation iteration for a Barabanov norm of a 2×2 matrix set.
//!
//! Each step evaluates the image gauge `R*(φ) = max_i H_i(φ)·R(Φ_i(φ))`,
//! reads off the bounds `ρ⁻ = min R*/R` and `ρ⁺ = max R*/R`, blends them
//! into `γ`, relaxes `R ← max(R, R*/γ)` and renormalizes so that `R(0) = 1`.
//! `ρ⁻` never decreases and `ρ⁺` never increases along the run, and the
//! joint spectral radius stays between them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};
use crate::matset::MatrixSet;
use crate::polar::{self, Interpolation, PolarNorm};

/// Node count used when none is given.
pub const DEFAULT_NODES: usize = 3000;
/// Absolute gap `ρ⁺ − ρ⁻` at which a run stops.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;
pub const DEFAULT_MAX_ITERATIONS: usize = 1000;
/// Smallest admissible grid.
pub const MIN_NODES: usize = 8;

/// Mean used to blend `ρ⁻` and `ρ⁺` into the relaxation factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AveragingRule {
    /// `(t + s)/2`
    #[default]
    Arithmetic,
    /// `√(ts)`
    Geometric,
    /// `2ts/(t + s)`
    Harmonic,
}

impl AveragingRule {
    pub const ALL: [AveragingRule; 3] = [Self::Arithmetic, Self::Geometric, Self::Harmonic];

    pub fn average(self, t: f64, s: f64) -> Result<f64> {
        if !(t > 0.0 && s > 0.0) {
            return Err(JsrError::NonPositiveMean { t, s });
        }
        if t == s {
            return Ok(t);
        }
        let mean = match self {
            Self::Arithmetic => (t + s) / 2.0,
            Self::Geometric => (t * s).sqrt(),
            Self::Harmonic => 2.0 * t * s / (t + s),
        };
        // keep the mean inside the closed interval under rounding
        Ok(mean.clamp(t.min(s), t.max(s)))
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Arithmetic => "arithmetic",
            Self::Geometric => "geometric",
            Self::Harmonic => "harmonic",
        }
    }
}

impl fmt::Display for AveragingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownAveraging(pub String);

impl fmt::Display for UnknownAveraging {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown averaging rule {:?} (expected arithmetic, geometric or harmonic)",
            self.0
        )
    }
}

impl std::error::Error for UnknownAveraging {}

impl FromStr for AveragingRule {
    type Err = UnknownAveraging;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|rule| rule.name() == s)
            .ok_or_else(|| UnknownAveraging(s.to_owned()))
    }
}

/// Image of a grid direction under one matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageDirection {
    /// `|A u_k|`
    pub gain: f64,
    /// Full-quadrant angle of `A u_k` in `[−π, π)`; `None` when the gain is zero.
    pub angle: Option<f64>,
    // bracketing node and fractional offset of `angle`, fixed for the whole run
    node: usize,
    offset: f64,
}

/// Per-matrix gains `H_i(φ_k)` and image angles `Φ_i(φ_k)` on the grid.
#[derive(Debug, Clone)]
pub struct TransformTables {
    node_count: usize,
    images: Vec<Vec<ImageDirection>>,
}

impl TransformTables {
    pub fn new(set: &MatrixSet, node_count: usize) -> Result<Self> {
        if node_count < MIN_NODES {
            return Err(JsrError::InvalidConfig(format!(
                "node count {node_count} is below the minimum of {MIN_NODES}"
            )));
        }
        let dirs: Vec<[f64; 2]> = (0..node_count)
            .map(|k| {
                let (s, c) = polar::node_angle(k, node_count).sin_cos();
                [c, s]
            })
            .collect();
        let images = set
            .iter()
            .map(|a| {
                // images this short are rounding noise of an exact kernel direction
                let floor = 4.0 * f64::EPSILON * a.euclidean_operator_norm();
                dirs.iter()
                    .map(|&u| {
                        let y = a.apply(u);
                        let gain = y[0].hypot(y[1]);
                        if gain > floor {
                            let mut angle = y[1].atan2(y[0]);
                            if angle >= std::f64::consts::PI {
                                angle = -std::f64::consts::PI;
                            }
                            let (node, offset) = polar::locate(angle, node_count);
                            ImageDirection {
                                gain,
                                angle: Some(angle),
                                node,
                                offset,
                            }
                        } else {
                            ImageDirection {
                                gain: 0.0,
                                angle: None,
                                node: 0,
                                offset: 0.0,
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self { node_count, images })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn matrix_count(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, matrix: usize, node: usize) -> &ImageDirection {
        &self.images[matrix][node]
    }

    pub fn gain(&self, matrix: usize, node: usize) -> f64 {
        self.images[matrix][node].gain
    }

    pub fn angle(&self, matrix: usize, node: usize) -> Option<f64> {
        self.images[matrix][node].angle
    }

    /// `‖A_i u_k‖` in the gauge `r`; zero for annihilated directions.
    #[inline]
    pub fn image_norm(&self, matrix: usize, node: usize, r: &PolarNorm) -> f64 {
        let img = &self.images[matrix][node];
        if img.gain == 0.0 {
            return 0.0;
        }
        img.gain * r.interpolate(img.node, img.offset)
    }

    fn check_grid(&self, r: &PolarNorm) -> Result<()> {
        if r.node_count() != self.node_count {
            return Err(JsrError::GridMismatch {
                left: self.node_count,
                right: r.node_count(),
            });
        }
        Ok(())
    }
}

/// `R*[k] = max_i H_i(φ_k)·R(Φ_i(φ_k))`.
pub fn images_gauge(tables: &TransformTables, r: &PolarNorm) -> Result<Vec<f64>> {
    tables.check_grid(r)?;
    Ok((0..tables.node_count)
        .map(|k| {
            (0..tables.matrix_count())
                .map(|i| tables.image_norm(i, k, r))
                .fold(0.0, f64::max)
        })
        .collect())
}

/// `(min_k R*[k]/R[k], max_k R*[k]/R[k])`.
pub fn bounds(r: &PolarNorm, rstar: &[f64]) -> Result<(f64, f64)> {
    if r.node_count() != rstar.len() {
        return Err(JsrError::GridMismatch {
            left: r.node_count(),
            right: rstar.len(),
        });
    }
    Ok(r.values()
        .iter()
        .zip(rstar)
        .map(|(v, s)| s / v)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), q| {
            (lo.min(q), hi.max(q))
        }))
}

/// `max(R[k], R*[k]/γ)` nodewise.
pub fn relax(r: &PolarNorm, rstar: &[f64], gamma: f64) -> Result<PolarNorm> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(JsrError::InvalidConfig(format!(
            "relaxation factor must be positive, got {gamma}"
        )));
    }
    if r.node_count() != rstar.len() {
        return Err(JsrError::GridMismatch {
            left: r.node_count(),
            right: rstar.len(),
        });
    }
    Ok(r.with_values_unchecked(
        r.values()
            .iter()
            .zip(rstar)
            .map(|(&v, &s)| v.max(s / gamma))
            .collect(),
    ))
}

/// Divides by the value at the `φ = 0` node, which becomes exactly 1.
pub fn normalize(r: &PolarNorm) -> Result<PolarNorm> {
    let zero = r
        .zero_node()
        .ok_or(JsrError::OddNodeCount(r.node_count()))?;
    let pivot = r.values()[zero];
    Ok(r.with_values_unchecked(r.values().iter().map(|v| v / pivot).collect()))
}

/// Bounds and relaxation factor computed from one iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub gamma: f64,
}

impl IterationRecord {
    pub fn gap(&self) -> f64 {
        self.rho_plus - self.rho_minus
    }
}

/// One full relaxation step from `r`: record for `r` and the normalized successor.
pub fn step(
    tables: &TransformTables,
    r: &PolarNorm,
    rule: AveragingRule,
    iteration: usize,
) -> Result<(IterationRecord, PolarNorm)> {
    let rstar = images_gauge(tables, r)?;
    let record = record_for(r, &rstar, rule, iteration)?;
    let next = normalize(&relax(r, &rstar, record.gamma)?)?;
    Ok((record, next))
}

fn record_for(
    r: &PolarNorm,
    rstar: &[f64],
    rule: AveragingRule,
    iteration: usize,
) -> Result<IterationRecord> {
    let (rho_minus, rho_plus) = bounds(r, rstar)?;
    if rho_minus <= 0.0 {
        return Err(JsrError::InvalidConfig(
            "some grid direction is annihilated by every matrix; the set is reducible".into(),
        ));
    }
    let gamma = rule.average(rho_minus, rho_plus)?;
    Ok(IterationRecord {
        iteration,
        rho_minus,
        rho_plus,
        gamma,
    })
}

/// `max_k |R*[k]/R[k] − rho|`: deviation from the discretized Barabanov identity.
pub fn barabanov_residual(tables: &TransformTables, r: &PolarNorm, rho: f64) -> Result<f64> {
    let rstar = images_gauge(tables, r)?;
    Ok(r.values()
        .iter()
        .zip(&rstar)
        .map(|(v, s)| (s / v - rho).abs())
        .fold(0.0, f64::max))
}

/// Index of the matrix maximizing `‖A_i u_k‖` at every node (lowest index on ties).
pub fn dominant_matrices(tables: &TransformTables, r: &PolarNorm) -> Result<Vec<usize>> {
    tables.check_grid(r)?;
    Ok((0..tables.node_count)
        .map(|k| {
            let mut best = 0;
            let mut best_val = tables.image_norm(0, k, r);
            for i in 1..tables.matrix_count() {
                let v = tables.image_norm(i, k, r);
                if v > best_val {
                    best = i;
                    best_val = v;
                }
            }
            best
        })
        .collect())
}

/// Number of cyclically adjacent node pairs whose dominant matrix differs.
pub fn active_switch_count(tables: &TransformTables, r: &PolarNorm) -> Result<usize> {
    if tables.matrix_count() < 2 {
        return Err(JsrError::SingleMatrix);
    }
    let dom = dominant_matrices(tables, r)?;
    let n = dom.len();
    Ok((0..n).filter(|&k| dom[k] != dom[(k + 1) % n]).count())
}

/// Parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub node_count: usize,
    /// Stop once `ρ⁺ − ρ⁻ ≤ tol_abs`.
    pub tol_abs: f64,
    /// Optional extra stop once `ρ⁺ − ρ⁻ ≤ tol_rel·ρ⁺`.
    pub tol_rel: Option<f64>,
    /// Maximum number of relaxation updates.
    pub max_iterations: usize,
    pub averaging: AveragingRule,
    /// Continuation of the iterates between grid nodes.
    pub interpolation: Interpolation,
    pub allow_reducible: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            node_count: DEFAULT_NODES,
            tol_abs: DEFAULT_TOLERANCE,
            tol_rel: None,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            averaging: AveragingRule::Arithmetic,
            interpolation: Interpolation::Angular,
            allow_reducible: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < MIN_NODES {
            return Err(JsrError::InvalidConfig(format!(
                "node count {} is below the minimum of {MIN_NODES}",
                self.node_count
            )));
        }
        if !self.node_count.is_multiple_of(2) {
            // normalization needs the φ = 0 node
            return Err(JsrError::OddNodeCount(self.node_count));
        }
        if !(self.tol_abs > 0.0 && self.tol_abs.is_finite()) {
            return Err(JsrError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tol_abs
            )));
        }
        if let Some(rel) = self.tol_rel {
            if !(rel > 0.0 && rel.is_finite()) {
                return Err(JsrError::InvalidConfig(format!(
                    "relative tolerance must be positive, got {rel}"
                )));
            }
        }
        if self.max_iterations < 1 {
            return Err(JsrError::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn stop(&self, rec: &IterationRecord) -> bool {
        let gap = rec.gap();
        gap <= self.tol_abs || self.tol_rel.is_some_and(|rel| gap <= rel * rec.rho_plus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    MaxItersExceeded,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Converged => "converged",
            Self::MaxItersExceeded => "max_iters_exceeded",
        })
    }
}

/// Outcome of [`run`].
#[derive(Debug, Clone)]
pub struct RunResult {
    pub status: RunStatus,
    pub rho_lower: f64,
    pub rho_upper: f64,
    /// Midpoint of the final bounds.
    pub rho_estimate: f64,
    /// Final normalized gauge; the bounds were computed from it.
    pub norm: PolarNorm,
    pub history: Vec<IterationRecord>,
    /// [`barabanov_residual`] of `norm` at `rho_estimate`.
    pub residual: f64,
    pub tables: TransformTables,
}

impl RunResult {
    /// Number of relaxation updates performed.
    pub fn iterations(&self) -> usize {
        self.history.len() - 1
    }
}

/// Runs the iteration from the Euclidean gauge.
pub fn run(set: &MatrixSet, cfg: &RunConfig) -> Result<RunResult> {
    run_observed(set, cfg, |_, _| {})
}

/// Like [`run`], calling `observe` with every record and the gauge it was computed from.
pub fn run_observed(
    set: &MatrixSet,
    cfg: &RunConfig,
    mut observe: impl FnMut(&IterationRecord, &PolarNorm),
) -> Result<RunResult> {
    cfg.validate()?;
    if let Some(direction) = set.common_invariant_line() {
        if !cfg.allow_reducible {
            return Err(JsrError::Reducible { direction });
        }
        log::warn!(
            "matrix set leaves the line through ({}, {}) invariant; convergence is not guaranteed",
            direction[0],
            direction[1]
        );
    }
    let tables = TransformTables::new(set, cfg.node_count)?;
    let mut r = PolarNorm::euclidean(cfg.node_count).with_interpolation(cfg.interpolation);
    let mut history = Vec::new();
    let status = loop {
        let iteration = history.len();
        let rstar = images_gauge(&tables, &r)?;
        let record = record_for(&r, &rstar, cfg.averaging, iteration)?;
        observe(&record, &r);
        history.push(record);
        log::debug!(
            "iteration {iteration}: rho- = {:.12} rho+ = {:.12} gap = {:.3e}",
            record.rho_minus,
            record.rho_plus,
            record.gap()
        );
        if cfg.stop(&record) {
            break RunStatus::Converged;
        }
        if iteration >= cfg.max_iterations {
            break RunStatus::MaxItersExceeded;
        }
        r = normalize(&relax(&r, &rstar, record.gamma)?)?;
    };
    let last = *history.last().expect("history has at least one record");
    let rho_estimate = (last.rho_minus + last.rho_plus) / 2.0;
    let residual = barabanov_residual(&tables, &r, rho_estimate)?;
    Ok(RunResult {
        status,
        rho_lower: last.rho_minus,
        rho_upper: last.rho_plus,
        rho_estimate,
        norm: r,
        history,
        residual,
        tables,
    })
}
