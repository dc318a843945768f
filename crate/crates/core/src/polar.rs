//! Planar norms represented by a piecewise-linear radial gauge `R(φ)`.
//!
//! Nodes sit on the uniform periodic grid `φ_k = −π + 2πk/N`, `k = 0..N`.
//! For even `N` the node `k = N/2` is exactly `φ = 0`. Between nodes the
//! gauge is linear in `φ` unless [`Interpolation::Chord`] is asked for; the
//! norm of `x` with polar coordinates `(r, φ)` is `r·R(φ)` and the unit
//! sphere is the curve `r = 1/R(φ)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::JsrError;
use crate::matset::Vec2;

/// Central-symmetry tolerance expected of engine-produced gauges.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Convexity tolerance expected of engine-produced unit balls.
pub const CONVEXITY_TOL: f64 = 1e-6;

/// Angle of grid node `k` on an `n`-node grid.
pub fn node_angle(k: usize, n: usize) -> f64 {
    -PI + TAU * k as f64 / n as f64
}

/// Bracketing node `k` and fractional position `w ∈ [0, 1)` of direction `phi`
/// between nodes `k` and `(k + 1) mod N`.
pub fn locate(phi: f64, n: usize) -> (usize, f64) {
    let pos = ((phi + PI) * n as f64 / TAU).rem_euclid(n as f64);
    let mut k = pos.floor() as usize;
    let mut w = pos - k as f64;
    if k >= n {
        // rem_euclid may round up to exactly n
        k = 0;
        w = 0.0;
    }
    (k, w)
}

/// How a gauge is continued between adjacent nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    /// `R` linear in `φ`.
    #[default]
    Angular,
    /// Straight ball edges between adjacent vertices, so the unit ball is the
    /// polygon through the vertices and `R` is its gauge.
    Chord,
}

impl Interpolation {
    /// Weights of the left and right node for fractional position `w` on an `n`-node grid.
    pub fn weights(self, w: f64, n: usize) -> (f64, f64) {
        match self {
            Self::Angular => (1.0 - w, w),
            Self::Chord => {
                // 1/r along the line through two polar points
                let h = TAU / n as f64;
                let s = h.sin();
                (((1.0 - w) * h).sin() / s, (w * h).sin() / s)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Angular => "angular",
            Self::Chord => "chord",
        }
    }
}

impl fmt::Display for Interpolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Interpolation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "angular" => Ok(Self::Angular),
            "chord" => Ok(Self::Chord),
            other => Err(format!(
                "unknown interpolation {other:?} (expected angular or chord)"
            )),
        }
    }
}

/// Piecewise-linear radial gauge on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarNorm {
    values: Vec<f64>,
    interpolation: Interpolation,
}

impl PolarNorm {
    /// Builds a gauge from node values; every value must be positive and finite.
    pub fn new(values: Vec<f64>) -> Result<Self, JsrError> {
        if values.is_empty() {
            return Err(JsrError::EmptyGauge);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(JsrError::InvalidGauge { index, value });
        }
        Ok(Self {
            values,
            interpolation: Interpolation::Angular,
        })
    }

    /// Same gauge with the same mode, new node values.
    pub(crate) fn with_values_unchecked(&self, values: Vec<f64>) -> Self {
        debug_assert!(values.len() == self.values.len());
        debug_assert!(values.iter().all(|v| v.is_finite() && *v > 0.0));
        Self {
            values,
            interpolation: self.interpolation,
        }
    }

    pub fn with_interpolation(mut self, mode: Interpolation) -> Self {
        self.interpolation = mode;
        self
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// The Euclidean gauge `R ≡ 1`.
    pub fn euclidean(node_count: usize) -> Self {
        Self::constant(node_count, 1.0)
    }

    pub fn constant(node_count: usize, value: f64) -> Self {
        assert!(node_count > 0 && value.is_finite() && value > 0.0);
        Self {
            values: vec![value; node_count],
            interpolation: Interpolation::Angular,
        }
    }

    /// Samples `f(φ_k)` on an `n`-node grid.
    pub fn from_fn(node_count: usize, f: impl Fn(f64) -> f64) -> Result<Self, JsrError> {
        Self::new(
            (0..node_count)
                .map(|k| f(node_angle(k, node_count)))
                .collect(),
        )
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn angle(&self, k: usize) -> f64 {
        node_angle(k, self.values.len())
    }

    /// Index of the node at `φ = 0`, present for even node counts.
    pub fn zero_node(&self) -> Option<usize> {
        let n = self.values.len();
        n.is_multiple_of(2).then_some(n / 2)
    }

    pub fn scaled(&self, c: f64) -> Result<Self, JsrError> {
        Ok(Self::new(self.values.iter().map(|v| v * c).collect())?
            .with_interpolation(self.interpolation))
    }

    /// Gauge value at fractional position `w` past node `k` (see [`locate`]),
    /// wrapping after the last node.
    #[inline]
    pub fn interpolate(&self, k: usize, w: f64) -> f64 {
        let n = self.values.len();
        let next = if k + 1 == n { 0 } else { k + 1 };
        let (w0, w1) = match self.interpolation {
            Interpolation::Angular => (1.0 - w, w),
            mode => mode.weights(w, n),
        };
        self.values[k] * w0 + self.values[next] * w1
    }

    /// `R(φ)` for any finite angle.
    pub fn eval_direction(&self, phi: f64) -> f64 {
        let (k, w) = locate(phi, self.values.len());
        self.interpolate(k, w)
    }

    /// Norm of a vector, `r(x)·R(φ(x))`.
    pub fn eval(&self, x: Vec2) -> f64 {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            return 0.0;
        }
        r * self.eval_direction(x[1].atan2(x[0]))
    }

    /// Vertices `(cos φ_k, sin φ_k)/R_k` of the discretized unit sphere, in node order.
    pub fn unit_ball(&self) -> Vec<Vec2> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                let (s, c) = self.angle(k).sin_cos();
                [c / r, s / r]
            })
            .collect()
    }

    /// Ratio of the largest to the smallest nodewise quotient `self/other`.
    pub fn eccentricity(&self, other: &PolarNorm) -> Result<f64, JsrError> {
        if self.node_count() != other.node_count() {
            return Err(JsrError::GridMismatch {
                left: self.node_count(),
                right: other.node_count(),
            });
        }
        let (lo, hi) = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(p, q)| p / q)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r), hi.max(r))
            });
        Ok(hi / lo)
    }

    /// `max_k |R_k − R_{k+N/2}| / R_k`; zero for centrally symmetric gauges.
    pub fn symmetry_defect(&self) -> Result<f64, JsrError> {
        let n = self.node_count();
        if !n.is_multiple_of(2) {
            return Err(JsrError::OddNodeCount(n));
        }
        let half = n / 2;
        Ok((0..n)
            .map(|k| (self.values[k] - self.values[(k + half) % n]).abs() / self.values[k])
            .fold(0.0, f64::max))
    }

    /// Smallest normalized turn `(e_prev × e_next)/(|e_prev||e_next|)` along the
    /// closed ball polyline. Nonnegative means the polygon is convex.
    pub fn convexity_defect(&self) -> f64 {
        let pts = self.unit_ball();
        let n = pts.len();
        if n < 3 {
            return 0.0;
        }
        let edge = |k: usize| {
            let a = pts[k];
            let b = pts[(k + 1) % n];
            [b[0] - a[0], b[1] - a[1]]
        };
        (0..n)
            .filter_map(|k| {
                let e0 = edge((k + n - 1) % n);
                let e1 = edge(k);
                let l0 = e0[0].hypot(e0[1]);
                let l1 = e1[0].hypot(e1[1]);
                (l0 > 0.0 && l1 > 0.0).then(|| (e0[0] * e1[1] - e0[1] * e1[0]) / (l0 * l1))
            })
            .fold(f64::INFINITY, f64::min)
    }
}
