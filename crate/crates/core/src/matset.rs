//! Closed-form 2×2 linear algebra and the matrix-set container.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};

/// Plane vector, `[x1, x2]`.
pub type Vec2 = [f64; 2];

/// Relative collinearity tolerance for the invariant-line test.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// Relative threshold below which a matrix is treated as a multiple of the identity.
pub const SCALAR_TOL: f64 = 1e-12;

/// A real 2×2 matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub const fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    /// Counter-clockwise rotation by `theta` radians.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(c * self.a11, c * self.a12, c * self.a21, c * self.a22)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn apply(&self, x: Vec2) -> Vec2 {
        [
            self.a11 * x[0] + self.a12 * x[1],
            self.a21 * x[0] + self.a22 * x[1],
        ]
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        let t = self.trace();
        let d = self.det();
        let disc = t * t - 4.0 * d;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            (t + sq).abs().max((t - sq).abs()) / 2.0
        } else {
            // complex pair: |λ|² = det
            d.sqrt()
        }
    }

    /// Largest singular value, from the eigenvalues of `mᵀm`.
    pub fn euclidean_operator_norm(&self) -> f64 {
        let frob2 =
            self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22;
        let d = self.det();
        let disc = (frob2 * frob2 - 4.0 * d * d).max(0.0);
        ((frob2 + disc.sqrt()) / 2.0).sqrt()
    }

    /// True when the matrix is numerically `c·I`.
    pub fn is_scalar(&self) -> bool {
        self.a12.abs() + self.a21.abs() + (self.a11 - self.a22).abs()
            <= SCALAR_TOL * (1.0 + self.a11.abs())
    }

    /// Real eigendirections (0, 1 or 2 lines) of a non-scalar matrix.
    ///
    /// A repeated eigenvalue of a non-scalar matrix has a one-dimensional
    /// eigenspace, so exactly one line comes back in that case. Scalar
    /// matrices return no lines; every line is invariant for them.
    pub fn real_eigendirections(&self) -> Vec<Vec2> {
        if self.is_scalar() {
            return Vec::new();
        }
        let t = self.trace();
        let d = self.det();
        let disc = t * t - 4.0 * d;
        let scale = t * t + 4.0 * d.abs();
        if disc < -1e-12 * scale {
            return Vec::new();
        }
        if disc <= 1e-12 * scale {
            return vec![self.null_direction(t / 2.0)];
        }
        let sq = disc.sqrt();
        // numerically stable root pair
        let big = if t >= 0.0 {
            (t + sq) / 2.0
        } else {
            (t - sq) / 2.0
        };
        let small = if big != 0.0 { d / big } else { 0.0 };
        vec![self.null_direction(big), self.null_direction(small)]
    }

    /// Unit vector spanning the kernel of `self − λI` (assumed rank one).
    fn null_direction(&self, lambda: f64) -> Vec2 {
        let from_row1 = [self.a12, lambda - self.a11];
        let from_row2 = [lambda - self.a22, self.a21];
        let n1 = from_row1[0].hypot(from_row1[1]);
        let n2 = from_row2[0].hypot(from_row2[1]);
        let (v, n) = if n1 >= n2 {
            (from_row1, n1)
        } else {
            (from_row2, n2)
        };
        if n == 0.0 {
            return [1.0, 0.0];
        }
        [v[0] / n, v[1] / n]
    }

    /// Whether the line spanned by `v` is mapped into itself.
    pub fn leaves_invariant(&self, v: Vec2) -> bool {
        let w = self.apply(v);
        let cross = v[0] * w[1] - v[1] * w[0];
        let scale = v[0].hypot(v[1]) * w[0].hypot(w[1]);
        cross.abs() <= INVARIANCE_TOL * scale
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

/// Nonempty ordered set of 2×2 matrices. Indices in all outputs refer to this order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixSet {
    matrices: Vec<Mat2>,
}

impl MatrixSet {
    pub fn new(matrices: Vec<Mat2>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(JsrError::EmptySet);
        }
        if let Some(index) = matrices.iter().position(|m| !m.is_finite()) {
            return Err(JsrError::NonFiniteEntry { index });
        }
        Ok(Self { matrices })
    }

    pub fn matrices(&self) -> &[Mat2] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Mat2> {
        self.matrices.iter()
    }

    /// Every matrix multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            matrices: self.matrices.iter().map(|m| m.scaled(c)).collect(),
        }
    }

    /// `P A P⁻¹` applied to every member.
    pub fn conjugated(&self, p: &Mat2) -> Option<Self> {
        let det = p.det();
        if det == 0.0 {
            return None;
        }
        let inv = Mat2::new(p.a22 / det, -p.a12 / det, -p.a21 / det, p.a11 / det);
        Some(Self {
            matrices: self.matrices.iter().map(|m| *p * *m * inv).collect(),
        })
    }

    /// A line left invariant by every matrix, if one exists.
    ///
    /// A set made only of scalar matrices leaves every line invariant; the
    /// first axis is reported for it.
    pub fn common_invariant_line(&self) -> Option<Vec2> {
        let Some(pivot) = self.matrices.iter().find(|m| !m.is_scalar()) else {
            return Some([1.0, 0.0]);
        };
        pivot
            .real_eigendirections()
            .into_iter()
            .find(|&v| self.matrices.iter().all(|m| m.leaves_invariant(v)))
    }

    pub fn is_irreducible(&self) -> bool {
        self.common_invariant_line().is_none()
    }
}

impl<'a> IntoIterator for &'a MatrixSet {
    type Item = &'a Mat2;
    type IntoIter = std::slice::Iter<'a, Mat2>;

    fn into_iter(self) -> Self::IntoIter {
        self.matrices.iter()
    }
}
