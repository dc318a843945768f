//! Brute-force bounds on the joint spectral radius from all length-`n` products.
//!
//! For every word `i_1 … i_n` the product `A_{i_n}⋯A_{i_1}` is built depth-first
//! with running prefixes, so each of the `rⁿ` leaves costs one multiply.

use serde::Serialize;

use crate::error::{JsrError, Result};
use crate::matset::{Mat2, MatrixSet};
use crate::polar::PolarNorm;

/// Default ceiling on the number of enumerated products.
pub const DEFAULT_PRODUCT_CAP: u64 = 1 << 20;

/// Lower, upper and trace estimates for one product length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    /// `max ρ(P)^{1/n}`; never exceeds the joint spectral radius.
    pub lower: f64,
    /// `max ‖P‖₂^{1/n}`; never below the joint spectral radius.
    pub upper: f64,
    /// `max |tr P|^{1/n}`. Tends to the joint spectral radius along a
    /// subsequence only; it is not a bound for fixed `n`.
    pub trace: f64,
    pub products_evaluated: u64,
}

fn product_count(r: usize, n: usize, cap: u64) -> Result<u64> {
    if n == 0 {
        return Err(JsrError::ZeroLength);
    }
    let count = (r as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(JsrError::EnumerationCap { count, cap });
    }
    Ok(count as u64)
}

/// Visits every product of length `n` together with its word (first factor first).
fn for_each_product(
    set: &MatrixSet,
    n: usize,
    cap: u64,
    mut visit: impl FnMut(&[usize], &Mat2),
) -> Result<u64> {
    let count = product_count(set.len(), n, cap)?;
    let mats = set.matrices();
    let mut word = vec![0usize; n];
    let mut prefix = vec![Mat2::identity(); n + 1];
    let mut depth = 0;
    loop {
        if depth == n {
            visit(&word, &prefix[n]);
            // backtrack to the deepest position that can still advance
            loop {
                if depth == 0 {
                    return Ok(count);
                }
                depth -= 1;
                word[depth] += 1;
                if word[depth] < mats.len() {
                    break;
                }
                word[depth] = 0;
            }
        }
        prefix[depth + 1] = mats[word[depth]] * prefix[depth];
        depth += 1;
    }
}

/// All three estimates from a single enumeration pass.
pub fn bound_report(set: &MatrixSet, n: usize, cap: u64) -> Result<BoundReport> {
    let (mut rho, mut norm, mut trace) = (0.0f64, 0.0f64, 0.0f64);
    let products_evaluated = for_each_product(set, n, cap, |_, p| {
        rho = rho.max(p.spectral_radius());
        norm = norm.max(p.euclidean_operator_norm());
        trace = trace.max(p.trace().abs());
    })?;
    let root = |v: f64| v.powf(1.0 / n as f64);
    Ok(BoundReport {
        n,
        lower: root(rho),
        upper: root(norm),
        trace: root(trace),
        products_evaluated,
    })
}

fn max_over_products(set: &MatrixSet, n: usize, f: impl Fn(&Mat2) -> f64) -> Result<f64> {
    let mut best = 0.0f64;
    for_each_product(set, n, DEFAULT_PRODUCT_CAP, |_, p| best = best.max(f(p)))?;
    Ok(best.powf(1.0 / n as f64))
}

/// `max ρ(P)^{1/n}` over products of length `n`.
pub fn lower_bound(set: &MatrixSet, n: usize) -> Result<f64> {
    max_over_products(set, n, Mat2::spectral_radius)
}

/// `max ‖P‖₂^{1/n}` over products of length `n`.
pub fn upper_bound(set: &MatrixSet, n: usize) -> Result<f64> {
    max_over_products(set, n, Mat2::euclidean_operator_norm)
}

/// `max |tr P|^{1/n}` over products of length `n`.
pub fn trace_estimate(set: &MatrixSet, n: usize) -> Result<f64> {
    max_over_products(set, n, |p| p.trace().abs())
}

/// The word attaining [`lower_bound`] (lowest in enumeration order on ties) and its value.
pub fn best_lower_word(set: &MatrixSet, n: usize) -> Result<(Vec<usize>, f64)> {
    let mut best = (Vec::new(), -1.0f64);
    for_each_product(set, n, DEFAULT_PRODUCT_CAP, |word, p| {
        let rho = p.spectral_radius();
        if rho > best.1 {
            best = (word.to_vec(), rho);
        }
    })?;
    Ok((best.0, best.1.powf(1.0 / n as f64)))
}

/// `A_{w_last}⋯A_{w_first}` for a word listed first factor first.
pub fn word_product(set: &MatrixSet, word: &[usize]) -> Mat2 {
    word.iter()
        .fold(Mat2::identity(), |acc, &i| set.matrices()[i] * acc)
}

/// `max_k max_i ‖A_i x_k‖/‖x_k‖ − rho` over the grid directions `x_k` of `norm`.
///
/// Nonpositive (up to discretization) means `norm` is extremal for `rho`.
pub fn extremal_norm_residual(norm: &PolarNorm, set: &MatrixSet, rho: f64) -> f64 {
    (0..norm.node_count())
        .map(|k| {
            let (s, c) = norm.angle(k).sin_cos();
            let x = [c, s];
            let image = set
                .iter()
                .map(|a| norm.eval(a.apply(x)))
                .fold(0.0, f64::max);
            image / norm.values()[k]
        })
        .fold(f64::NEG_INFINITY, f64::max)
        - rho
}
