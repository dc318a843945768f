//! Property tests for the linear-algebra primitives, product bounds and gauges.

use jsr_core::bounds::{
    best_lower_word, bound_report, lower_bound, trace_estimate, upper_bound, word_product,
    DEFAULT_PRODUCT_CAP,
};
use jsr_core::{Mat2, MatrixSet, PolarNorm};
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = f64> {
    -3.0f64..3.0
}

fn mat2() -> impl Strategy<Value = Mat2> {
    (entry(), entry(), entry(), entry()).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

fn well_conditioned() -> impl Strategy<Value = Mat2> {
    mat2().prop_filter("well conditioned", |p| {
        let s = p.euclidean_operator_norm();
        let det = p.det().abs();
        // σ_min = |det|/σ_max
        s > 0.1 && det / s > 0.3
    })
}

fn matrix_set(max: usize) -> impl Strategy<Value = MatrixSet> {
    prop::collection::vec(mat2(), 1..=max).prop_map(|m| MatrixSet::new(m).unwrap())
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn spectral_radius_below_operator_norm(m in mat2()) {
        prop_assert!(m.spectral_radius() <= m.euclidean_operator_norm() * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn spectral_radius_is_homogeneous(m in mat2(), c in -10.0f64..10.0) {
        prop_assert!(rel_close(m.scaled(c).spectral_radius(), c.abs() * m.spectral_radius(), 1e-12)
            || (m.scaled(c).spectral_radius() - c.abs() * m.spectral_radius()).abs() < 1e-12);
    }

    #[test]
    fn spectral_radius_is_similarity_invariant(m in mat2(), p in well_conditioned()) {
        let set = MatrixSet::new(vec![m]).unwrap();
        let conj = set.conjugated(&p).unwrap();
        let a = m.spectral_radius();
        let b = conj.matrices()[0].spectral_radius();
        // a defective matrix loses half the digits near a double root
        let tol = if (m.trace().powi(2) - 4.0 * m.det()).abs() < 1e-6 { 1e-6 } else { 1e-9 };
        prop_assert!((a - b).abs() <= tol * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn irreducibility_survives_similarity(s in matrix_set(3), p in well_conditioned()) {
        let conj = s.conjugated(&p).unwrap();
        prop_assert_eq!(s.is_irreducible(), conj.is_irreducible());
    }

    #[test]
    fn bounds_sandwich(s in matrix_set(3), n in 1usize..6, m in 1usize..6) {
        let lo = lower_bound(&s, n).unwrap();
        let hi = upper_bound(&s, m).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12) + 1e-300, "{lo} > {hi}");
        let r = bound_report(&s, n, DEFAULT_PRODUCT_CAP).unwrap();
        prop_assert_eq!(r.products_evaluated, (s.len() as u64).pow(n as u32));
        prop_assert!(r.lower <= r.upper * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn upper_bound_doubling(s in matrix_set(3), n in 1usize..5) {
        prop_assert!(upper_bound(&s, 2 * n).unwrap() <= upper_bound(&s, n).unwrap() + 1e-12);
    }

    #[test]
    fn lower_bound_on_repeated_word(s in matrix_set(3), n in 1usize..5, k in 2usize..4) {
        let (word, value) = best_lower_word(&s, n).unwrap();
        let repeated: Vec<usize> = word.iter().copied().cycle().take(k * n).collect();
        let p = word_product(&s, &repeated);
        let rep_value = p.spectral_radius().powf(1.0 / (k * n) as f64);
        prop_assert!(rep_value >= value - 1e-12 * value.max(1.0), "{rep_value} < {value}");
        prop_assert!(lower_bound(&s, k * n).unwrap() >= value - 1e-12 * value.max(1.0));
    }

    #[test]
    fn estimates_are_homogeneous(s in matrix_set(2), n in 1usize..5, c in 0.1f64..5.0) {
        let scaled = s.scaled(c);
        for f in [lower_bound, upper_bound, trace_estimate] {
            let a = f(&scaled, n).unwrap();
            let b = c * f(&s, n).unwrap();
            prop_assert!(rel_close(a, b, 1e-12) || (a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn gauge_homogeneity(values in prop::collection::vec(0.2f64..5.0, 8..64), x in entry(), y in entry(), c in -4.0f64..4.0) {
        let mut v = values.clone();
        // centrally symmetric gauge
        if v.len() % 2 == 1 { v.pop(); }
        let half = v.len() / 2;
        for k in 0..half { v[k + half] = v[k]; }
        let p = PolarNorm::new(v).unwrap();
        let base = p.eval([x, y]);
        let scaled = p.eval([c * x, c * y]);
        prop_assert!((scaled - c.abs() * base).abs() <= 1e-12 * (1.0 + c.abs() * base));
    }

    #[test]
    fn seam_continuity(values in prop::collection::vec(0.2f64..5.0, 8..64), eps in 1e-12f64..1e-6) {
        let p = PolarNorm::new(values).unwrap();
        let lip = p.values().iter().zip(p.values().iter().cycle().skip(1))
            .map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) * p.node_count() as f64 / std::f64::consts::TAU;
        let left = p.eval_direction(std::f64::consts::PI - eps);
        let right = p.eval_direction(-std::f64::consts::PI + eps);
        prop_assert!((left - right).abs() <= lip * 2.0 * eps + 1e-12);
    }

    #[test]
    fn eccentricity_symmetry(a in prop::collection::vec(0.2f64..5.0, 16), b in prop::collection::vec(0.2f64..5.0, 16), c in 0.1f64..10.0) {
        let p = PolarNorm::new(a).unwrap();
        let q = PolarNorm::new(b).unwrap();
        let pq = p.eccentricity(&q).unwrap();
        let qp = q.eccentricity(&p).unwrap();
        prop_assert!(pq >= 1.0);
        prop_assert!(pq * qp >= 1.0);
        prop_assert!(rel_close(pq, qp, 1e-12));
        prop_assert!(rel_close(p.scaled(c).unwrap().eccentricity(&q).unwrap(), pq, 1e-12));
    }
}

#[test]
fn doubling_on_example_one() {
    let s = MatrixSet::new(vec![
        Mat2::from_rows([[1.0, 1.0], [0.0, 1.0]]),
        Mat2::from_rows([[1.0, 0.0], [1.0, 1.0]]),
    ])
    .unwrap();
    let mut prev = upper_bound(&s, 1).unwrap();
    for n in [2, 4, 8, 16] {
        let cur = upper_bound(&s, n).unwrap();
        assert!(cur <= prev + 1e-12);
        prev = cur;
    }
}
