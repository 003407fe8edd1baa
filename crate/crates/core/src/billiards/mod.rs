//! Periodic billiard trajectories on curves and surfaces as critical points
//! of the perimeter of inscribed polygons.

mod orbit;
mod search;
mod shape;

pub use orbit::{hessian_spectrum, perimeter, perimeter_gradient, reflection_residual, Residual};
pub use search::{
    compare_to_bound, find_orbits, refine, BilliardOrbit, BoundComparison, SearchConfig,
    SearchOutcome,
};
pub use shape::{ChartDomain, Shape};

use rand::Rng;

use crate::error::Result;

/// Worst relative deviation between the analytic perimeter gradient and a
/// central difference, over `samples` random tuples with well separated
/// vertices.
pub fn gradient_check<R: Rng>(
    shape: &Shape,
    chart: usize,
    period: usize,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let m = shape.dim();
    let domain = shape.chart_domain(chart);
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < samples {
        let x: Vec<f64> = (0..period * m)
            .map(|k| {
                let d = domain[k % m];
                rng.random_range(d.lo..d.hi)
            })
            .collect();
        let quality = (0..period)
            .map(|i| shape.chart_quality(chart, &x[i * m..(i + 1) * m]))
            .fold(f64::INFINITY, f64::min);
        let pts: Vec<_> = (0..period)
            .map(|i| shape.point(chart, &x[i * m..(i + 1) * m]))
            .collect();
        let close = (0..period)
            .any(|i| (i + 1..period).any(|j| (pts[i] - pts[j]).norm() < 0.05 * shape.scale()));
        if quality < 0.2 || close {
            continue;
        }
        let analytic = reflection_residual(shape, chart, &x)?.gradient;
        let mut err = 0.0f64;
        let mut size = 0.0f64;
        let mut y = x.clone();
        for k in 0..x.len() {
            y[k] = x[k] + h;
            let up = perimeter(shape, chart, &y)?;
            y[k] = x[k] - h;
            let dn = perimeter(shape, chart, &y)?;
            y[k] = x[k];
            let fd = (up - dn) / (2.0 * h);
            err = err.max((fd - analytic[k]).abs());
            size = size.max(analytic[k].abs());
        }
        worst = worst.max(err / size.max(1e-300));
        done += 1;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ellipse() -> Shape {
        Shape::Ellipse { a: 2.0, b: 1.0 }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for s in Shape::shipped() {
            for chart in 0..s.chart_count() {
                for p in [2, 3] {
                    let worst = gradient_check(&s, chart, p, 20, &mut rng).unwrap();
                    assert!(worst < 1e-6, "{s} chart {chart} p {p}: {worst:e}");
                }
            }
        }
    }

    #[test]
    fn ellipse_period_two() {
        let out = find_orbits(&ellipse(), 2, &SearchConfig::default()).unwrap();
        let lengths: Vec<f64> = out.orbits.iter().map(|o| o.length).collect();
        assert_eq!(lengths.len(), 2, "{lengths:?}");
        assert!((lengths[0] - 8.0).abs() < 1e-8);
        assert!((lengths[1] - 4.0).abs() < 1e-8);
        assert!(out.all_generic());
        assert!(compare_to_bound(&out.orbits, 2, 1, 2).unwrap().passed());
    }

    #[test]
    fn circle_is_degenerate() {
        let out = find_orbits(&Shape::circle(1.0), 2, &SearchConfig::default()).unwrap();
        assert!(!out.orbits.is_empty());
        assert!(out.orbits.iter().all(|o| !o.generic));
        assert!(matches!(
            compare_to_bound(&out.orbits, 2, 1, 2).unwrap(),
            BoundComparison::NotApplicable { .. }
        ));
    }

    #[test]
    fn perturbed_ellipse_period_three() {
        let shape = Shape::default_perturbed();
        let base = find_orbits(&shape, 3, &SearchConfig::default()).unwrap();
        assert!(base.orbits.len() >= 2);
        assert!(base.all_generic());
        assert!(compare_to_bound(&base.orbits, 2, 1, 3).unwrap().passed());
        for o in &base.orbits {
            let x = refine(&shape, o.chart, &o.flat_params(), 10).unwrap();
            assert!(reflection_residual(&shape, o.chart, &x).unwrap().max() <= 1e-9);
        }
    }

    #[test]
    fn unperturbed_period_three_is_degenerate() {
        let out = find_orbits(
            &ellipse(),
            3,
            &SearchConfig {
                density: Some(12),
                ..SearchConfig::default()
            },
        )
        .unwrap();
        assert!(out.orbits.iter().any(|o| !o.generic));
    }

    #[test]
    fn ellipsoid_diameters() {
        let s = Shape::Ellipsoid {
            a: 3.0,
            b: 2.0,
            c: 1.0,
        };
        let out = find_orbits(
            &s,
            2,
            &SearchConfig {
                density: Some(8),
                ..SearchConfig::default()
            },
        )
        .unwrap();
        let lengths: Vec<f64> = out.orbits.iter().map(|o| o.length).collect();
        assert_eq!(lengths.len(), 3, "{lengths:?}");
        for (l, want) in lengths.iter().zip([12.0, 8.0, 4.0]) {
            assert!((l - want).abs() < 1e-8);
        }
        assert!(out.all_generic());
        assert!(compare_to_bound(&out.orbits, 2, 2, 2).unwrap().passed());
    }

    #[test]
    fn bound_comparisons() {
        let orbit = |generic| BilliardOrbit {
            chart: 0,
            params: vec![],
            points: vec![],
            length: 1.0,
            residual: 0.0,
            hessian_spectrum: vec![1.0],
            generic,
        };
        let two = vec![orbit(true), orbit(true)];
        assert_eq!(
            compare_to_bound(&two, 2, 1, 2).unwrap(),
            BoundComparison::Pass { count: 2, bound: 2 }
        );
        assert_eq!(
            compare_to_bound(&two, 2, 1, 3).unwrap(),
            BoundComparison::Pass { count: 2, bound: 2 }
        );
        assert_eq!(
            compare_to_bound(&two[..1], 2, 1, 2).unwrap(),
            BoundComparison::Fail { count: 1, bound: 2 }
        );
        assert!(!compare_to_bound(&[orbit(false)], 2, 1, 2).unwrap().passed());
    }

    proptest! {
        #[test]
        fn reindexing_invariance(t in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 3), shape_id in 0usize..5) {
            let shape = &Shape::shipped()[shape_id];
            let m = shape.dim();
            let params: Vec<f64> = if m == 1 { t.clone() } else { t.iter().flat_map(|&v| [v, 0.4 + v / 3.0]).collect() };
            let Ok(base_len) = perimeter(shape, 0, &params) else { return Ok(()); };
            let base_res = reflection_residual(shape, 0, &params).unwrap();
            let mut norms = base_res.per_point.clone();
            norms.sort_by(f64::total_cmp);
            for perm in [[1, 2, 0], [2, 0, 1], [2, 1, 0], [0, 2, 1], [1, 0, 2]] {
                let moved: Vec<f64> = perm.iter().flat_map(|&i| params[i * m..(i + 1) * m].to_vec()).collect();
                prop_assert!((perimeter(shape, 0, &moved).unwrap() - base_len).abs() <= 1e-12 * base_len);
                let mut other = reflection_residual(shape, 0, &moved).unwrap().per_point;
                other.sort_by(f64::total_cmp);
                for (a, b) in norms.iter().zip(&other) {
                    prop_assert!((a - b).abs() <= 1e-12);
                }
            }
        }
    }
}
