mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use suita_lab::bergman::{kernel_ball, scaled_ball};
use suita_lab::indicatrix::radial_distance;
use suita_lab::metrics::{gauge_oracle, inscribed_ellipsoid, kobayashi_ball, kobayashi_ball_oracle, kobayashi_siegel, pullback_metric, wu_outer_ellipsoid};
use suita_lab::suita::egg_axis_bounds;
use suita_lab::transforms::{cayley, cayley_inverse, dilation};
use suita_lab::{CPoint, DomainSpec, HoloMap};

fn c2() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
}

fn point((a, b, c, d): (f64, f64, f64, f64)) -> CPoint {
    CPoint::c2(Complex64::new(a, b), Complex64::new(c, d))
}

/// Random point of the unit ball with |z| ≤ 0.95.
fn ball_point(raw: (f64, f64, f64, f64)) -> CPoint {
    let z = point(raw);
    let n = z.norm();
    if n > 0.95 {
        z.scale(Complex64::from(0.95 / n))
    } else {
        z
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ball_metric_is_homogeneous(z in c2(), v in c2(), cr in -3.0f64..3.0, ci in -3.0f64..3.0) {
        let z = ball_point(z);
        let v = point(v);
        let c = Complex64::new(cr, ci);
        let lhs = kobayashi_ball(&z, &v.scale(c)).unwrap();
        let rhs = c.norm() * kobayashi_ball(&z, &v).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
    }

    #[test]
    fn egg_gauge_is_homogeneous(v in c2(), cr in -3.0f64..3.0, ci in -3.0f64..3.0, mu in 0.1f64..3.0) {
        let egg = DomainSpec::egg(mu).unwrap();
        let v = point(v);
        prop_assume!(v.norm() > 1e-3);
        let c = Complex64::new(cr, ci);
        let lhs = egg.minkowski_gauge(&v.scale(c)).unwrap();
        let rhs = c.norm() * egg.minkowski_gauge(&v).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
    }

    #[test]
    fn cayley_round_trip(z in c2()) {
        let w = ball_point(z);
        let back = cayley(&cayley_inverse(&w).unwrap()).unwrap();
        prop_assert!(back.dist(&w) < 1e-10);
    }

    #[test]
    fn cayley_carries_siegel_into_ball(z in c2()) {
        let w = ball_point(z);
        let s = cayley_inverse(&w).unwrap();
        prop_assert!(DomainSpec::siegel(2).unwrap().contains(&s).unwrap());
    }

    #[test]
    fn kernel_scaling_law(z in c2(), big in any::<bool>()) {
        let r = if big { 2.0 } else { 0.5 };
        let z = ball_point(z);
        let scaled = scaled_ball(r).unwrap().eval(&z.scale(Complex64::from(r))).unwrap();
        let expected = r.powi(-4) * kernel_ball(2, &z).unwrap();
        prop_assert!((scaled - expected).abs() <= 1e-10 * expected);
    }

    #[test]
    fn ball_kernel_matches_reference(z in c2()) {
        let z = ball_point(z);
        let expected = common::ball_kernel(z.as_slice());
        prop_assert!((kernel_ball(2, &z).unwrap() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn siegel_metric_is_cayley_pullback(z in c2(), v in c2()) {
        let w = ball_point(z);
        let s = cayley_inverse(&w).unwrap();
        let v = point(v);
        let base = kobayashi_ball_oracle(&w).unwrap();
        let pulled = pullback_metric(&base, &HoloMap::Cayley, &s).unwrap();
        let expected = kobayashi_siegel(&s, &v).unwrap();
        prop_assert!((pulled.eval(&v).unwrap() - expected).abs() <= 1e-9 * (1.0 + expected));
    }

    #[test]
    fn pullback_by_map_and_inverse_is_identity(z in c2(), v in c2(), d in 0.1f64..4.0) {
        let z = ball_point(z);
        let v = point(v);
        let map = dilation(d).unwrap();
        let inv = map.inverse().unwrap();
        let base = kobayashi_ball_oracle(&z).unwrap();
        let y = inv.eval(&z).unwrap();
        let once = pullback_metric(&base, &map, &y).unwrap();
        let twice = pullback_metric(&once, &inv, &z).unwrap();
        let expected = base.eval(&v).unwrap();
        prop_assert!((twice.eval(&v).unwrap() - expected).abs() <= 1e-10 * (1.0 + expected));
    }

    #[test]
    fn composition_inverse(z in c2(), q in c2(), d in 0.1f64..4.0) {
        let q = point(q);
        let map = HoloMap::compose(vec![
            HoloMap::translation(q.clone()),
            HoloMap::quadric(nalgebra::DMatrix::from_element(1, 1, q[0])).unwrap(),
            dilation(d).unwrap(),
        ]);
        let z = point(z);
        let back = map.inverse().unwrap().eval(&map.eval(&z).unwrap()).unwrap();
        prop_assert!(back.dist(&z) <= 1e-10 * (1.0 + z.norm()));
    }

    #[test]
    fn bounds_are_ordered(mu in 0.01f64..0.4999, p in 0.001f64..0.999) {
        let b = egg_axis_bounds(mu, p).unwrap();
        prop_assert!(b.lower >= 0.0);
        prop_assert!(b.lower <= b.upper);
    }

    #[test]
    fn inscribed_inside_wu(mu in 0.01f64..0.4999, p in 0.001f64..0.999) {
        let inner = inscribed_ellipsoid(mu, p).unwrap();
        let outer = wu_outer_ellipsoid(mu, p).unwrap();
        prop_assert!(inner.is_inside(&outer));
        prop_assert!(inner.a <= outer.a && inner.b <= outer.b * (1.0 + 1e-12));
    }

    #[test]
    fn point_text_round_trip(z in c2()) {
        let z = point(z);
        let parsed: CPoint = z.to_string().replace(['(', ')', ' '], "").parse().unwrap();
        prop_assert_eq!(parsed, z);
    }
}

#[test]
fn gauge_matches_ball_metric_at_origin() {
    let ball_gauge = gauge_oracle(&DomainSpec::ball(2).unwrap()).unwrap();
    let ball_k = kobayashi_ball_oracle(&CPoint::zeros(2)).unwrap();
    assert!(radial_distance(&ball_gauge, &ball_k, 2048).unwrap() < 1e-12);
}

#[test]
fn metric_lower_bound_is_stable() {
    // Estimated C in τ(z, v) ≥ C|v| over two independent sets of unit vectors.
    use suita_lab::indicatrix::min_on_directions;
    let oracle = kobayashi_ball_oracle(&CPoint::real2(0.3, 0.6)).unwrap();
    let a = min_on_directions(&oracle, 10_000, 1).unwrap();
    let b = min_on_directions(&oracle, 10_000, 2).unwrap();
    assert!(a > 0.0 && b > 0.0);
    assert!((a - b).abs() <= 0.05 * a.max(b));
}
