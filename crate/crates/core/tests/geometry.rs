#![allow(clippy::needless_range_loop)]

use h3_biharmonic::geometry::{frame_cross, ConnectionPath, FrameVector, Geometry, ManifoldParams, Point, TangentVector};
use h3_biharmonic::{Error, NumericsConfig};
use nalgebra::Vector3;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ManifoldParams> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(m, l)| ManifoldParams::new(m, l))
}

fn point() -> impl Strategy<Value = Point> {
    (-1.5..1.5f64, -1.5..1.5f64, -5.0..5.0f64).prop_map(|(x, y, z)| Point::new(x, y, z))
}

fn in_chart(params: &ManifoldParams, p: &Point) -> bool {
    params.conformal_factor(p) > 0.2
}

fn vec3() -> impl Strategy<Value = Vector3<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| Vector3::new(a, b, c))
}

#[test]
fn metric_expansion_on_heisenberg() {
    let g = Geometry::heisenberg();
    let (x, y) = (0.7, -1.3);
    let mt = g.metric_at(&Point::new(x, y, 2.0)).unwrap().matrix;
    let want = [
        [1.0 + y * y / 4.0, -x * y / 4.0, y / 2.0],
        [-x * y / 4.0, 1.0 + x * x / 4.0, -x / 2.0],
        [y / 2.0, -x / 2.0, 1.0],
    ];
    for i in 0..3 {
        for j in 0..3 {
            assert!((mt[(i, j)] - want[i][j]).abs() < 1e-15, "g[{i}][{j}]");
        }
    }
}

#[test]
fn frame_at_sample_point() {
    let [e1, e2, e3] = Geometry::heisenberg().frame_at(&Point::new(2.0, 4.0, 7.0)).unwrap();
    assert_eq!(e1.components, Vector3::new(1.0, 0.0, -2.0));
    assert_eq!(e2.components, Vector3::new(0.0, 1.0, 1.0));
    assert_eq!(e3.components, Vector3::new(0.0, 0.0, 1.0));
}

#[test]
fn space_form_metric_at_origin_is_identity() {
    let mt = Geometry::new(ManifoldParams::new(1.0, 0.0)).metric_at(&Point::ORIGIN).unwrap().matrix;
    assert!((mt - nalgebra::Matrix3::identity()).amax() < 1e-15);
}

#[test]
fn outside_chart_is_an_error() {
    let g = Geometry::new(ManifoldParams::new(-1.0, 1.0));
    assert!(matches!(g.metric_at(&Point::new(1.0, 0.5, 0.0)), Err(Error::Domain { .. })));
    assert!(matches!(g.frame_at(&Point::new(2.0, 0.0, 0.0)), Err(Error::Domain { .. })));
}

#[test]
fn bracket_and_connection_tables() {
    let g = Geometry::heisenberg();
    let p = Point::new(0.3, -1.2, 5.0);
    assert_eq!(g.lie_bracket_frame(&p, 1, 2).unwrap().components, Vector3::new(0.0, 0.0, 1.0));
    assert_eq!(g.lie_bracket_frame(&p, 3, 1).unwrap().components, Vector3::zeros());
    assert_eq!(g.connection_frame(&p, 1, 1).unwrap().components, Vector3::zeros());
    assert!(matches!(g.connection_frame(&p, 0, 1), Err(Error::Index(0))));
    assert!(matches!(g.riemann_component(&p, 1, 2, 4, 1), Err(Error::Index(4))));
}

#[test]
fn curvature_operator_values() {
    let g = Geometry::heisenberg();
    let p = Point::new(1.0, 2.0, 3.0);
    let e = |a| FrameVector::basis(p, a).unwrap();
    let r = g.curvature_op(&e(1), &e(2), &e(1)).unwrap().components;
    assert!((r - Vector3::new(0.0, -0.75, 0.0)).norm() < 1e-15);
    let r = g.curvature_op(&e(1), &e(3), &e(3)).unwrap().components;
    assert!((r - Vector3::new(-0.25, 0.0, 0.0)).norm() < 1e-15);
    assert_eq!(g.riemann_component(&p, 1, 2, 1, 3).unwrap(), 0.0);
    let elsewhere = FrameVector::basis(Point::ORIGIN, 3).unwrap();
    assert!(matches!(g.curvature_op(&e(1), &e(2), &elsewhere), Err(Error::BasePointMismatch)));
}

#[test]
fn sectional_degenerate_plane() {
    let g = Geometry::heisenberg();
    let x = FrameVector::new(Point::ORIGIN, Vector3::new(1.0, 2.0, 0.0));
    assert!(matches!(g.sectional(&x, &x.scaled(3.0)), Err(Error::DegeneratePlane(_))));
}

#[test]
fn left_translation_examples() {
    let g = Geometry::heisenberg();
    let p = Point::new(0.4, -2.0, 1.5);
    assert_eq!(g.left_translate(&Point::ORIGIN, &p).unwrap(), p);
    assert_eq!(
        g.left_translate(&Point::new(1.0, 0.0, 0.0), &Point::new(0.0, 2.0, 0.0)).unwrap(),
        Point::new(1.0, 2.0, 1.0)
    );
    let cv = Geometry::new(ManifoldParams::new(1.0, 2.0));
    assert!(matches!(cv.left_translate(&p, &p), Err(Error::UnsupportedManifold { .. })));
}

#[test]
fn frame_cross_orientation() {
    let e = |a| FrameVector::basis(Point::ORIGIN, a).unwrap();
    assert_eq!(frame_cross(&e(1), &e(2)).unwrap().components, Vector3::new(0.0, 0.0, 1.0));
    assert_eq!(frame_cross(&e(2), &e(1)).unwrap().components, Vector3::new(0.0, 0.0, -1.0));
    assert_eq!(frame_cross(&e(2), &e(2)).unwrap().components, Vector3::zeros());
}

#[test]
fn tensors_are_left_invariant_on_heisenberg() {
    let g = Geometry::heisenberg().with_path(ConnectionPath::Analytic);
    let r0 = g.riemann(&Point::ORIGIN).unwrap();
    let r1 = g.riemann(&Point::new(1.0, 1.0, 0.0)).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    assert!((r0[a][b][c][d] - r1[a][b][c][d]).abs() < 1e-14);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frame_is_orthonormal(params in params(), p in point()) {
        prop_assume!(in_chart(&params, &p));
        let g = Geometry::new(params);
        let mt = g.metric_at(&p).unwrap();
        prop_assert!(mt.is_symmetric());
        prop_assert!(mt.leading_minors().iter().all(|&d| d > 0.0));
        let frame = g.frame_at(&p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = mt.inner(&frame[i].components, &frame[j].components);
                prop_assert!((got - want).abs() < 1e-10, "g(e{},e{}) = {}", i + 1, j + 1, got);
            }
        }
    }

    #[test]
    fn frame_round_trip(params in params(), p in point(), v in vec3()) {
        prop_assume!(in_chart(&params, &p));
        let g = Geometry::new(params);
        let tv = TangentVector { base: p, components: v };
        let fv = g.to_frame(&tv).unwrap();
        let back = g.to_coords(&fv).unwrap();
        prop_assert!((back.components - v).norm() <= 1e-14 * (1.0 + v.norm()) * 10.0);
        prop_assert!((fv.norm() - g.norm(&tv).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn connection_is_metric_and_torsion_free(params in params(), p in point()) {
        prop_assume!(in_chart(&params, &p));
        let g = Geometry::new(params).with_path(ConnectionPath::Analytic);
        let conn = g.connection(&p).unwrap();
        for a in 1..=3 {
            for b in 1..=3 {
                for c in 0..3 {
                    prop_assert!((conn[a - 1][b - 1][c] + conn[a - 1][c][b - 1]).abs() < 1e-8);
                }
                let lhs = g.connection_frame(&p, a, b).unwrap().components - g.connection_frame(&p, b, a).unwrap().components;
                let bracket = g.lie_bracket_frame(&p, a, b).unwrap().components;
                prop_assert!((lhs - bracket).norm() < 1e-8);
            }
            prop_assert!(g.lie_bracket_frame(&p, a, a).unwrap().components.norm() == 0.0);
        }
    }

    #[test]
    fn riemann_symmetries_and_bianchi(params in params(), p in point(), x in vec3(), y in vec3(), z in vec3()) {
        prop_assume!(in_chart(&params, &p));
        let g = Geometry::new(params);
        let r = g.riemann(&p).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        prop_assert!((r[a][b][c][d] + r[b][a][c][d]).abs() < 1e-8);
                        prop_assert!((r[a][b][c][d] + r[a][b][d][c]).abs() < 1e-8);
                        prop_assert!((r[a][b][c][d] - r[c][d][a][b]).abs() < 1e-8);
                    }
                }
            }
        }
        let (x, y, z) = (FrameVector::new(p, x), FrameVector::new(p, y), FrameVector::new(p, z));
        let sum = g.curvature_op(&x, &y, &z).unwrap().components
            + g.curvature_op(&y, &z, &x).unwrap().components
            + g.curvature_op(&z, &x, &y).unwrap().components;
        prop_assert!(sum.norm() < 1e-8);
        prop_assert!(g.curvature_op(&x, &x, &z).unwrap().components.norm() < 1e-12);
    }

    #[test]
    fn space_forms_have_constant_curvature(m in 0.05..2.0f64, neg in any::<bool>(), p in point(), x in vec3(), y in vec3()) {
        let l = 2.0 * m.sqrt() * if neg { -1.0 } else { 1.0 };
        let params = ManifoldParams::new(m, l);
        prop_assert_eq!(params.degeneracy(), l * l - 4.0 * m);
        let (x, y) = (FrameVector::new(p, x), FrameVector::new(p, y));
        let cross = frame_cross(&x, &y).unwrap().norm();
        prop_assume!(cross > 1e-3);
        let k = Geometry::new(params).sectional(&x, &y).unwrap();
        prop_assert!((k - l * l / 4.0).abs() < 1e-7, "K = {}", k);
    }

    #[test]
    fn left_translation_preserves_frame(g0 in point(), p in point(), v in vec3()) {
        let geo = Geometry::heisenberg();
        let q = geo.left_translate(&g0, &p).unwrap();
        // dL_g e_a(p) = e_a(gp)
        let fv = FrameVector::new(p, v);
        let tv = geo.to_coords(&fv).unwrap();
        let h = 1e-6;
        let moved = |t: f64| geo.left_translate(&g0, &Point::from_coords(&(p.coords() + t * tv.components))).unwrap().coords();
        let pushed = (moved(h) - moved(-h)) / (2.0 * h);
        let at_q = geo.to_frame(&TangentVector { base: q, components: pushed }).unwrap();
        prop_assert!((at_q.components - v).norm() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_difference_path_agrees_with_analytic(params in params(), p in point()) {
        prop_assume!(in_chart(&params, &p));
        let cfg = NumericsConfig::default();
        let analytic = Geometry::with_config(params, &cfg).with_path(ConnectionPath::Analytic);
        let fd = Geometry::with_config(params, &cfg).with_path(ConnectionPath::FiniteDifference);
        let ca = analytic.connection(&p).unwrap();
        let cf = fd.connection(&p).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    prop_assert!((ca[a][b][c] - cf[a][b][c]).abs() < 1e-7, "{} vs {}", ca[a][b][c], cf[a][b][c]);
                }
            }
        }
    }
}
