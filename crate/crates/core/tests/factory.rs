use std::f64::consts::{FRAC_1_SQRT_2, PI};

use h3_biharmonic::biharmonic::{classify, cone_membership, ConeVerdict, Verdict};
use h3_biharmonic::curve::{sample_curve, Trajectory};
use h3_biharmonic::factory::{
    admissible_boundary, admissible_grid, biharmonic_helix, geodesic_ivp, helix_invariants, membership_residual, one_param_subgroup, solve_branch_a,
    surface_eval, Branch, HelixParams, SurfacePatch, HELIX_RANGE,
};
use h3_biharmonic::geometry::{FrameVector, Geometry, ManifoldParams, Point};
use h3_biharmonic::{Error, NumericsConfig};
use nalgebra::Vector3;

fn cfg() -> NumericsConfig {
    NumericsConfig::default()
}

fn offset_params() -> HelixParams {
    HelixParams::new((1.0 / 10f64.sqrt()).asin(), Branch::Plus)
        .unwrap()
        .with_offsets(1.0, 1.0, 1.0, 0.0)
}

#[test]
fn boundary_invariants() {
    let hp = HelixParams::new(admissible_boundary(), Branch::Plus).unwrap();
    let inv = helix_invariants(&hp).unwrap();
    assert!((inv.k - 0.2).abs() < 1e-12);
    assert!((inv.energy() - 0.25).abs() < 1e-12);
}

#[test]
fn invariants_on_grid_of_both_components() {
    for positive in [true, false] {
        for alpha0 in admissible_grid(50, positive) {
            for branch in [Branch::Plus, Branch::Minus] {
                let inv = helix_invariants(&HelixParams::new(alpha0, branch).unwrap()).unwrap();
                assert!(inv.k > 0.0);
                assert!((inv.energy() - 0.25).abs() < 1e-12);
                assert!((inv.b3.abs() - alpha0.sin()).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn inadmissible_angles_rejected() {
    for alpha0 in [0.0, PI / 2.0, 0.6, PI, -0.1] {
        assert!(
            matches!(HelixParams::new(alpha0, Branch::Plus), Err(Error::InadmissibleAlpha { .. })),
            "alpha0 = {alpha0}"
        );
    }
    assert!(matches!(solve_branch_a(PI / 2.0, Branch::Minus), Err(Error::InadmissibleAlpha { .. })));
}

#[test]
fn branches_coincide_at_boundary() {
    let edge = admissible_boundary();
    let plus = biharmonic_helix(
        &HelixParams::new(edge, Branch::Plus).unwrap().with_offsets(0.3, 1.0, -1.0, 2.0),
        HELIX_RANGE,
    )
    .unwrap();
    let minus = biharmonic_helix(
        &HelixParams::new(edge, Branch::Minus).unwrap().with_offsets(0.3, 1.0, -1.0, 2.0),
        HELIX_RANGE,
    )
    .unwrap();
    let a = sample_curve(&plus, 101, &cfg()).unwrap();
    let b = sample_curve(&minus, 101, &cfg()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn both_branches_are_biharmonic() {
    let alpha0 = admissible_grid(4, false)[1];
    for branch in [Branch::Plus, Branch::Minus] {
        let spec = biharmonic_helix(&HelixParams::new(alpha0, branch).unwrap(), HELIX_RANGE).unwrap();
        let traj = Trajectory::from_spec(&spec, 2001, &cfg()).unwrap();
        let result = classify(&traj, &cfg()).unwrap();
        assert_eq!(result.verdict, Verdict::NongeodesicBiharmonic, "{branch:?}");
        assert!(result.max_tau2 <= 1e-5);
    }
}

#[test]
fn translated_helix_matches_offset_helix() {
    let base = HelixParams::new(0.3, Branch::Minus).unwrap().with_offsets(0.7, 0.0, 0.0, 0.0);
    let (b, c, d) = (1.5, -2.0, 0.25);
    let moved = biharmonic_helix(&base, HELIX_RANGE)
        .unwrap()
        .left_translate(&Point::new(b, c, d))
        .unwrap();
    let direct = biharmonic_helix(&base.with_offsets(0.7, b, c, d), HELIX_RANGE).unwrap();
    let p = sample_curve(&moved, 201, &cfg()).unwrap();
    let q = sample_curve(&direct, 201, &cfg()).unwrap();
    for (u, v) in p.iter().zip(&q) {
        assert!((u.point.coords() - v.point.coords()).amax() < 1e-12);
        assert!((u.velocity.components - v.velocity.components).amax() < 1e-12);
    }
}

#[test]
fn cone_direction_is_tangent_to_geodesic_and_helix() {
    let hp = HelixParams::new(0.35, Branch::Plus).unwrap().with_offsets(0.4, 0.0, 0.0, 0.0);
    let helix = biharmonic_helix(&hp, (0.0, 5.0)).unwrap();
    let start = sample_curve(&helix, 11, &cfg()).unwrap()[0];
    let v0 = start.velocity.components;
    assert_eq!(
        cone_membership(&Geometry::heisenberg(), &start.velocity).unwrap(),
        ConeVerdict::BiharmonicDirection
    );
    let geo = geodesic_ivp(ManifoldParams::HEISENBERG, start.point, v0, (0.0, 5.0), &cfg()).unwrap();
    let g = sample_curve(&geo, 11, &cfg()).unwrap();
    assert!((g[0].velocity.components - v0).norm() < 1e-14);
    assert!((g[0].point.coords() - start.point.coords()).norm() < 1e-14);
    let end_gap = (g[10].point.coords() - sample_curve(&helix, 11, &cfg()).unwrap()[10].point.coords()).norm();
    assert!(end_gap > 1e-2, "curves coincide: {end_gap}");
}

#[test]
fn cone_membership_errors() {
    let g = Geometry::heisenberg();
    let long = FrameVector::new(Point::ORIGIN, Vector3::new(1.0, 1.0, 0.0));
    assert!(matches!(cone_membership(&g, &long), Err(Error::NonUnitVector(_))));
    let legendre = FrameVector::new(Point::new(2.0, 3.0, -1.0), Vector3::new(0.6, 0.8, 0.0));
    assert_eq!(cone_membership(&g, &legendre).unwrap(), ConeVerdict::GeodesicOnly);
    let c: f64 = 0.95;
    let inside = FrameVector::new(Point::ORIGIN, Vector3::new((1.0 - c * c).sqrt(), 0.0, c));
    assert_eq!(cone_membership(&g, &inside).unwrap(), ConeVerdict::BiharmonicDirection);
}

#[test]
fn vertical_and_horizontal_geodesics() {
    let h3 = ManifoldParams::HEISENBERG;
    let p0 = Point::new(0.5, -2.0, 1.0);
    let up = sample_curve(&geodesic_ivp(h3, p0, Vector3::z(), (0.0, 4.0), &cfg()).unwrap(), 41, &cfg()).unwrap();
    for smp in &up {
        assert!((smp.point.coords() - Vector3::new(0.5, -2.0, 1.0 + smp.s)).norm() < 1e-9);
    }
    let flat = sample_curve(&geodesic_ivp(h3, Point::ORIGIN, Vector3::x(), (0.0, 4.0), &cfg()).unwrap(), 41, &cfg()).unwrap();
    for smp in &flat {
        assert!((smp.point.coords() - Vector3::new(smp.s, 0.0, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn geodesic_stays_unit_speed() {
    let params = ManifoldParams::new(0.5, -1.0);
    let spec = geodesic_ivp(params, Point::new(0.1, 0.2, 0.0), Vector3::new(0.0, 0.6, 0.8), (0.0, 50.0), &cfg()).unwrap();
    for smp in sample_curve(&spec, 501, &cfg()).unwrap() {
        assert!((smp.velocity.norm() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn geodesic_input_validation() {
    let h3 = ManifoldParams::HEISENBERG;
    assert!(matches!(
        geodesic_ivp(h3, Point::ORIGIN, Vector3::new(1.0, 1.0, 0.0), (0.0, 1.0), &cfg()),
        Err(Error::NonUnitVector(_))
    ));
    let neg = ManifoldParams::new(-1.0, 1.0);
    assert!(matches!(
        geodesic_ivp(neg, Point::new(2.0, 0.0, 0.0), Vector3::z(), (0.0, 1.0), &cfg()),
        Err(Error::Domain { .. })
    ));
}

#[test]
fn subgroups() {
    let h3 = ManifoldParams::HEISENBERG;
    let diag = one_param_subgroup(h3, [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0], (0.0, 4.0)).unwrap();
    let traj = Trajectory::from_spec(&diag, 201, &cfg()).unwrap();
    assert_eq!(classify(&traj, &cfg()).unwrap().verdict, Verdict::Geodesic);
    let samples = sample_curve(&diag, 9, &cfg()).unwrap();
    assert!((samples[8].point.coords() - Vector3::new(4.0, 4.0, 0.0) * FRAC_1_SQRT_2).norm() < 1e-14);
    assert!(matches!(
        one_param_subgroup(ManifoldParams::new(1.0, 2.0), [0.0, 0.0, 1.0], (0.0, 1.0)),
        Err(Error::UnsupportedManifold { .. })
    ));
}

#[test]
fn surfaces_of_offset_helix() {
    let hp = offset_params();
    let rate = hp.rate().unwrap();
    let radius = hp.alpha0.sin() / rate;
    let cylinder = SurfacePatch::cylinder(hp);
    let helicoid = SurfacePatch::helicoid(hp);
    let curve = biharmonic_helix(&hp, HELIX_RANGE).unwrap();
    let points = sample_curve(&curve, 64, &cfg()).unwrap();
    for u in [-3.0, 0.0, 1.7, 12.0] {
        for v in [-2.0, 0.5, 4.0] {
            let p = surface_eval(&cylinder, u, v).unwrap();
            assert!(((p.x - hp.b).hypot(p.y - hp.c) - radius).abs() < 1e-12);
            assert_eq!(p.z, v);
        }
    }
    for smp in &points {
        let q = surface_eval(&helicoid, smp.s, 1.0).unwrap();
        assert!((q.coords() - smp.point.coords()).norm() < 1e-12);
    }
    assert!(membership_residual(&curve, &cylinder, 1001).unwrap() <= 1e-10);
    assert!(membership_residual(&curve, &helicoid, 1001).unwrap() <= 1e-10);
}

#[test]
fn translated_helix_leaves_cylinder() {
    let hp = offset_params();
    let far = biharmonic_helix(&hp.with_offsets(1.0, 4.0, -3.0, 0.0), HELIX_RANGE).unwrap();
    let residual = membership_residual(&far, &SurfacePatch::cylinder(hp), 501).unwrap();
    let offset = (3.0f64).hypot(4.0);
    let radius = hp.alpha0.sin() / hp.rate().unwrap();
    assert!(residual >= offset - 2.0 * radius, "{residual}");
}
