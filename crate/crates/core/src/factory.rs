//! Constructors for the explicit curves and surfaces of `H3`: the
//! non-geodesic biharmonic helices, geodesics, one-parameter subgroups, curves
//! with `B3 = 0`, and the cylinder / helicoid pair cutting out each helix.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::curve::{sample_curve, AngleProfile, ClosedForm, CurveKind, CurveSpec, HelixForm, OdeCurve};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, ManifoldParams, Point};
use crate::numerics::{linspace, NumericsConfig};

/// Tolerance under which a negative discriminant `5cos²α₀ - 4` is rounded to
/// zero, so that `cos α₀ = 2/√5` computed in floating point is admissible.
pub const DISCRIMINANT_SLACK: f64 = 1e-12;

/// Boundary angle `arccos(2/√5)` of the admissible set.
pub fn admissible_boundary() -> f64 {
    (2.0 / 5f64.sqrt()).acos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            other => Err(Error::InvalidInput(format!("unknown branch {other:?} (expected plus or minus)"))),
        }
    }
}

/// `5cos²α₀ - 4`, with values within [`DISCRIMINANT_SLACK`] of zero snapped to 0.
pub fn discriminant(alpha0: f64) -> f64 {
    let d = 5.0 * alpha0.cos().powi(2) - 4.0;
    if d.abs() <= DISCRIMINANT_SLACK {
        0.0
    } else {
        d
    }
}

/// Admissibility of `α₀` for the biharmonic helix family.
pub fn is_admissible(alpha0: f64) -> bool {
    alpha0 > 0.0 && alpha0 < PI && alpha0.sin() != 0.0 && discriminant(alpha0) >= 0.0
}

/// Root `A` of `A² - cosα₀·A + 1 - cos²α₀ = 0` on the requested branch,
/// `A = (cosα₀ ± √(5cos²α₀ - 4)) / 2`.
pub fn solve_branch_a(alpha0: f64, branch: Branch) -> Result<f64> {
    let disc = discriminant(alpha0);
    if !(disc >= 0.0) {
        return Err(Error::InadmissibleAlpha {
            alpha0,
            reason: format!("5cos^2(alpha0) - 4 = {disc:.6} < 0"),
        });
    }
    let ca = alpha0.cos();
    let a = 0.5 * (ca + branch.sign() * disc.sqrt());
    let residual = a * a - ca * a + 1.0 - ca * ca;
    if residual.abs() > 1e-12 {
        return Err(Error::InadmissibleAlpha {
            alpha0,
            reason: format!("root residual {residual:e}"),
        });
    }
    if a == ca {
        return Err(Error::InadmissibleAlpha {
            alpha0,
            reason: "root equals cos(alpha0), the curve is a geodesic".into(),
        });
    }
    Ok(a)
}

/// Parameters of a non-geodesic biharmonic helix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixParams {
    pub alpha0: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub branch: Branch,
}

impl HelixParams {
    pub fn new(alpha0: f64, branch: Branch) -> Result<Self> {
        HelixParams {
            alpha0,
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            branch,
        }
        .validated()
    }

    pub fn with_offsets(mut self, a: f64, b: f64, c: f64, d: f64) -> Self {
        (self.a, self.b, self.c, self.d) = (a, b, c, d);
        self
    }

    pub fn validated(self) -> Result<Self> {
        let alpha0 = self.alpha0;
        if !(alpha0 > 0.0 && alpha0 < PI) {
            return Err(Error::InadmissibleAlpha {
                alpha0,
                reason: "alpha0 must lie in (0, pi)".into(),
            });
        }
        if alpha0.sin() == 0.0 {
            return Err(Error::InadmissibleAlpha {
                alpha0,
                reason: "sin(alpha0) = 0".into(),
            });
        }
        solve_branch_a(alpha0, self.branch)?;
        Ok(self)
    }

    pub fn rate(&self) -> Result<f64> {
        solve_branch_a(self.alpha0, self.branch)
    }

    pub fn form(&self) -> Result<HelixForm> {
        let p = self.validated()?;
        Ok(HelixForm {
            alpha0: p.alpha0,
            rate: p.rate()?,
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
        })
    }
}

/// Default arclength range used for generated helices.
pub const HELIX_RANGE: (f64, f64) = (0.0, 10.0 * PI);

/// Closed-form biharmonic helix on `H3` over `s_range`.
pub fn biharmonic_helix(hp: &HelixParams, s_range: (f64, f64)) -> Result<CurveSpec> {
    CurveSpec::closed_form(ClosedForm::Helix(hp.form()?), s_range, ManifoldParams::HEISENBERG)
}

/// The helix formula with an arbitrary rate `A` (not necessarily a root of
/// the branch quadratic).
pub fn helix_with_rate(alpha0: f64, rate: f64, offsets: [f64; 4], s_range: (f64, f64)) -> Result<CurveSpec> {
    if rate == 0.0 || !rate.is_finite() {
        return Err(Error::InvalidInput(format!("helix rate must be finite and non-zero, got {rate}")));
    }
    let [a, b, c, d] = offsets;
    CurveSpec::closed_form(
        ClosedForm::Helix(HelixForm { alpha0, rate, a, b, c, d }),
        s_range,
        ManifoldParams::HEISENBERG,
    )
}

/// Closed-form Frenet invariants of a helix of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixInvariants {
    pub alpha0: f64,
    pub rate: f64,
    pub k: f64,
    pub tau: f64,
    pub b3: f64,
}

impl HelixInvariants {
    /// `k² + τ² + B3²`, identically `1/4` on the family.
    pub fn energy(&self) -> f64 {
        self.k * self.k + self.tau * self.tau + self.b3 * self.b3
    }
}

/// Frenet invariants of the helix with tangent angle `α₀` and rate `A`:
/// `k = |sinα₀(cosα₀ - A)|`, `τ = -(A cosα₀ + 1/2 - cos²α₀)`, and
/// `B3 = -sinα₀` when `sinα₀(cosα₀ - A) > 0` (the sign flips with `N`
/// otherwise, since `k` is kept non-negative).
pub fn invariants_for_rate(alpha0: f64, rate: f64) -> HelixInvariants {
    let (sa, ca) = alpha0.sin_cos();
    let signed_k = sa * (ca - rate);
    HelixInvariants {
        alpha0,
        rate,
        k: signed_k.abs(),
        tau: -(ca * rate + 0.5 - ca * ca),
        b3: -signed_k.signum() * sa,
    }
}

pub fn helix_invariants(hp: &HelixParams) -> Result<HelixInvariants> {
    let hp = hp.validated()?;
    Ok(invariants_for_rate(hp.alpha0, hp.rate()?))
}

fn check_unit(v: &Vector3<f64>) -> Result<()> {
    let n = v.norm();
    if (n - 1.0).abs() > 1e-12 {
        Err(Error::NonUnitVector(n))
    } else {
        Ok(())
    }
}

/// Geodesic with initial point `p0` and unit initial velocity `v0` (frame
/// components). The geodesic equation is integrated in frame form,
/// `x' = E(x) v`, `v_c' = -Σ Γ[a][b][c] v_a v_b`.
pub fn geodesic_ivp(params: ManifoldParams, p0: Point, v0: Vector3<f64>, s_range: (f64, f64), config: &NumericsConfig) -> Result<CurveSpec> {
    check_unit(&v0)?;
    Geometry::with_config(params, config).conformal_factor(&p0)?;
    if !(s_range.1 > s_range.0) {
        return Err(Error::InvalidInput(format!("invalid arclength range [{}, {}]", s_range.0, s_range.1)));
    }
    Ok(CurveSpec {
        kind: CurveKind::OdeDefined(OdeCurve::Geodesic {
            p0,
            v0,
            settings: config.ode,
        }),
        s_range,
        manifold: params,
    })
}

/// `u ↦ exp(uX)` for a unit `X = (A, B, C)` at the identity of `H3`.
pub fn one_param_subgroup(params: ManifoldParams, direction: [f64; 3], s_range: (f64, f64)) -> Result<CurveSpec> {
    check_unit(&Vector3::from(direction))?;
    CurveSpec::closed_form(ClosedForm::Subgroup { direction }, s_range, params)
}

/// Curve with tangent `sinα cosβ e1 + sinα sinβ e2 + cosα e3` and
/// `β' = cos α`, which forces `B3 = 0` and `τ = -1/2` when `α' > 0`.
pub fn b3zero_curve(alpha: Arc<dyn AngleProfile>, s_range: (f64, f64), config: &NumericsConfig) -> Result<CurveSpec> {
    if !(s_range.1 > s_range.0) {
        return Err(Error::InvalidInput(format!("invalid arclength range [{}, {}]", s_range.0, s_range.1)));
    }
    for s in linspace(s_range.0, s_range.1, 1025) {
        let rate = alpha.rate(s);
        if !(rate > 0.0) {
            return Err(Error::NonMonotoneAlpha { s, rate });
        }
    }
    Ok(CurveSpec {
        kind: CurveKind::OdeDefined(OdeCurve::TangentAngles {
            p0: Point::ORIGIN,
            beta0: 0.0,
            alpha,
            settings: config.ode,
        }),
        s_range,
        manifold: ManifoldParams::HEISENBERG,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    /// Round cylinder over the circle of radius `sinα₀/|A|` around `(b, c)`.
    Cylinder,
    /// Helicoid through the helix at `v = 1`.
    Helicoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePatch {
    pub kind: SurfaceKind,
    pub helix: HelixParams,
}

impl SurfacePatch {
    pub fn cylinder(helix: HelixParams) -> Self {
        SurfacePatch {
            kind: SurfaceKind::Cylinder,
            helix,
        }
    }

    pub fn helicoid(helix: HelixParams) -> Self {
        SurfacePatch {
            kind: SurfaceKind::Helicoid,
            helix,
        }
    }
}

pub fn surface_eval(patch: &SurfacePatch, u: f64, v: f64) -> Result<Point> {
    let hp = patch.helix;
    let rate = hp.rate()?;
    let (sa, ca) = hp.alpha0.sin_cos();
    let (sb, cb) = (rate * u + hp.a).sin_cos();
    let r = sa / rate;
    Ok(match patch.kind {
        SurfaceKind::Cylinder => Point::new(r * sb + hp.b, -r * cb + hp.c, v),
        SurfaceKind::Helicoid => {
            let x = v * r * sb + hp.b;
            let y = -v * r * cb + hp.c;
            let z = (ca + sa * sa / (2.0 * rate)) * u + 0.5 * hp.b * y - 0.5 * hp.c * x + hp.d;
            Point::new(x, y, z)
        }
    })
}

/// Largest distance of `n` curve samples from the patch: the radial defect
/// for the cylinder, the defect against `S'(s, 1)` for the helicoid.
pub fn membership_residual(curve: &CurveSpec, patch: &SurfacePatch, n: usize) -> Result<f64> {
    let samples = sample_curve(curve, n, &NumericsConfig::default())?;
    let hp = patch.helix;
    let radius = (hp.alpha0.sin() / hp.rate()?).abs();
    let mut worst: f64 = 0.0;
    for smp in samples {
        let p = smp.point;
        let defect = match patch.kind {
            SurfaceKind::Cylinder => ((p.x - hp.b).hypot(p.y - hp.c) - radius).abs(),
            SurfaceKind::Helicoid => (p.coords() - surface_eval(patch, smp.s, 1.0)?.coords()).norm(),
        };
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// `n` admissible angles spread evenly over one component of the admissible
/// set, `(0, arccos(2/√5)]` for `positive`, `[arccos(-2/√5), π)` otherwise.
pub fn admissible_grid(n: usize, positive: bool) -> Vec<f64> {
    let edge = admissible_boundary();
    (1..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            if positive {
                edge * t
            } else {
                PI - edge * t
            }
        })
        .collect()
}
