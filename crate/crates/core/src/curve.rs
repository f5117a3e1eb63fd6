//! Arclength-parametrized curves, covariant differentiation along them and
//! the Frenet apparatus.
//!
//! Frenet conventions: `∇_T T = kN`, `∇_T N = -kT - τB`, `∇_T B = τN` with
//! `k ≥ 0` and `B = T × N` in the oriented frame `(e1, e2, e3)`. Note the sign
//! of `τ`: it is the negative of the torsion in the more common convention
//! `∇_T N = -kT + τB`.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{contract_connection, heisenberg_product, Connection, FrameVector, Geometry, ManifoldParams, Point, TangentVector};
use crate::numerics::{differentiate, gauss_legendre, linspace, propagate_interior, propagate_valid, uniform_spacing, NumericsConfig, StencilOrder};
use crate::ode::{Integrator, OdeSettings};

/// One evaluation of an arclength-parametrized curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    pub point: Point,
    pub velocity: FrameVector,
}

#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub s_range: (f64, f64),
    pub manifold: ManifoldParams,
}

#[derive(Debug, Clone)]
pub enum CurveKind {
    ClosedForm(ClosedForm),
    OdeDefined(OdeCurve),
    Sampled(Vec<SampleRow>),
}

/// Curves with exact position and velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `x = (sinα₀/A) sin(As+a) + b`, `y = -(sinα₀/A) cos(As+a) + c`,
    /// `z = (cosα₀ + sin²α₀/(2A)) s - (b/2A) sinα₀ cos(As+a) - (c/2A) sinα₀ sin(As+a) + d`.
    ///
    /// Its tangent is `sinα₀ cos(As+a) e1 + sinα₀ sin(As+a) e2 + cosα₀ e3`
    /// on `H3` for any rate `A ≠ 0`.
    Helix(HelixForm),
    /// One-parameter subgroup `u ↦ (Au, Bu, Cu)` of `H3`.
    Subgroup { direction: [f64; 3] },
    /// `(x, y, z0 + s)`; a unit-speed integral curve of `e3` on every member
    /// of the family.
    VerticalLine { x: f64, y: f64, z0: f64 },
    /// Circle `x² + y² = r²` in the plane `z = 0` of `H3`, at unit speed.
    Circle { radius: f64 },
    /// Left translate of another closed-form curve of `H3`.
    Translated { by: Point, inner: Box<ClosedForm> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixForm {
    pub alpha0: f64,
    pub rate: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl HelixForm {
    pub fn position(&self, s: f64) -> Point {
        let (sa, ca) = self.alpha0.sin_cos();
        let beta = self.rate * s + self.a;
        let (sb, cb) = beta.sin_cos();
        let r = sa / self.rate;
        Point::new(
            r * sb + self.b,
            -r * cb + self.c,
            (ca + sa * sa / (2.0 * self.rate)) * s - 0.5 * self.b * r * cb - 0.5 * self.c * r * sb + self.d,
        )
    }

    pub fn coord_velocity(&self, s: f64) -> Vector3<f64> {
        let (sa, ca) = self.alpha0.sin_cos();
        let (sb, cb) = (self.rate * s + self.a).sin_cos();
        Vector3::new(
            sa * cb,
            sa * sb,
            ca + sa * sa / (2.0 * self.rate) + 0.5 * sa * (self.b * sb - self.c * cb),
        )
    }
}

impl ClosedForm {
    fn requires_heisenberg(&self) -> bool {
        !matches!(self, ClosedForm::VerticalLine { .. })
    }

    pub fn position(&self, s: f64) -> Point {
        match self {
            ClosedForm::Helix(h) => h.position(s),
            ClosedForm::Subgroup { direction: [a, b, c] } => Point::new(a * s, b * s, c * s),
            ClosedForm::VerticalLine { x, y, z0 } => Point::new(*x, *y, z0 + s),
            ClosedForm::Circle { radius } => {
                let th = s * circle_rate(*radius);
                Point::new(radius * th.cos(), radius * th.sin(), 0.0)
            }
            ClosedForm::Translated { by, inner } => heisenberg_product(by, &inner.position(s)),
        }
    }

    pub fn coord_velocity(&self, s: f64) -> Vector3<f64> {
        match self {
            ClosedForm::Helix(h) => h.coord_velocity(s),
            ClosedForm::Subgroup { direction } => Vector3::from(*direction),
            ClosedForm::VerticalLine { .. } => Vector3::z(),
            ClosedForm::Circle { radius } => {
                let w = circle_rate(*radius);
                let th = s * w;
                Vector3::new(-radius * w * th.sin(), radius * w * th.cos(), 0.0)
            }
            ClosedForm::Translated { by, inner } => {
                let v = inner.coord_velocity(s);
                Vector3::new(v[0], v[1], v[2] + 0.5 * (by.x * v[1] - by.y * v[0]))
            }
        }
    }
}

fn circle_rate(r: f64) -> f64 {
    1.0 / (r * (1.0 + 0.25 * r * r).sqrt())
}

/// An angle as a function of arclength.
pub trait AngleProfile: Send + Sync + fmt::Debug {
    fn value(&self, s: f64) -> f64;
    fn rate(&self, s: f64) -> f64;
}

/// `α(s) = Σ c_i s^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialAngle {
    pub coefficients: Vec<f64>,
}

impl PolynomialAngle {
    pub fn linear(start: f64, rate: f64) -> Self {
        PolynomialAngle {
            coefficients: vec![start, rate],
        }
    }
}

impl AngleProfile for PolynomialAngle {
    fn value(&self, s: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    fn rate(&self, s: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, c)| acc * s + i as f64 * c)
    }
}

#[derive(Debug, Clone)]
pub enum OdeCurve {
    /// Geodesic with initial point and unit initial velocity (frame components).
    Geodesic { p0: Point, v0: Vector3<f64>, settings: OdeSettings },
    /// Integral curve of `T = sinα cosβ e1 + sinα sinβ e2 + cosα e3` with
    /// `β(s) = β0 + ∫ cos α`.
    TangentAngles {
        p0: Point,
        beta0: f64,
        alpha: Arc<dyn AngleProfile>,
        settings: OdeSettings,
    },
}

/// An imported sample; `velocity` holds frame components when provided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub s: f64,
    pub point: Point,
    pub velocity: Option<Vector3<f64>>,
}

impl CurveSpec {
    pub fn closed_form(curve: ClosedForm, s_range: (f64, f64), manifold: ManifoldParams) -> Result<Self> {
        if curve.requires_heisenberg() && !manifold.is_heisenberg() {
            return Err(Error::UnsupportedManifold {
                m: manifold.m,
                l: manifold.l,
            });
        }
        check_range(s_range)?;
        Ok(CurveSpec {
            kind: CurveKind::ClosedForm(curve),
            s_range,
            manifold,
        })
    }

    /// Imported samples; arclength must be strictly increasing and uniform.
    pub fn sampled(rows: Vec<SampleRow>, manifold: ManifoldParams) -> Result<Self> {
        let s: Vec<f64> = rows.iter().map(|r| r.s).collect();
        uniform_spacing(&s)?;
        for (i, r) in rows.iter().enumerate() {
            if !r.point.is_finite() {
                return Err(Error::InvalidInput(format!("row {}: non-finite coordinates", i + 1)));
            }
        }
        let s_range = (s[0], s[s.len() - 1]);
        Ok(CurveSpec {
            kind: CurveKind::Sampled(rows),
            s_range,
            manifold,
        })
    }

    /// Left translate by `g` (only on `H3`).
    pub fn left_translate(&self, g: &Point) -> Result<CurveSpec> {
        if !self.manifold.is_heisenberg() {
            return Err(Error::UnsupportedManifold {
                m: self.manifold.m,
                l: self.manifold.l,
            });
        }
        let kind = match &self.kind {
            CurveKind::ClosedForm(c) => CurveKind::ClosedForm(ClosedForm::Translated {
                by: *g,
                inner: Box::new(c.clone()),
            }),
            CurveKind::OdeDefined(OdeCurve::Geodesic { p0, v0, settings }) => CurveKind::OdeDefined(OdeCurve::Geodesic {
                p0: heisenberg_product(g, p0),
                v0: *v0,
                settings: *settings,
            }),
            CurveKind::OdeDefined(OdeCurve::TangentAngles { p0, beta0, alpha, settings }) => CurveKind::OdeDefined(OdeCurve::TangentAngles {
                p0: heisenberg_product(g, p0),
                beta0: *beta0,
                alpha: alpha.clone(),
                settings: *settings,
            }),
            CurveKind::Sampled(rows) => CurveKind::Sampled(
                rows.iter()
                    .map(|r| SampleRow {
                        s: r.s,
                        point: heisenberg_product(g, &r.point),
                        velocity: r.velocity,
                    })
                    .collect(),
            ),
        };
        Ok(CurveSpec {
            kind,
            s_range: self.s_range,
            manifold: self.manifold,
        })
    }
}

/// Left translation of a curve on `H3` by the group element `g`.
pub fn left_translate_curve(g: &Point, curve: &CurveSpec) -> Result<CurveSpec> {
    curve.left_translate(g)
}

fn check_range((a, b): (f64, f64)) -> Result<()> {
    if a.is_finite() && b.is_finite() && b > a {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("invalid arclength range [{a}, {b}]")))
    }
}

/// Minimum sample count for generated curves (two nested fourth-order stencils).
pub const MIN_SAMPLES: usize = 9;

/// Evaluates a curve at `n` uniformly spaced arclength values over its range
/// (imported curves return their own rows and ignore `n`).
pub fn sample_curve(spec: &CurveSpec, n: usize, config: &NumericsConfig) -> Result<Vec<CurveSample>> {
    let geom = Geometry::with_config(spec.manifold, config);
    let samples = match &spec.kind {
        CurveKind::Sampled(rows) => sample_imported(&geom, rows, config)?,
        _ if n < MIN_SAMPLES => return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: n }),
        CurveKind::ClosedForm(c) => linspace(spec.s_range.0, spec.s_range.1, n)
            .into_iter()
            .map(|s| {
                let point = c.position(s);
                let velocity = geom.to_frame(&TangentVector {
                    base: point,
                    components: c.coord_velocity(s),
                })?;
                Ok(CurveSample { s, point, velocity })
            })
            .collect::<Result<Vec<_>>>()?,
        CurveKind::OdeDefined(ode) => sample_ode(&geom, ode, spec.s_range, n)?,
    };
    check_unit_speed(&samples, config.unit_speed_tol)?;
    Ok(samples)
}

fn check_unit_speed(samples: &[CurveSample], tol: f64) -> Result<()> {
    for (row, smp) in samples.iter().enumerate() {
        let speed = smp.velocity.norm();
        if !((speed - 1.0).abs() <= tol) {
            return Err(Error::NonUnitSpeed {
                row: row + 1,
                s: smp.s,
                speed,
                tol,
            });
        }
    }
    Ok(())
}

fn sample_imported(geom: &Geometry, rows: &[SampleRow], config: &NumericsConfig) -> Result<Vec<CurveSample>> {
    let s: Vec<f64> = rows.iter().map(|r| r.s).collect();
    let h = uniform_spacing(&s)?;
    let coords: Vec<Vector3<f64>> = rows.iter().map(|r| r.point.coords()).collect();
    let derived = if rows.iter().any(|r| r.velocity.is_none()) {
        Some(differentiate(&coords, h, config.stencil_order)?)
    } else {
        None
    };
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let velocity = match (r.velocity, &derived) {
                (Some(v), _) => FrameVector::new(r.point, v),
                (None, Some(d)) => geom.to_frame(&TangentVector {
                    base: r.point,
                    components: d[i],
                })?,
                (None, None) => unreachable!(),
            };
            Ok(CurveSample {
                s: r.s,
                point: r.point,
                velocity,
            })
        })
        .collect()
}

fn sample_ode(geom: &Geometry, ode: &OdeCurve, (s0, s1): (f64, f64), n: usize) -> Result<Vec<CurveSample>> {
    let grid = linspace(s0, s1, n);
    let mut out = Vec::with_capacity(n);
    match ode {
        OdeCurve::Geodesic { p0, v0, settings } => {
            let mut it = Integrator::new(*settings);
            let mut rhs = |s: f64, y: &[f64; 6]| -> Result<[f64; 6]> {
                let p = Point::new(y[0], y[1], y[2]);
                if geom.params.conformal_factor(&p) <= 0.0 {
                    return Err(Error::DomainExit { s });
                }
                let v = Vector3::new(y[3], y[4], y[5]);
                let dx = geom.frame_matrix(&p)? * v;
                let dv = -contract_connection(&geom.connection(&p)?, &v, &v);
                Ok([dx[0], dx[1], dx[2], dv[0], dv[1], dv[2]])
            };
            let mut y = [p0.x, p0.y, p0.z, v0[0], v0[1], v0[2]];
            for (i, &s) in grid.iter().enumerate() {
                if i > 0 {
                    y = it.advance(&mut rhs, grid[i - 1], y, s)?;
                }
                let point = Point::new(y[0], y[1], y[2]);
                out.push(CurveSample {
                    s,
                    point,
                    velocity: FrameVector::new(point, Vector3::new(y[3], y[4], y[5])),
                });
            }
        }
        OdeCurve::TangentAngles { p0, beta0, alpha, settings } => {
            let tangent = |s: f64, beta: f64| {
                let (sa, ca) = alpha.value(s).sin_cos();
                let (sb, cb) = beta.sin_cos();
                Vector3::new(sa * cb, sa * sb, ca)
            };
            let mut it = Integrator::new(*settings);
            let mut y = [p0.x, p0.y, p0.z];
            let mut beta = *beta0;
            for (i, &s) in grid.iter().enumerate() {
                if i > 0 {
                    let (sa, beta_a) = (grid[i - 1], beta);
                    let mut rhs = |t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
                        let p = Point::new(y[0], y[1], y[2]);
                        if geom.params.conformal_factor(&p) <= 0.0 {
                            return Err(Error::DomainExit { s: t });
                        }
                        let b = beta_a + gauss_legendre(|u| alpha.value(u).cos(), sa, t);
                        let dx = geom.frame_matrix(&p)? * tangent(t, b);
                        Ok([dx[0], dx[1], dx[2]])
                    };
                    y = it.advance(&mut rhs, sa, y, s)?;
                    beta += gauss_legendre(|u| alpha.value(u).cos(), sa, s);
                }
                let point = Point::new(y[0], y[1], y[2]);
                out.push(CurveSample {
                    s,
                    point,
                    velocity: FrameVector::new(point, tangent(s, beta)),
                });
            }
        }
    }
    Ok(out)
}

/// Per-sample values with a flag marking samples whose every stencil was
/// central (boundary samples are excluded from statistics).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series<T> {
    pub values: Vec<T>,
    pub interior: Vec<bool>,
}

impl<T: Copy> Series<T> {
    pub fn interior_values(&self) -> impl Iterator<Item = T> + '_ {
        self.values.iter().zip(&self.interior).filter(|(_, &f)| f).map(|(v, _)| *v)
    }

    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|&&f| f).count()
    }
}

impl Series<Vector3<f64>> {
    /// Largest interior norm, or `None` without interior samples.
    pub fn max_interior_norm(&self) -> Option<f64> {
        self.interior_values()
            .map(|v| v.norm())
            .fold(None, |m, x| Some(m.map_or(x, |m: f64| m.max(x))))
    }
}

/// A sampled curve prepared for differentiation: uniform spacing, connection
/// tables at every sample.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub geometry: Geometry,
    pub samples: Vec<CurveSample>,
    pub spacing: f64,
    pub order: StencilOrder,
    pub k_floor: f64,
    connections: Vec<Connection>,
    /// Samples whose velocity is trusted for central differencing.
    base_interior: Vec<bool>,
}

impl Trajectory {
    pub fn new(geometry: Geometry, samples: Vec<CurveSample>, config: &NumericsConfig) -> Result<Self> {
        let order = config.stencil_order;
        if samples.len() < order.min_samples() {
            return Err(Error::TooFewSamples {
                needed: order.min_samples(),
                got: samples.len(),
            });
        }
        let s: Vec<f64> = samples.iter().map(|x| x.s).collect();
        let spacing = uniform_spacing(&s)?;
        let connections = samples.iter().map(|x| geometry.connection(&x.point)).collect::<Result<Vec<_>>>()?;
        let base_interior = vec![true; samples.len()];
        Ok(Trajectory {
            geometry,
            samples,
            spacing,
            order,
            k_floor: config.k_floor,
            connections,
            base_interior,
        })
    }

    /// Samples the curve and prepares it for differentiation. Imported curves
    /// without velocity columns get velocities by finite differences, and the
    /// samples at the ends (one-sided stencils) are excluded from the interior.
    pub fn from_spec(spec: &CurveSpec, n: usize, config: &NumericsConfig) -> Result<Self> {
        let samples = sample_curve(spec, n, config)?;
        let mut traj = Trajectory::new(Geometry::with_config(spec.manifold, config), samples, config)?;
        if let CurveKind::Sampled(rows) = &spec.kind {
            if rows.iter().any(|r| r.velocity.is_none()) {
                traj.base_interior = propagate_interior(&traj.base_interior, traj.order);
            }
        }
        Ok(traj)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn s(&self) -> Vec<f64> {
        self.samples.iter().map(|x| x.s).collect()
    }

    pub fn tangent(&self) -> Vec<Vector3<f64>> {
        self.samples.iter().map(|x| x.velocity.components).collect()
    }

    pub fn connection_at(&self, i: usize) -> &Connection {
        &self.connections[i]
    }

    /// `∇_T V` from frame components of `V` at every sample.
    pub fn covariant_derivative(&self, field: &[Vector3<f64>], interior: &[bool]) -> Result<Series<Vector3<f64>>> {
        if field.len() != self.len() || interior.len() != self.len() {
            return Err(Error::InvalidInput(format!(
                "field has {} samples, curve has {}",
                field.len(),
                self.len()
            )));
        }
        let d = differentiate(field, self.spacing, self.order)?;
        let values = d
            .into_iter()
            .zip(&self.samples)
            .zip(field.iter().zip(&self.connections))
            .map(|((dv, smp), (v, conn))| dv + contract_connection(conn, &smp.velocity.components, v))
            .collect();
        Ok(Series {
            values,
            interior: propagate_interior(interior, self.order),
        })
    }

    /// Scalar derivative along the curve with validity masking.
    fn scalar_derivative(&self, values: &[Option<f64>], interior: &[bool]) -> Result<(Vec<Option<f64>>, Vec<bool>)> {
        let filled: Vec<f64> = values.iter().map(|v| v.unwrap_or(0.0)).collect();
        let valid: Vec<bool> = values.iter().map(Option::is_some).collect();
        let d = differentiate(&filled, self.spacing, self.order)?;
        let valid = propagate_valid(&valid, self.order);
        let out = d.into_iter().zip(&valid).map(|(x, &ok)| ok.then_some(x)).collect();
        Ok((out, propagate_interior(interior, self.order)))
    }

    /// `τ₁ = ∇_T T`.
    pub fn tension(&self) -> Result<Series<Vector3<f64>>> {
        self.covariant_derivative(&self.tangent(), &self.base_interior)
    }

    /// Frenet data at every sample; `N`, `B`, `τ` are absent where the
    /// geodesic curvature is at or below the floor (or where a stencil touches
    /// such a sample).
    pub fn frenet_partial(&self) -> Result<Vec<FrenetData>> {
        let tension = self.tension()?;
        let normal: Vec<Option<Vector3<f64>>> = tension
            .values
            .iter()
            .map(|t| {
                let k = t.norm();
                (k > self.k_floor).then(|| t / k)
            })
            .collect();
        let filled: Vec<Vector3<f64>> = normal.iter().map(|n| n.unwrap_or_else(Vector3::zeros)).collect();
        let dn = self.covariant_derivative(&filled, &tension.interior)?;
        let dn_valid = propagate_valid(&normal.iter().map(Option::is_some).collect::<Vec<_>>(), self.order);
        let out = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, smp)| {
                let t = smp.velocity.components;
                let n = normal[i];
                let b = n.map(|n| t.cross(&n));
                let tau = match (b, dn_valid[i]) {
                    (Some(b), true) => Some(-dn.values[i].dot(&b)),
                    _ => None,
                };
                FrenetData {
                    s: smp.s,
                    t: smp.velocity,
                    n: n.map(|v| FrameVector::new(smp.point, v)),
                    b: b.map(|v| FrameVector::new(smp.point, v)),
                    k: tension.values[i].norm(),
                    tau,
                    t3: t[2],
                    n3: n.map(|v| v[2]),
                    b3: b.map(|v| v[2]),
                    interior: dn.interior[i],
                }
            })
            .collect();
        Ok(out)
    }

    /// Frenet data, failing when the frame is undefined at an interior sample.
    pub fn frenet(&self) -> Result<Vec<FrenetData>> {
        let data = self.frenet_partial()?;
        if let Some(bad) = data.iter().find(|f| f.interior && f.tau.is_none()) {
            return Err(Error::GeodesicFrameUndefined { s: bad.s, k: bad.k });
        }
        if !data.iter().any(|f| f.interior) {
            return Err(Error::TooFewSamples {
                needed: 2 * self.order.min_samples() - 1,
                got: self.len(),
            });
        }
        Ok(data)
    }

    /// Derivative of a scalar Frenet series (`k`, `τ`, ...).
    pub fn derivative_of(&self, values: &[Option<f64>], interior: &[bool]) -> Result<(Vec<Option<f64>>, Vec<bool>)> {
        self.scalar_derivative(values, interior)
    }
}

/// Frenet apparatus at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetData {
    pub s: f64,
    pub t: FrameVector,
    pub n: Option<FrameVector>,
    pub b: Option<FrameVector>,
    /// Geodesic curvature `|∇_T T|`.
    pub k: f64,
    /// Geodesic torsion, `τ = -<∇_T N, B>`.
    pub tau: Option<f64>,
    pub t3: f64,
    pub n3: Option<f64>,
    pub b3: Option<f64>,
    /// Every stencil behind this record was central.
    pub interior: bool,
}

/// `∇_T V` along sampled curve data.
pub fn covariant_derivative_along(
    geometry: &Geometry,
    samples: &[CurveSample],
    field: &[FrameVector],
    config: &NumericsConfig,
) -> Result<Series<FrameVector>> {
    let traj = Trajectory::new(*geometry, samples.to_vec(), config)?;
    let comps: Vec<Vector3<f64>> = field.iter().map(|v| v.components).collect();
    let d = traj.covariant_derivative(&comps, &vec![true; samples.len()])?;
    Ok(Series {
        values: d.values.into_iter().zip(samples).map(|(v, smp)| FrameVector::new(smp.point, v)).collect(),
        interior: d.interior,
    })
}

/// Frenet apparatus of sampled curve data.
pub fn frenet_apparatus(geometry: &Geometry, samples: &[CurveSample], config: &NumericsConfig) -> Result<Vec<FrenetData>> {
    Trajectory::new(*geometry, samples.to_vec(), config)?.frenet()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h3_config() -> NumericsConfig {
        NumericsConfig::default()
    }

    #[test]
    fn vertical_line_velocity_is_e3() {
        let spec = CurveSpec::closed_form(
            ClosedForm::VerticalLine { x: 0.3, y: -2.0, z0: 1.0 },
            (0.0, 1.0),
            ManifoldParams::HEISENBERG,
        )
        .unwrap();
        for smp in sample_curve(&spec, 11, &h3_config()).unwrap() {
            assert!((smp.velocity.components - Vector3::z()).amax() < 1e-15);
        }
    }

    #[test]
    fn vertical_line_has_vanishing_derivative_of_e3() {
        let spec = CurveSpec::closed_form(
            ClosedForm::VerticalLine { x: 1.0, y: 2.0, z0: 0.0 },
            (0.0, 1.0),
            ManifoldParams::HEISENBERG,
        )
        .unwrap();
        let cfg = h3_config();
        let samples = sample_curve(&spec, 21, &cfg).unwrap();
        let e3: Vec<FrameVector> = samples.iter().map(|s| FrameVector::basis(s.point, 3).unwrap()).collect();
        let d = covariant_derivative_along(&Geometry::heisenberg(), &samples, &e3, &cfg).unwrap();
        assert!(d.values.iter().all(|v| v.components.amax() < 1e-14));
    }

    #[test]
    fn too_few_samples_rejected() {
        let spec = CurveSpec::closed_form(ClosedForm::Circle { radius: 1.0 }, (0.0, 1.0), ManifoldParams::HEISENBERG).unwrap();
        assert_eq!(
            sample_curve(&spec, 8, &h3_config()).unwrap_err(),
            Error::TooFewSamples { needed: 9, got: 8 }
        );
    }

    #[test]
    fn circle_is_unit_speed() {
        let spec = CurveSpec::closed_form(ClosedForm::Circle { radius: 1.7 }, (0.0, 5.0), ManifoldParams::HEISENBERG).unwrap();
        let samples = sample_curve(&spec, 50, &h3_config()).unwrap();
        for smp in samples {
            assert!((smp.velocity.norm() - 1.0).abs() < 1e-14);
            let p = smp.point;
            assert!((p.x.hypot(p.y) - 1.7).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_forms_need_heisenberg() {
        let err = CurveSpec::closed_form(ClosedForm::Circle { radius: 1.0 }, (0.0, 1.0), ManifoldParams::new(1.0, 2.0)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedManifold { .. }));
    }

    #[test]
    fn non_unit_speed_detected() {
        let rows: Vec<SampleRow> = (0..12)
            .map(|i| {
                let s = i as f64 * 0.1;
                SampleRow {
                    s,
                    point: Point::new(2.0 * s, 0.0, 0.0),
                    velocity: None,
                }
            })
            .collect();
        let spec = CurveSpec::sampled(rows, ManifoldParams::HEISENBERG).unwrap();
        assert!(matches!(sample_curve(&spec, 0, &h3_config()), Err(Error::NonUnitSpeed { row: 1, .. })));
    }

    #[test]
    fn non_monotone_rows_rejected() {
        let rows = vec![
            SampleRow {
                s: 0.0,
                point: Point::ORIGIN,
                velocity: None,
            },
            SampleRow {
                s: 0.2,
                point: Point::ORIGIN,
                velocity: None,
            },
            SampleRow {
                s: 0.1,
                point: Point::ORIGIN,
                velocity: None,
            },
        ];
        assert!(matches!(
            CurveSpec::sampled(rows, ManifoldParams::HEISENBERG),
            Err(Error::NonMonotone { row: 2, .. })
        ));
    }

    #[test]
    fn polynomial_angle() {
        let p = PolynomialAngle {
            coefficients: vec![0.5, 0.3, -0.1],
        };
        assert!((p.value(2.0) - (0.5 + 0.6 - 0.4)).abs() < 1e-15);
        assert!((p.rate(2.0) - (0.3 - 0.4)).abs() < 1e-15);
    }

    #[test]
    fn geodesic_frenet_is_undefined() {
        let spec = CurveSpec::closed_form(
            ClosedForm::Subgroup { direction: [1.0, 0.0, 0.0] },
            (0.0, 2.0),
            ManifoldParams::HEISENBERG,
        )
        .unwrap();
        let traj = Trajectory::from_spec(&spec, 41, &h3_config()).unwrap();
        assert!(matches!(traj.frenet(), Err(Error::GeodesicFrameUndefined { .. })));
        let partial = traj.frenet_partial().unwrap();
        assert!(partial.iter().all(|f| f.n.is_none() && f.tau.is_none()));
    }
}
