//! Riemannian structure of the Cartan-Vranceanu metrics
//!
//! ```text
//! ds² = (dx² + dy²) / F² + (dz + (l/2)(y dx - x dy) / F)²,   F = 1 + m(x² + y²)
//! ```
//!
//! The Heisenberg group `H3` is the member `(m, l) = (0, 1)`. Everything is
//! expressed in the orthonormal frame
//!
//! ```text
//! e1 = F ∂x - (l/2) y ∂z,   e2 = F ∂y + (l/2) x ∂z,   e3 = ∂z
//! ```
//!
//! which is left-invariant on `H3`. Its only non-zero brackets are
//! `[e1, e2] = -2my e1 + 2mx e2 + l e3`.
//!
//! The connection `Γ[a][b][c] = <∇_{e_a} e_b, e_c>` can be computed along
//! three independent routes (see [`ConnectionPath`]); all of them share the
//! curvature conventions of the crate root.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{central_derivative, NumericsConfig, StencilOrder};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifoldParams {
    pub m: f64,
    pub l: f64,
}

impl ManifoldParams {
    pub const HEISENBERG: ManifoldParams = ManifoldParams { m: 0.0, l: 1.0 };

    pub fn new(m: f64, l: f64) -> Self {
        ManifoldParams { m, l }
    }

    pub fn heisenberg() -> Self {
        Self::HEISENBERG
    }

    pub fn is_heisenberg(&self) -> bool {
        self.m == 0.0 && self.l == 1.0
    }

    /// `l² - 4m`. Vanishes exactly for the constant-curvature members.
    pub fn degeneracy(&self) -> f64 {
        self.l * self.l - 4.0 * self.m
    }

    pub fn is_space_form(&self) -> bool {
        self.degeneracy() == 0.0
    }

    pub fn conformal_factor(&self, p: &Point) -> f64 {
        1.0 + self.m * (p.x * p.x + p.y * p.y)
    }

    fn require_heisenberg(&self) -> Result<()> {
        if self.is_heisenberg() {
            Ok(())
        } else {
            Err(Error::UnsupportedManifold { m: self.m, l: self.l })
        }
    }
}

impl Default for ManifoldParams {
    fn default() -> Self {
        Self::HEISENBERG
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point { x, y, z }
    }

    pub fn coords(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn from_coords(v: &Vector3<f64>) -> Self {
        Point::new(v[0], v[1], v[2])
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    fn shifted(&self, axis: usize, t: f64) -> Point {
        let mut v = self.coords();
        v[axis] += t;
        Point::from_coords(&v)
    }

    fn approx_eq(&self, other: &Point) -> bool {
        (self.coords() - other.coords()).amax() <= 1e-12 * (1.0 + self.coords().amax())
    }
}

/// Tangent vector with components in the coordinate basis `(∂x, ∂y, ∂z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: Point,
    pub components: Vector3<f64>,
}

/// Tangent vector with components in the orthonormal frame `(e1, e2, e3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameVector {
    pub base: Point,
    pub components: Vector3<f64>,
}

impl FrameVector {
    pub fn new(base: Point, components: Vector3<f64>) -> Self {
        FrameVector { base, components }
    }

    /// Frame basis vector `e_a` (1-based) at `base`.
    pub fn basis(base: Point, a: usize) -> Result<Self> {
        let i = index(a)?;
        let mut c = Vector3::zeros();
        c[i] = 1.0;
        Ok(FrameVector::new(base, c))
    }

    /// Metric norm; the frame is orthonormal so this is the Euclidean norm of
    /// the components.
    pub fn norm(&self) -> f64 {
        self.components.norm()
    }

    pub fn dot(&self, other: &FrameVector) -> Result<f64> {
        same_base(&self.base, &other.base)?;
        Ok(self.components.dot(&other.components))
    }

    /// Cross product in the oriented orthonormal frame, `e1 × e2 = e3`.
    pub fn cross(&self, other: &FrameVector) -> Result<FrameVector> {
        same_base(&self.base, &other.base)?;
        Ok(FrameVector::new(self.base, self.components.cross(&other.components)))
    }

    pub fn scaled(&self, t: f64) -> FrameVector {
        FrameVector::new(self.base, self.components * t)
    }

    /// Third frame component `<X, e3>`.
    pub fn third(&self) -> f64 {
        self.components[2]
    }
}

/// Cross product of two frame vectors at the same point.
pub fn frame_cross(x: &FrameVector, y: &FrameVector) -> Result<FrameVector> {
    x.cross(y)
}

fn same_base(p: &Point, q: &Point) -> Result<()> {
    if p.approx_eq(q) {
        Ok(())
    } else {
        Err(Error::BasePointMismatch)
    }
}

fn index(a: usize) -> Result<usize> {
    if (1..=3).contains(&a) {
        Ok(a - 1)
    } else {
        Err(Error::Index(a))
    }
}

/// Gram matrix of the metric in the coordinate basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTensor {
    pub base: Point,
    pub matrix: Matrix3<f64>,
}

impl MetricTensor {
    pub fn inner(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        u.dot(&(self.matrix * v))
    }

    pub fn leading_minors(&self) -> [f64; 3] {
        let g = &self.matrix;
        [g[(0, 0)], g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)], g.determinant()]
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }
}

/// Which route computes the Levi-Civita connection and curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ConnectionPath {
    /// `HeisenbergTable` on `H3`, `Analytic` elsewhere.
    #[default]
    Auto,
    /// Constant frame table of `H3`; rejects other manifolds.
    HeisenbergTable,
    /// Koszul formula on the analytic frame brackets.
    Analytic,
    /// Coordinate Christoffel symbols from finite differences of the metric,
    /// converted to the frame.
    FiniteDifference,
}

/// Frame connection coefficients `Γ[a][b][c] = <∇_{e_a} e_b, e_c>` (0-based).
pub type Connection = [[[f64; 3]; 3]; 3];
/// Curvature `R[a][b][c][d] = g(R(e_a, e_b) e_c, e_d)` (0-based).
pub type Riemann = [[[[f64; 3]; 3]; 3]; 3];
/// Coordinate Christoffel symbols `Γ^i_jk` stored as `[i][j][k]`.
type Christoffel = [[[f64; 3]; 3]; 3];

const HALF: f64 = 0.5;

/// Frame connection table of `H3`:
/// `∇_{e1}e2 = ½e3, ∇_{e1}e3 = -½e2, ∇_{e2}e1 = -½e3, ∇_{e2}e3 = ½e1,
/// ∇_{e3}e1 = -½e2, ∇_{e3}e2 = ½e1`, all others zero.
pub const HEISENBERG_CONNECTION: Connection = [
    [[0.0, 0.0, 0.0], [0.0, 0.0, HALF], [0.0, -HALF, 0.0]],
    [[0.0, 0.0, -HALF], [0.0, 0.0, 0.0], [HALF, 0.0, 0.0]],
    [[0.0, -HALF, 0.0], [HALF, 0.0, 0.0], [0.0, 0.0, 0.0]],
];

/// Riemannian structure for one member of the family together with the
/// numerical settings of the finite-difference route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub params: ManifoldParams,
    pub path: ConnectionPath,
    pub fd_step: f64,
    pub fd_outer_step: f64,
    pub stencil: StencilOrder,
}

impl Geometry {
    pub fn new(params: ManifoldParams) -> Self {
        Self::with_config(params, &NumericsConfig::default())
    }

    pub fn heisenberg() -> Self {
        Self::new(ManifoldParams::HEISENBERG)
    }

    pub fn with_config(params: ManifoldParams, config: &NumericsConfig) -> Self {
        Geometry {
            params,
            path: config.connection_path,
            fd_step: config.fd_step,
            fd_outer_step: config.fd_outer_step,
            stencil: config.stencil_order,
        }
    }

    pub fn with_path(mut self, path: ConnectionPath) -> Self {
        self.path = path;
        self
    }

    /// The route actually used once `Auto` is resolved.
    pub fn resolved_path(&self) -> Result<ConnectionPath> {
        match self.path {
            ConnectionPath::Auto if self.params.is_heisenberg() => Ok(ConnectionPath::HeisenbergTable),
            ConnectionPath::Auto => Ok(ConnectionPath::Analytic),
            ConnectionPath::HeisenbergTable => {
                self.params.require_heisenberg()?;
                Ok(ConnectionPath::HeisenbergTable)
            }
            other => Ok(other),
        }
    }

    /// Conformal factor `F = 1 + m(x² + y²)`, checked to be positive.
    pub fn conformal_factor(&self, p: &Point) -> Result<f64> {
        let f = self.params.conformal_factor(p);
        if f > 0.0 && p.is_finite() {
            Ok(f)
        } else {
            Err(Error::Domain {
                x: p.x,
                y: p.y,
                z: p.z,
                factor: f,
            })
        }
    }

    pub fn metric_at(&self, p: &Point) -> Result<MetricTensor> {
        let f = self.conformal_factor(p)?;
        let (m_half_l, inv_f2) = (0.5 * self.params.l / f, 1.0 / (f * f));
        // twist one-form dz + (l/2)(y dx - x dy)/F
        let w = Vector3::new(m_half_l * p.y, -m_half_l * p.x, 1.0);
        let mut g = w * w.transpose();
        g[(0, 0)] += inv_f2;
        g[(1, 1)] += inv_f2;
        Ok(MetricTensor { base: *p, matrix: g })
    }

    /// Matrix whose columns are `e1, e2, e3` in coordinates.
    pub fn frame_matrix(&self, p: &Point) -> Result<Matrix3<f64>> {
        let f = self.conformal_factor(p)?;
        let h = 0.5 * self.params.l;
        #[rustfmt::skip]
        let e = Matrix3::new(
            f,        0.0,      0.0,
            0.0,      f,        0.0,
            -h * p.y, h * p.x,  1.0,
        );
        Ok(e)
    }

    /// Inverse of [`Geometry::frame_matrix`]: rows are the coframe one-forms.
    pub fn coframe_matrix(&self, p: &Point) -> Result<Matrix3<f64>> {
        let f = self.conformal_factor(p)?;
        let h = 0.5 * self.params.l / f;
        #[rustfmt::skip]
        let th = Matrix3::new(
            1.0 / f, 0.0,      0.0,
            0.0,     1.0 / f,  0.0,
            h * p.y, -h * p.x, 1.0,
        );
        Ok(th)
    }

    pub fn frame_at(&self, p: &Point) -> Result<[TangentVector; 3]> {
        let e = self.frame_matrix(p)?;
        Ok([0, 1, 2].map(|a| TangentVector {
            base: *p,
            components: e.column(a).into_owned(),
        }))
    }

    pub fn to_frame(&self, v: &TangentVector) -> Result<FrameVector> {
        Ok(FrameVector::new(v.base, self.coframe_matrix(&v.base)? * v.components))
    }

    pub fn to_coords(&self, v: &FrameVector) -> Result<TangentVector> {
        Ok(TangentVector {
            base: v.base,
            components: self.frame_matrix(&v.base)? * v.components,
        })
    }

    /// Coordinate norm of a tangent vector under the metric.
    pub fn norm(&self, v: &TangentVector) -> Result<f64> {
        let g = self.metric_at(&v.base)?;
        Ok(g.inner(&v.components, &v.components).sqrt())
    }

    /// Structure constants `C[a][b][c] = <[e_a, e_b], e_c>`.
    pub fn structure_constants(&self, p: &Point) -> Result<Connection> {
        match self.resolved_path()? {
            ConnectionPath::FiniteDifference => self.numeric_structure_constants(p),
            _ => {
                self.conformal_factor(p)?;
                Ok(self.analytic_structure_constants(p))
            }
        }
    }

    fn analytic_structure_constants(&self, p: &Point) -> Connection {
        let ManifoldParams { m, l } = self.params;
        let b12 = [-2.0 * m * p.y, 2.0 * m * p.x, l];
        let mut c = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            c[0][1][k] = b12[k];
            c[1][0][k] = -b12[k];
        }
        c
    }

    /// Frame derivatives `e_a(C[b][c][d])` of the analytic structure constants.
    fn analytic_structure_derivatives(&self, p: &Point) -> [Connection; 3] {
        let f = self.params.conformal_factor(p);
        let m = self.params.m;
        // e1(x) = F, e2(y) = F; the other frame derivatives of x, y vanish.
        let d = [[0.0, 2.0 * m * f, 0.0], [-2.0 * m * f, 0.0, 0.0], [0.0; 3]];
        let mut out = [[[[0.0; 3]; 3]; 3]; 3];
        for a in 0..3 {
            for k in 0..3 {
                out[a][0][1][k] = d[a][k];
                out[a][1][0][k] = -d[a][k];
            }
        }
        out
    }

    fn numeric_structure_constants(&self, p: &Point) -> Result<Connection> {
        let e = self.frame_matrix(p)?;
        let de = self.frame_jacobians(p)?;
        let g = self.metric_at(p)?;
        let mut c = [[[0.0; 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                // [X, Y]^i = X^j ∂_j Y^i - Y^j ∂_j X^i
                let mut br = Vector3::zeros();
                for j in 0..3 {
                    br += de[j].column(b) * e[(j, a)] - de[j].column(a) * e[(j, b)];
                }
                for k in 0..3 {
                    c[a][b][k] = g.inner(&br, &e.column(k).into_owned());
                }
            }
        }
        Ok(c)
    }

    /// `∂_j` of the frame matrix for j = x, y, z by central differences.
    fn frame_jacobians(&self, p: &Point) -> Result<[Matrix3<f64>; 3]> {
        let mut out = [Matrix3::zeros(); 3];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = central_derivative(|t| self.frame_matrix(&p.shifted(j, t)), 0.0, self.fd_step, self.stencil)?;
        }
        Ok(out)
    }

    pub fn lie_bracket_frame(&self, p: &Point, a: usize, b: usize) -> Result<FrameVector> {
        let (a, b) = (index(a)?, index(b)?);
        let c = self.structure_constants(p)?;
        Ok(FrameVector::new(*p, Vector3::from(c[a][b])))
    }

    /// Full frame connection table at `p`.
    pub fn connection(&self, p: &Point) -> Result<Connection> {
        match self.resolved_path()? {
            ConnectionPath::HeisenbergTable => {
                self.conformal_factor(p)?;
                Ok(HEISENBERG_CONNECTION)
            }
            ConnectionPath::Analytic => {
                self.conformal_factor(p)?;
                Ok(koszul(&self.analytic_structure_constants(p)))
            }
            ConnectionPath::FiniteDifference => self.numeric_connection(p),
            ConnectionPath::Auto => unreachable!("resolved above"),
        }
    }

    /// `∇_{e_a} e_b` in frame components (1-based indices).
    pub fn connection_frame(&self, p: &Point, a: usize, b: usize) -> Result<FrameVector> {
        let (a, b) = (index(a)?, index(b)?);
        let conn = self.connection(p)?;
        Ok(FrameVector::new(*p, Vector3::from(conn[a][b])))
    }

    /// Coordinate Christoffel symbols from finite differences of the metric.
    pub fn christoffel_fd(&self, p: &Point) -> Result<[[[f64; 3]; 3]; 3]> {
        let g = self.metric_at(p)?;
        let ginv = g.matrix.try_inverse().ok_or(Error::Domain {
            x: p.x,
            y: p.y,
            z: p.z,
            factor: 0.0,
        })?;
        let mut dg = [Matrix3::zeros(); 3];
        for (k, slot) in dg.iter_mut().enumerate() {
            *slot = central_derivative(|t| Ok(self.metric_at(&p.shifted(k, t))?.matrix), 0.0, self.fd_step, self.stencil)?;
        }
        let mut gamma = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut acc = 0.0;
                    for l in 0..3 {
                        acc += ginv[(i, l)] * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]);
                    }
                    gamma[i][j][k] = 0.5 * acc;
                }
            }
        }
        Ok(gamma)
    }

    fn numeric_connection(&self, p: &Point) -> Result<Connection> {
        let gamma = self.christoffel_fd(p)?;
        let e = self.frame_matrix(p)?;
        let de = self.frame_jacobians(p)?;
        let g = self.metric_at(p)?;
        let mut conn = [[[0.0; 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                // ∇_{e_a} e_b = e_a^j ∂_j e_b + Γ^i_jk e_a^j e_b^k ∂_i
                let mut v = Vector3::zeros();
                for j in 0..3 {
                    v += de[j].column(b) * e[(j, a)];
                }
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            v[i] += gamma[i][j][k] * e[(j, a)] * e[(k, b)];
                        }
                    }
                }
                for c in 0..3 {
                    conn[a][b][c] = g.inner(&v, &e.column(c).into_owned());
                }
            }
        }
        Ok(conn)
    }

    /// Curvature tensor `R[a][b][c][d] = g(R(e_a,e_b)e_c, e_d)` in the
    /// crate's sign convention.
    pub fn riemann(&self, p: &Point) -> Result<Riemann> {
        match self.resolved_path()? {
            ConnectionPath::HeisenbergTable => {
                self.conformal_factor(p)?;
                let c = self.analytic_structure_constants(p);
                Ok(frame_curvature(&HEISENBERG_CONNECTION, &c, &[[[[0.0; 3]; 3]; 3]; 3]))
            }
            ConnectionPath::Analytic => {
                self.conformal_factor(p)?;
                let c = self.analytic_structure_constants(p);
                let dc = self.analytic_structure_derivatives(p);
                let conn = koszul(&c);
                let dconn = [koszul(&dc[0]), koszul(&dc[1]), koszul(&dc[2])];
                Ok(frame_curvature(&conn, &c, &dconn))
            }
            ConnectionPath::FiniteDifference => self.numeric_riemann(p),
            ConnectionPath::Auto => unreachable!("resolved above"),
        }
    }

    fn numeric_riemann(&self, p: &Point) -> Result<Riemann> {
        let gamma = self.christoffel_fd(p)?;
        // dgamma[m] = ∂_m Γ
        let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
        for (m, slot) in dgamma.iter_mut().enumerate() {
            let d: ChristoffelArr = central_derivative(
                |t| Ok(ChristoffelArr(self.christoffel_fd(&p.shifted(m, t))?)),
                0.0,
                self.fd_outer_step,
                self.stencil,
            )?;
            *slot = d.0;
        }
        // R_std(∂k, ∂l)∂j = R^i_jkl ∂i
        let mut rc = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mut v = dgamma[k][i][l][j] - dgamma[l][i][k][j];
                        for m in 0..3 {
                            v += gamma[i][k][m] * gamma[m][l][j] - gamma[i][l][m] * gamma[m][k][j];
                        }
                        rc[i][j][k][l] = v;
                    }
                }
            }
        }
        let e = self.frame_matrix(p)?;
        let g = self.metric_at(p)?;
        let mut out = [[[[0.0; 3]; 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let mut v = Vector3::zeros();
                    for i in 0..3 {
                        for j in 0..3 {
                            for k in 0..3 {
                                for l in 0..3 {
                                    v[i] += rc[i][j][k][l] * e[(j, c)] * e[(k, a)] * e[(l, b)];
                                }
                            }
                        }
                    }
                    for d in 0..3 {
                        // the crate's convention is the negative of R_std
                        out[a][b][c][d] = -g.inner(&v, &e.column(d).into_owned());
                    }
                }
            }
        }
        Ok(out)
    }

    /// `R(X, Y)Z` in frame components.
    pub fn curvature_op(&self, x: &FrameVector, y: &FrameVector, z: &FrameVector) -> Result<FrameVector> {
        same_base(&x.base, &y.base)?;
        same_base(&x.base, &z.base)?;
        let r = self.riemann(&x.base)?;
        Ok(FrameVector::new(
            x.base,
            contract_curvature(&r, &x.components, &y.components, &z.components),
        ))
    }

    pub fn riemann_component(&self, p: &Point, a: usize, b: usize, c: usize, d: usize) -> Result<f64> {
        let (a, b, c, d) = (index(a)?, index(b)?, index(c)?, index(d)?);
        Ok(self.riemann(p)?[a][b][c][d])
    }

    /// `ρ(e_a, e_b) = trace(Z ↦ R(e_a, Z)e_b)`.
    pub fn ricci_component(&self, p: &Point, a: usize, b: usize) -> Result<f64> {
        let (a, b) = (index(a)?, index(b)?);
        let r = self.riemann(p)?;
        Ok((0..3).map(|c| r[a][c][b][c]).sum())
    }

    pub fn sectional(&self, x: &FrameVector, y: &FrameVector) -> Result<f64> {
        same_base(&x.base, &y.base)?;
        let (u, v) = (&x.components, &y.components);
        let denom = u.norm_squared() * v.norm_squared() - u.dot(v).powi(2);
        if denom < 1e-12 {
            return Err(Error::DegeneratePlane(denom));
        }
        let r = self.riemann(&x.base)?;
        Ok(contract_curvature(&r, u, v, u).dot(v) / denom)
    }

    /// Group product on `H3`.
    pub fn left_translate(&self, g: &Point, p: &Point) -> Result<Point> {
        self.params.require_heisenberg()?;
        Ok(heisenberg_product(g, p))
    }
}

#[derive(Clone, Copy)]
struct ChristoffelArr(Christoffel);

impl std::ops::Add for ChristoffelArr {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    self.0[i][j][k] += o.0[i][j][k];
                }
            }
        }
        self
    }
}

impl std::ops::Sub for ChristoffelArr {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o * -1.0
    }
}

impl std::ops::Mul<f64> for ChristoffelArr {
    type Output = Self;
    fn mul(mut self, t: f64) -> Self {
        self.0.iter_mut().flatten().flatten().for_each(|v| *v *= t);
        self
    }
}

/// Koszul formula for an orthonormal frame:
/// `<∇_a e_b, e_c> = ½(C_abc - C_bca + C_cab)`.
pub fn koszul(c: &Connection) -> Connection {
    let mut out = [[[0.0; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for k in 0..3 {
                out[a][b][k] = 0.5 * (c[a][b][k] - c[b][k][a] + c[k][a][b]);
            }
        }
    }
    out
}

/// Frame curvature from connection coefficients `conn`, structure constants
/// `c` and frame derivatives `dconn[a] = e_a(conn)`.
fn frame_curvature(conn: &Connection, c: &Connection, dconn: &[Connection; 3]) -> Riemann {
    let mut out = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for k in 0..3 {
                for d in 0..3 {
                    // R_std(e_a,e_b)e_k = ∇_a∇_b e_k - ∇_b∇_a e_k - ∇_[e_a,e_b] e_k
                    let mut v = dconn[a][b][k][d] - dconn[b][a][k][d];
                    for f in 0..3 {
                        v += conn[b][k][f] * conn[a][f][d] - conn[a][k][f] * conn[b][f][d];
                        v -= c[a][b][f] * conn[f][k][d];
                    }
                    out[a][b][k][d] = -v;
                }
            }
        }
    }
    out
}

/// `R(X, Y)Z` from a frame curvature tensor.
pub fn contract_curvature(r: &Riemann, x: &Vector3<f64>, y: &Vector3<f64>, z: &Vector3<f64>) -> Vector3<f64> {
    let mut out = Vector3::zeros();
    for a in 0..3 {
        for b in 0..3 {
            let xy = x[a] * y[b];
            if xy == 0.0 {
                continue;
            }
            for c in 0..3 {
                for d in 0..3 {
                    out[d] += xy * z[c] * r[a][b][c][d];
                }
            }
        }
    }
    out
}

/// `∇_X Y` for constant frame components `X`, `Y`, i.e. `Σ X_a Y_b Γ[a][b]`.
pub fn contract_connection(conn: &Connection, x: &Vector3<f64>, y: &Vector3<f64>) -> Vector3<f64> {
    let mut out = Vector3::zeros();
    for a in 0..3 {
        for b in 0..3 {
            let xy = x[a] * y[b];
            for c in 0..3 {
                out[c] += xy * conn[a][b][c];
            }
        }
    }
    out
}

/// `(x̃, ỹ, z̃)(x, y, z) = (x̃ + x, ỹ + y, z̃ + z + ½x̃y - ½ỹx)`.
pub fn heisenberg_product(g: &Point, p: &Point) -> Point {
    Point::new(g.x + p.x, g.y + p.y, g.z + p.z + 0.5 * g.x * p.y - 0.5 * g.y * p.x)
}

/// Left-translates every point of a sampled curve; frame components of
/// velocities are unchanged because the frame is left-invariant.
pub fn left_translate_points(g: &Point, points: &[Point]) -> Vec<Point> {
    points.iter().map(|p| heisenberg_product(g, p)).collect()
}
