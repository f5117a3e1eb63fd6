//! Riemannian geometry of the Heisenberg group `H3` and the Cartan-Vranceanu
//! family of metrics, Frenet analysis of curves, and numerical verification of
//! biharmonic curves.
//!
//! Module map:
//!
//! * [`geometry`]: metric, orthonormal frame, Levi-Civita connection,
//!   curvature, Ricci and sectional curvature, group law.
//! * [`curve`]: curve specifications, sampling, covariant differentiation
//!   along curves and the Frenet apparatus.
//! * [`biharmonic`]: tension and bitension fields, the biharmonicity
//!   systems and curve classification.
//! * [`factory`]: explicit curve and surface constructors.
//! * [`io`]: CSV / JSON interchange formats.
//! * [`cli`]: implementation of the `bihar` command-line tool.
//!
//! Curvature sign convention: `R(X,Y)Z = -∇_X∇_Y Z + ∇_Y∇_X Z + ∇_[X,Y] Z`,
//! so that the sectional curvature is `K(e_a, e_b) = R_abab`. Torsion sign
//! convention: `∇_T N = -k T - τ B`.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod biharmonic;
pub mod cli;
pub mod curve;
pub mod error;
pub mod factory;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod ode;

pub use error::{Error, Result};
pub use geometry::{ConnectionPath, FrameVector, Geometry, ManifoldParams, MetricTensor, Point, TangentVector};
pub use numerics::{NumericsConfig, StencilOrder};
