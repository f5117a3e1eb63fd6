//! Numerical settings and finite-difference kernels shared by the geometry
//! and curve modules.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConnectionPath;
use crate::ode::OdeSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StencilOrder {
    Second,
    #[default]
    Fourth,
}

impl StencilOrder {
    /// Number of neighbours on each side used by the central stencil.
    pub fn half_width(self) -> usize {
        match self {
            StencilOrder::Second => 1,
            StencilOrder::Fourth => 2,
        }
    }

    pub fn min_samples(self) -> usize {
        2 * self.half_width() + 1
    }
}

/// Step sizes, stencils and tolerances used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericsConfig {
    /// Step for finite differences of the metric in the numeric connection path.
    pub fd_step: f64,
    /// Step for the outer finite difference (Christoffel symbols) when the
    /// numeric path needs second derivatives of the metric.
    pub fd_outer_step: f64,
    pub stencil_order: StencilOrder,
    pub unit_speed_tol: f64,
    pub frame_tol: f64,
    /// Tolerance for the tension field of geodesics.
    pub residual_tol: f64,
    /// Tolerance for the biharmonicity systems and the bitension field.
    pub biharmonic_tol: f64,
    /// Tolerance for agreement of the two bitension routes.
    pub expansion_tol: f64,
    /// Below this geodesic curvature the Frenet frame is considered undefined.
    pub k_floor: f64,
    pub connection_path: ConnectionPath,
    pub ode: OdeSettings,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            fd_step: 1e-4,
            fd_outer_step: 2e-3,
            stencil_order: StencilOrder::Fourth,
            unit_speed_tol: 1e-8,
            frame_tol: 1e-6,
            residual_tol: 1e-6,
            biharmonic_tol: 1e-5,
            expansion_tol: 1e-4,
            k_floor: 1e-7,
            connection_path: ConnectionPath::Auto,
            ode: OdeSettings::default(),
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("fd_step", self.fd_step),
            ("fd_outer_step", self.fd_outer_step),
            ("unit_speed_tol", self.unit_speed_tol),
            ("frame_tol", self.frame_tol),
            ("residual_tol", self.residual_tol),
            ("biharmonic_tol", self.biharmonic_tol),
            ("expansion_tol", self.expansion_tol),
            ("k_floor", self.k_floor),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        self.ode.validate()
    }
}

/// Central-difference derivative of `f` at `x`.
pub fn central_derivative<T, F>(f: F, x: f64, h: f64, order: StencilOrder) -> Result<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> Result<T>,
{
    match order {
        StencilOrder::Second => Ok((f(x + h)? - f(x - h)?) * (0.5 / h)),
        StencilOrder::Fourth => {
            let (m2, m1, p1, p2) = (f(x - 2.0 * h)?, f(x - h)?, f(x + h)?, f(x + 2.0 * h)?);
            Ok(((m2 - p2) + (p1 - m1) * 8.0) * (1.0 / (12.0 * h)))
        }
    }
}

/// Indices `[lo, hi]` touched by the derivative stencil at `i`, and whether
/// the stencil is the central one.
pub fn stencil_span(i: usize, n: usize, order: StencilOrder) -> (usize, usize, bool) {
    let w = order.half_width();
    if i >= w && i + w < n {
        (i - w, i + w, true)
    } else if i < w {
        (0, 2 * w, false)
    } else {
        (n - 1 - 2 * w, n - 1, false)
    }
}

/// Derivative of a uniformly spaced series. Interior points use the central
/// stencil of the requested order; the first and last `half_width` points use
/// one-sided stencils of the same order.
pub fn differentiate<T>(values: &[T], h: f64, order: StencilOrder) -> Result<Vec<T>>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = values.len();
    if n < order.min_samples() {
        return Err(Error::TooFewSamples {
            needed: order.min_samples(),
            got: n,
        });
    }
    let f = values;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = match order {
            StencilOrder::Second => {
                if i == 0 {
                    (f[1] * 4.0 - f[0] * 3.0 - f[2]) * (0.5 / h)
                } else if i == n - 1 {
                    (f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * (0.5 / h)
                } else {
                    (f[i + 1] - f[i - 1]) * (0.5 / h)
                }
            }
            StencilOrder::Fourth => {
                let s = 1.0 / (12.0 * h);
                if i == 0 {
                    (f[1] * 48.0 + f[3] * 16.0 - f[0] * 25.0 - f[2] * 36.0 - f[4] * 3.0) * s
                } else if i == 1 {
                    (f[2] * 18.0 + f[4] - f[0] * 3.0 - f[1] * 10.0 - f[3] * 6.0) * s
                } else if i == n - 2 {
                    (f[n - 2] * 10.0 + f[n - 1] * 3.0 + f[n - 4] * 6.0 - f[n - 3] * 18.0 - f[n - 5]) * s
                } else if i == n - 1 {
                    (f[n - 1] * 25.0 + f[n - 3] * 36.0 + f[n - 5] * 3.0 - f[n - 2] * 48.0 - f[n - 4] * 16.0) * s
                } else {
                    ((f[i - 2] - f[i + 2]) + (f[i + 1] - f[i - 1]) * 8.0) * s
                }
            }
        };
        out.push(d);
    }
    Ok(out)
}

/// Propagates per-sample flags through one differentiation: the output flag
/// is set when the stencil is central and every input it touches is flagged.
pub fn propagate_interior(flags: &[bool], order: StencilOrder) -> Vec<bool> {
    let n = flags.len();
    (0..n)
        .map(|i| {
            let (lo, hi, central) = stencil_span(i, n, order);
            central && flags[lo..=hi].iter().all(|&f| f)
        })
        .collect()
}

/// Like [`propagate_interior`] but one-sided stencils are allowed: the output
/// is valid when every input touched by the stencil is valid.
pub fn propagate_valid(flags: &[bool], order: StencilOrder) -> Vec<bool> {
    let n = flags.len();
    (0..n)
        .map(|i| {
            let (lo, hi, _) = stencil_span(i, n, order);
            flags[lo..=hi].iter().all(|&f| f)
        })
        .collect()
}

/// Checks that `s` is strictly increasing with uniform spacing and returns
/// the spacing.
pub fn uniform_spacing(s: &[f64]) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: s.len() });
    }
    let h = (s[s.len() - 1] - s[0]) / (s.len() - 1) as f64;
    for (i, w) in s.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::NonMonotone {
                row: i + 1,
                reason: format!("arclength {} does not exceed previous value {}", w[1], w[0]),
            });
        }
    }
    for (i, w) in s.windows(2).enumerate() {
        let d = w[1] - w[0];
        if (d - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::NonMonotone {
                row: i + 1,
                reason: format!("non-uniform spacing {d} (expected {h})"),
            });
        }
    }
    Ok(h)
}

/// `n` uniformly spaced values covering `[a, b]` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect()
}

/// Gauss-Legendre quadrature with 8 nodes on `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    const NODES: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const WEIGHTS: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in NODES.iter().zip(WEIGHTS) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}
