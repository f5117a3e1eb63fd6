//! Tension and bitension fields along curves, the algebraic systems that
//! characterize non-geodesic biharmonic curves, and curve classification.
//!
//! The bitension field of a unit-speed curve is
//! `τ₂ = ∇³_T T + R(T, ∇_T T)T`. On a non-geodesic curve it expands in the
//! Frenet frame as
//!
//! ```text
//! τ₂ = -3k'k T
//!    + (k'' - k³ - kτ² + k l²/4 - k(l² - 4m) B3²) N
//!    + (-2k'τ - kτ' + k(l² - 4m) N3 B3) B
//! ```
//!
//! so a non-geodesic curve is biharmonic iff `k` is a non-zero constant,
//! `k² + τ² = l²/4 - (l² - 4m)B3²` and `τ' = (l² - 4m)N3 B3`.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveSample, FrenetData, Series, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::{contract_curvature, FrameVector, Geometry, ManifoldParams};
use crate::numerics::NumericsConfig;

/// `τ₁ = ∇_T T`.
pub fn tension1(traj: &Trajectory) -> Result<Series<Vector3<f64>>> {
    traj.tension()
}

/// `τ₂ = ∇³_T T + R(T, ∇_T T)T` by nested covariant differentiation.
pub fn tension2_direct(traj: &Trajectory) -> Result<Series<Vector3<f64>>> {
    let t1 = traj.tension()?;
    let t2 = traj.covariant_derivative(&t1.values, &t1.interior)?;
    let t3 = traj.covariant_derivative(&t2.values, &t2.interior)?;
    if t3.interior_count() == 0 {
        let w = traj.order.half_width();
        return Err(Error::TooFewSamples {
            needed: 6 * w + 1,
            got: traj.len(),
        });
    }
    let values = traj
        .samples
        .iter()
        .zip(t3.values.iter().zip(&t1.values))
        .map(|(smp, (d3, d1))| {
            let r = traj.geometry.riemann(&smp.point)?;
            let t = smp.velocity.components;
            Ok(d3 + contract_curvature(&r, &t, d1, &t))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Series {
        values,
        interior: t3.interior,
    })
}

/// Frame coefficients `(cT, cN, cB)` of `τ₂` from the Frenet series, with
/// `k'`, `k''`, `τ'` by finite differences of the measured series.
pub fn tension2_frame(traj: &Trajectory, frenet: &[FrenetData]) -> Result<Series<[f64; 3]>> {
    let params = traj.geometry.params;
    let quarter = 0.25 * params.l * params.l;
    let delta = params.degeneracy();
    let interior: Vec<bool> = frenet.iter().map(|f| f.interior).collect();
    let k: Vec<Option<f64>> = frenet.iter().map(|f| Some(f.k)).collect();
    let tau: Vec<Option<f64>> = frenet.iter().map(|f| f.tau).collect();
    let (dk, dk_int) = traj.derivative_of(&k, &interior)?;
    let (ddk, ddk_int) = traj.derivative_of(&dk, &dk_int)?;
    let (dtau, _) = traj.derivative_of(&tau, &interior)?;
    let mut values = Vec::with_capacity(frenet.len());
    for (i, f) in frenet.iter().enumerate() {
        let coeffs = match (f.tau, f.n3, f.b3, dk[i], ddk[i], dtau[i]) {
            (Some(tau), Some(n3), Some(b3), Some(dk), Some(ddk), Some(dtau)) => {
                let k = f.k;
                [
                    -3.0 * dk * k,
                    ddk - k.powi(3) - k * tau * tau + k * quarter - k * delta * b3 * b3,
                    -2.0 * dk * tau - k * dtau + k * delta * n3 * b3,
                ]
            }
            _ if ddk_int[i] => return Err(Error::GeodesicFrameUndefined { s: f.s, k: f.k }),
            _ => [f64::NAN; 3],
        };
        values.push(coeffs);
    }
    Ok(Series { values, interior: ddk_int })
}

/// Tension / bitension fields along a curve and the agreement between the
/// direct and frame-expansion routes for `τ₂`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BitensionReport {
    pub s: Vec<f64>,
    pub interior: Vec<bool>,
    pub tau1: Vec<Vector3<f64>>,
    pub tau2: Vec<Vector3<f64>>,
    /// `(cT, cN, cB)` per sample; absent on (partially) geodesic curves.
    pub expansion: Option<Vec<[f64; 3]>>,
    /// `|τ₂|` per sample.
    pub residual: Vec<f64>,
    /// `|τ₂ - (cT T + cN N + cB B)|` per sample.
    pub expansion_gap: Option<Vec<f64>>,
    pub max_tau1: f64,
    pub max_tau2: f64,
    pub mean_tau2: f64,
    pub max_expansion_gap: Option<f64>,
}

fn interior_max(values: &[f64], interior: &[bool]) -> f64 {
    values.iter().zip(interior).filter(|(_, &f)| f).map(|(v, _)| *v).fold(0.0, f64::max)
}

fn interior_mean(values: &[f64], interior: &[bool]) -> f64 {
    let (sum, n) = values
        .iter()
        .zip(interior)
        .filter(|(_, &f)| f)
        .fold((0.0, 0usize), |(s, n), (v, _)| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

pub fn bitension_report(traj: &Trajectory) -> Result<BitensionReport> {
    let t1 = traj.tension()?;
    let t2 = tension2_direct(traj)?;
    let interior = t2.interior.clone();
    let residual: Vec<f64> = t2.values.iter().map(|v| v.norm()).collect();
    let tau1_norm: Vec<f64> = t1.values.iter().map(|v| v.norm()).collect();
    let (expansion, expansion_gap) = match traj.frenet() {
        Ok(frenet) => {
            let coeffs = tension2_frame(traj, &frenet)?;
            let gap: Vec<f64> = frenet
                .iter()
                .zip(coeffs.values.iter().zip(&t2.values))
                .map(|(f, (c, direct))| match (f.n, f.b) {
                    (Some(n), Some(b)) => (direct - (f.t.components * c[0] + n.components * c[1] + b.components * c[2])).norm(),
                    _ => f64::NAN,
                })
                .collect();
            (Some(coeffs.values), Some(gap))
        }
        Err(Error::GeodesicFrameUndefined { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let max_expansion_gap = expansion_gap.as_ref().map(|g| interior_max(g, &interior));
    Ok(BitensionReport {
        s: traj.s(),
        max_tau1: interior_max(&tau1_norm, &interior),
        max_tau2: interior_max(&residual, &interior),
        mean_tau2: interior_mean(&residual, &interior),
        interior,
        tau1: t1.values,
        tau2: t2.values,
        expansion,
        residual,
        expansion_gap,
        max_expansion_gap,
    })
}

/// One named condition with its measured residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

struct Stats {
    min: f64,
    max: f64,
    mean: f64,
    max_abs: f64,
}

fn stats(values: impl Iterator<Item = f64>) -> Option<Stats> {
    let mut st = Stats {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        mean: 0.0,
        max_abs: 0.0,
    };
    let mut n = 0usize;
    for v in values {
        st.min = st.min.min(v);
        st.max = st.max.max(v);
        st.max_abs = st.max_abs.max(v.abs());
        st.mean += v;
        n += 1;
    }
    if n == 0 {
        return None;
    }
    st.mean /= n as f64;
    Some(st)
}

fn defined(frenet: &[FrenetData]) -> Result<impl Iterator<Item = &FrenetData> + Clone> {
    if let Some(bad) = frenet.iter().find(|f| f.interior && f.tau.is_none()) {
        return Err(Error::GeodesicFrameUndefined { s: bad.s, k: bad.k });
    }
    let it = frenet.iter().filter(|f| f.interior);
    if it.clone().next().is_none() {
        return Err(Error::TooFewSamples {
            needed: 9,
            got: frenet.len(),
        });
    }
    Ok(it)
}

fn constancy(name: &str, values: impl Iterator<Item = f64>, tol: f64) -> (Check, f64) {
    let st = stats(values).expect("non-empty interior");
    let spread = st.max - st.min;
    (Check::at_most(name, spread, tol * (1.0 + st.mean.abs())), st.mean)
}

/// Curvature relation residual `|k² + τ² - l²/4 + (l² - 4m)B3²|` at one sample.
fn curvature_relation(params: &ManifoldParams, f: &FrenetData) -> f64 {
    let (tau, b3) = (f.tau.unwrap_or(f64::NAN), f.b3.unwrap_or(f64::NAN));
    (f.k * f.k + tau * tau - 0.25 * params.l * params.l + params.degeneracy() * b3 * b3).abs()
}

/// Checks of the biharmonicity system for non-geodesic curves on the
/// `(m, l)` member: constant non-zero `k`, the curvature relation, and
/// `τ' = (l² - 4m)N3 B3`.
pub fn check_biharmonic_system(traj: &Trajectory, frenet: &[FrenetData], config: &NumericsConfig) -> Result<Vec<Check>> {
    let params = traj.geometry.params;
    let tol = config.biharmonic_tol;
    let inner = defined(frenet)?;
    let (mut k_check, k_mean) = constancy("k_constant", inner.clone().map(|f| f.k), tol);
    k_check.passed &= k_mean > config.k_floor;
    let relation = inner.clone().map(|f| curvature_relation(&params, f)).fold(0.0, f64::max);
    let interior: Vec<bool> = frenet.iter().map(|f| f.interior).collect();
    let tau: Vec<Option<f64>> = frenet.iter().map(|f| f.tau).collect();
    let (dtau, dtau_int) = traj.derivative_of(&tau, &interior)?;
    let delta = params.degeneracy();
    let torsion = frenet
        .iter()
        .zip(dtau.iter().zip(&dtau_int))
        .filter(|(_, (_, &ok))| ok)
        .map(|(f, (d, _))| match (d, f.n3, f.b3) {
            (Some(d), Some(n3), Some(b3)) => (d - delta * n3 * b3).abs(),
            _ => f64::NAN,
        })
        .fold(0.0, f64::max);
    Ok(vec![
        k_check,
        Check::at_most("curvature_relation", relation, tol),
        Check::at_most("torsion_derivative_relation", torsion, tol),
    ])
}

/// The biharmonicity system written for `H3` only: `k` constant and non-zero,
/// `k² + τ² = 1/4 - B3²`, `τ' = N3 B3`.
pub fn check_heisenberg_system(traj: &Trajectory, frenet: &[FrenetData], config: &NumericsConfig) -> Result<Vec<Check>> {
    let params = traj.geometry.params;
    if !params.is_heisenberg() {
        return Err(Error::UnsupportedManifold { m: params.m, l: params.l });
    }
    let tol = config.biharmonic_tol;
    let inner = defined(frenet)?;
    let (mut k_check, k_mean) = constancy("k_constant", inner.clone().map(|f| f.k), tol);
    k_check.passed &= k_mean > config.k_floor;
    let relation = inner
        .clone()
        .map(|f| {
            let (tau, b3) = (f.tau.unwrap_or(f64::NAN), f.b3.unwrap_or(f64::NAN));
            (f.k * f.k + tau * tau - (0.25 - b3 * b3)).abs()
        })
        .fold(0.0, f64::max);
    let interior: Vec<bool> = frenet.iter().map(|f| f.interior).collect();
    let tau: Vec<Option<f64>> = frenet.iter().map(|f| f.tau).collect();
    let (dtau, dtau_int) = traj.derivative_of(&tau, &interior)?;
    let torsion = frenet
        .iter()
        .zip(dtau.iter().zip(&dtau_int))
        .filter(|(_, (_, &ok))| ok)
        .map(|(f, (d, _))| match (d, f.n3, f.b3) {
            (Some(d), Some(n3), Some(b3)) => (d - n3 * b3).abs(),
            _ => f64::NAN,
        })
        .fold(0.0, f64::max);
    Ok(vec![
        k_check,
        Check::at_most("curvature_relation", relation, tol),
        Check::at_most("torsion_derivative_relation", torsion, tol),
    ])
}

/// Conditions satisfied by biharmonic helices and by the constant-torsion
/// characterization: constant non-zero `B3`, `N3 = 0`, the curvature
/// relation, constant `τ` and `N3 B3 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelixChecks {
    pub b3_constant: Check,
    pub b3_nonzero: Check,
    pub n3_zero: Check,
    pub curvature_relation: Check,
    pub tau_constant: Check,
    pub n3b3_zero: Check,
    pub b3_mean: f64,
    pub tau_mean: f64,
}

impl HelixChecks {
    /// The helix system: `B3` constant and non-zero, `N3 = 0`, curvature relation.
    pub fn helix_system(&self) -> bool {
        self.b3_constant.passed && self.b3_nonzero.passed && self.n3_zero.passed && self.curvature_relation.passed
    }

    /// `τ` constant and `N3 B3 = 0` (with `k` constant checked separately).
    pub fn constant_torsion_system(&self) -> bool {
        self.tau_constant.passed && self.n3b3_zero.passed && self.curvature_relation.passed
    }

    pub fn all(&self) -> Vec<Check> {
        vec![
            self.b3_constant.clone(),
            self.b3_nonzero.clone(),
            self.n3_zero.clone(),
            self.curvature_relation.clone(),
            self.tau_constant.clone(),
            self.n3b3_zero.clone(),
        ]
    }
}

pub fn check_helix_system(params: &ManifoldParams, frenet: &[FrenetData], config: &NumericsConfig) -> Result<HelixChecks> {
    let tol = config.biharmonic_tol;
    let inner = defined(frenet)?;
    let b3 = || inner.clone().map(|f| f.b3.unwrap_or(f64::NAN));
    let (b3_constant, b3_mean) = constancy("b3_constant", b3(), tol);
    let b3_min_abs = b3().map(f64::abs).fold(f64::INFINITY, f64::min);
    let b3_nonzero = Check {
        name: "b3_nonzero".into(),
        residual: b3_min_abs,
        tolerance: tol,
        passed: b3_min_abs > tol,
    };
    let n3 = inner.clone().map(|f| f.n3.unwrap_or(f64::NAN).abs()).fold(0.0, f64::max);
    let relation = inner.clone().map(|f| curvature_relation(params, f)).fold(0.0, f64::max);
    let (tau_constant, tau_mean) = constancy("tau_constant", inner.clone().map(|f| f.tau.unwrap_or(f64::NAN)), tol);
    let n3b3 = inner
        .clone()
        .map(|f| (f.n3.unwrap_or(f64::NAN) * f.b3.unwrap_or(f64::NAN)).abs())
        .fold(0.0, f64::max);
    Ok(HelixChecks {
        b3_constant,
        b3_nonzero,
        n3_zero: Check::at_most("n3_zero", n3, tol),
        curvature_relation: Check::at_most("curvature_relation", relation, tol),
        tau_constant,
        n3b3_zero: Check::at_most("n3b3_zero", n3b3, tol),
        b3_mean,
        tau_mean,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Geodesic,
    NongeodesicBiharmonic,
    HelixNotBiharmonic,
    NotBiharmonic,
}

impl Verdict {
    pub fn is_biharmonic(self) -> bool {
        matches!(self, Verdict::Geodesic | Verdict::NongeodesicBiharmonic)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Geodesic => "geodesic",
            Verdict::NongeodesicBiharmonic => "nongeodesic_biharmonic",
            Verdict::HelixNotBiharmonic => "helix_not_biharmonic",
            Verdict::NotBiharmonic => "not_biharmonic",
        }
    }
}

/// Outcome of [`classify`] with every measured residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub manifold: ManifoldParams,
    /// `l² - 4m`.
    pub degeneracy: f64,
    pub max_tau1: f64,
    pub max_tau2: f64,
    pub biharmonic_system: Vec<Check>,
    pub helix_system: Vec<Check>,
    pub tension: Check,
    pub bitension: Check,
    pub k_mean: Option<f64>,
    pub tau_mean: Option<f64>,
    pub b3_mean: Option<f64>,
}

impl ClassificationResult {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.biharmonic_system.iter().chain(&self.helix_system).find(|c| c.name == name)
    }
}

/// Classifies a sampled curve.
///
/// * `geodesic` when `|τ₁| ≤ residual_tol` at every interior sample;
/// * `nongeodesic_biharmonic` when the biharmonicity system holds and
///   `|τ₂| ≤ biharmonic_tol`;
/// * `helix_not_biharmonic` when `k` and `τ` are constant but it is not
///   biharmonic;
/// * `not_biharmonic` otherwise (including curves with geodesic stretches).
pub fn classify(traj: &Trajectory, config: &NumericsConfig) -> Result<ClassificationResult> {
    let params = traj.geometry.params;
    let t2 = tension2_direct(traj)?;
    let t1 = traj.tension()?;
    let max_tau1 = t1
        .values
        .iter()
        .zip(&t2.interior)
        .filter(|(_, &f)| f)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max);
    let max_tau2 = t2.max_interior_norm().unwrap_or(f64::NAN);
    let tension = Check::at_most("tension_vanishes", max_tau1, config.residual_tol);
    let bitension = Check::at_most("bitension_vanishes", max_tau2, config.biharmonic_tol);
    let mut result = ClassificationResult {
        verdict: Verdict::NotBiharmonic,
        manifold: params,
        degeneracy: params.degeneracy(),
        max_tau1,
        max_tau2,
        biharmonic_system: vec![],
        helix_system: vec![],
        tension,
        bitension,
        k_mean: None,
        tau_mean: None,
        b3_mean: None,
    };
    if result.tension.passed {
        result.verdict = Verdict::Geodesic;
        return Ok(result);
    }
    let frenet = match traj.frenet() {
        Ok(f) => f,
        Err(Error::GeodesicFrameUndefined { .. }) => return Ok(result),
        Err(e) => return Err(e),
    };
    result.biharmonic_system = check_biharmonic_system(traj, &frenet, config)?;
    let helix = check_helix_system(&params, &frenet, config)?;
    result.helix_system = helix.all();
    result.b3_mean = Some(helix.b3_mean);
    result.tau_mean = Some(helix.tau_mean);
    result.k_mean = stats(frenet.iter().filter(|f| f.interior).map(|f| f.k)).map(|s| s.mean);
    let system_holds = result.biharmonic_system.iter().all(|c| c.passed);
    let k_constant = result.biharmonic_system[0].passed;
    result.verdict = if system_holds && result.bitension.passed {
        Verdict::NongeodesicBiharmonic
    } else if k_constant && helix.tau_constant.passed {
        Verdict::HelixNotBiharmonic
    } else {
        Verdict::NotBiharmonic
    };
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeVerdict {
    /// Only the geodesic through the point is biharmonic in this direction.
    GeodesicOnly,
    /// The direction is also tangent to a non-geodesic biharmonic helix.
    BiharmonicDirection,
}

/// Whether a unit direction lies in the solid cone of directions tangent to
/// non-geodesic biharmonic curves, i.e. `5cos²α₀ - 4 ≥ 0` with
/// `cos α₀ = <X, e3>` and `sin α₀ ≠ 0`.
pub fn cone_membership(geometry: &Geometry, x: &FrameVector) -> Result<ConeVerdict> {
    if !geometry.params.is_heisenberg() {
        return Err(Error::UnsupportedManifold {
            m: geometry.params.m,
            l: geometry.params.l,
        });
    }
    let n = x.norm();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::NonUnitVector(n));
    }
    // frame components are unchanged by left translation to the identity
    let c = x.third() / n;
    let sin2 = x.components[0].powi(2) + x.components[1].powi(2);
    let disc = 5.0 * c * c - 4.0;
    Ok(if disc >= -crate::factory::DISCRIMINANT_SLACK && sin2 > 0.0 {
        ConeVerdict::BiharmonicDirection
    } else {
        ConeVerdict::GeodesicOnly
    })
}

/// Contact form `θ³ = dz - (x dy - y dx)/2` evaluated on the velocity.
pub fn legendre_pairing(samples: &[CurveSample]) -> Result<Vec<f64>> {
    let geom = Geometry::heisenberg();
    samples
        .iter()
        .map(|smp| {
            let v = geom.to_coords(&smp.velocity)?.components;
            let p = smp.point;
            Ok(v[2] - 0.5 * (p.x * v[1] - p.y * v[0]))
        })
        .collect()
}
