//! Explicit Runge-Kutta integration for small fixed-size systems: an adaptive
//! Dormand-Prince 5(4) pair and a classic fixed-step RK4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OdeMethod {
    DormandPrince45,
    /// Classic RK4 with a fixed step (reproducible step sequence).
    Rk4 {
        step: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OdeSettings {
    pub method: OdeMethod,
    pub atol: f64,
    pub rtol: f64,
    pub max_steps: usize,
    pub min_step: f64,
}

impl Default for OdeSettings {
    fn default() -> Self {
        OdeSettings {
            method: OdeMethod::DormandPrince45,
            atol: 1e-10,
            rtol: 1e-10,
            max_steps: 1_000_000,
            min_step: 1e-12,
        }
    }
}

impl OdeSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = self.atol > 0.0 && self.rtol > 0.0 && self.min_step > 0.0 && self.max_steps > 0;
        let step_ok = match self.method {
            OdeMethod::Rk4 { step } => step > 0.0 && step.is_finite(),
            OdeMethod::DormandPrince45 => true,
        };
        if ok && step_ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid ODE settings {self:?}")))
        }
    }
}

/// Integrator state carried across successive output intervals so the
/// adaptive step size is not reset at every sample.
#[derive(Debug, Clone)]
pub struct Integrator {
    settings: OdeSettings,
    step: Option<f64>,
    steps_taken: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// difference between the 5th and embedded 4th order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (w, k) in terms {
        if *w != 0.0 {
            for i in 0..N {
                out[i] += h * w * k[i];
            }
        }
    }
    out
}

impl Integrator {
    pub fn new(settings: OdeSettings) -> Self {
        Integrator {
            settings,
            step: None,
            steps_taken: 0,
        }
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    /// Advances `y` from `s0` to `s1` (`s1 > s0`).
    pub fn advance<const N: usize, F>(&mut self, f: &mut F, s0: f64, y: [f64; N], s1: f64) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        match self.settings.method {
            OdeMethod::Rk4 { step } => self.advance_rk4(f, s0, y, s1, step),
            OdeMethod::DormandPrince45 => self.advance_dp45(f, s0, y, s1),
        }
    }

    fn advance_rk4<const N: usize, F>(&mut self, f: &mut F, s0: f64, mut y: [f64; N], s1: f64, step: f64) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        let n = ((s1 - s0) / step).ceil().max(1.0) as usize;
        let h = (s1 - s0) / n as f64;
        for i in 0..n {
            let s = s0 + h * i as f64;
            let k1 = f(s, &y)?;
            let k2 = f(s + 0.5 * h, &axpy(&y, 0.5 * h, &[(1.0, &k1)]))?;
            let k3 = f(s + 0.5 * h, &axpy(&y, 0.5 * h, &[(1.0, &k2)]))?;
            let k4 = f(s + h, &axpy(&y, h, &[(1.0, &k3)]))?;
            y = axpy(&y, h / 6.0, &[(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)]);
            self.steps_taken += 1;
            check_finite(&y, s + h)?;
        }
        Ok(y)
    }

    fn advance_dp45<const N: usize, F>(&mut self, f: &mut F, s0: f64, mut y: [f64; N], s1: f64) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        let OdeSettings {
            atol,
            rtol,
            max_steps,
            min_step,
            ..
        } = self.settings;
        let span = s1 - s0;
        let mut s = s0;
        let mut h = self.step.unwrap_or(span.min(0.01)).min(span);
        let mut k = [[0.0; N]; 7];
        k[0] = f(s, &y)?;
        while s < s1 {
            if self.steps_taken >= max_steps {
                return Err(Error::IntegrationFailure {
                    s,
                    reason: format!("exceeded {max_steps} steps"),
                });
            }
            let last = s + h >= s1;
            let h_try = if last { s1 - s } else { h };
            for stage in 1..7 {
                let terms: Vec<(f64, &[f64; N])> = (0..stage).map(|j| (A[stage][j], &k[j])).collect();
                let ys = axpy(&y, h_try, &terms);
                k[stage] = f(s + C[stage] * h_try, &ys)?;
            }
            let terms: Vec<(f64, &[f64; N])> = (0..6).map(|j| (A[6][j], &k[j])).collect();
            let y_new = axpy(&y, h_try, &terms);
            let mut err = 0.0;
            for i in 0..N {
                let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * h_try;
                let scale = atol + rtol * y[i].abs().max(y_new[i].abs());
                err += (e / scale).powi(2);
            }
            let err = (err / N as f64).sqrt();
            self.steps_taken += 1;
            if err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                s = if last { s1 } else { s + h_try };
                y = y_new;
                // first-same-as-last: the 7th stage is f at the accepted point
                k[0] = k[6];
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || h_try >= h {
                    h = h_try * grow;
                } else {
                    h = h.max(h_try * grow);
                }
            } else {
                let shrink = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 1.0) } else { 0.1 };
                h = h_try * shrink;
                if h < min_step {
                    return Err(Error::IntegrationFailure {
                        s,
                        reason: format!("step size {h:e} fell below the minimum {min_step:e}"),
                    });
                }
            }
        }
        self.step = Some(h);
        Ok(y)
    }
}

fn check_finite<const N: usize>(y: &[f64; N], s: f64) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::IntegrationFailure {
            s,
            reason: "state is no longer finite".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(_: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], -y[0]])
    }

    #[test]
    fn dp45_tracks_harmonic_oscillator() {
        let mut it = Integrator::new(OdeSettings::default());
        let mut y = [0.0, 1.0];
        let mut s = 0.0;
        for _ in 0..100 {
            y = it.advance(&mut harmonic, s, y, s + 0.1).unwrap();
            s += 0.1;
        }
        assert!((y[0] - 10f64.sin()).abs() < 1e-8);
        assert!((y[1] - 10f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let run = |step: f64| {
            let settings = OdeSettings {
                method: OdeMethod::Rk4 { step },
                ..Default::default()
            };
            let y = Integrator::new(settings).advance(&mut harmonic, 0.0, [0.0, 1.0], 1.0).unwrap();
            (y[0] - 1f64.sin()).abs()
        };
        let ratio = run(0.1) / run(0.05);
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn rhs_errors_propagate() {
        let mut f = |s: f64, _: &[f64; 1]| -> Result<[f64; 1]> {
            if s > 0.5 {
                Err(Error::DomainExit { s })
            } else {
                Ok([1.0])
            }
        };
        let err = Integrator::new(OdeSettings::default()).advance(&mut f, 0.0, [0.0], 1.0).unwrap_err();
        assert!(matches!(err, Error::DomainExit { .. }));
    }

    #[test]
    fn blow_up_is_reported() {
        let mut f = |_: f64, y: &[f64; 1]| -> Result<[f64; 1]> { Ok([y[0] * y[0]]) };
        let err = Integrator::new(OdeSettings::default()).advance(&mut f, 0.0, [1.0], 2.0).unwrap_err();
        assert!(matches!(err, Error::IntegrationFailure { .. }), "{err}");
        let rk4 = OdeSettings {
            method: OdeMethod::Rk4 { step: 0.1 },
            ..OdeSettings::default()
        };
        let err = Integrator::new(rk4).advance(&mut f, 0.0, [1.0], 2.0).unwrap_err();
        assert!(matches!(err, Error::IntegrationFailure { .. }), "{err}");
    }
}
