//! Interchange formats.
//!
//! * Curve samples: CSV with header `s,x,y,z` and optionally `vx,vy,vz`
//!   (velocity frame components), 17 significant digits.
//! * Residuals: CSV with header `s,cT,cN,cB,residual`.
//! * Frenet data, bitension reports, classifications: JSON.
//! * Curve parameter files: JSON, see [`CurveParamsFile`].

use std::io::{Read, Write};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::biharmonic::BitensionReport;
use crate::curve::{CurveSample, FrenetData, SampleRow};
use crate::error::{Error, Result};
use crate::factory::Branch;
use crate::geometry::{ManifoldParams, Point};

/// Formats with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_samples_csv<W: Write>(mut w: W, samples: &[CurveSample], with_velocity: bool) -> Result<()> {
    if with_velocity {
        writeln!(w, "s,x,y,z,vx,vy,vz")?;
    } else {
        writeln!(w, "s,x,y,z")?;
    }
    for smp in samples {
        let p = smp.point;
        let mut line = [smp.s, p.x, p.y, p.z].map(fmt17).join(",");
        if with_velocity {
            let v = smp.velocity.components;
            line.push(',');
            line.push_str(&[v[0], v[1], v[2]].map(fmt17).join(","));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Parses sample rows. Row numbers in errors count data rows from 1.
pub fn read_samples_csv<R: Read>(r: R) -> Result<Vec<SampleRow>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (s, x, y, z) = match (col("s"), col("x"), col("y"), col("z")) {
        (Some(s), Some(x), Some(y), Some(z)) => (s, x, y, z),
        _ => return Err(Error::InvalidInput(format!("CSV header must contain s,x,y,z, got {}", headers.join(",")))),
    };
    let vel = match (col("vx"), col("vy"), col("vz")) {
        (Some(a), Some(b), Some(c)) => Some([a, b, c]),
        (None, None, None) => None,
        _ => return Err(Error::InvalidInput("velocity columns must be all of vx,vy,vz".into())),
    };
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::InvalidInput(format!("row {row}: {e}")))?;
        let field = |j: usize| -> Result<f64> {
            let raw = rec.get(j).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("row {row}: cannot parse {raw:?} as a number")))
        };
        let velocity = match vel {
            Some([a, b, c]) => Some(Vector3::new(field(a)?, field(b)?, field(c)?)),
            None => None,
        };
        rows.push(SampleRow {
            s: field(s)?,
            point: Point::new(field(x)?, field(y)?, field(z)?),
            velocity,
        });
    }
    Ok(rows)
}

pub fn write_residuals_csv<W: Write>(mut w: W, report: &BitensionReport) -> Result<()> {
    writeln!(w, "s,cT,cN,cB,residual")?;
    for (i, s) in report.s.iter().enumerate() {
        let c = report.expansion.as_ref().map(|e| e[i]).unwrap_or([f64::NAN; 3]);
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt17(*s),
            fmt17(c[0]),
            fmt17(c[1]),
            fmt17(c[2]),
            fmt17(report.residual[i])
        )?;
    }
    Ok(())
}

/// Flat JSON record of [`FrenetData`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrenetRecord {
    pub s: f64,
    pub point: [f64; 3],
    pub t: [f64; 3],
    pub n: Option<[f64; 3]>,
    pub b: Option<[f64; 3]>,
    pub k: f64,
    pub tau: Option<f64>,
    pub t3: f64,
    pub n3: Option<f64>,
    pub b3: Option<f64>,
    pub interior: bool,
}

impl From<&FrenetData> for FrenetRecord {
    fn from(f: &FrenetData) -> Self {
        let arr = |v: &Vector3<f64>| [v[0], v[1], v[2]];
        let p = f.t.base;
        FrenetRecord {
            s: f.s,
            point: [p.x, p.y, p.z],
            t: arr(&f.t.components),
            n: f.n.map(|v| arr(&v.components)),
            b: f.b.map(|v| arr(&v.components)),
            k: f.k,
            tau: f.tau,
            t3: f.t3,
            n3: f.n3,
            b3: f.b3,
            interior: f.interior,
        }
    }
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Curve / surface parameter file.
///
/// ```json
/// {"manifold": {"m": 0, "l": 1}, "family": "biharmonic_helix",
///  "alpha0": 0.32175, "a": 1, "b": 1, "c": 1, "d": 0, "branch": "plus",
///  "s_range": [0, 31.4159], "samples": 2001}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveParamsFile {
    #[serde(default)]
    pub manifold: ManifoldParams,
    #[serde(default = "default_family")]
    pub family: String,
    pub alpha0: Option<f64>,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub d: f64,
    #[serde(default)]
    pub branch: Branch,
    pub s_range: Option<[f64; 2]>,
    pub samples: Option<usize>,
}

fn default_family() -> String {
    "biharmonic_helix".into()
}

impl CurveParamsFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FrameVector;

    #[test]
    fn csv_round_trip_preserves_bits() {
        let samples: Vec<CurveSample> = (0..5)
            .map(|i| {
                let s = i as f64 * 0.1;
                let p = Point::new(s.sin() / 3.0, -s.cos(), 1e-300 * s);
                CurveSample {
                    s,
                    point: p,
                    velocity: FrameVector::new(p, Vector3::new(0.6, -0.8, 1.0 / 3.0)),
                }
            })
            .collect();
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &samples, true).unwrap();
        let rows = read_samples_csv(buf.as_slice()).unwrap();
        for (r, smp) in rows.iter().zip(&samples) {
            assert_eq!(r.s, smp.s);
            assert_eq!(r.point, smp.point);
            assert_eq!(r.velocity.unwrap(), smp.velocity.components);
        }
    }

    #[test]
    fn bad_rows_report_row_numbers() {
        let text = "s,x,y,z\n0,0,0,0\n0.1,abc,0,0\n";
        let err = read_samples_csv(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
        let err = read_samples_csv("a,b\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn params_file_defaults() {
        let p = CurveParamsFile::from_json(r#"{"alpha0": 0.3, "branch": "minus"}"#).unwrap();
        assert_eq!(p.manifold, ManifoldParams::HEISENBERG);
        assert_eq!(p.family, "biharmonic_helix");
        assert_eq!(p.branch, Branch::Minus);
        assert!(CurveParamsFile::from_json(r#"{"alpha0": 0.3, "bogus": 1}"#).is_err());
    }
}
