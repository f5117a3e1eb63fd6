use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use nalgebra::Vector3;
use serde::Serialize;

use super::{open_output, Component, Format, GenerateArgs, RunConfig};
use crate::biharmonic::{bitension_report, classify, cone_membership, BitensionReport, ClassificationResult, ConeVerdict};
use crate::curve::{CurveSpec, Trajectory};
use crate::factory::{
    admissible_boundary, admissible_grid, biharmonic_helix, discriminant, geodesic_ivp, helix_invariants, invariants_for_rate, is_admissible,
    solve_branch_a, surface_eval, HelixParams, SurfacePatch, HELIX_RANGE,
};
use crate::geometry::{ConnectionPath, FrameVector, Geometry, Point, HEISENBERG_CONNECTION};
use crate::io::{fmt17, read_samples_csv, write_json, write_residuals_csv, write_samples_csv, CurveParamsFile, FrenetRecord};
use crate::numerics::linspace;

#[derive(Debug, Serialize)]
struct TensorEntry {
    quantity: String,
    value: f64,
    expected: Option<f64>,
    diff: Option<f64>,
    status: &'static str,
}

#[derive(Debug, Serialize)]
struct TensorReport {
    m: f64,
    l: f64,
    point: [f64; 3],
    path: ConnectionPath,
    entries: Vec<TensorEntry>,
}

const PAIRS: [(usize, usize); 3] = [(1, 2), (1, 3), (2, 3)];

pub(super) fn tensors(cfg: &RunConfig) -> anyhow::Result<i32> {
    let params = cfg.manifold;
    let geom = Geometry::with_config(params, &cfg.numerics);
    let path = geom.resolved_path()?;
    let p = Point::new(cfg.point[0], cfg.point[1], cfg.point[2]);
    let tol = if path == ConnectionPath::FiniteDifference { 1e-8 } else { 1e-12 };
    let h3 = params.is_heisenberg();
    let space_form = params.is_space_form();
    let kappa = 0.25 * params.l * params.l;
    let mut entries = Vec::new();
    let mut push = |quantity: String, value: f64, expected: Option<f64>, always: bool| {
        if !always && value.abs() <= 1e-12 && expected.is_none_or(|e| e == 0.0) {
            return;
        }
        let diff = expected.map(|e| (value - e).abs());
        let status = match diff {
            Some(d) if d <= tol => "MATCH",
            Some(_) => "DIFF",
            None => "-",
        };
        entries.push(TensorEntry {
            quantity,
            value,
            expected,
            diff,
            status,
        });
    };

    let conn = geom.connection(&p)?;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let expected = h3.then_some(HEISENBERG_CONNECTION[a][b][c]);
                push(format!("Gamma_{}{}{}", a + 1, b + 1, c + 1), conn[a][b][c], expected, false);
            }
        }
    }
    let riemann = geom.riemann(&p)?;
    for (i, &(a, b)) in PAIRS.iter().enumerate() {
        for &(c, d) in &PAIRS[i..] {
            let expected = if h3 {
                Some(match (a, b, c, d) {
                    (1, 2, 1, 2) => -0.75,
                    (1, 3, 1, 3) | (2, 3, 2, 3) => 0.25,
                    _ => 0.0,
                })
            } else if space_form {
                Some(if (a, b) == (c, d) { kappa } else { 0.0 })
            } else {
                None
            };
            push(format!("R_{a}{b}{c}{d}"), riemann[a - 1][b - 1][c - 1][d - 1], expected, false);
        }
    }
    for a in 1..=3 {
        for b in a..=3 {
            let value = geom.ricci_component(&p, a, b)?;
            let expected = if h3 {
                Some(if a != b {
                    0.0
                } else if a == 3 {
                    0.5
                } else {
                    -0.5
                })
            } else if space_form {
                Some(if a == b { 2.0 * kappa } else { 0.0 })
            } else {
                None
            };
            push(format!("Ric_{a}{b}"), value, expected, a == b);
        }
    }
    for (a, b) in PAIRS {
        let value = geom.sectional(&FrameVector::basis(p, a)?, &FrameVector::basis(p, b)?)?;
        let expected = if h3 {
            Some(if (a, b) == (1, 2) { -0.75 } else { 0.25 })
        } else if space_form {
            Some(kappa)
        } else {
            None
        };
        push(format!("K_{a}{b}"), value, expected, true);
    }

    let mut w = open_output(cfg)?;
    match cfg.format {
        Format::Json => {
            let report = TensorReport {
                m: params.m,
                l: params.l,
                point: cfg.point,
                path,
                entries,
            };
            write_json(&mut w, &report)?;
        }
        Format::Csv => {
            writeln!(w, "quantity,value,expected,diff,status")?;
            for e in &entries {
                let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
                writeln!(w, "{},{},{},{},{}", e.quantity, fmt17(e.value), opt(e.expected), opt(e.diff), e.status)?;
            }
        }
    }
    w.flush()?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct GenerateSummary {
    alpha0: f64,
    rate: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    s_range: [f64; 2],
    samples: usize,
    k: f64,
    tau: f64,
    b3: f64,
    max_tau1: f64,
    max_tau2: f64,
    mean_tau2: f64,
    max_expansion_gap: Option<f64>,
}

fn helix_params(cfg: &mut RunConfig, args: &GenerateArgs) -> anyhow::Result<(HelixParams, [f64; 2], usize)> {
    if let Some(path) = &args.params {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file = CurveParamsFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
        if file.family != "biharmonic_helix" {
            bail!("unsupported curve family {:?} (expected biharmonic_helix)", file.family);
        }
        cfg.manifold = file.manifold;
        if let Some(alpha0) = file.alpha0 {
            // parameter files carry radians
            cfg.alpha0 = Some(if cfg.degrees { alpha0.to_degrees() } else { alpha0 });
        }
        (cfg.a, cfg.b, cfg.c, cfg.d, cfg.branch) = (file.a, file.b, file.c, file.d, file.branch);
        cfg.s_range = file.s_range.or(cfg.s_range);
        cfg.samples = file.samples.or(cfg.samples);
    }
    if !cfg.manifold.is_heisenberg() {
        bail!(crate::Error::UnsupportedManifold {
            m: cfg.manifold.m,
            l: cfg.manifold.l
        });
    }
    let alpha0 = if let Some(v) = args.alpha0 {
        cfg.angle(v)
    } else if let Some(v) = args.alpha0_deg {
        v.to_radians()
    } else if let Some(v) = args.sin_alpha0 {
        if !(v > 0.0 && v <= 1.0) {
            bail!("--sin-alpha0 must lie in (0, 1], got {v}");
        }
        v.asin()
    } else if let Some(v) = args.cos_alpha0 {
        if !(-1.0..=1.0).contains(&v) {
            bail!("--cos-alpha0 must lie in [-1, 1], got {v}");
        }
        v.acos()
    } else if let Some(v) = cfg.alpha0 {
        cfg.angle(v)
    } else {
        bail!("alpha0 is required (--alpha0, --alpha0-deg, --sin-alpha0, --cos-alpha0 or a parameter file)");
    };
    if let Some(b) = args.branch {
        cfg.branch = b;
    }
    for (dst, src) in [(&mut cfg.a, args.a), (&mut cfg.b, args.b), (&mut cfg.c, args.c), (&mut cfg.d, args.d)] {
        if let Some(v) = src {
            *dst = v;
        }
    }
    cfg.s_range = args.s_range.or(cfg.s_range);
    cfg.samples = args.samples.or(cfg.samples);
    cfg.surfaces |= args.surfaces;
    let hp = HelixParams::new(alpha0, cfg.branch)?.with_offsets(cfg.a, cfg.b, cfg.c, cfg.d);
    let range = cfg.s_range.unwrap_or([HELIX_RANGE.0, HELIX_RANGE.1]);
    Ok((hp, range, cfg.samples.unwrap_or(2001)))
}

fn write_file(dir: &Path, name: &str, f: impl FnOnce(&mut dyn Write) -> crate::Result<()>) -> anyhow::Result<()> {
    let path = dir.join(name);
    let mut w = std::io::BufWriter::new(fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_surface(w: &mut dyn Write, patch: &SurfacePatch, us: &[f64], vs: &[f64]) -> crate::Result<()> {
    writeln!(w, "u,v,x,y,z")?;
    for &u in us {
        for &v in vs {
            let p = surface_eval(patch, u, v)?;
            writeln!(w, "{}", [u, v, p.x, p.y, p.z].map(fmt17).join(","))?;
        }
    }
    Ok(())
}

pub(super) fn generate(cfg: &mut RunConfig, args: &GenerateArgs) -> anyhow::Result<i32> {
    let (hp, range, n) = helix_params(cfg, args)?;
    let spec = biharmonic_helix(&hp, (range[0], range[1]))?;
    let traj = Trajectory::from_spec(&spec, n, &cfg.numerics)?;
    let report = bitension_report(&traj)?;
    let frenet = traj.frenet_partial()?;
    let inv = helix_invariants(&hp)?;
    let summary = GenerateSummary {
        alpha0: hp.alpha0,
        rate: inv.rate,
        a: hp.a,
        b: hp.b,
        c: hp.c,
        d: hp.d,
        s_range: range,
        samples: n,
        k: inv.k,
        tau: inv.tau,
        b3: inv.b3,
        max_tau1: report.max_tau1,
        max_tau2: report.max_tau2,
        mean_tau2: report.mean_tau2,
        max_expansion_gap: report.max_expansion_gap,
    };
    let records: Vec<FrenetRecord> = frenet.iter().map(FrenetRecord::from).collect();
    let mut stdout = super::stdout();
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write_file(dir, "curve.csv", |w| write_samples_csv(w, &traj.samples, true))?;
            write_file(dir, "frenet.json", |w| write_json(w, &records))?;
            write_file(dir, "bitension.json", |w| write_json(w, &report))?;
            write_file(dir, "residuals.csv", |w| write_residuals_csv(w, &report))?;
            write_file(dir, "summary.json", |w| write_json(w, &summary))?;
            if cfg.surfaces {
                let [nu, nv] = cfg.surface_grid;
                let us = linspace(range[0], range[1], nu.max(2));
                let zs = traj.samples.iter().map(|s| s.point.z);
                let (zlo, zhi) = zs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z), hi.max(z)));
                let cyl_v = linspace(zlo, zhi, nv.max(2));
                let hel_v = linspace(0.0, 2.0, nv.max(2));
                write_file(dir, "cylinder.csv", |w| write_surface(w, &SurfacePatch::cylinder(hp), &us, &cyl_v))?;
                write_file(dir, "helicoid.csv", |w| write_surface(w, &SurfacePatch::helicoid(hp), &us, &hel_v))?;
            }
            print_summary(&mut stdout, cfg.format, &summary)?;
        }
        None => match cfg.format {
            Format::Csv => write_samples_csv(&mut stdout, &traj.samples, true)?,
            Format::Json => {
                #[derive(Serialize)]
                struct Bundle<'a> {
                    summary: &'a GenerateSummary,
                    frenet: &'a [FrenetRecord],
                }
                write_json(
                    &mut stdout,
                    &Bundle {
                        summary: &summary,
                        frenet: &records,
                    },
                )?;
            }
        },
    }
    stdout.flush()?;
    Ok(0)
}

fn print_summary(w: &mut dyn Write, format: Format, s: &GenerateSummary) -> anyhow::Result<()> {
    match format {
        Format::Json => write_json(w, s)?,
        Format::Csv => {
            writeln!(w, "quantity,value")?;
            let gap = s.max_expansion_gap.unwrap_or(f64::NAN);
            for (name, v) in [
                ("alpha0", s.alpha0),
                ("rate", s.rate),
                ("k", s.k),
                ("tau", s.tau),
                ("b3", s.b3),
                ("max_tau1", s.max_tau1),
                ("max_tau2", s.max_tau2),
                ("mean_tau2", s.mean_tau2),
                ("max_expansion_gap", gap),
            ] {
                writeln!(w, "{name},{}", fmt17(v))?;
            }
        }
    }
    Ok(())
}

pub(super) fn verify(cfg: &RunConfig, input: &Path) -> anyhow::Result<i32> {
    let file = fs::File::open(input).with_context(|| format!("opening {}", input.display()))?;
    let rows = read_samples_csv(std::io::BufReader::new(file))?;
    let spec = CurveSpec::sampled(rows, cfg.manifold)?;
    let traj = Trajectory::from_spec(&spec, 0, &cfg.numerics)?;
    let result = classify(&traj, &cfg.numerics)?;
    let mut w = open_output(cfg)?;
    match cfg.format {
        Format::Json => write_json(&mut w, &result)?,
        Format::Csv => write_classification(&mut w, &result)?,
    }
    w.flush()?;
    Ok(if result.verdict.is_biharmonic() { 0 } else { 1 })
}

fn write_classification(w: &mut dyn Write, r: &ClassificationResult) -> anyhow::Result<()> {
    writeln!(w, "quantity,value,tolerance,status")?;
    writeln!(w, "verdict,{},,", r.verdict.as_str())?;
    let status = |p: bool| if p { "pass" } else { "fail" };
    let mut seen = Vec::new();
    for c in [&r.tension, &r.bitension].into_iter().chain(&r.biharmonic_system).chain(&r.helix_system) {
        if seen.contains(&c.name.as_str()) {
            continue;
        }
        seen.push(c.name.as_str());
        writeln!(w, "{},{},{},{}", c.name, fmt17(c.residual), fmt17(c.tolerance), status(c.passed))?;
    }
    for (name, v) in [("k_mean", r.k_mean), ("tau_mean", r.tau_mean), ("b3_mean", r.b3_mean)] {
        if let Some(v) = v {
            writeln!(w, "{name},{},,", fmt17(v))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GeodesicOutput {
    point: [f64; 3],
    direction: [f64; 3],
    length: f64,
    report: BitensionReport,
    samples: Vec<[f64; 7]>,
}

pub(super) fn geodesic(cfg: &RunConfig) -> anyhow::Result<i32> {
    let Some(dir) = cfg.direction else { bail!("--direction is required") };
    let v = Vector3::from(dir);
    if !(v.norm() > 0.0) {
        bail!("direction must be non-zero");
    }
    let v = v / v.norm();
    if !(cfg.length > 0.0 && cfg.length.is_finite()) {
        bail!("--length must be positive, got {}", cfg.length);
    }
    let p0 = Point::new(cfg.point[0], cfg.point[1], cfg.point[2]);
    let spec = geodesic_ivp(cfg.manifold, p0, v, (0.0, cfg.length), &cfg.numerics)?;
    let n = cfg.samples.unwrap_or(1001);
    let traj = Trajectory::from_spec(&spec, n, &cfg.numerics)?;
    let mut w = open_output(cfg)?;
    match cfg.format {
        Format::Csv => write_samples_csv(&mut w, &traj.samples, true)?,
        Format::Json => {
            let report = bitension_report(&traj)?;
            let samples = traj
                .samples
                .iter()
                .map(|s| {
                    let c = s.velocity.components;
                    [s.s, s.point.x, s.point.y, s.point.z, c[0], c[1], c[2]]
                })
                .collect();
            write_json(
                &mut w,
                &GeodesicOutput {
                    point: cfg.point,
                    direction: [v[0], v[1], v[2]],
                    length: cfg.length,
                    report,
                    samples,
                },
            )?;
        }
    }
    w.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct ConeQuery {
    point: [f64; 3],
    direction: [f64; 3],
    alpha0: f64,
    discriminant: f64,
    verdict: ConeVerdict,
}

#[derive(Serialize)]
struct ConeSweep {
    resolution: usize,
    admissible: usize,
    boundaries: Vec<f64>,
    exact_boundaries: [f64; 2],
}

/// Root of `5cos²α - 4` between `lo` and `hi` by bisection.
fn bisect_boundary(mut lo: f64, mut hi: f64) -> f64 {
    let f = |a: f64| 5.0 * a.cos().powi(2) - 4.0;
    let flo = f(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid).signum() == flo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub(super) fn cone(cfg: &RunConfig) -> anyhow::Result<i32> {
    let mut w = open_output(cfg)?;
    if let Some(n) = cfg.sweep {
        if n < 2 {
            bail!("--sweep needs at least 2 points");
        }
        let grid: Vec<f64> = (1..=n).map(|i| PI * i as f64 / (n + 1) as f64).collect();
        let flags: Vec<bool> = grid.iter().map(|&a| is_admissible(a)).collect();
        let boundaries: Vec<f64> = (1..n)
            .filter(|&i| flags[i] != flags[i - 1])
            .map(|i| bisect_boundary(grid[i - 1], grid[i]))
            .collect();
        let edge = admissible_boundary();
        let sweep = ConeSweep {
            resolution: n,
            admissible: flags.iter().filter(|&&f| f).count(),
            boundaries,
            exact_boundaries: [edge, PI - edge],
        };
        match cfg.format {
            Format::Json => write_json(&mut w, &sweep)?,
            Format::Csv => {
                writeln!(w, "boundary,alpha0")?;
                for (i, b) in sweep.boundaries.iter().enumerate() {
                    writeln!(w, "{},{}", i + 1, fmt17(*b))?;
                }
            }
        }
    } else {
        let Some(dir) = cfg.direction else {
            bail!("either --direction or --sweep is required")
        };
        let v = Vector3::from(dir);
        if !(v.norm() > 0.0) {
            bail!("direction must be non-zero");
        }
        let v = v / v.norm();
        let p = Point::new(cfg.point[0], cfg.point[1], cfg.point[2]);
        let verdict = cone_membership(&Geometry::with_config(cfg.manifold, &cfg.numerics), &FrameVector::new(p, v))?;
        let alpha0 = v[2].clamp(-1.0, 1.0).acos();
        let query = ConeQuery {
            point: cfg.point,
            direction: [v[0], v[1], v[2]],
            alpha0,
            discriminant: discriminant(alpha0),
            verdict,
        };
        match cfg.format {
            Format::Json => write_json(&mut w, &query)?,
            Format::Csv => {
                let name = match verdict {
                    ConeVerdict::GeodesicOnly => "geodesic_only",
                    ConeVerdict::BiharmonicDirection => "biharmonic_direction",
                };
                writeln!(w, "alpha0,discriminant,verdict")?;
                writeln!(w, "{},{},{name}", fmt17(alpha0), fmt17(query.discriminant))?;
            }
        }
    }
    w.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct ScanRow {
    alpha0: f64,
    rate: f64,
    k: f64,
    tau: f64,
    b3: f64,
    energy: f64,
}

pub(super) fn scan(cfg: &RunConfig) -> anyhow::Result<i32> {
    if !cfg.manifold.is_heisenberg() {
        bail!(crate::Error::UnsupportedManifold {
            m: cfg.manifold.m,
            l: cfg.manifold.l
        });
    }
    let mut angles: Vec<f64> = match cfg.alpha_range {
        Some([lo, hi]) => {
            let (lo, hi) = (cfg.angle(lo), cfg.angle(hi));
            if !(hi >= lo) {
                bail!("--range must satisfy lo <= hi");
            }
            linspace(lo, hi, cfg.grid.max(1)).into_iter().filter(|&a| is_admissible(a)).collect()
        }
        None => match cfg.component {
            Component::Positive => admissible_grid(cfg.grid, true),
            Component::Negative => admissible_grid(cfg.grid, false),
            Component::Both => admissible_grid(cfg.grid, true)
                .into_iter()
                .chain(admissible_grid(cfg.grid, false))
                .collect(),
        },
    };
    angles.sort_by(f64::total_cmp);
    let rows = angles
        .iter()
        .map(|&alpha0| {
            let inv = invariants_for_rate(alpha0, solve_branch_a(alpha0, cfg.branch)?);
            Ok(ScanRow {
                alpha0,
                rate: inv.rate,
                k: inv.k,
                tau: inv.tau,
                b3: inv.b3,
                energy: inv.energy(),
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    if rows.is_empty() {
        eprintln!("warning: no admissible alpha0 in the requested grid (need 5 cos^2(alpha0) >= 4)");
    }
    let mut w = open_output(cfg)?;
    match cfg.format {
        Format::Json => write_json(&mut w, &rows)?,
        Format::Csv => {
            writeln!(w, "alpha0,A,k,tau,B3,k2_tau2_B32")?;
            for r in &rows {
                writeln!(w, "{}", [r.alpha0, r.rate, r.k, r.tau, r.b3, r.energy].map(fmt17).join(","))?;
            }
        }
    }
    w.flush()?;
    Ok(0)
}
