//! Command-line front end.
//!
//! Every command reads an optional JSON [`RunConfig`] (`--config`) and then
//! applies the command-line flags on top of it. Exit codes: 0 on success (and
//! for `verify`, a biharmonic verdict), 1 when `verify` finds the curve is not
//! biharmonic, 2 on any input or runtime error.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::factory::Branch;
use crate::geometry::{ConnectionPath, ManifoldParams};
use crate::numerics::{NumericsConfig, StencilOrder};
use crate::ode::OdeMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    #[default]
    Positive,
    Negative,
    Both,
}

/// Settings shared by all commands. Every field may come from the JSON
/// config file; command-line flags take precedence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub manifold: ManifoldParams,
    pub numerics: NumericsConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Angles given in degrees rather than radians.
    pub degrees: bool,
    pub point: [f64; 3],
    pub alpha0: Option<f64>,
    pub branch: Branch,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub s_range: Option<[f64; 2]>,
    pub samples: Option<usize>,
    pub surfaces: bool,
    pub surface_grid: [usize; 2],
    pub direction: Option<[f64; 3]>,
    pub length: f64,
    pub sweep: Option<usize>,
    pub grid: usize,
    pub component: Component,
    pub alpha_range: Option<[f64; 2]>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            manifold: ManifoldParams::HEISENBERG,
            numerics: NumericsConfig::default(),
            format: Format::Csv,
            out: None,
            degrees: false,
            point: [0.0; 3],
            alpha0: None,
            branch: Branch::Plus,
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            s_range: None,
            samples: None,
            surfaces: false,
            surface_grid: [101, 21],
            direction: None,
            length: 10.0,
            sweep: None,
            grid: 50,
            component: Component::Positive,
            alpha_range: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn angle(&self, value: f64) -> f64 {
        if self.degrees {
            value.to_radians()
        } else {
            value
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bihar", version, about = "Biharmonic curves in the Heisenberg group and Cartan-Vranceanu spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration; flags override its fields
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Cartan-Vranceanu parameter m
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Cartan-Vranceanu parameter l
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub l: Option<f64>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Output file (directory for `generate`); stdout when absent
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Interpret angle arguments in degrees
    #[arg(long, global = true)]
    pub deg: bool,
    #[arg(long, global = true)]
    pub stencil: Option<StencilArg>,
    #[arg(long, global = true)]
    pub connection: Option<PathArg>,
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
    #[arg(long, global = true)]
    pub residual_tol: Option<f64>,
    #[arg(long, global = true)]
    pub biharmonic_tol: Option<f64>,
    #[arg(long, global = true)]
    pub unit_speed_tol: Option<f64>,
    #[arg(long, global = true)]
    pub atol: Option<f64>,
    #[arg(long, global = true)]
    pub rtol: Option<f64>,
    /// Use fixed-step RK4 with this step instead of the adaptive integrator
    #[arg(long, global = true)]
    pub rk4_step: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StencilArg {
    Second,
    Fourth,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PathArg {
    Auto,
    Table,
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Connection, curvature, Ricci and sectional curvature tables at a point
    Tensors {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        point: Option<[f64; 3]>,
    },
    /// Sample a non-geodesic biharmonic helix with its Frenet data and residuals
    Generate(GenerateArgs),
    /// Classify a sampled curve read from CSV (`s,x,y,z[,vx,vy,vz]`)
    Verify {
        #[arg(value_name = "FILE")]
        input: PathBuf,
    },
    /// Integrate a geodesic from a point and a direction (frame components)
    Geodesic {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        point: Option<[f64; 3]>,
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        direction: Option<[f64; 3]>,
        #[arg(long)]
        length: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Classify a direction against the cone of biharmonic directions, or sweep alpha0
    Cone {
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        point: Option<[f64; 3]>,
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, conflicts_with = "sweep")]
        direction: Option<[f64; 3]>,
        /// Number of alpha0 values in (0, pi)
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Tabulate helix invariants over a grid of alpha0
    Scan {
        /// Points per admissible component
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        component: Option<Component>,
        /// Explicit alpha0 range `lo,hi`; inadmissible values are dropped
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        range: Option<[f64; 2]>,
        #[arg(long)]
        branch: Option<Branch>,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Curve parameter file (JSON)
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, group = "angle")]
    pub alpha0: Option<f64>,
    #[arg(long, allow_hyphen_values = true, group = "angle")]
    pub alpha0_deg: Option<f64>,
    /// Give alpha0 in (0, pi/2] by its sine
    #[arg(long, group = "angle")]
    pub sin_alpha0: Option<f64>,
    #[arg(long, allow_hyphen_values = true, group = "angle")]
    pub cos_alpha0: Option<f64>,
    #[arg(long)]
    pub branch: Option<Branch>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub s_range: Option<[f64; 2]>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also write cylinder and helicoid grids
    #[arg(long)]
    pub surfaces: bool,
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| format!("cannot parse {p:?} as a number"))?;
    }
    Ok(out)
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    parse_list::<3>(s)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    parse_list::<2>(s)
}

fn apply_global(cfg: &mut RunConfig, g: &GlobalArgs) -> anyhow::Result<()> {
    if let Some(m) = g.m {
        cfg.manifold.m = m;
    }
    if let Some(l) = g.l {
        cfg.manifold.l = l;
    }
    if let Some(f) = g.format {
        cfg.format = f;
    }
    if g.out.is_some() {
        cfg.out = g.out.clone();
    }
    cfg.degrees |= g.deg;
    let n = &mut cfg.numerics;
    if let Some(s) = g.stencil {
        n.stencil_order = match s {
            StencilArg::Second => StencilOrder::Second,
            StencilArg::Fourth => StencilOrder::Fourth,
        };
    }
    if let Some(p) = g.connection {
        n.connection_path = match p {
            PathArg::Auto => ConnectionPath::Auto,
            PathArg::Table => ConnectionPath::HeisenbergTable,
            PathArg::Analytic => ConnectionPath::Analytic,
            PathArg::FiniteDifference => ConnectionPath::FiniteDifference,
        };
    }
    for (dst, src) in [
        (&mut n.fd_step, g.fd_step),
        (&mut n.residual_tol, g.residual_tol),
        (&mut n.biharmonic_tol, g.biharmonic_tol),
        (&mut n.unit_speed_tol, g.unit_speed_tol),
        (&mut n.ode.atol, g.atol),
        (&mut n.ode.rtol, g.rtol),
    ] {
        if let Some(v) = src {
            *dst = v;
        }
    }
    if let Some(step) = g.rk4_step {
        n.ode.method = OdeMethod::Rk4 { step };
    }
    n.validate()?;
    Ok(())
}

fn load_config(g: &GlobalArgs) -> anyhow::Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RunConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    apply_global(&mut cfg, g)?;
    if !(cfg.manifold.m.is_finite() && cfg.manifold.l.is_finite()) {
        bail!("manifold parameters must be finite");
    }
    Ok(cfg)
}

/// Where command output goes: a file when `--out` is set, stdout otherwise.
pub(crate) fn open_output(cfg: &RunConfig) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(stdout()),
    })
}

/// Stdout that discards output once the reader has gone away (`bihar ... | head`).
pub(crate) struct PipeSafe<W>(W);

pub(crate) fn stdout() -> PipeSafe<std::io::StdoutLock<'static>> {
    PipeSafe(std::io::stdout().lock())
}

impl<W: Write> Write for PipeSafe<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        match self.0.write(buf) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(buf.len()),
            other => other,
        }
    }

    fn flush(&mut self) -> std::io::Result<()> {
        match self.0.flush() {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other,
        }
    }
}

/// Runs one command and returns the process exit code.
pub fn execute(cli: Cli) -> anyhow::Result<i32> {
    let mut cfg = load_config(&cli.global)?;
    match cli.command {
        Command::Tensors { point } => {
            if let Some(p) = point {
                cfg.point = p;
            }
            commands::tensors(&cfg)
        }
        Command::Generate(args) => commands::generate(&mut cfg, &args),
        Command::Verify { input } => commands::verify(&cfg, &input),
        Command::Geodesic {
            point,
            direction,
            length,
            samples,
        } => {
            if let Some(p) = point {
                cfg.point = p;
            }
            cfg.direction = direction.or(cfg.direction);
            if let Some(l) = length {
                cfg.length = l;
            }
            cfg.samples = samples.or(cfg.samples);
            commands::geodesic(&cfg)
        }
        Command::Cone { point, direction, sweep } => {
            if let Some(p) = point {
                cfg.point = p;
            }
            if direction.is_some() {
                cfg.direction = direction;
                cfg.sweep = None;
            }
            if sweep.is_some() {
                cfg.sweep = sweep;
                cfg.direction = None;
            }
            commands::cone(&cfg)
        }
        Command::Scan {
            grid,
            component,
            range,
            branch,
        } => {
            if let Some(g) = grid {
                cfg.grid = g;
            }
            if let Some(c) = component {
                cfg.component = c;
            }
            cfg.alpha_range = range.or(cfg.alpha_range);
            if let Some(b) = branch {
                cfg.branch = b;
            }
            commands::scan(&cfg)
        }
    }
}

/// Parses `args`, runs the command and maps failures to exit code 2.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
