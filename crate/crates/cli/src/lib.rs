//! Command-line front end: field export, zeros and verification suites.
//!
//! Exit codes: 0 success, 1 failed check or runtime error, 2 usage or
//! validation error.

// `!(a < b)` comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod field_io;
pub mod fmt;
pub mod render;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use squeeze_core::state::DOMAIN_WARN_RATIO;
use squeeze_core::{
    current, density, field_on_grid, zeros, GaugeField, Grid2D, GridGeometry, SqueezeAngle, StateSpec, Units,
};

use crate::field_io::{write_field, Columns};
use crate::fmt::{format_g, g17};
use crate::verify::{run_suite, Suite, VerifyOptions};

/// Smallest node count per grid side.
pub const MIN_GRID_NODES: usize = 16;

/// Node count per side of the automatic grid.
pub const AUTO_GRID_NODES: usize = 256;

#[derive(Debug, Parser)]
#[command(name = "squeeze", version, about = "Squeezed states of a charge in a magnetic field")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the complex wave function.
    Eval(FieldArgs),
    /// Sample the probability density |ψ|².
    Density(FieldArgs),
    /// Sample the probability current; writes jx and jy files.
    Current(CurrentArgs),
    /// Print the N zeros of the wave function, one `x y` pair per line.
    Zeros(StateArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Landau level N.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Squeeze axis orientation Re Φ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi1: f64,
    /// Squeeze strength Im Φ; must be negative.
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub phi2: f64,
    /// Guiding-center x.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub cx: f64,
    /// Guiding-center y.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub cy: f64,
    /// Magnetic length.
    #[arg(long, default_value_t = 1.0)]
    pub l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Pgm,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Pgm => "pgm",
        }
    }
}

/// `x0,x1,y0,y1,nx,ny`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl std::str::FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err("expected x0,x1,y0,y1,nx,ny".into());
        }
        let f = |k: usize| parts[k].parse::<f64>().map_err(|e| format!("{:?}: {e}", parts[k]));
        let n = |k: usize| parts[k].parse::<usize>().map_err(|e| format!("{:?}: {e}", parts[k]));
        let g = GridArg {
            x0: f(0)?,
            x1: f(1)?,
            y0: f(2)?,
            y1: f(3)?,
            nx: n(4)?,
            ny: n(5)?,
        };
        if !(g.x1 > g.x0 && g.y1 > g.y0) {
            return Err("need x1 > x0 and y1 > y0".into());
        }
        if g.nx < MIN_GRID_NODES || g.ny < MIN_GRID_NODES {
            return Err(format!("need nx, ny >= {MIN_GRID_NODES}"));
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridOptions {
    /// Sampling grid `x0,x1,y0,y1,nx,ny` (endpoints inclusive); defaults to a
    /// 256×256 grid covering the state.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridArg>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridOptions,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CurrentArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridOptions,
    /// Directory receiving jx.<ext> and jy.<ext>.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    pub state: StateArgs,
    /// Stencil order of differential operators (2, 4 or 6).
    #[arg(long, default_value_t = 6)]
    pub order: usize,
    /// Grid spacing in units of l.
    #[arg(long, default_value_t = 1.0 / 16.0)]
    pub h: f64,
    /// Override every check tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Lattice cell areas in units of 2πl² (frame suite).
    #[arg(long, value_delimiter = ',', default_values_t = [2.0, 1.0, 0.5])]
    pub cell_areas: Vec<f64>,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an invalid state; exit 2.
    Usage(String),
    /// A runtime failure; exit 1.
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    ChecksFailed,
}

impl StateArgs {
    pub fn spec(&self) -> std::result::Result<StateSpec, CliError> {
        if !(self.phi2 < 0.0) {
            return Err(CliError::Usage(format!(
                "phi2 = {} is not allowed: the state is normalizable only for Im Φ = phi2 < 0",
                self.phi2
            )));
        }
        let phi = SqueezeAngle::new(self.phi1, self.phi2).map_err(|e| CliError::Usage(e.to_string()))?;
        let units = Units::new(self.l).map_err(|e| CliError::Usage(e.to_string()))?;
        if !(self.cx.is_finite() && self.cy.is_finite()) {
            return Err(CliError::Usage("cx and cy must be finite".into()));
        }
        Ok(StateSpec::new(self.n, (self.cx, self.cy), phi).with_units(units))
    }

    fn params(&self) -> Vec<(String, String)> {
        vec![
            ("n".into(), self.n.to_string()),
            ("phi1".into(), g17(self.phi1)),
            ("phi2".into(), g17(self.phi2)),
            ("cx".into(), g17(self.cx)),
            ("cy".into(), g17(self.cy)),
            ("l".into(), g17(self.l)),
        ]
    }
}

fn geometry(spec: &StateSpec, grid: Option<GridArg>) -> std::result::Result<GridGeometry, CliError> {
    let usage = |e: squeeze_core::Error| CliError::Usage(e.to_string());
    match grid {
        Some(g) => GridGeometry::from_bounds(g.x0, g.x1, g.y0, g.y1, g.nx, g.ny).map_err(usage),
        None => {
            let c = spec.covering_geometry(spec.units.l() / 16.0).map_err(usage)?;
            GridGeometry::from_bounds(c.x0, c.x1(), c.y0, c.y1(), AUTO_GRID_NODES, AUTO_GRID_NODES).map_err(usage)
        }
    }
}

fn sample(spec: &StateSpec, geom: &GridGeometry) -> Grid2D {
    let f = field_on_grid(spec, geom);
    let ratio = f.boundary_ratio(2);
    if ratio > DOMAIN_WARN_RATIO {
        log::warn!("domain too small: boundary/peak modulus ratio {ratio:.3e} exceeds {DOMAIN_WARN_RATIO:e}");
    }
    f
}

fn field_params(command: &str, state: &StateArgs, geom: &GridGeometry, format: Format) -> Vec<(String, String)> {
    let mut p = vec![("command".to_string(), command.to_string())];
    p.extend(state.params());
    p.push((
        "grid".into(),
        format!(
            "{},{},{},{},{},{}",
            g17(geom.x0),
            g17(geom.x1()),
            g17(geom.y0),
            g17(geom.y1()),
            geom.nx,
            geom.ny
        ),
    ));
    p.push(("format".into(), format.extension().into()));
    p
}

fn emit<W: Write + ?Sized>(
    out: &mut W,
    field: &Grid2D,
    columns: Columns,
    format: Format,
    params: &[(String, String)],
) -> io::Result<()> {
    let title = params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    match format {
        Format::Csv => write_field(out, field, columns, params),
        Format::Svg => render::write_svg(out, field, &title),
        Format::Pgm => render::write_pgm(out, field, &title),
    }
}

fn write_to(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w).with_context(|| format!("writing {}", p.display()))?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w).context("writing standard output")?;
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_field(name: &str, args: &FieldArgs) -> std::result::Result<Outcome, CliError> {
    let spec = args.state.spec()?;
    let geom = geometry(&spec, args.grid.grid)?;
    let psi = sample(&spec, &geom);
    let (field, columns) = match name {
        "eval" => (psi, Columns::Complex),
        _ => (density(&psi), Columns::Real),
    };
    let params = field_params(name, &args.state, &geom, args.grid.format);
    write_to(args.out.as_deref(), |w| {
        emit(w, &field, columns, args.grid.format, &params)
    })?;
    Ok(Outcome::Ok)
}

fn cmd_current(args: &CurrentArgs) -> std::result::Result<Outcome, CliError> {
    let spec = args.state.spec()?;
    let geom = geometry(&spec, args.grid.grid)?;
    let psi = sample(&spec, &geom);
    let j = current(&psi, &GaugeField::symmetric(spec.units));
    let params = field_params("current", &args.state, &geom, args.grid.format);
    std::fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    for (name, comp) in [("jx", &j.jx), ("jy", &j.jy)] {
        let path = args.out_dir.join(format!("{name}.{}", args.grid.format.extension()));
        let mut p = params.clone();
        p.push(("component".into(), name.into()));
        write_to(Some(&path), |w| emit(w, comp, Columns::Real, args.grid.format, &p))?;
    }
    Ok(Outcome::Ok)
}

/// 12 significant digits; negative zero prints as 0.
pub fn format_coordinate(v: f64) -> String {
    format_g(if v == 0.0 { 0.0 } else { v }, 12)
}

fn cmd_zeros(args: &StateArgs) -> std::result::Result<Outcome, CliError> {
    let spec = args.spec()?;
    let z = zeros(&spec).map_err(anyhow::Error::from)?;
    write_to(None, |w| {
        for (x, y) in z {
            writeln!(w, "{} {}", format_coordinate(x), format_coordinate(y))?;
        }
        Ok(())
    })?;
    Ok(Outcome::Ok)
}

fn cmd_verify(args: &VerifyArgs) -> std::result::Result<Outcome, CliError> {
    let state = args.state.spec()?;
    if ![2, 4, 6].contains(&args.order) {
        return Err(CliError::Usage(format!(
            "stencil order {} not in {{2, 4, 6}}",
            args.order
        )));
    }
    if !(args.h > 0.0 && args.h.is_finite()) {
        return Err(CliError::Usage(format!("grid spacing {} must be positive", args.h)));
    }
    if args.cell_areas.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(CliError::Usage("cell areas must be positive".into()));
    }
    let opts = VerifyOptions {
        state,
        order: args.order,
        h: args.h,
        tol: args.tol,
        cell_areas: args.cell_areas.clone(),
    };
    let checks = run_suite(args.suite, &opts)?;
    let mut all = true;
    write_to(None, |w| {
        for c in &checks {
            all &= c.passed();
            writeln!(w, "{}", c.line())?;
        }
        Ok(())
    })?;
    Ok(if all { Outcome::Ok } else { Outcome::ChecksFailed })
}

pub fn execute(cli: &Cli) -> std::result::Result<Outcome, CliError> {
    match &cli.command {
        Command::Eval(a) => cmd_field("eval", a),
        Command::Density(a) => cmd_field("density", a),
        Command::Current(a) => cmd_current(a),
        Command::Zeros(a) => cmd_zeros(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<io::Error>())
        .any(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::ChecksFailed) => 1,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(e)) if is_broken_pipe(&e) => 0,
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_argument() {
        let g: GridArg = "-6,6,-6,6,128,128".parse().unwrap();
        assert_eq!((g.x0, g.x1, g.nx, g.ny), (-6.0, 6.0, 128, 128));
        assert!("-6,6,-6,6,8,128".parse::<GridArg>().is_err());
        assert!("6,-6,-6,6,32,32".parse::<GridArg>().is_err());
        assert!("1,2,3".parse::<GridArg>().is_err());
    }

    #[test]
    fn coordinates_drop_negative_zero() {
        assert_eq!(format_coordinate(-0.0), "0");
        assert_eq!(format_coordinate(0.703_562_363_973_514_5), "0.703562363974");
        assert_eq!(format_coordinate(-0.703_562_363_973_514_5), "-0.703562363974");
    }

    #[test]
    fn nonnegative_phi2_is_a_usage_error() {
        let s = StateArgs {
            n: 0,
            phi1: 0.0,
            phi2: 0.0,
            cx: 0.0,
            cy: 0.0,
            l: 1.0,
        };
        match s.spec() {
            Err(CliError::Usage(m)) => assert!(m.contains("phi2 < 0")),
            other => panic!("{other:?}"),
        }
    }
}
