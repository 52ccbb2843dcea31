//! The `brane` command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::disk::{disk_boundaries, disk_spectrum, rim_residual, DiskModel};
use crate::error::{invalid, Error, Result};
use crate::geometry::{spin_connection, AngularGrid, SphereGeometry};
use crate::market::{phi_grid, resume_scenario, run_scenario, ScenarioFile, ScenarioReport};
use crate::mode::ModeIndex;
use crate::output::{to_json_string, Cell, ErrorRecord, Table};
use crate::plot::{emit_plot, PlotKind};
use crate::shooting::RootComparison;
use crate::solver::spectrum_solvers;
use crate::specfun::{bessel_i, bessel_j, hyp2f1, ComplexScalar, HyperParams, RootBracket};
use crate::sphere::{default_window, dispersion_table, eigenfunction, solve_spectrum, Alpha, WallField};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BRANE_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Default relative tolerance of `verify`.
pub const VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "brane", version, about = "Dirac spectra on a sphere with an equatorial wall")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curvature and frame data of the sphere of radius r.
    Geometry(GeometryArgs),
    /// Evaluate a special function.
    #[command(hide = true)]
    Fun(FunArgs),
    /// Signed eigenvalues of one mode.
    Spectrum(SpectrumArgs),
    /// Lowest eigenvalue of several modes against E = m / r.
    Dispersion(DispersionArgs),
    /// Spectrum of the flat disk.
    Disk(DiskArgs),
    /// Evolve a market scenario.
    Scenario(ScenarioArgs),
    /// Compare matching and shooting spectra.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; defaults to $BRANE_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Half-integer given as "p/2" or as the integer 2m.
#[derive(Debug, Clone, Copy)]
pub struct ModeArg(pub ModeIndex);

impl FromStr for ModeArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let m = if s.contains('/') {
            s.parse::<ModeIndex>()
        } else {
            s.parse::<i32>()
                .map_err(|e| invalid("m", e.to_string()))
                .and_then(ModeIndex::from_twice)
        };
        m.map(ModeArg).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaArg {
    One(Alpha),
    Both,
}

impl FromStr for AlphaArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "both" {
            return Ok(AlphaArg::Both);
        }
        s.parse::<Alpha>().map(AlphaArg::One).map_err(|e| e.to_string())
    }
}

impl AlphaArg {
    fn classes(self) -> Vec<Alpha> {
        match self {
            AlphaArg::One(a) => vec![a],
            AlphaArg::Both => Alpha::both().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryQuantity {
    Ricci,
    Metric,
    Determinant,
    Zweibein,
    SpinConnection,
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value = "ricci")]
    pub what: GeometryQuantity,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub theta: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunName {
    Hyp2f1,
    BesselJ,
    BesselI,
}

#[derive(Debug, Clone, Args)]
pub struct FunArgs {
    #[arg(value_enum)]
    pub name: FunName,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub a_im: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub b_im: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub z: f64,
    #[arg(long, default_value_t = 0)]
    pub order: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub x: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub phi0: f64,
    /// Mode as "p/2" or the integer 2m.
    #[arg(long, allow_hyphen_values = true)]
    pub m: ModeArg,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// "+1", "-1" or "both".
    #[arg(long, allow_hyphen_values = true, default_value = "both")]
    pub alpha: AlphaArg,
    /// Upper end of the |E~| window.
    #[arg(long)]
    pub e_max: Option<f64>,
    #[arg(long, default_value = "matching")]
    pub method: String,
    /// Keep only the first N rows.
    #[arg(long)]
    pub count: Option<usize>,
    /// Write an SVG of the first eigenfunction.
    #[arg(long)]
    pub plot: bool,
    /// Grid points of the plotted eigenfunction.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DispersionArgs {
    #[arg(long)]
    pub phi0: f64,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_value = "1/2,3/2,5/2")]
    pub m: Vec<ModeArg>,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "+1")]
    pub alpha: Alpha,
    #[arg(long)]
    pub plot: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DiskArgs {
    /// Rim radius R.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi0: f64,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    /// Boundary condition.
    #[arg(long, default_value = "lower-dirichlet")]
    pub bc: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Scenario file (TOML).
    #[arg(long, required_unless_present = "resume", conflicts_with = "resume")]
    pub file: Option<PathBuf>,
    /// JSON report of an earlier run to continue from.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    /// Evaluation time.
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub plot: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 10.0)]
    pub phi0: f64,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_value = "1/2")]
    pub m: Vec<ModeArg>,
    #[arg(long)]
    pub e_max: Option<f64>,
    #[arg(long, default_value_t = VERIFY_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Process-level context: default output directory and the two streams.
pub struct Context<'a> {
    pub out_dir: Option<PathBuf>,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

enum Artifact {
    Table(Table),
    Report(Box<ScenarioReport>),
}

struct Outcome {
    data: Artifact,
    plot: Option<String>,
    status: i32,
    summary: Option<String>,
}

impl Outcome {
    fn table(t: Table) -> Self {
        Self {
            data: Artifact::Table(t),
            plot: None,
            status: EXIT_OK,
            summary: None,
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run_from_args<I, T>(args: I, ctx: &mut Context<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, ctx),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = ctx.stdout.write_all(text.as_bytes());
            } else {
                let _ = ctx.stderr.write_all(text.as_bytes());
                let _ = writeln!(ctx.stderr, "{}", ErrorRecord::new("usage", e.kind().to_string()).to_json_line());
            }
            code
        }
    }
}

pub fn run(cli: &Cli, ctx: &mut Context<'_>) -> i32 {
    match execute(cli, ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {e}");
            let _ = writeln!(ctx.stderr, "{}", ErrorRecord::from_error(&e).to_json_line());
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Geometry(_) => "geometry",
        Command::Fun(_) => "fun",
        Command::Spectrum(_) => "spectrum",
        Command::Dispersion(_) => "dispersion",
        Command::Disk(_) => "disk",
        Command::Scenario(_) => "scenario",
        Command::Verify(_) => "verify",
    }
}

fn output_args(c: &Command) -> &OutputArgs {
    match c {
        Command::Geometry(a) => &a.out,
        Command::Fun(a) => &a.out,
        Command::Spectrum(a) => &a.out,
        Command::Dispersion(a) => &a.out,
        Command::Disk(a) => &a.out,
        Command::Scenario(a) => &a.out,
        Command::Verify(a) => &a.out,
    }
}

fn execute(cli: &Cli, ctx: &mut Context<'_>) -> Result<i32> {
    let outcome = match &cli.command {
        Command::Geometry(a) => geometry(a)?,
        Command::Fun(a) => fun(a)?,
        Command::Spectrum(a) => spectrum(a)?,
        Command::Dispersion(a) => dispersion(a)?,
        Command::Disk(a) => disk(a)?,
        Command::Scenario(a) => scenario(a)?,
        Command::Verify(a) => verify(a)?,
    };
    let name = command_name(&cli.command);
    let out = output_args(&cli.command);
    let default_format = match outcome.data {
        Artifact::Table(_) => Format::Csv,
        Artifact::Report(_) => Format::Json,
    };
    let format = out.format.unwrap_or(default_format);
    let text = match (&outcome.data, format) {
        (Artifact::Table(t), Format::Csv) => t.to_csv()?,
        (Artifact::Table(t), Format::Json) => t.to_json(),
        (Artifact::Report(r), Format::Json) => to_json_string(r)?,
        (Artifact::Report(r), Format::Csv) => amplitude_table(r).to_csv()?,
    };
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let target = out
        .output
        .clone()
        .or_else(|| ctx.out_dir.as_ref().map(|d| d.join(format!("{name}.{ext}"))));
    match &target {
        Some(p) => write_file(p, &text)?,
        None => ctx
            .stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Unsupported(format!("stdout: {e}")))?,
    }
    if let Some(svg) = &outcome.plot {
        let path = match &target {
            Some(p) => p.with_extension("svg"),
            None => ctx
                .out_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("."))
                .join(format!("{name}.svg")),
        };
        write_file(&path, svg)?;
    }
    if let Some(s) = &outcome.summary {
        let _ = writeln!(ctx.stderr, "{s}");
    }
    Ok(outcome.status)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Unsupported(format!("cannot write {}: {e}", path.display()))
}

fn geometry(a: &GeometryArgs) -> Result<Outcome> {
    let g = SphereGeometry::new(a.r)?;
    if !a.theta.is_finite() {
        return Err(invalid("theta", "must be finite"));
    }
    let mut t = Table::new("geometry", &["quantity", "component", "value"]);
    let th = a.theta;
    let mut row = |q: &str, c: &str, v: f64| t.push(vec![q.into(), c.into(), v.into()]);
    match a.what {
        GeometryQuantity::Ricci => row("ricci", "R", g.ricci_trace()),
        GeometryQuantity::Metric => {
            let m = g.metric(th);
            row("metric", "g_phiphi", m.g_phiphi);
            row("metric", "g_thetatheta", m.g_thetatheta);
        }
        GeometryQuantity::Determinant => {
            row("determinant", "det_g", g.metric_determinant(th));
            row("determinant", "quoted_form", g.determinant_quoted_form(th));
        }
        GeometryQuantity::Zweibein => {
            let z = g.zweibein(th);
            row("zweibein", "e1_phi", z.e1_phi);
            row("zweibein", "e1_theta", z.e1_theta);
            row("zweibein", "e2_phi", z.e2_phi);
            row("zweibein", "e2_theta", z.e2_theta);
        }
        GeometryQuantity::SpinConnection => {
            let s = spin_connection(th);
            row("spin_connection", "r1_phi2", s.r1_phi2);
            row("spin_connection", "r2_phi1", s.r2_phi1);
            row("spin_connection", "r1_theta2", s.r1_theta2);
            row("spin_connection", "r2_theta1", s.r2_theta1);
        }
    }
    Ok(Outcome::table(t))
}

fn fun(a: &FunArgs) -> Result<Outcome> {
    let mut t = Table::new("fun", &["function", "re", "im"]);
    let v = match a.name {
        FunName::Hyp2f1 => hyp2f1(
            &HyperParams::new(ComplexScalar::new(a.a, a.a_im), ComplexScalar::new(a.b, a.b_im), a.c),
            a.z,
        )?,
        FunName::BesselJ => ComplexScalar::new(bessel_j(a.order, a.x)?, 0.0),
        FunName::BesselI => ComplexScalar::new(bessel_i(a.order, a.x)?, 0.0),
    };
    let name = match a.name {
        FunName::Hyp2f1 => "hyp2f1",
        FunName::BesselJ => "bessel_j",
        FunName::BesselI => "bessel_i",
    };
    t.push(vec![name.into(), v.re.into(), v.im.into()]);
    Ok(Outcome::table(t))
}

fn window_for(wall: &WallField, e_max: Option<f64>) -> Result<RootBracket> {
    let d = default_window(wall)?;
    match e_max {
        Some(hi) => RootBracket::tight(d.lo, hi),
        None => Ok(d),
    }
}

fn spectrum(a: &SpectrumArgs) -> Result<Outcome> {
    let wall = WallField::new(a.phi0)?;
    let geom = SphereGeometry::new(a.r)?;
    let mode = a.m.0;
    let window = window_for(&wall, a.e_max)?;
    let solver = spectrum_solvers().get(&a.method)?;
    let classes = a.alpha.classes();
    let mut roots: Vec<_> = solver
        .roots(&wall, mode, &window)?
        .into_iter()
        .filter(|r| classes.contains(&r.alpha))
        .collect();
    roots.sort_by(|x, y| x.e_tilde.abs().total_cmp(&y.e_tilde.abs()).then(x.e_tilde.total_cmp(&y.e_tilde)));
    if let Some(n) = a.count {
        roots.truncate(n);
    }
    let mut t = Table::new(
        "spectrum",
        &["twice_m", "m", "alpha", "e_tilde", "energy", "radius", "method"],
    );
    for r in &roots {
        t.push(vec![
            mode.twice_m().into(),
            mode.m().into(),
            r.alpha.to_string().into(),
            r.e_tilde.into(),
            (r.e_tilde / geom.radius()).into(),
            geom.radius().into(),
            solver.name().into(),
        ]);
    }
    let plot = match (a.plot, roots.first()) {
        (false, _) => None,
        (true, None) => return Err(invalid("plot", "no eigenvalue in the window to plot")),
        (true, Some(first)) => {
            let sols = solve_spectrum(&wall, mode, &geom, first.alpha, &window)?;
            let sol = sols
                .iter()
                .min_by(|x, y| (x.e_tilde - first.e_tilde).abs().total_cmp(&(y.e_tilde - first.e_tilde).abs()))
                .ok_or_else(|| Error::Unsupported("matching found no root to plot".into()))?;
            let grid = AngularGrid::with_points(a.samples)?;
            let ef = eigenfunction(sol, &wall, &grid)?;
            let s = ef.samples.expect("eigenfunction attaches samples");
            let mut w = Table::new("wavefunction", &["theta", "abs_psi1", "abs_psi2"]);
            for i in 0..s.theta.len() {
                w.push(vec![
                    s.theta[i].into(),
                    s.spinor.psi1[i].norm().into(),
                    s.spinor.psi2[i].norm().into(),
                ]);
            }
            Some(emit_plot(&w, PlotKind::Wavefunction)?)
        }
    };
    Ok(Outcome {
        plot,
        ..Outcome::table(t)
    })
}

fn dispersion(a: &DispersionArgs) -> Result<Outcome> {
    let wall = WallField::new(a.phi0)?;
    let geom = SphereGeometry::new(a.r)?;
    let modes: Vec<ModeIndex> = a.m.iter().map(|m| m.0).collect();
    let rows = dispersion_table(&wall, &geom, &modes, a.alpha)?;
    let mut t = Table::new("dispersion", &["twice_m", "m", "e_tilde", "energy", "deviation"]);
    for r in &rows {
        t.push(vec![
            r.mode.twice_m().into(),
            r.mode.m().into(),
            r.e_tilde.into(),
            r.energy.into(),
            r.deviation.into(),
        ]);
    }
    let plot = if a.plot { Some(emit_plot(&t, PlotKind::Dispersion)?) } else { None };
    Ok(Outcome {
        plot,
        ..Outcome::table(t)
    })
}

fn disk(a: &DiskArgs) -> Result<Outcome> {
    let bc = disk_boundaries()
        .get(&a.bc)
        .map_err(|_| invalid("bc", format!("unknown boundary condition '{}'", a.bc)))?;
    let model = DiskModel::new(a.radius, a.phi0, bc)?;
    let modes = disk_spectrum(&model, a.n, a.count)?;
    let mut t = Table::new("disk", &["n", "s", "kind", "k", "energy", "rim_residual"]);
    for m in &modes {
        t.push(vec![
            m.n.into(),
            m.s.into(),
            m.kind.to_string().into(),
            m.k.into(),
            m.energy.into(),
            rim_residual(&model, m)?.into(),
        ]);
    }
    Ok(Outcome::table(t))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| invalid("file", format!("cannot read {}: {e}", path.display())))
}

fn amplitude_table(r: &ScenarioReport) -> Table {
    let mut t = Table::new("scenario", &["twice_m", "time", "re", "im", "abs", "energy"]);
    for a in &r.amplitudes {
        let e = r
            .spectrum
            .iter()
            .find(|s| s.twice_m == a.0)
            .map_or(f64::NAN, |s| s.energy);
        t.push(vec![
            a.0.into(),
            r.time.into(),
            a.1.into(),
            a.2.into(),
            a.1.hypot(a.2).into(),
            e.into(),
        ]);
    }
    t
}

fn scenario(a: &ScenarioArgs) -> Result<Outcome> {
    let report = match (&a.file, &a.resume) {
        (Some(f), None) => run_scenario(&ScenarioFile::from_toml(&read_text(f)?)?, a.t)?,
        (None, Some(p)) => {
            let prev: ScenarioReport = serde_json::from_str(&read_text(p)?)
                .map_err(|e| invalid("resume", format!("not a scenario report: {e}")))?;
            if prev.schema_version != crate::market::SCENARIO_SCHEMA_VERSION {
                return Err(invalid("resume", format!("unsupported schema_version {}", prev.schema_version)));
            }
            resume_scenario(&prev, a.t)?
        }
        _ => return Err(invalid("file", "give exactly one of --file and --resume")),
    };
    let plot = if a.plot {
        let f = &report.field;
        let mut t = Table::new("field", &["phi", "density"]);
        for i in 0..f.phi.len() {
            t.push(vec![f.phi[i].into(), (f.psi1[i].norm_sqr() + f.psi2[i].norm_sqr()).into()]);
        }
        Some(emit_plot(&t, PlotKind::FieldSlice)?)
    } else {
        None
    };
    let summary = report
        .beyond_maturity
        .then(|| format!("warning: t = {} exceeds maturity T = {}", report.time, report.scenario.maturity));
    debug_assert_eq!(report.field.phi, phi_grid(report.model.phi_samples));
    Ok(Outcome {
        data: Artifact::Report(Box::new(report)),
        plot,
        status: EXIT_OK,
        summary,
    })
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {}", a.tol)));
    }
    let wall = WallField::new(a.phi0)?;
    let window = window_for(&wall, a.e_max)?;
    let solvers = spectrum_solvers();
    let (matching, shooting) = (solvers.get("matching")?, solvers.get("shooting")?);
    let mut t = Table::new(
        "verify",
        &["twice_m", "index", "alpha_matching", "alpha_shooting", "e_matching", "e_shooting", "rel_gap"],
    );
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut total = 0;
    for m in &a.m {
        let mode = m.0;
        let x = matching.roots(&wall, mode, &window)?;
        let y = shooting.roots(&wall, mode, &window)?;
        let cmp = RootComparison::new(
            x.iter().map(|r| r.e_tilde).collect(),
            y.iter().map(|r| r.e_tilde).collect(),
        );
        ok &= cmp.passes(a.tol);
        worst = worst.max(cmp.max_rel_gap);
        for i in 0..x.len().max(y.len()) {
            let (p, q) = (x.get(i), y.get(i));
            let label = |r: Option<&crate::solver::SpectralRoot>| -> Cell {
                r.map_or("".into(), |r| r.alpha.to_string().into())
            };
            let e = |r: Option<&crate::solver::SpectralRoot>| -> Cell { r.map_or(f64::NAN, |r| r.e_tilde).into() };
            let gap = match (p, q) {
                (Some(p), Some(q)) => (p.e_tilde - q.e_tilde).abs() / p.e_tilde.abs(),
                _ => f64::INFINITY,
            };
            if let (Some(p), Some(q)) = (p, q) {
                ok &= p.alpha == q.alpha;
            }
            t.push(vec![mode.twice_m().into(), i.into(), label(p), label(q), e(p), e(q), gap.into()]);
            total += 1;
        }
    }
    let verdict = if ok { "PASS" } else { "FAIL" };
    Ok(Outcome {
        data: Artifact::Table(t),
        plot: None,
        status: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED },
        summary: Some(format!(
            "verify: {total} roots, max relative gap {worst:.3e} (tol {:.1e}): {verdict}",
            a.tol
        )),
    })
}
