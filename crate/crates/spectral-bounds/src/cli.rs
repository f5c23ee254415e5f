//! Argument parsing and subcommand dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spectral_bounds_core::bounds::{
    bound_entries, compare_report, kn_lookup, verify_rhombus, VALIDITY_TOL, VALIDITY_TOL_RICHARDSON,
};
use spectral_bounds_core::fem::{solve_dirichlet_lambda1, solve_neumann_mu1, SolverConfig};
use spectral_bounds_core::geometry::{
    make_rectangle, make_regular_polygon, make_rhombus, triangulate, triangulate_half_rhombus,
    DomainSpec,
};
use spectral_bounds_core::rearrangement::{
    chiti_check, rearrange_oriented, reverse_holder_check, FEM_CHECK_TOL,
};
use spectral_bounds_core::special::{psi_profile, RadialProfile};
use spectral_bounds_core::sturm::{comparison_length, solve, SturmProblem};
use spectral_bounds_core::Error;

use crate::io::write_mesh;
use crate::output::{Cell, Format, Table};
use crate::suite::run_suite;

#[derive(Debug, Parser)]
#[command(
    name = "spectral-bounds",
    version,
    about = "Numerical checks of lower bounds on the first nontrivial Neumann eigenvalue"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// First zero ψ_p of the radial profile and λ₁(B₁) = ψ_p^p.
    Psi(PsiArgs),
    /// Closed-form lower bounds for a domain (no finite elements).
    Bound(BoundArgs),
    /// Lower bounds against the finite-element μ₁ (p = 2).
    CompareBounds(CompareArgs),
    /// Sharpness table for the rhombi Ω_m.
    VerifyRhombus(RhombusArgs),
    /// Cumulative comparison of the rearranged eigenfunction with the ball.
    Chiti(ChitiArgs),
    /// Reverse Hölder inequality for the positive part of the eigenfunction.
    Rholder(RholderArgs),
    /// First eigenvalue of the singular weighted Sturm–Liouville problem.
    Sturm(SturmArgs),
    /// Export a triangulation, optionally with an eigenvector column.
    Mesh(MeshArgs),
    /// Run one invocation per line of a file.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainName {
    Square,
    Rectangle,
    Rhombus,
    Polygon,
}

#[derive(Debug, Args)]
struct DomainArgs {
    #[arg(long, value_enum, default_value = "square")]
    domain: DomainName,
    /// Rhombus index m (acute angle 2π/m).
    #[arg(long, default_value_t = 8)]
    m: u32,
    /// Rectangle sides a ≥ b.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Polygon vertex count.
    #[arg(long, default_value_t = 64)]
    k: u32,
    /// Polygon circumradius.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
}

impl DomainArgs {
    fn spec(&self) -> Result<DomainSpec, CliError> {
        Ok(match self.domain {
            DomainName::Square => DomainSpec::unit_square(),
            DomainName::Rectangle => make_rectangle(self.a, self.b)?,
            DomainName::Rhombus => make_rhombus(self.m)?,
            DomainName::Polygon => make_regular_polygon(self.k, self.radius)?,
        })
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PsiArgs {
    #[arg(long, value_delimiter = ',', default_value = "2")]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    n: Vec<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 4)]
    level: u32,
    /// Relative tolerance for `bound ≤ μ₁`; defaults to 5e-3 with Richardson, 1e-2 without.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct RhombusArgs {
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    m: Vec<u32>,
    #[arg(long, default_value_t = 5)]
    level: u32,
    /// Relative tolerance on the sector sandwich.
    #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ChitiArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 5)]
    level: u32,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    q: Vec<f64>,
    /// Number of grid intervals on [0, L].
    #[arg(long, default_value_t = 2000)]
    grid: usize,
    #[arg(long, default_value_t = FEM_CHECK_TOL, allow_hyphen_values = true)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct RholderArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 5)]
    level: u32,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = FEM_CHECK_TOL, allow_hyphen_values = true)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SturmArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long = "A")]
    length: f64,
    #[arg(long = "N", default_value_t = spectral_bounds_core::sturm::DEFAULT_CELLS)]
    cells: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NodalValues {
    None,
    Neumann,
    Dirichlet,
}

#[derive(Debug, Args)]
struct MeshArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, default_value_t = 3)]
    level: u32,
    /// Export the half rhombus T_m instead of the full domain.
    #[arg(long)]
    half: bool,
    #[arg(long, value_enum, default_value = "none")]
    values: NodalValues,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    path: PathBuf,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid input or an out-of-scope combination (exit 2).
    Usage(String),
    /// Numerical failure (exit 1).
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::NoKnownConstant(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numeric(format!("output: {e}"))
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit code: 0 success, 1 numeric or check failure, 2 usage error.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match run(cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Numeric(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn emit(
    table: &Table,
    args: &OutputArgs,
    default: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = table.render(args.format.unwrap_or(default));
    match &args.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn require_p2(p: f64) -> Result<(), CliError> {
    if p != 2.0 {
        return Err(CliError::Usage("FEM μ₁ unavailable for p≠2".into()));
    }
    Ok(())
}

fn planar_profile(p: f64) -> Result<RadialProfile, CliError> {
    Ok(psi_profile(p, 2)?)
}

/// Neumann eigenfunction rearranged with `|{u > 0}| ≤ |Ω|/2`, plus `μ₁` and `L`.
struct EigenData {
    spec: DomainSpec,
    mu1: f64,
    length: f64,
    profile: spectral_bounds_core::rearrangement::RearrangedProfile,
}

fn eigen_data(
    domain: &DomainArgs,
    level: u32,
    ball: &RadialProfile,
) -> Result<EigenData, CliError> {
    let spec = domain.spec()?;
    let k = kn_lookup(&spec)?.value;
    let mesh = triangulate(&spec, level);
    let pair = solve_neumann_mu1(&mesh, &SolverConfig::default())?;
    let (profile, _) = rearrange_oriented(&mesh, &pair.eigenvector)?;
    Ok(EigenData {
        length: comparison_length(ball, k, pair.eigenvalue),
        spec,
        mu1: pair.eigenvalue,
        profile,
    })
}

fn run(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    match command {
        Command::Psi(a) => {
            let mut t = Table::new(&["p", "n", "psi_p", "lambda1_unit_ball"]);
            for &p in &a.p {
                for &n in &a.n {
                    let prof = psi_profile(p, n)?;
                    t.push(vec![
                        p.into(),
                        n.into(),
                        prof.first_zero.into(),
                        prof.lambda1_unit_ball().into(),
                    ]);
                }
            }
            emit(&t, &a.out, Format::Csv, out)?;
            Ok(true)
        }
        Command::Bound(a) => {
            let spec = a.domain.spec()?;
            let ball = planar_profile(a.p)?;
            let k = kn_lookup(&spec)?.value;
            let mut t = Table::new(&[
                "domain",
                "p",
                "n",
                "k",
                "area",
                "bound",
                "value",
                "applicable",
            ]);
            for e in bound_entries(&spec, &ball)? {
                t.push(vec![
                    spec.label().into(),
                    a.p.into(),
                    2u32.into(),
                    k.into(),
                    spec.area.into(),
                    e.name.into(),
                    e.value.into(),
                    e.applicable.into(),
                ]);
            }
            emit(&t, &a.out, Format::Json, out)?;
            Ok(true)
        }
        Command::CompareBounds(a) => {
            require_p2(a.p)?;
            let spec = a.domain.spec()?;
            let ball = planar_profile(a.p)?;
            let rep = compare_report(&spec, &ball, a.level, &SolverConfig::default())?;
            let reference = rep.mu1_richardson.or(rep.mu1).expect("p = 2 report has μ₁");
            let tol = a.tol.unwrap_or(if rep.mu1_richardson.is_some() {
                VALIDITY_TOL_RICHARDSON
            } else {
                VALIDITY_TOL
            });
            let mut t = Table::new(&[
                "domain",
                "p",
                "n",
                "level",
                "k",
                "mu1",
                "mu1_richardson",
                "bound",
                "value",
                "applicable",
                "ratio",
                "valid",
            ]);
            let mut all_valid = true;
            for e in &rep.entries {
                let valid = !e.applicable || e.value <= reference * (1.0 + tol);
                all_valid &= valid;
                t.push(vec![
                    rep.domain.clone().into(),
                    rep.p.into(),
                    rep.n.into(),
                    rep.level.into(),
                    rep.k.into(),
                    rep.mu1.into(),
                    rep.mu1_richardson.into(),
                    e.name.into(),
                    e.value.into(),
                    e.applicable.into(),
                    e.ratio.into(),
                    valid.into(),
                ]);
            }
            emit(&t, &a.out, Format::Json, out)?;
            if !all_valid {
                writeln!(
                    err,
                    "check failed: a lower bound exceeds μ₁ beyond tolerance {tol}"
                )?;
            }
            Ok(all_valid)
        }
        Command::VerifyRhombus(a) => {
            let ball = planar_profile(2.0)?;
            let mut ms = a.m.clone();
            ms.sort_unstable();
            ms.dedup();
            let rows = verify_rhombus(&ms, a.level, &ball, &SolverConfig::default())?;
            let mut t = Table::new(&[
                "m",
                "beta",
                "level",
                "mu1",
                "alpha",
                "lambda_sharp",
                "r_m",
                "lambda_dn",
                "sandwich_lo",
                "sandwich_hi",
                "sandwich_ok",
            ]);
            let mut ok = true;
            for r in &rows {
                let sandwich = r.sandwich_ok(a.tol);
                ok &= sandwich;
                t.push(vec![
                    r.m.into(),
                    r.beta.into(),
                    r.level.into(),
                    r.mu1.into(),
                    r.alpha.into(),
                    r.lambda_sharp.into(),
                    r.ratio.into(),
                    r.lambda_dn.into(),
                    r.sandwich_lo.into(),
                    r.sandwich_hi.into(),
                    sandwich.into(),
                ]);
            }
            let decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
            emit(&t, &a.out, Format::Json, out)?;
            if !decreasing {
                writeln!(err, "check failed: r_m is not decreasing in m")?;
            }
            if !ok {
                writeln!(err, "check failed: sector sandwich violated")?;
            }
            Ok(ok && decreasing)
        }
        Command::Chiti(a) => {
            require_p2(a.p)?;
            let ball = planar_profile(a.p)?;
            let data = eigen_data(&a.domain, a.level, &ball)?;
            let mut t = Table::new(&[
                "domain",
                "p",
                "q",
                "r",
                "lhs",
                "rhs",
                "max_violation",
                "s_at_max",
                "length",
                "s_tilde",
                "mu1",
                "mesh_level",
                "ok",
            ]);
            let mut all_ok = true;
            for &q in &a.q {
                let rep = chiti_check(&data.profile, &ball, data.length, q, a.grid)?;
                let ok = rep.ok(a.tol);
                all_ok &= ok;
                t.push(vec![
                    data.spec.label().into(),
                    a.p.into(),
                    q.into(),
                    Cell::Missing,
                    rep.u_at_max.into(),
                    rep.v_at_max.into(),
                    rep.max_violation.into(),
                    rep.s_at_max.into(),
                    rep.length.into(),
                    rep.s_tilde.into(),
                    data.mu1.into(),
                    a.level.into(),
                    ok.into(),
                ]);
            }
            emit(&t, &a.out, Format::Json, out)?;
            if !all_ok {
                writeln!(
                    err,
                    "check failed: cumulative comparison violated beyond {}",
                    a.tol
                )?;
            }
            Ok(all_ok)
        }
        Command::Rholder(a) => {
            require_p2(a.p)?;
            let ball = planar_profile(a.p)?;
            let data = eigen_data(&a.domain, a.level, &ball)?;
            let rep = reverse_holder_check(&data.profile, &ball, data.length, a.q, a.r)?;
            let ok = rep.ok(a.tol);
            let mut t = Table::new(&[
                "domain",
                "p",
                "q",
                "r",
                "lhs",
                "rhs",
                "max_violation",
                "constant",
                "length",
                "mu1",
                "mesh_level",
                "ok",
            ]);
            t.push(vec![
                data.spec.label().into(),
                a.p.into(),
                a.q.into(),
                a.r.into(),
                rep.lhs.into(),
                rep.rhs.into(),
                rep.relative_gap.into(),
                rep.constant.into(),
                data.length.into(),
                data.mu1.into(),
                a.level.into(),
                ok.into(),
            ]);
            emit(&t, &a.out, Format::Json, out)?;
            if !ok {
                writeln!(
                    err,
                    "check failed: reverse Hölder violated beyond {}",
                    a.tol
                )?;
            }
            Ok(ok)
        }
        Command::Sturm(a) => {
            let problem = SturmProblem {
                gamma: a.gamma,
                beta: a.beta,
                length: a.length,
                cells: a.cells,
            };
            let sol = solve(&problem)?;
            let hardy = problem.hardy_bound();
            let ok = sol.sigma >= hardy;
            let mut t = Table::new(&[
                "gamma",
                "beta",
                "A",
                "N",
                "sigma1",
                "hardy_bound",
                "iterations",
                "hardy_ok",
            ]);
            t.push(vec![
                a.gamma.into(),
                a.beta.into(),
                a.length.into(),
                a.cells.into(),
                sol.sigma.into(),
                hardy.into(),
                sol.iterations.into(),
                ok.into(),
            ]);
            emit(&t, &a.out, Format::Csv, out)?;
            Ok(ok)
        }
        Command::Mesh(a) => {
            let spec = a.domain.spec()?;
            let mesh = if a.half {
                triangulate_half_rhombus(&spec, a.level)?
            } else {
                triangulate(&spec, a.level)
            };
            let cfg = SolverConfig::default();
            let values = match a.values {
                NodalValues::None => None,
                NodalValues::Neumann => Some(solve_neumann_mu1(&mesh, &cfg)?.eigenvector),
                NodalValues::Dirichlet => Some(solve_dirichlet_lambda1(&mesh, &cfg)?.eigenvector),
            };
            let text = write_mesh(&mesh, values.as_deref());
            match &a.output {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(true)
        }
        Command::Suite(a) => match run_suite(&a.path, out, err) {
            0 => Ok(true),
            2 => Err(CliError::Usage(format!(
                "cannot read suite file {}",
                a.path.display()
            ))),
            _ => Ok(false),
        },
    }
}
