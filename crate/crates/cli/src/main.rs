use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use solitonforge::identities::flow_trace;
use solitonforge::io::{self, fmt_num};
use solitonforge::ode::{shoot, ShootOptions, SolitonProfile, DEFAULT_NODES, DEFAULT_S_MAX};
use solitonforge::report::{self, parse_suites, threads_from_env, VerifyConfig};
use solitonforge::{asymptotics, Error, Profile};

#[derive(Parser, Debug)]
#[command(name = "solitonforge", version, about = "Construct and verify rotationally symmetric expanding Ricci solitons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate a profile from the axis and write CSV plus JSON sidecar.
    Construct(ConstructArgs),
    /// Run verification suites on a saved profile.
    Verify(VerifyArgs),
    /// Find the axis slope b giving a prescribed cone angle.
    Shoot(ShootArgs),
    /// Trace the flow of −∇f from one radius.
    Flow(FlowArgs),
}

#[derive(Args, Debug)]
struct Grid {
    /// Outer end of the log grid in s.
    #[arg(long, default_value_t = DEFAULT_S_MAX)]
    smax: f64,
    /// Number of grid nodes.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    grid: usize,
    /// Integrator tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    dim: usize,
    /// ω′(0) ≤ 0.
    #[arg(long, allow_hyphen_values = true)]
    bprime: f64,
    #[command(flatten)]
    grid: Grid,
    /// Profile CSV; the sidecar goes next to it with extension .json.
    #[arg(long, default_value = "profile.csv")]
    out: PathBuf,
    /// Also write whitespace-separated columns `s omega f phi psi k_tan k_rr` for plotting.
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Profile CSV with its sidecar next to it.
    profile: PathBuf,
    /// identities, asymptotics, lichnerowicz, barrier, symmetry or all; repeatable.
    #[arg(long, default_value = "all")]
    suite: Vec<String>,
    /// Working ε in (0, 1/√2); repeatable.
    #[arg(long)]
    epsilon: Vec<f64>,
    /// Nodes of the auxiliary grid used by the PDE suites.
    #[arg(long, default_value_t = report::PDE_NODES)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ShootArgs {
    #[arg(long)]
    dim: usize,
    /// Target cone angle in (0, 1).
    #[arg(long)]
    alpha: f64,
    /// Tolerance on the achieved cone angle.
    #[arg(long, default_value_t = 1e-3)]
    alpha_tol: f64,
    #[command(flatten)]
    grid: Grid,
    /// Integrate the final b and save the profile here.
    #[arg(long)]
    emit_profile: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FlowArgs {
    profile: PathBuf,
    #[arg(long)]
    s_start: f64,
    #[arg(long, default_value_t = 5.0)]
    tau_max: f64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit status classes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(anyhow::Error),
    Verification(String),
    Shooting(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
            Failure::Verification(_) => 3,
            Failure::Shooting(_) => 4,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::InvalidInput(msg)) => Failure::Usage(msg.clone()),
            _ => Failure::Compute(e),
        }
    }
}

fn check_dim(n: usize) -> Result<(), Failure> {
    if n < 3 {
        return Err(Failure::Usage("dimension must be ≥ 3".into()));
    }
    Ok(())
}

fn check_grid(g: &Grid) -> Result<(), Failure> {
    if !(g.tol > 0.0 && g.tol < 1e-2) {
        return Err(Failure::Usage(format!("--tol must lie in (0, 1e-2), got {}", g.tol)));
    }
    if g.grid < 3 {
        return Err(Failure::Usage(format!("--grid needs at least 3 nodes, got {}", g.grid)));
    }
    if !(g.smax > 1.0) {
        return Err(Failure::Usage(format!("--smax must exceed 1, got {}", g.smax)));
    }
    Ok(())
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn emit(bytes: &[u8]) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(bytes).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Compute(e.into())),
        _ => Ok(()),
    }
}

fn write_out(path: &Path, body: &str) -> anyhow::Result<()> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn plot_data(p: &Profile) -> anyhow::Result<String> {
    let phi = asymptotics::phi(p)?;
    let psi = asymptotics::psi(p)?;
    let chart = asymptotics::cone_chart(p)?;
    let mut out = String::from("# s omega f phi psi k_tan k_rr\n");
    for i in 0..p.len() {
        let cols = [p.s[i], p.omega[i], p.f[i], phi.value[i], psi.value[i], chart.k_tan[i], chart.k_rr[i]];
        out.push_str(&cols.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    Ok(out)
}

fn construct(a: ConstructArgs) -> Result<(), Failure> {
    check_dim(a.dim)?;
    check_grid(&a.grid)?;
    if !(a.bprime <= 0.0) {
        return Err(Failure::Usage(format!("--bprime must be ≤ 0, got {}", a.bprime)));
    }
    let p = SolitonProfile::construct(a.dim, a.bprime, a.grid.smax, a.grid.grid, a.grid.tol)
        .context("integrating the profile")
        .map_err(Failure::Compute)?;
    io::save_profile(&p, &a.out).with_context(|| format!("writing {}", a.out.display())).map_err(Failure::Compute)?;
    if let Some(path) = &a.emit_plot_data {
        write_out(path, &plot_data(&p).map_err(Failure::Compute)?).map_err(Failure::Compute)?;
    }
    let summary = json!({
        "profile": a.out.display().to_string(),
        "sidecar": io::sidecar_path(&a.out).display().to_string(),
        "metadata": io::Sidecar::of(&p),
        "nodes": p.len(),
    });
    emit(format!("{}\n", serde_json::to_string_pretty(&summary).map_err(|e| Failure::Compute(e.into()))?).as_bytes())?;
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let mut suites = Vec::new();
    for s in &a.suite {
        suites.extend(parse_suites(s).map_err(|e| Failure::Usage(e.to_string()))?);
    }
    let mut cfg = VerifyConfig { suites, pde_nodes: a.grid, threads: threads_from_env(), ..VerifyConfig::default() };
    if !a.epsilon.is_empty() {
        cfg.epsilons = a.epsilon.clone();
    }
    let p: Profile = io::load_profile(&a.profile)
        .with_context(|| format!("reading profile {}", a.profile.display()))
        .map_err(Failure::Compute)?;
    let rep = report::verify(&p, &cfg).map_err(|e| Failure::from(anyhow::Error::from(e)))?;
    let body = match a.format {
        Format::Json => rep.to_json(),
        Format::Csv => rep.to_csv(),
    }
    .map_err(|e| Failure::Compute(e.into()))?;
    emit(body.as_bytes())?;
    if let Some(path) = &a.out {
        write_out(path, &body).map_err(Failure::Compute)?;
    }
    if rep.passed {
        Ok(())
    } else {
        let names: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
        Err(Failure::Verification(format!("failed checks: {}", names.join(", "))))
    }
}

fn shoot_cmd(a: ShootArgs) -> Result<(), Failure> {
    check_dim(a.dim)?;
    check_grid(&a.grid)?;
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Failure::Usage(format!("--alpha must lie in (0, 1), got {}", a.alpha)));
    }
    if !(a.alpha_tol > 0.0) {
        return Err(Failure::Usage(format!("--alpha-tol must be positive, got {}", a.alpha_tol)));
    }
    let opts = ShootOptions { tol: a.grid.tol, ..ShootOptions::default() };
    let res = shoot(a.dim, a.alpha, a.alpha_tol, &opts).map_err(|e| match e {
        Error::InvalidInput(msg) => Failure::Usage(msg),
        other => Failure::Shooting(other.into()),
    })?;
    emit(format!("{}\n", serde_json::to_string_pretty(&res).map_err(|e| Failure::Compute(e.into()))?).as_bytes())?;
    if let Some(path) = &a.emit_profile {
        let p = SolitonProfile::construct(a.dim, res.b_star, a.grid.smax, a.grid.grid, a.grid.tol)
            .context("integrating the shot profile")
            .map_err(Failure::Compute)?;
        io::save_profile(&p, path).with_context(|| format!("writing {}", path.display())).map_err(Failure::Compute)?;
    }
    Ok(())
}

fn flow(a: FlowArgs) -> Result<(), Failure> {
    let p: Profile = io::load_profile(&a.profile)
        .with_context(|| format!("reading profile {}", a.profile.display()))
        .map_err(Failure::Compute)?;
    if !(a.tau_max > 0.0 && a.tau_max <= 10.0) {
        return Err(Failure::Usage(format!("--tau-max must lie in (0, 10], got {}", a.tau_max)));
    }
    let (trace, rep) = flow_trace(&p, a.s_start, a.tau_max, a.samples).map_err(|e| match e {
        Error::InvalidInput(msg) => Failure::Usage(msg),
        other => Failure::Compute(other.into()),
    })?;
    let mut buf = Vec::new();
    io::write_flow_trace(&trace, &mut buf).map_err(|e| Failure::Compute(e.into()))?;
    match &a.out {
        Some(path) => fs::write(path, &buf).with_context(|| format!("writing {}", path.display())).map_err(Failure::Compute)?,
        None => emit(&buf)?,
    }
    if rep.sup_residual > 1e-9 {
        return Err(Failure::Verification(format!("flow estimate violated by {:e}", rep.sup_residual)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Shoot(a) => shoot_cmd(a),
        Command::Flow(a) => flow(a),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Compute(e) | Failure::Shooting(e) => eprintln!("error: {e:#}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
