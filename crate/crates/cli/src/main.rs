//! Command-line driver: configure runs, execute the solvers and analyses,
//! reproduce the reference figures as data files, and sweep the stability
//! phase diagram.
//!
//! Exit codes: 0 success, 1 validation failure, 2 numerical failure.

use amcsim_cli::commands::{self, RangeSpec};
use amcsim_cli::config::{Method, RunConfig};
use amcsim_cli::CliError;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "amcsim",
    version,
    about = "Two-mode atom-molecule conversion dynamics under dephasing noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate one solver variant and write a trajectory CSV plus manifest.
    Evolve(EvolveArgs),
    /// Reproduce a reference figure: run every curve it overlays.
    Figure(FigureArgs),
    /// Report the fixed points of all descriptions with residual norms.
    FixedPoints(ParamArgs),
    /// Classify fixed-point stability of both closures (requires eps = 0).
    Stability(ParamArgs),
    /// Sweep the (N, gamma) plane and label the stability regimes.
    PhaseDiagram(PhaseArgs),
    /// Run the photoassociation model (continuum and/or Markovian variant).
    Photoassoc(PaArgs),
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Args)]
struct EvolveArgs {
    /// Declarative TOML configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// exact | mft | bbr | elliptic | pa-continuum | pa-markov
    #[arg(long)]
    method: Option<Method>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Fock initial state: molecule count.
    #[arg(long)]
    n0: Option<usize>,
    /// Bloch initial state (Fx0 = Fy0 = 0) for moment-closure runs.
    #[arg(long)]
    fz0: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    stride: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1a..fig1b, fig2a..fig2f, fig3a..fig3d, fig4a..fig4d,
    /// fig5a..fig5d, mixed_a, mixed_b
    which: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long = "N", default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Also write the JSON report (plus manifest) into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseArgs {
    /// Atom-number range as lo:hi:count (rounded to even sectors).
    #[arg(long = "n-range")]
    n_range: String,
    /// Dephasing range as lo:hi:count (strictly positive).
    #[arg(long = "gamma-range")]
    gamma_range: String,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct PaArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// continuum | markov | both
    #[arg(long, default_value = "both")]
    variant: String,
    #[arg(long)]
    xi0: Option<f64>,
    #[arg(long = "half-width")]
    half_width: Option<f64>,
    #[arg(long)]
    modes: Option<usize>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long)]
    beta0: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    stride: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
}

fn load_base(config: &Option<PathBuf>) -> Result<RunConfig, CliError> {
    match config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

fn evolve_config(args: &EvolveArgs) -> Result<RunConfig, CliError> {
    let mut cfg = load_base(&args.config)?;
    if let Some(m) = args.method {
        cfg.run.method = m;
    }
    if let Some(n) = args.n {
        cfg.params.n = n;
    }
    if let Some(g) = args.g {
        cfg.params.g = g;
    }
    if let Some(eps) = args.eps {
        cfg.params.eps = eps;
    }
    if let Some(gamma) = args.gamma {
        cfg.params.gamma = gamma;
    }
    if args.n0.is_some() && args.fz0.is_some() {
        return Err(CliError::Validation(
            "--n0 and --fz0 are mutually exclusive".into(),
        ));
    }
    if let Some(n0) = args.n0 {
        cfg.initial.kind = "fock".into();
        cfg.initial.n0 = n0;
    }
    if let Some(fz0) = args.fz0 {
        cfg.initial.kind = "bloch".into();
        cfg.initial.fx = 0.0;
        cfg.initial.fy = 0.0;
        cfg.initial.fz = fz0;
    }
    if let Some(t) = args.tmax {
        cfg.run.t_max = t;
    }
    if let Some(s) = args.stride {
        cfg.run.stride = s;
    }
    if let Some(r) = args.rtol {
        cfg.run.rtol = r;
    }
    if let Some(a) = args.atol {
        cfg.run.atol = a;
    }
    Ok(cfg)
}

fn pa_config(args: &PaArgs) -> Result<RunConfig, CliError> {
    let mut cfg = load_base(&args.config)?;
    cfg.run.method = Method::PaContinuum;
    // Window defaults sized to the Markov decay time when not configured.
    if args.config.is_none() {
        let xi0 = args.xi0.unwrap_or(cfg.photoassoc.xi0);
        let gamma = std::f64::consts::PI * xi0 * xi0;
        cfg.run.t_max = 3.0 / gamma;
        cfg.run.stride = cfg.run.t_max / 120.0;
        cfg.run.rtol = 1e-10;
        cfg.run.atol = 1e-12;
    }
    if let Some(v) = args.xi0 {
        cfg.photoassoc.xi0 = v;
    }
    if let Some(v) = args.half_width {
        cfg.photoassoc.half_width = v;
    }
    if let Some(v) = args.modes {
        cfg.photoassoc.n_modes = v;
    }
    if let Some(v) = args.omega {
        cfg.photoassoc.omega = v;
    }
    if let Some(v) = args.delta {
        cfg.photoassoc.delta = v;
    }
    if let Some(v) = args.alpha0 {
        cfg.photoassoc.alpha0 = v;
    }
    if let Some(v) = args.beta0 {
        cfg.photoassoc.beta0 = v;
    }
    if let Some(v) = args.tmax {
        cfg.run.t_max = v;
    }
    if let Some(v) = args.stride {
        cfg.run.stride = v;
    }
    if let Some(v) = args.rtol {
        cfg.run.rtol = v;
    }
    if let Some(v) = args.atol {
        cfg.run.atol = v;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Evolve(args) => {
            let cfg = evolve_config(&args)?;
            commands::cmd_evolve(&cfg, &args.out)
        }
        Cmd::Figure(args) => commands::cmd_figure(&args.which, &args.out),
        Cmd::FixedPoints(args) => {
            let params = amcsim::SystemParams::new(args.n, args.g, args.eps, args.gamma)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            commands::cmd_fixed_points(&params, args.out.as_deref())
        }
        Cmd::Stability(args) => {
            let params = amcsim::SystemParams::new(args.n, args.g, args.eps, args.gamma)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            commands::cmd_stability(&params, args.out.as_deref())
        }
        Cmd::PhaseDiagram(args) => {
            let n_range: RangeSpec = args
                .n_range
                .parse()
                .map_err(CliError::Validation)?;
            let gamma_range: RangeSpec = args
                .gamma_range
                .parse()
                .map_err(CliError::Validation)?;
            commands::cmd_phase_diagram(&n_range, &gamma_range, args.g, &args.out)
        }
        Cmd::Photoassoc(args) => {
            let cfg = pa_config(&args)?;
            commands::cmd_photoassoc(&cfg, &args.variant, &args.out)
        }
        Cmd::Selftest => commands::cmd_selftest(),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            std::process::exit(2);
        }
    }
}
