use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use duffing_cli::{
    cmd_reproduce_figure, cmd_run, cmd_sweep, CliError, Outcome, RawConfig, RunSpec, SweepSpec,
};

/// Structure-preserving integration of x'' + mu x' + alpha x^p = 0.
///
/// Exit codes: 0 success, 1 a check failed, 2 integration failed,
/// 3 configuration or I/O error.
#[derive(Parser)]
#[command(name = "duffing", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one parameter set and write trajectory, ledger and report.
    Run(RunArgs),
    /// Integrate every (p, alpha, mu) combination of comma-separated lists.
    Sweep(RunArgs),
    /// Run the 30-point grid (p in 3,5,7; alpha in 1,100; mu in 0,0.1,1,10,100)
    /// at dt = 0.01, T = 5000 and write log-log panel data.
    ReproduceFigure(FigureArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    x0: Option<String>,
    #[arg(long)]
    y0: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    #[arg(long)]
    newton_tol: Option<String>,
    #[arg(long)]
    max_newton_iters: Option<String>,
    #[arg(long)]
    record_stride: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Comma-separated subset of ledger, energy-decay, solution-decay,
    /// inequality, modified-energy-decay; or "all".
    #[arg(long)]
    checks: Option<String>,
    /// Parallel grid points (sweep only).
    #[arg(long)]
    jobs: Option<String>,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    jobs: Option<String>,
    /// Shorter horizon for quick looks; the figure uses 5000.
    #[arg(long)]
    t_end: Option<String>,
}

impl RunArgs {
    fn raw(&self) -> Result<RawConfig, CliError> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let mut overrides = RawConfig::default();
        let flags = [
            ("p", &self.p),
            ("mu", &self.mu),
            ("alpha", &self.alpha),
            ("x0", &self.x0),
            ("y0", &self.y0),
            ("dt", &self.dt),
            ("t_end", &self.t_end),
            ("newton_tol", &self.newton_tol),
            ("max_newton_iters", &self.max_newton_iters),
            ("record_stride", &self.record_stride),
            ("out", &self.out),
            ("checks", &self.checks),
            ("jobs", &self.jobs),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                overrides.set(key, v)?;
            }
        }
        raw.merge(&overrides);
        Ok(raw)
    }
}

fn dispatch(command: Command) -> Result<Outcome, CliError> {
    Ok(match command {
        Command::Run(args) => cmd_run(&RunSpec::from_raw(&args.raw()?)?),
        Command::Sweep(args) => cmd_sweep(&SweepSpec::from_raw(&args.raw()?)?),
        Command::ReproduceFigure(args) => {
            let mut raw = RawConfig::default();
            for (key, value) in [
                ("out", &args.out),
                ("jobs", &args.jobs),
                ("t_end", &args.t_end),
            ] {
                if let Some(v) = value {
                    raw.set(key, v)?;
                }
            }
            cmd_reproduce_figure(&SweepSpec::figure(&raw)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Outcome::ConfigError.code() as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = dispatch(cli.command).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Outcome::from(&e)
    });
    ExitCode::from(outcome.code() as u8)
}
