//! The `run`, `sweep` and `reproduce-figure` commands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use duffing_core::analysis::{build_ledger, compare_at_time, EnergyLedger, FitWindow};
use duffing_core::{integrate, DuffingParams, SchemeConfig, State, Trajectory};

use crate::checks::{evaluate, CheckResult};
use crate::config::{Check, CheckPlan, RunSpec, SweepSpec};
use crate::error::CliError;
use crate::output::{create, fmt_f64, write_ledger_csv, write_plot_data, write_trajectory_csv};

/// Process exit status. The four codes partition every outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Success = 0,
    CheckFailed = 1,
    IntegrationFailed = 2,
    ConfigError = 3,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<&CliError> for Outcome {
    fn from(err: &CliError) -> Self {
        match err {
            CliError::Core(duffing_core::Error::StepFailed { .. }) => Outcome::IntegrationFailed,
            _ => Outcome::ConfigError,
        }
    }
}

#[derive(Debug, Clone)]
pub enum PointStatus {
    /// Parameters rejected before integrating.
    Invalid(String),
    /// Integration or ledger construction failed.
    Failed(String),
    Done {
        trajectory: Trajectory,
        ledger: EnergyLedger,
        checks: Vec<CheckResult>,
    },
}

#[derive(Debug, Clone)]
pub struct PointResult {
    pub p: i64,
    pub alpha: f64,
    pub mu: f64,
    pub status: PointStatus,
}

impl PointResult {
    pub fn label(&self) -> String {
        point_label(self.p, self.alpha, self.mu)
    }

    pub fn outcome(&self) -> Outcome {
        match &self.status {
            PointStatus::Invalid(_) => Outcome::ConfigError,
            PointStatus::Failed(_) => Outcome::IntegrationFailed,
            PointStatus::Done { checks, .. } => {
                if checks.iter().any(|c| c.gating && !c.passed) {
                    Outcome::CheckFailed
                } else {
                    Outcome::Success
                }
            }
        }
    }

    pub fn trajectory(&self) -> Option<&Trajectory> {
        match &self.status {
            PointStatus::Done { trajectory, .. } => Some(trajectory),
            _ => None,
        }
    }
}

pub fn point_label(p: i64, alpha: f64, mu: f64) -> String {
    format!("p{p}_alpha{alpha}_mu{mu}")
}

/// Integrate one parameter set and evaluate the checks on it.
pub fn run_point(
    params: &DuffingParams,
    scheme: &SchemeConfig,
    init: State,
    checks: &[(Check, bool)],
) -> Result<(Trajectory, EnergyLedger, Vec<CheckResult>), CliError> {
    let trajectory = integrate(params, scheme, init)?;
    let ledger = build_ledger(&trajectory)?;
    let results = match FitWindow::tail_of(&trajectory) {
        Ok(window) => checks
            .iter()
            .map(|&(check, gating)| CheckResult {
                gating,
                ..evaluate(check, &trajectory, &ledger, window)
            })
            .collect(),
        Err(e) => checks
            .iter()
            .map(|&(check, gating)| {
                if check == Check::Ledger {
                    // the ledger check needs no fit window
                    let dummy = FitWindow { lo: 1.0, hi: 2.0 };
                    CheckResult {
                        gating,
                        ..evaluate(check, &trajectory, &ledger, dummy)
                    }
                } else {
                    CheckResult {
                        check,
                        passed: false,
                        gating,
                        detail: e.to_string(),
                    }
                }
            })
            .collect(),
    };
    Ok((trajectory, ledger, results))
}

pub fn render_report(
    params: &DuffingParams,
    init: State,
    scheme: &SchemeConfig,
    trajectory: &Trajectory,
    ledger: &EnergyLedger,
    checks: &[CheckResult],
) -> String {
    let mut r = String::new();
    let last = ledger.rows.last().expect("ledger has the initial row");
    let _ = writeln!(r, "p={}", params.p());
    let _ = writeln!(r, "alpha={}", params.alpha());
    let _ = writeln!(r, "mu={}", params.mu());
    let _ = writeln!(r, "x0={}", init.x);
    let _ = writeln!(r, "y0={}", init.y);
    let _ = writeln!(r, "dt={}", scheme.dt);
    let _ = writeln!(r, "t_end={}", scheme.t_end);
    let _ = writeln!(r, "newton_tol={:e}", scheme.newton_tol);
    let _ = writeln!(r, "max_newton_iters={}", scheme.max_newton_iters);
    let _ = writeln!(r, "record_stride={}", scheme.record_stride);
    let _ = writeln!(r, "steps={}", scheme.steps());
    let _ = writeln!(r, "samples={}", trajectory.samples.len());
    let _ = writeln!(r, "multi_root_steps={}", trajectory.multi_root_steps);
    let _ = writeln!(r, "energy_initial={}", fmt_f64(ledger.rows[0].energy));
    let _ = writeln!(r, "energy_final={}", fmt_f64(last.energy));
    let _ = writeln!(
        r,
        "max_identity_residual={}",
        fmt_f64(ledger.max_abs_residual())
    );
    for c in checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let info = if c.gating { "" } else { " (informational)" };
        let _ = writeln!(r, "check.{}={verdict}{info} {}", c.check, c.detail);
    }
    let failed = checks.iter().any(|c| c.gating && !c.passed);
    let _ = writeln!(r, "status={}", if failed { "FAIL" } else { "PASS" });
    r
}

fn write_point_files(
    dir: &Path,
    params: &DuffingParams,
    init: State,
    scheme: &SchemeConfig,
    trajectory: &Trajectory,
    ledger: &EnergyLedger,
    checks: &[CheckResult],
) -> Result<(), CliError> {
    let path = dir.join("trajectory.csv");
    write_trajectory_csv(create(&path)?, trajectory, ledger).map_err(|e| CliError::io(&path, e))?;
    let path = dir.join("ledger.csv");
    write_ledger_csv(create(&path)?, ledger).map_err(|e| CliError::io(&path, e))?;
    let path = dir.join("report.txt");
    let report = render_report(params, init, scheme, trajectory, ledger, checks);
    std::fs::write(&path, report).map_err(|e| CliError::io(&path, e))
}

/// Integrate, check, and write `trajectory.csv`, `ledger.csv` and
/// `report.txt` into `spec.out`.
pub fn cmd_run(spec: &RunSpec) -> Outcome {
    let checks: Vec<(Check, bool)> = spec.checks.iter().map(|&c| (c, true)).collect();
    let (trajectory, ledger, results) =
        match run_point(&spec.params, &spec.scheme, spec.init, &checks) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return Outcome::from(&e);
            }
        };
    if let Err(e) = write_point_files(
        &spec.out,
        &spec.params,
        spec.init,
        &spec.scheme,
        &trajectory,
        &ledger,
        &results,
    ) {
        eprintln!("error: {e}");
        return Outcome::ConfigError;
    }
    let mut outcome = Outcome::Success;
    for c in &results {
        if !c.passed {
            eprintln!("check {} failed: {}", c.check, c.detail);
            outcome = Outcome::CheckFailed;
        }
    }
    outcome
}

fn plan_for(plan: &CheckPlan, params: &DuffingParams) -> Vec<(Check, bool)> {
    let damped = params.mu() > 0.0;
    match plan {
        CheckPlan::Uniform(checks) => checks
            .iter()
            .filter(|c| damped || !c.requires_damping())
            .map(|&c| (c, true))
            .collect(),
        CheckPlan::Figure => {
            let mut checks = vec![(Check::Ledger, true)];
            if damped {
                checks.push((Check::Inequality, true));
                let baseline = params.mu() == 1.0 && params.alpha() == 1.0;
                for c in [
                    Check::EnergyDecay,
                    Check::SolutionDecay,
                    Check::ModifiedEnergyDecay,
                ] {
                    checks.push((c, baseline));
                }
            }
            checks
        }
    }
}

/// One ordering claim evaluated at `t = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingResult {
    pub description: String,
    pub passed: bool,
    /// `(label, t, E)` in the order of the varied parameter.
    pub values: Vec<(String, f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub points: Vec<PointResult>,
    pub orderings: Vec<OrderingResult>,
}

impl SweepResult {
    pub fn outcome(&self) -> Outcome {
        let points = self.points.iter().map(PointResult::outcome).max();
        let orderings = if self.orderings.iter().all(|o| o.passed) {
            Outcome::Success
        } else {
            Outcome::CheckFailed
        };
        points.unwrap_or(Outcome::Success).max(orderings)
    }

    pub fn point(&self, p: i64, alpha: f64, mu: f64) -> Option<&PointResult> {
        self.points
            .iter()
            .find(|r| r.p == p && r.alpha == alpha && r.mu == mu)
    }
}

fn ordering(
    description: String,
    members: &[&PointResult],
    t_query: f64,
    increasing_in: impl Fn(&DuffingParams) -> f64,
    expect_increasing: bool,
) -> Option<OrderingResult> {
    let trajs: Vec<&Trajectory> = members.iter().filter_map(|m| m.trajectory()).collect();
    if trajs.len() < 2 {
        return None;
    }
    let result = match compare_at_time(&trajs, t_query) {
        Ok(report) => {
            let passed = if expect_increasing {
                report.strictly_increasing_in(&increasing_in)
            } else {
                report.strictly_decreasing_in(&increasing_in)
            };
            let mut entries = report.entries.clone();
            entries.sort_by(|a, b| increasing_in(&a.params).total_cmp(&increasing_in(&b.params)));
            let values = entries
                .iter()
                .map(|e| {
                    let p = &e.params;
                    (point_label(p.p().into(), p.alpha(), p.mu()), e.t, e.energy)
                })
                .collect();
            OrderingResult {
                description,
                passed,
                values,
            }
        }
        Err(e) => OrderingResult {
            description: format!("{description}: {e}"),
            passed: false,
            values: Vec::new(),
        },
    };
    Some(result)
}

/// Integrate every grid point (concurrently, up to `spec.jobs`) and compare
/// energies at `t = T`. Results are in grid order regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, CliError> {
    let grid = spec.grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let points: Vec<PointResult> = pool.install(|| {
        grid.par_iter()
            .map(|&(p, alpha, mu)| {
                let status = match DuffingParams::new(p, mu, alpha) {
                    Err(e) => PointStatus::Invalid(e.to_string()),
                    Ok(params) => {
                        let plan = plan_for(&spec.checks, &params);
                        match run_point(&params, &spec.scheme, spec.init, &plan) {
                            Ok((trajectory, ledger, checks)) => PointStatus::Done {
                                trajectory,
                                ledger,
                                checks,
                            },
                            Err(e) => PointStatus::Failed(e.to_string()),
                        }
                    }
                };
                PointResult {
                    p,
                    alpha,
                    mu,
                    status,
                }
            })
            .collect()
    });

    let t_query = spec.scheme.steps() as f64 * spec.scheme.dt;
    let mut orderings = Vec::new();
    for &p in &spec.ps {
        for &alpha in &spec.alphas {
            let members: Vec<&PointResult> = points
                .iter()
                .filter(|r| r.p == p && r.alpha == alpha && r.mu > 0.0)
                .collect();
            orderings.extend(ordering(
                format!("p={p} alpha={alpha}: E(T) strictly increasing in mu"),
                &members,
                t_query,
                |prm| prm.mu(),
                true,
            ));
        }
        for &mu in spec.mus.iter().filter(|&&mu| mu > 0.0) {
            let members: Vec<&PointResult> =
                points.iter().filter(|r| r.p == p && r.mu == mu).collect();
            orderings.extend(ordering(
                format!("p={p} mu={mu}: E(T) strictly decreasing in alpha"),
                &members,
                t_query,
                |prm| prm.alpha(),
                false,
            ));
        }
    }
    Ok(SweepResult { points, orderings })
}

pub fn render_comparison(result: &SweepResult) -> String {
    let mut r = String::new();
    for o in &result.orderings {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(r, "{verdict} {}", o.description);
        for (label, t, e) in &o.values {
            let _ = writeln!(r, "    {label} t={t} E={}", fmt_f64(*e));
        }
    }
    for point in &result.points {
        match &point.status {
            PointStatus::Invalid(e) => {
                let _ = writeln!(r, "INVALID {}: {e}", point.label());
            }
            PointStatus::Failed(e) => {
                let _ = writeln!(r, "FAILED {}: {e}", point.label());
            }
            PointStatus::Done { checks, .. } => {
                for c in checks.iter().filter(|c| c.gating && !c.passed) {
                    let _ = writeln!(r, "FAIL {} check {}: {}", point.label(), c.check, c.detail);
                }
            }
        }
    }
    let _ = writeln!(r, "status={}", result.outcome().code());
    r
}

/// `(p, alpha)` groups of finished points, in grid order.
fn panels(result: &SweepResult) -> BTreeMap<(i64, u64), Vec<&PointResult>> {
    let mut panels: BTreeMap<(i64, u64), Vec<&PointResult>> = BTreeMap::new();
    for point in result.points.iter().filter(|p| p.trajectory().is_some()) {
        panels
            .entry((point.p, point.alpha.to_bits()))
            .or_default()
            .push(point);
    }
    panels
}

/// Plot-data file name of a `(p, alpha)` panel.
pub fn panel_file(p: i64, alpha: f64, figure: bool) -> String {
    if figure {
        format!("figure_p{p}_alpha{alpha}.dat")
    } else {
        format!("energy_p{p}_alpha{alpha}.dat")
    }
}

fn write_panel(dir: &Path, members: &[&PointResult], figure: bool) -> Result<(), CliError> {
    let first = members[0];
    let trajs: Vec<&Trajectory> = members.iter().filter_map(|m| m.trajectory()).collect();
    let rows = trajs.iter().map(|t| t.samples.len()).min().unwrap_or(0);
    let path = dir.join(panel_file(first.p, first.alpha, figure));
    let file = create(&path)?;
    let energy_at = |traj: &Trajectory, i: usize| {
        duffing_core::energy(&traj.params, traj.samples[i].state).unwrap_or(f64::NAN)
    };
    let written = if figure {
        let slope = trajs[0].params.energy_decay_slope();
        let mut columns = vec!["log10_t".to_string()];
        columns.extend(members.iter().map(|m| format!("log10_E_mu={}", m.mu)));
        columns.push(format!("log10_reference_slope={slope}"));
        let body = (0..rows).filter(|&i| trajs[0].samples[i].t > 0.0).map(|i| {
            let lt = trajs[0].samples[i].t.log10();
            let mut row = vec![lt];
            row.extend(trajs.iter().map(|t| energy_at(t, i).log10()));
            row.push(slope * lt);
            row
        });
        write_plot_data(file, &columns, body)
    } else {
        let mut columns = vec!["t".to_string()];
        columns.extend(members.iter().map(|m| format!("E_mu={}", m.mu)));
        let body = (0..rows).map(|i| {
            let mut row = vec![trajs[0].samples[i].t];
            row.extend(trajs.iter().map(|t| energy_at(t, i)));
            row
        });
        write_plot_data(file, &columns, body)
    };
    written.map_err(|e| CliError::io(&path, e))
}

/// Write per-point files, one plot-data file per `(p, alpha)` panel and
/// `comparison.txt`.
pub fn write_sweep(spec: &SweepSpec, result: &SweepResult) -> Result<(), CliError> {
    std::fs::create_dir_all(&spec.out).map_err(|e| CliError::io(&spec.out, e))?;
    for point in &result.points {
        if let PointStatus::Done {
            trajectory,
            ledger,
            checks,
        } = &point.status
        {
            let dir = spec.out.join("points").join(point.label());
            write_point_files(
                &dir,
                &trajectory.params,
                spec.init,
                &spec.scheme,
                trajectory,
                ledger,
                checks,
            )?;
        }
    }
    for members in panels(result).values() {
        write_panel(&spec.out, members, spec.figure)?;
    }
    let path = spec.out.join("comparison.txt");
    std::fs::write(&path, render_comparison(result)).map_err(|e| CliError::io(&path, e))
}

pub fn cmd_sweep(spec: &SweepSpec) -> Outcome {
    let result = match run_sweep(spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Outcome::ConfigError;
        }
    };
    if let Err(e) = write_sweep(spec, &result) {
        eprintln!("error: {e}");
        return Outcome::ConfigError;
    }
    let outcome = result.outcome();
    for line in render_comparison(&result).lines() {
        if line.starts_with("FAIL") || line.starts_with("INVALID") {
            eprintln!("{line}");
        }
    }
    outcome
}

/// The figure grid with log-log panels and reference slopes.
pub fn cmd_reproduce_figure(spec: &SweepSpec) -> Outcome {
    debug_assert!(spec.figure);
    cmd_sweep(spec)
}
