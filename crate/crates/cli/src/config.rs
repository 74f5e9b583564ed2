//! Flat `key=value` run configuration.
//!
//! A config file holds one `key=value` pair per line; `#` starts a comment.
//! Keys match the long command-line flags (`t_end` and `t-end` are the same
//! key). Command-line values override file values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use duffing_core::{DuffingParams, SchemeConfig, State};

use crate::error::CliError;

const KNOWN_KEYS: &[&str] = &[
    "p",
    "mu",
    "alpha",
    "x0",
    "y0",
    "dt",
    "t_end",
    "newton_tol",
    "max_newton_iters",
    "record_stride",
    "out",
    "checks",
    "jobs",
];

/// Stored samples targeted by the default record stride.
const DEFAULT_STORED_STEPS: usize = 50_000;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "line {}: expected key=value, got {line:?}",
                    lineno + 1
                ))
            })?;
            raw.set(key, value.trim())?;
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        RawConfig::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = normalize_key(key);
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("unknown key {key:?}")));
        }
        self.values.insert(key, value.to_string());
        Ok(())
    }

    /// Later values win.
    pub fn merge(&mut self, overrides: &RawConfig) {
        for (k, v) in &overrides.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::Config(format!("invalid value for {key}: {v:?}"))),
        }
    }

    fn list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>, CliError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => {
                let items = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse().map_err(|_| {
                            CliError::Config(format!("invalid entry {s:?} in list {key}"))
                        })
                    })
                    .collect::<Result<Vec<T>, _>>()?;
                if items.is_empty() {
                    return Err(CliError::Config(format!("list {key} is empty")));
                }
                Ok(items)
            }
        }
    }

    fn scheme(&self) -> Result<SchemeConfig, CliError> {
        let dt = self.parsed("dt", 0.01)?;
        let t_end = self.parsed("t_end", 5000.0)?;
        let config = SchemeConfig::new(dt, t_end)?;
        let stride_default = (config.steps() / DEFAULT_STORED_STEPS).max(1);
        Ok(config
            .with_newton_tol(self.parsed("newton_tol", config.newton_tol)?)?
            .with_max_newton_iters(self.parsed("max_newton_iters", config.max_newton_iters)?)?
            .with_record_stride(self.parsed("record_stride", stride_default)?)?)
    }

    fn init(&self) -> Result<State, CliError> {
        let init = State::new(self.parsed("x0", 2.0)?, self.parsed("y0", 0.0)?);
        if !init.is_finite() {
            return Err(CliError::Config("initial state must be finite".into()));
        }
        Ok(init)
    }

    fn checks(&self, default: &[Check]) -> Result<Vec<Check>, CliError> {
        match self.get("checks") {
            None => Ok(default.to_vec()),
            Some(v) if v.trim() == "all" => Ok(Check::ALL.to_vec()),
            Some(v) if v.trim() == "none" => Ok(Vec::new()),
            Some(_) => {
                let mut checks: Vec<Check> = self.list("checks", &[])?;
                checks.dedup();
                Ok(checks)
            }
        }
    }

    fn jobs(&self) -> Result<Option<usize>, CliError> {
        match self.get("jobs") {
            None => Ok(None),
            Some(_) => {
                let jobs: usize = self.parsed("jobs", 1)?;
                if jobs == 0 {
                    return Err(CliError::Config("jobs must be at least 1".into()));
                }
                Ok(Some(jobs))
            }
        }
    }
}

/// Verdicts a run can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Ledger,
    EnergyDecay,
    SolutionDecay,
    Inequality,
    ModifiedEnergyDecay,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Ledger,
        Check::EnergyDecay,
        Check::SolutionDecay,
        Check::Inequality,
        Check::ModifiedEnergyDecay,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Ledger => "ledger",
            Check::EnergyDecay => "energy-decay",
            Check::SolutionDecay => "solution-decay",
            Check::Inequality => "inequality",
            Check::ModifiedEnergyDecay => "modified-energy-decay",
        }
    }

    /// Checks whose hypothesis is `mu > 0`.
    pub fn requires_damping(&self) -> bool {
        matches!(
            self,
            Check::SolutionDecay | Check::Inequality | Check::ModifiedEnergyDecay
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim().replace('_', "-"))
            .ok_or_else(|| CliError::Config(format!("unknown check {s:?}")))
    }
}

/// One integration plus the checks to run on it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub params: DuffingParams,
    pub init: State,
    pub scheme: SchemeConfig,
    pub out: PathBuf,
    pub checks: Vec<Check>,
}

impl RunSpec {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let params = DuffingParams::new(
            raw.parsed("p", 3)?,
            raw.parsed("mu", 1.0)?,
            raw.parsed("alpha", 1.0)?,
        )?;
        let checks = raw.checks(&[Check::Ledger])?;
        if params.mu() == 0.0 {
            if let Some(c) = checks.iter().find(|c| c.requires_damping()) {
                return Err(CliError::Config(format!("check {c} requires mu > 0")));
            }
        }
        Ok(RunSpec {
            params,
            init: raw.init()?,
            scheme: raw.scheme()?,
            out: PathBuf::from(raw.get("out").unwrap_or("out")),
            checks,
        })
    }
}

/// Which checks gate each grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckPlan {
    /// The same checks on every point; damping-only checks are skipped where
    /// `mu = 0`.
    Uniform(Vec<Check>),
    /// Ledger everywhere, inequality for `mu > 0`, decay fits gating only on
    /// the `mu = 1, alpha = 1` baseline and reported elsewhere.
    Figure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub ps: Vec<i64>,
    pub alphas: Vec<f64>,
    pub mus: Vec<f64>,
    pub init: State,
    pub scheme: SchemeConfig,
    pub out: PathBuf,
    pub jobs: usize,
    pub checks: CheckPlan,
    /// Emit log-log figure panels with a reference slope instead of linear
    /// `(t, E)` plot data.
    pub figure: bool,
}

pub const FIGURE_PS: [i64; 3] = [3, 5, 7];
pub const FIGURE_ALPHAS: [f64; 2] = [1.0, 100.0];
pub const FIGURE_MUS: [f64; 5] = [0.0, 0.1, 1.0, 10.0, 100.0];

pub fn default_jobs(points: usize) -> usize {
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    cpus.min(points).max(1)
}

impl SweepSpec {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let ps: Vec<i64> = raw.list("p", &FIGURE_PS)?;
        let alphas: Vec<f64> = raw.list("alpha", &FIGURE_ALPHAS)?;
        let mus: Vec<f64> = raw.list("mu", &FIGURE_MUS)?;
        let points = ps.len() * alphas.len() * mus.len();
        Ok(SweepSpec {
            init: raw.init()?,
            scheme: raw.scheme()?,
            out: PathBuf::from(raw.get("out").unwrap_or("sweep")),
            jobs: raw.jobs()?.unwrap_or_else(|| default_jobs(points)),
            checks: CheckPlan::Uniform(raw.checks(&[Check::Ledger])?),
            figure: false,
            ps,
            alphas,
            mus,
        })
    }

    /// The figure grid at `dt = 0.01`, `T = 5000` from `(2, 0)`.
    pub fn figure(raw: &RawConfig) -> Result<Self, CliError> {
        let mut spec = SweepSpec::from_raw(raw)?;
        spec.ps = FIGURE_PS.to_vec();
        spec.alphas = FIGURE_ALPHAS.to_vec();
        spec.mus = FIGURE_MUS.to_vec();
        spec.init = State::new(2.0, 0.0);
        if raw.get("out").is_none() {
            spec.out = PathBuf::from("figure");
        }
        spec.jobs = raw.jobs()?.unwrap_or_else(|| default_jobs(30));
        spec.checks = CheckPlan::Figure;
        spec.figure = true;
        Ok(spec)
    }

    /// Grid points in `p`, then `alpha`, then `mu` order.
    pub fn grid(&self) -> Vec<(i64, f64, f64)> {
        let mut grid = Vec::new();
        for &p in &self.ps {
            for &alpha in &self.alphas {
                for &mu in &self.mus {
                    grid.push((p, alpha, mu));
                }
            }
        }
        grid
    }
}
