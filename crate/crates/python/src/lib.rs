//! Python module `duffing_sp`: parameters, stepping, trajectories, the
//! energy ledger and the decay checks.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use duffing_core::analysis::{
    self, build_ledger, compare_at_time, DecayFitReport, EnergyLedger, FitWindow,
};
use duffing_core::{DuffingParams, SchemeConfig, State};

create_exception!(duffing_sp, DuffingError, PyException);

fn py_err(e: duffing_core::Error) -> PyErr {
    DuffingError::new_err(e.to_string())
}

#[pyclass(name = "Params", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParams(DuffingParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (p, mu, alpha))]
    fn new(p: i64, mu: f64, alpha: f64) -> PyResult<Self> {
        DuffingParams::new(p, mu, alpha).map(Self).map_err(py_err)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    /// `-(p+1)/(p-1)`.
    fn energy_decay_slope(&self) -> f64 {
        self.0.energy_decay_slope()
    }

    fn solution_decay_slope(&self) -> f64 {
        self.0.solution_decay_slope()
    }

    fn potential(&self, x: f64) -> PyResult<f64> {
        duffing_core::potential(&self.0, x).map_err(py_err)
    }

    fn energy(&self, x: f64, y: f64) -> PyResult<f64> {
        duffing_core::energy(&self.0, State::new(x, y)).map_err(py_err)
    }

    fn modified_energy(&self, x: f64, y: f64) -> PyResult<f64> {
        duffing_core::modified_energy(&self.0, State::new(x, y)).map_err(py_err)
    }

    fn discrete_gradient(&self, a: f64, b: f64) -> PyResult<f64> {
        duffing_core::discrete_gradient(&self.0, a, b).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(p={}, mu={}, alpha={})",
            self.0.p(),
            self.0.mu(),
            self.0.alpha()
        )
    }
}

fn scheme(
    dt: f64,
    t_end: f64,
    newton_tol: Option<f64>,
    record_stride: Option<usize>,
) -> PyResult<SchemeConfig> {
    let mut config = SchemeConfig::new(dt, t_end).map_err(py_err)?;
    if let Some(tol) = newton_tol {
        config = config.with_newton_tol(tol).map_err(py_err)?;
    }
    if let Some(stride) = record_stride {
        config = config.with_record_stride(stride).map_err(py_err)?;
    }
    Ok(config)
}

/// One step of the scheme. Returns `(x1, y1, newton_iterations)`.
#[pyfunction]
#[pyo3(signature = (params, x, y, dt, newton_tol=None))]
fn sp_step(
    params: &PyParams,
    x: f64,
    y: f64,
    dt: f64,
    newton_tol: Option<f64>,
) -> PyResult<(f64, f64, usize)> {
    let config = scheme(dt, dt, newton_tol, None)?;
    let out = duffing_core::sp_step(&params.0, &config, State::new(x, y)).map_err(py_err)?;
    Ok((out.next.x, out.next.y, out.iterations))
}

/// One classical RK4 step. Returns `(x1, y1)`.
#[pyfunction]
fn rk4_step(params: &PyParams, x: f64, y: f64, dt: f64) -> PyResult<(f64, f64)> {
    let s = duffing_core::rk4_step(&params.0, dt, State::new(x, y)).map_err(py_err)?;
    Ok((s.x, s.y))
}

#[pyclass(name = "Trajectory", frozen)]
struct PyTrajectory(duffing_core::Trajectory);

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn params(&self) -> PyParams {
        PyParams(self.0.params)
    }

    #[getter]
    fn t(&self) -> Vec<f64> {
        self.0.times().collect()
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.0.samples.iter().map(|s| s.state.x).collect()
    }

    #[getter]
    fn y(&self) -> Vec<f64> {
        self.0.samples.iter().map(|s| s.state.y).collect()
    }

    /// Cumulative discrete dissipation at each sample.
    #[getter]
    fn dissipation(&self) -> Vec<f64> {
        self.0.samples.iter().map(|s| s.dissipation).collect()
    }

    #[getter]
    fn newton_iters(&self) -> Vec<usize> {
        self.0.samples.iter().map(|s| s.newton_iters).collect()
    }

    #[getter]
    fn multi_root_steps(&self) -> usize {
        self.0.multi_root_steps
    }

    fn ledger(&self) -> PyResult<PyLedger> {
        build_ledger(&self.0).map(PyLedger).map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.0.samples.len()
    }
}

#[pyfunction]
#[pyo3(signature = (params, x0, y0, dt, t_end, newton_tol=None, record_stride=None))]
#[allow(clippy::too_many_arguments)]
fn integrate(
    py: Python<'_>,
    params: &PyParams,
    x0: f64,
    y0: f64,
    dt: f64,
    t_end: f64,
    newton_tol: Option<f64>,
    record_stride: Option<usize>,
) -> PyResult<PyTrajectory> {
    let config = scheme(dt, t_end, newton_tol, record_stride)?;
    let p = params.0;
    py.detach(|| duffing_core::integrate(&p, &config, State::new(x0, y0)))
        .map(PyTrajectory)
        .map_err(py_err)
}

#[pyclass(name = "Ledger", frozen)]
struct PyLedger(EnergyLedger);

#[pymethods]
impl PyLedger {
    #[getter]
    fn t(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.t).collect()
    }

    #[getter]
    fn energy(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.energy).collect()
    }

    #[getter]
    fn modified_energy(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.modified_energy).collect()
    }

    #[getter]
    fn dissipation(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.dissipation).collect()
    }

    /// `E + D - E(0)` at each sample.
    #[getter]
    fn residual(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.residual).collect()
    }

    fn max_abs_residual(&self) -> f64 {
        self.0.max_abs_residual()
    }

    fn max_energy_drift(&self) -> f64 {
        self.0.max_energy_drift()
    }
}

fn window_for(traj: &duffing_core::Trajectory, window: Option<(f64, f64)>) -> PyResult<FitWindow> {
    match window {
        Some((lo, hi)) => FitWindow::new(lo, hi),
        None => FitWindow::tail_of(traj),
    }
    .map_err(py_err)
}

fn fit_dict<'py>(py: Python<'py>, fit: &DecayFitReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("window", (fit.window.lo, fit.window.hi))?;
    d.set_item("slope", fit.slope)?;
    d.set_item("intercept", fit.intercept)?;
    d.set_item("theoretical_slope", fit.theoretical_slope)?;
    d.set_item("envelope_constant", fit.envelope_constant)?;
    d.set_item("envelope_growth", fit.envelope_growth)?;
    d.set_item("bounded", fit.envelope_is_bounded())?;
    d.set_item("samples", fit.samples)?;
    d.set_item("clipped", fit.clipped)?;
    Ok(d)
}

/// Log-log fit of the energy. `window` defaults to `[T/10, T]`.
#[pyfunction]
#[pyo3(signature = (trajectory, window=None))]
fn energy_decay<'py>(
    py: Python<'py>,
    trajectory: &PyTrajectory,
    window: Option<(f64, f64)>,
) -> PyResult<Bound<'py, PyDict>> {
    let w = window_for(&trajectory.0, window)?;
    let fit = analysis::energy_decay(&trajectory.0, w).map_err(py_err)?;
    fit_dict(py, &fit)
}

/// Fit of the peak envelope of `|x|`.
#[pyfunction]
#[pyo3(signature = (trajectory, window=None))]
fn solution_decay<'py>(
    py: Python<'py>,
    trajectory: &PyTrajectory,
    window: Option<(f64, f64)>,
) -> PyResult<Bound<'py, PyDict>> {
    let w = window_for(&trajectory.0, window)?;
    let fit = analysis::check_solution_decay(&trajectory.0, w).map_err(py_err)?;
    fit_dict(py, &fit)
}

#[pyfunction]
#[pyo3(signature = (trajectory, window=None))]
fn modified_energy_decay<'py>(
    py: Python<'py>,
    trajectory: &PyTrajectory,
    window: Option<(f64, f64)>,
) -> PyResult<Bound<'py, PyDict>> {
    let w = window_for(&trajectory.0, window)?;
    let fit = analysis::check_modified_energy_decay(&trajectory.0, w).map_err(py_err)?;
    fit_dict(py, &fit)
}

/// Estimate of the constant in the modified-energy inequality.
#[pyfunction]
fn check_inequality<'py>(
    py: Python<'py>,
    trajectory: &PyTrajectory,
) -> PyResult<Bound<'py, PyDict>> {
    let r = analysis::check_inequality(&trajectory.0).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("nu_hat", r.nu_hat)?;
    d.set_item("t_at_infimum", r.t_at_infimum)?;
    d.set_item("positive_fraction", r.positive_fraction)?;
    d.set_item("samples", r.samples)?;
    Ok(d)
}

/// `(p, mu, alpha, t, E)`
type ComparisonRow = (u32, f64, f64, f64, f64);

/// Rows sorted by ascending energy at `t_query`.
#[pyfunction]
fn compare(
    trajectories: Vec<PyRef<'_, PyTrajectory>>,
    t_query: f64,
) -> PyResult<Vec<ComparisonRow>> {
    let refs: Vec<&duffing_core::Trajectory> = trajectories.iter().map(|t| &t.0).collect();
    let report = compare_at_time(&refs, t_query).map_err(py_err)?;
    Ok(report
        .entries
        .iter()
        .map(|e| (e.params.p(), e.params.mu(), e.params.alpha(), e.t, e.energy))
        .collect())
}

#[pymodule]
fn duffing_sp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DuffingError", m.py().get_type::<DuffingError>())?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyLedger>()?;
    m.add_function(wrap_pyfunction!(sp_step, m)?)?;
    m.add_function(wrap_pyfunction!(rk4_step, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(energy_decay, m)?)?;
    m.add_function(wrap_pyfunction!(solution_decay, m)?)?;
    m.add_function(wrap_pyfunction!(modified_energy_decay, m)?)?;
    m.add_function(wrap_pyfunction!(check_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    Ok(())
}
