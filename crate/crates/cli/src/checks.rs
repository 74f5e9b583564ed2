//! Pass/fail verdicts on a finished trajectory.

use duffing_core::analysis::{
    check_inequality, check_modified_energy_decay, check_solution_decay, energy_decay,
    DecayFitReport, EnergyLedger, FitWindow,
};
use duffing_core::Trajectory;

use crate::config::Check;

/// Allowed distance between the fitted and theoretical energy slope.
pub const ENERGY_SLOPE_TOLERANCE: f64 = 0.3;
/// Largest admissible fraction of samples with increasing modified energy.
pub const MAX_POSITIVE_FRACTION: f64 = 1e-3;
/// Per-step discrete-law defect allowance, in units of `newton_tol`.
pub const DEFECT_PER_STEP: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub check: Check,
    pub passed: bool,
    /// Whether a failure affects the exit code.
    pub gating: bool,
    pub detail: String,
}

fn fit_detail(fit: &DecayFitReport) -> String {
    format!(
        "slope={:.6} theoretical={:.6} envelope={:.6e} growth={:.4} window=[{}, {}] samples={} clipped={}",
        fit.slope,
        fit.theoretical_slope,
        fit.envelope_constant,
        fit.envelope_growth,
        fit.window.lo,
        fit.window.hi,
        fit.samples,
        fit.clipped
    )
}

/// Bound on `max |E + D - E(0)|`: `N * 10 * newton_tol * max(1, E(0))`.
pub fn ledger_bound(traj: &Trajectory, ledger: &EnergyLedger) -> f64 {
    let steps = traj.config.steps() as f64;
    steps * DEFECT_PER_STEP * traj.config.newton_tol * ledger.rows[0].energy.max(1.0)
}

pub fn evaluate(
    check: Check,
    traj: &Trajectory,
    ledger: &EnergyLedger,
    window: FitWindow,
) -> CheckResult {
    let (passed, detail) = match check {
        Check::Ledger => {
            let bound = ledger_bound(traj, ledger);
            let residual = ledger.max_abs_residual();
            (
                residual <= bound,
                format!("max_residual={residual:.6e} bound={bound:.6e}"),
            )
        }
        Check::EnergyDecay => match energy_decay(traj, window) {
            Ok(fit) => (
                fit.envelope_is_bounded() && fit.slope_within(ENERGY_SLOPE_TOLERANCE),
                fit_detail(&fit),
            ),
            Err(e) => (false, e.to_string()),
        },
        Check::SolutionDecay => match check_solution_decay(traj, window) {
            Ok(fit) => (fit.envelope_is_bounded(), fit_detail(&fit)),
            Err(e) => (false, e.to_string()),
        },
        Check::ModifiedEnergyDecay => match check_modified_energy_decay(traj, window) {
            Ok(fit) => (fit.envelope_is_bounded(), fit_detail(&fit)),
            Err(e) => (false, e.to_string()),
        },
        Check::Inequality => match check_inequality(traj) {
            Ok(r) => (
                r.nu_hat > 0.0 && r.positive_fraction <= MAX_POSITIVE_FRACTION,
                format!(
                    "nu_hat={:.6e} at_t={} positive_fraction={:.3e} samples={}",
                    r.nu_hat, r.t_at_infimum, r.positive_fraction, r.samples
                ),
            ),
            Err(e) => (false, e.to_string()),
        },
    };
    CheckResult {
        check,
        passed,
        gating: true,
        detail,
    }
}
