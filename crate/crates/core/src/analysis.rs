//! Energy ledgers, power-law decay fits and empirical checks of the decay
//! bounds on computed trajectories.

use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::model::{energy, modified_energy, DuffingParams};

/// Values below this are excluded before taking logarithms.
pub const VALUE_FLOOR: f64 = 1e-30;
/// Minimum number of samples a decay fit accepts.
pub const MIN_FIT_SAMPLES: usize = 50;
/// Width (time units) of the sliding window of the peak envelope of `|x|`.
pub const PEAK_WINDOW: f64 = 20.0;
/// Number of log-spaced segments used to detect a growth trend of the
/// envelope constant.
pub const TREND_SEGMENTS: usize = 4;
/// Relative slack allowed before an envelope counts as growing.
pub const TREND_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRow {
    pub t: f64,
    pub energy: f64,
    pub modified_energy: f64,
    /// Cumulative discrete dissipation `D^(n)`.
    pub dissipation: f64,
    /// `E^(n) + D^(n) - E^(0)`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLedger {
    pub rows: Vec<LedgerRow>,
}

impl EnergyLedger {
    pub fn max_abs_residual(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.residual.abs())
            .fold(0.0, f64::max)
    }

    /// `max_n |E^(n) - E^(0)|`.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.rows[0].energy;
        self.rows
            .iter()
            .map(|r| (r.energy - e0).abs())
            .fold(0.0, f64::max)
    }

    pub fn energy_series(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.t, r.energy)).collect()
    }

    pub fn modified_energy_series(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.t, r.modified_energy)).collect()
    }

    /// Change of the identity residual between consecutive rows; with a
    /// record stride of one these are the per-step discrete-law defects.
    pub fn step_defects(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| w[1].residual - w[0].residual)
            .collect()
    }
}

pub fn build_ledger(traj: &Trajectory) -> Result<EnergyLedger> {
    let first = traj.samples.first().ok_or(Error::EmptyTrajectory)?;
    let params = &traj.params;
    let e0 = energy(params, first.state)?;
    let rows = traj
        .samples
        .iter()
        .map(|s| {
            let e = energy(params, s.state)?;
            let row = LedgerRow {
                t: s.t,
                energy: e,
                modified_energy: modified_energy(params, s.state)?,
                dissipation: s.dissipation,
                residual: e + s.dissipation - e0,
            };
            if row.dissipation.is_finite() && row.residual.is_finite() {
                Ok(row)
            } else {
                Err(Error::Overflow("energy ledger"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergyLedger { rows })
}

/// Closed time interval used for tail fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub lo: f64,
    pub hi: f64,
}

impl FitWindow {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidWindow {
                lo,
                hi,
                reason: "bounds must be finite",
            });
        }
        if lo < 1.0 {
            return Err(Error::InvalidWindow {
                lo,
                hi,
                reason: "window must start at t >= 1",
            });
        }
        if hi <= lo {
            return Err(Error::InvalidWindow {
                lo,
                hi,
                reason: "upper bound must exceed lower bound",
            });
        }
        Ok(FitWindow { lo, hi })
    }

    /// `[T/10, T]`.
    pub fn tail_of(traj: &Trajectory) -> Result<Self> {
        let t_end = traj.samples.last().ok_or(Error::EmptyTrajectory)?.t;
        FitWindow::new(t_end / 10.0, t_end)
    }

    fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFitReport {
    pub window: FitWindow,
    /// Least-squares slope of `ln value` against `ln t`.
    pub slope: f64,
    pub intercept: f64,
    pub theoretical_slope: f64,
    /// `sup value * t^(-theoretical_slope)` over the window.
    pub envelope_constant: f64,
    /// Largest ratio of a later segment's envelope to the first segment's
    /// envelope; above `1 + TREND_TOLERANCE` means the bound is not holding
    /// with a fixed constant.
    pub envelope_growth: f64,
    pub samples: usize,
    pub clipped: usize,
}

impl DecayFitReport {
    pub fn envelope_is_bounded(&self) -> bool {
        self.envelope_constant.is_finite() && self.envelope_growth <= 1.0 + TREND_TOLERANCE
    }

    pub fn slope_within(&self, tolerance: f64) -> bool {
        (self.slope - self.theoretical_slope).abs() <= tolerance
    }
}

/// Fit `value ~ c t^slope` on the window by least squares in log-log space.
pub fn fit_decay(
    series: &[(f64, f64)],
    window: FitWindow,
    theoretical_slope: f64,
) -> Result<DecayFitReport> {
    let in_window: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|&(t, _)| window.contains(t))
        .collect();
    if in_window.is_empty() {
        return Err(Error::EmptyWindow {
            lo: window.lo,
            hi: window.hi,
        });
    }
    let kept: Vec<(f64, f64)> = in_window
        .iter()
        .copied()
        .filter(|&(_, v)| v >= VALUE_FLOOR && v.is_finite())
        .collect();
    let clipped = in_window.len() - kept.len();
    if kept.is_empty() {
        return Err(Error::AllClipped {
            count: in_window.len(),
        });
    }
    if kept.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            found: kept.len(),
            required: MIN_FIT_SAMPLES,
        });
    }

    let n = kept.len() as f64;
    let (mean_u, mean_v) = kept
        .iter()
        .fold((0.0, 0.0), |(su, sv), &(t, v)| (su + t.ln(), sv + v.ln()));
    let (mean_u, mean_v) = (mean_u / n, mean_v / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, v) in &kept {
        let du = t.ln() - mean_u;
        sxy += du * (v.ln() - mean_v);
        sxx += du * du;
    }
    let slope = sxy / sxx;
    let intercept = mean_v - slope * mean_u;

    let scaled = |&(t, v): &(f64, f64)| v * t.powf(-theoretical_slope);
    let envelope_constant = kept.iter().map(scaled).fold(0.0, f64::max);

    let (ln_lo, ln_hi) = (window.lo.ln(), window.hi.ln());
    let mut segment_sup = [0.0f64; TREND_SEGMENTS];
    for sample in &kept {
        let frac = (sample.0.ln() - ln_lo) / (ln_hi - ln_lo);
        let k = ((frac * TREND_SEGMENTS as f64) as usize).min(TREND_SEGMENTS - 1);
        segment_sup[k] = segment_sup[k].max(scaled(sample));
    }
    let envelope_growth = if segment_sup[0] > 0.0 {
        segment_sup[1..]
            .iter()
            .fold(0.0f64, |m, &s| m.max(s / segment_sup[0]))
    } else {
        f64::INFINITY
    };

    Ok(DecayFitReport {
        window,
        slope,
        intercept,
        theoretical_slope,
        envelope_constant,
        envelope_growth,
        samples: kept.len(),
        clipped,
    })
}

/// Envelope constant `sup value * t^(-theoretical_slope)` over `[start, hi]`
/// for each start.
pub fn envelope_profile(
    series: &[(f64, f64)],
    starts: &[f64],
    hi: f64,
    theoretical_slope: f64,
) -> Vec<f64> {
    starts
        .iter()
        .map(|&lo| {
            series
                .iter()
                .filter(|&&(t, v)| t >= lo && t <= hi && v >= VALUE_FLOOR)
                .map(|&(t, v)| v * t.powf(-theoretical_slope))
                .fold(0.0, f64::max)
        })
        .collect()
}

fn require_damping(params: &DuffingParams) -> Result<()> {
    if params.mu() > 0.0 {
        Ok(())
    } else {
        Err(Error::RequiresDamping(params.mu()))
    }
}

/// Backward sliding maximum: `max |value(s)|` for `s` in `[t - width, t]`.
pub fn peak_envelope(series: &[(f64, f64)], width: f64) -> Vec<(f64, f64)> {
    use std::collections::VecDeque;
    let mut window: VecDeque<usize> = VecDeque::new();
    let mut out = Vec::with_capacity(series.len());
    for (i, &(t, v)) in series.iter().enumerate() {
        while window.back().is_some_and(|&j| series[j].1.abs() <= v.abs()) {
            window.pop_back();
        }
        window.push_back(i);
        while window.front().is_some_and(|&j| series[j].0 < t - width) {
            window.pop_front();
        }
        out.push((t, series[window[0]].1.abs()));
    }
    out
}

pub fn energy_decay(traj: &Trajectory, window: FitWindow) -> Result<DecayFitReport> {
    let ledger = build_ledger(traj)?;
    fit_decay(
        &ledger.energy_series(),
        window,
        traj.params.energy_decay_slope(),
    )
}

/// Fit the peak envelope of `|x|` against the rate `-1/(p-1)`.
pub fn check_solution_decay(traj: &Trajectory, window: FitWindow) -> Result<DecayFitReport> {
    require_damping(&traj.params)?;
    let xs: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.t, s.state.x)).collect();
    let envelope = peak_envelope(&xs, PEAK_WINDOW);
    fit_decay(&envelope, window, traj.params.solution_decay_slope())
}

/// Boundedness of `modified_energy * t^(2/(p-1))`. The slope may be steeper
/// than the bound; only the envelope matters.
pub fn check_modified_energy_decay(traj: &Trajectory, window: FitWindow) -> Result<DecayFitReport> {
    require_damping(&traj.params)?;
    let ledger = build_ledger(traj)?;
    fit_decay(
        &ledger.modified_energy_series(),
        window,
        traj.params.modified_energy_decay_slope(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    /// `inf (-dM/dt) (1 + M^((p-1)/2)) / M^((p+1)/2)` over samples where the
    /// modified energy `M` is strictly decreasing.
    pub nu_hat: f64,
    pub t_at_infimum: f64,
    /// Fraction of samples whose discrete derivative of `M` is positive.
    pub positive_fraction: f64,
    /// Samples above the floor that entered the estimate.
    pub samples: usize,
}

/// Estimate the admissible constant of the differential inequality
/// `M' + nu M^((p+1)/2) / (1 + M^((p-1)/2)) <= 0` from a sampled series of
/// the modified energy `M`.
///
/// Derivatives are centered differences on the stored grid, one-sided at the
/// ends. Samples with `M` below the floor are skipped.
pub fn estimate_nu(series: &[(f64, f64)], p: u32) -> Result<InequalityReport> {
    let n = series.len();
    if n < 2 {
        return Err(Error::Degenerate);
    }
    let half_minus = (f64::from(p) - 1.0) / 2.0;
    let half_plus = (f64::from(p) + 1.0) / 2.0;
    let mut nu_hat = f64::INFINITY;
    let mut t_at_infimum = f64::NAN;
    let mut positive = 0usize;
    let mut used = 0usize;
    for i in 0..n {
        let (t, m) = series[i];
        if m.is_nan() || m <= VALUE_FLOOR {
            continue;
        }
        let (a, b) = match i {
            0 => (0, 1),
            _ if i == n - 1 => (n - 2, n - 1),
            _ => (i - 1, i + 1),
        };
        let derivative = (series[b].1 - series[a].1) / (series[b].0 - series[a].0);
        used += 1;
        if derivative > 0.0 {
            positive += 1;
            continue;
        }
        let ratio = -derivative * (1.0 + m.powf(half_minus)) / m.powf(half_plus);
        if derivative < 0.0 && ratio < nu_hat {
            nu_hat = ratio;
            t_at_infimum = t;
        }
    }
    if used == 0 {
        return Err(Error::Degenerate);
    }
    if !nu_hat.is_finite() {
        nu_hat = 0.0;
    }
    Ok(InequalityReport {
        nu_hat,
        t_at_infimum,
        positive_fraction: positive as f64 / used as f64,
        samples: used,
    })
}

pub fn check_inequality(traj: &Trajectory) -> Result<InequalityReport> {
    require_damping(&traj.params)?;
    let ledger = build_ledger(traj)?;
    estimate_nu(&ledger.modified_energy_series(), traj.params.p())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonEntry {
    pub params: DuffingParams,
    /// Time of the sample nearest the query.
    pub t: f64,
    pub energy: f64,
}

/// Energies of several runs at a common time, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub t_query: f64,
    pub entries: Vec<ComparisonEntry>,
}

impl ComparisonReport {
    /// True if sorting the runs by `key` yields strictly increasing energies.
    pub fn strictly_increasing_in<F: Fn(&DuffingParams) -> f64>(&self, key: F) -> bool {
        let mut by_key: Vec<&ComparisonEntry> = self.entries.iter().collect();
        by_key.sort_by(|a, b| key(&a.params).total_cmp(&key(&b.params)));
        by_key.windows(2).all(|w| w[0].energy < w[1].energy)
    }

    /// True if sorting the runs by `key` yields strictly decreasing energies.
    pub fn strictly_decreasing_in<F: Fn(&DuffingParams) -> f64>(&self, key: F) -> bool {
        let mut by_key: Vec<&ComparisonEntry> = self.entries.iter().collect();
        by_key.sort_by(|a, b| key(&a.params).total_cmp(&key(&b.params)));
        by_key.windows(2).all(|w| w[0].energy > w[1].energy)
    }
}

pub fn compare_at_time(trajectories: &[&Trajectory], t_query: f64) -> Result<ComparisonReport> {
    let mut entries = Vec::with_capacity(trajectories.len());
    for traj in trajectories {
        let t_end = traj.samples.last().ok_or(Error::EmptyTrajectory)?.t;
        let slack = 0.5 * traj.config.dt;
        if !(t_query >= -slack && t_query <= t_end + slack) {
            return Err(Error::QueryOutOfRange { t: t_query, t_end });
        }
        let idx = traj.samples.partition_point(|s| s.t < t_query);
        let nearest = [idx.checked_sub(1), Some(idx)]
            .into_iter()
            .flatten()
            .filter(|&i| i < traj.samples.len())
            .min_by(|&a, &b| {
                (traj.samples[a].t - t_query)
                    .abs()
                    .total_cmp(&(traj.samples[b].t - t_query).abs())
            })
            .expect("nonempty trajectory");
        let sample = &traj.samples[nearest];
        entries.push(ComparisonEntry {
            params: traj.params,
            t: sample.t,
            energy: energy(&traj.params, sample.state)?,
        });
    }
    entries.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(ComparisonReport { t_query, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{integrate, SchemeConfig};
    use crate::model::State;
    use approx::assert_relative_eq;

    fn run(p: i64, mu: f64, alpha: f64, init: State, dt: f64, t_end: f64) -> Trajectory {
        let params = DuffingParams::new(p, mu, alpha).unwrap();
        integrate(&params, &SchemeConfig::new(dt, t_end).unwrap(), init).unwrap()
    }

    fn power_law(c: f64, s: f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                (t, c * t.powf(s))
            })
            .collect()
    }

    #[test]
    fn ledger_undamped_has_no_dissipation() {
        let traj = run(3, 0.0, 1.0, State::new(2.0, 0.0), 0.01, 10.0);
        let ledger = build_ledger(&traj).unwrap();
        let e0 = ledger.rows[0].energy;
        for row in &ledger.rows {
            assert_eq!(row.dissipation, 0.0);
            assert_eq!(row.residual, row.energy - e0);
        }
    }

    #[test]
    fn ledger_equilibrium_is_zero() {
        let traj = run(3, 1.0, 1.0, State::ORIGIN, 0.01, 1.0);
        let ledger = build_ledger(&traj).unwrap();
        assert!(ledger.rows.iter().all(|r| r.energy == 0.0
            && r.modified_energy == 0.0
            && r.dissipation == 0.0
            && r.residual == 0.0));
    }

    #[test]
    fn ledger_damped_residual() {
        let traj = run(3, 1.0, 1.0, State::new(2.0, 0.0), 0.01, 100.0);
        let ledger = build_ledger(&traj).unwrap();
        assert!(
            ledger.max_abs_residual() <= 1e-8,
            "{}",
            ledger.max_abs_residual()
        );
        assert!(ledger
            .rows
            .windows(2)
            .all(|w| w[1].dissipation > w[0].dissipation));
    }

    #[test]
    fn ledger_telescopes() {
        let traj = run(5, 0.5, 2.0, State::new(1.0, 0.5), 0.01, 5.0);
        let ledger = build_ledger(&traj).unwrap();
        let defects = ledger.step_defects();
        let mut acc = 0.0;
        for (row, d) in ledger.rows[1..].iter().zip(&defects) {
            acc += d;
            assert!((acc - row.residual).abs() < 1e-14);
        }
    }

    #[test]
    fn fit_exact_power_law() {
        let series = power_law(7.0, -2.0, 10.0, 1000.0, 500);
        let report = fit_decay(&series, FitWindow::new(10.0, 1000.0).unwrap(), -2.0).unwrap();
        assert!((report.slope + 2.0).abs() < 1e-6);
        assert_relative_eq!(report.envelope_constant, 7.0, max_relative = 1e-9);
        assert_relative_eq!(report.intercept, 7f64.ln(), max_relative = 1e-9);
        assert!(report.envelope_is_bounded());
        assert_eq!(report.clipped, 0);
    }

    #[test]
    fn fit_oscillating_power_law() {
        let series: Vec<(f64, f64)> = (0..5000)
            .map(|i| {
                let t = 10.0 + i as f64 * 0.2;
                (t, 5.0 * t.powi(-2) * (1.0 + 0.3 * t.sin()))
            })
            .collect();
        let report = fit_decay(&series, FitWindow::new(10.0, 1000.0).unwrap(), -2.0).unwrap();
        assert!((-2.1..=-1.9).contains(&report.slope), "{}", report.slope);
    }

    #[test]
    fn fit_errors() {
        let series = power_law(1.0, -1.0, 1.0, 100.0, 200);
        assert!(matches!(
            fit_decay(&series, FitWindow::new(200.0, 300.0).unwrap(), -1.0),
            Err(Error::EmptyWindow { .. })
        ));
        let zeros: Vec<(f64, f64)> = series.iter().map(|&(t, _)| (t, 0.0)).collect();
        assert!(matches!(
            fit_decay(&zeros, FitWindow::new(1.0, 100.0).unwrap(), -1.0),
            Err(Error::AllClipped { count: 200 })
        ));
        assert!(matches!(
            fit_decay(&series, FitWindow::new(90.0, 100.0).unwrap(), -1.0),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(FitWindow::new(0.5, 10.0).is_err());
        assert!(FitWindow::new(10.0, 10.0).is_err());
    }

    #[test]
    fn fit_reports_clipped_samples() {
        let mut series = power_law(1.0, -1.0, 1.0, 100.0, 200);
        series[150].1 = 0.0;
        series[151].1 = 1e-40;
        let report = fit_decay(&series, FitWindow::new(1.0, 100.0).unwrap(), -1.0).unwrap();
        assert_eq!(report.clipped, 2);
        assert!((report.slope + 1.0).abs() < 1e-12);
    }

    #[test]
    fn growing_envelope_is_flagged() {
        let series = power_law(1.0, -1.5, 10.0, 1000.0, 400);
        let report = fit_decay(&series, FitWindow::new(10.0, 1000.0).unwrap(), -2.0).unwrap();
        assert!(!report.envelope_is_bounded());
    }

    #[test]
    fn peak_envelope_tracks_maxima() {
        let series: Vec<(f64, f64)> = (0..1000)
            .map(|i| {
                let t = i as f64 * 0.1;
                (t, (-0.01 * t).exp() * t.cos())
            })
            .collect();
        let env = peak_envelope(&series, 20.0);
        for (i, &(t, e)) in env.iter().enumerate() {
            let brute = series[..=i]
                .iter()
                .filter(|&&(s, _)| s >= t - 20.0)
                .map(|&(_, v)| v.abs())
                .fold(0.0, f64::max);
            assert_eq!(e, brute);
        }
    }

    #[test]
    fn nu_estimate_on_exponential_series() {
        // M(t) = exp(-t), p = 3: -M' (1 + M) / M^2 = (e^t + 1) for the exact
        // derivative. On the grid the infimum sits at the first sample with
        // the forward-difference factor (1 - e^-h)/h.
        let h = 0.01;
        let t0 = 1.0;
        let series: Vec<(f64, f64)> = (0..500)
            .map(|i| {
                let t = t0 + i as f64 * h;
                (t, (-t).exp())
            })
            .collect();
        let report = estimate_nu(&series, 3).unwrap();
        let expected = (1.0 - (-h).exp()) / h * (t0.exp() + 1.0);
        assert_relative_eq!(report.nu_hat, expected, max_relative = 1e-9);
        assert_eq!(report.t_at_infimum, t0);
        assert_eq!(report.positive_fraction, 0.0);
    }

    #[test]
    fn nu_estimate_degenerate() {
        let zeros = vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)];
        assert_eq!(estimate_nu(&zeros, 3), Err(Error::Degenerate));
    }

    #[test]
    fn checks_require_damping() {
        let traj = run(3, 0.0, 1.0, State::new(2.0, 0.0), 0.01, 20.0);
        let window = FitWindow::new(2.0, 20.0).unwrap();
        assert_eq!(check_inequality(&traj), Err(Error::RequiresDamping(0.0)));
        assert!(matches!(
            check_solution_decay(&traj, window),
            Err(Error::RequiresDamping(_))
        ));
        assert!(matches!(
            check_modified_energy_decay(&traj, window),
            Err(Error::RequiresDamping(_))
        ));
    }

    #[test]
    fn equilibrium_solution_decay_is_all_clipped() {
        let traj = run(3, 1.0, 1.0, State::ORIGIN, 0.01, 20.0);
        assert!(matches!(
            check_solution_decay(&traj, FitWindow::new(2.0, 20.0).unwrap()),
            Err(Error::AllClipped { .. })
        ));
    }

    #[test]
    fn synthetic_modified_energy_bound() {
        let series = power_law(1.0, -1.0, 1.0, 5000.0, 1000);
        let report = fit_decay(&series, FitWindow::new(500.0, 5000.0).unwrap(), -1.0).unwrap();
        assert_relative_eq!(report.envelope_constant, 1.0, max_relative = 1e-12);
        assert_relative_eq!(report.envelope_growth, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn comparison_initial_sample() {
        let traj = run(3, 1.0, 1.0, State::new(2.0, 0.0), 0.01, 1.0);
        let report = compare_at_time(&[&traj], 0.0).unwrap();
        assert_eq!(report.entries[0].t, 0.0);
        assert_eq!(report.entries[0].energy, 4.0);
        assert!(matches!(
            compare_at_time(&[&traj], 2.0),
            Err(Error::QueryOutOfRange { .. })
        ));
    }

    #[test]
    fn comparison_orders() {
        let a = run(3, 1.0, 1.0, State::new(2.0, 0.0), 0.01, 50.0);
        let b = run(3, 10.0, 1.0, State::new(2.0, 0.0), 0.01, 50.0);
        let report = compare_at_time(&[&b, &a], 50.0).unwrap();
        assert!(report.entries[0].energy <= report.entries[1].energy);
        assert!(report.strictly_increasing_in(|p| p.mu()));
        assert!(!report.strictly_decreasing_in(|p| p.mu()));
    }
}
