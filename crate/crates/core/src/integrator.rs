//! Discrete-gradient time stepping and an explicit RK4 reference.
//!
//! One step of the scheme solves
//!
//! ```text
//! (x1 - x0)/dt = (y1 + y0)/2
//! (y1 - y0)/dt = -G(x1, x0) - (mu/2)(y1 + y0)
//! ```
//!
//! where `G` is [`discrete_gradient`]. Eliminating `y1 = 2(x1 - x0)/dt - y0`
//! leaves one scalar polynomial equation in `x1` of odd degree `p`. Its
//! derivative is positive for every `x1` (the power sum
//! `(a^(p+1) - b^(p+1))/(a - b)` is nondecreasing in `a` for even `p+1`), so
//! the root is unique and bisection is always a valid fallback for Newton.

use crate::error::{Error, Result};
use crate::model::{
    discrete_gradient, power_sum, power_sum_da, vector_field, DuffingParams, State,
};

const DEFAULT_NEWTON_TOL: f64 = 1e-12;
const DEFAULT_MAX_NEWTON_ITERS: usize = 50;
const MAX_STORED_SAMPLES: usize = 1_000_000;
const MAX_BISECTION_ITERS: usize = 2200;
const MAX_BRACKET_EXPANSIONS: usize = 2100;

/// Step size, horizon and nonlinear-solve settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Tolerance on the position-scaled residual (see [`StepOutcome`]).
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// Store every k-th step.
    pub record_stride: usize,
}

impl SchemeConfig {
    /// Default tolerances, and the smallest stride keeping at most 10^6
    /// stored samples.
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        let mut config = SchemeConfig {
            dt,
            t_end,
            newton_tol: DEFAULT_NEWTON_TOL,
            max_newton_iters: DEFAULT_MAX_NEWTON_ITERS,
            record_stride: 1,
        };
        config.validate()?;
        config.record_stride = config.steps().div_ceil(MAX_STORED_SAMPLES - 1).max(1);
        Ok(config)
    }

    pub fn with_newton_tol(mut self, tol: f64) -> Result<Self> {
        self.newton_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_max_newton_iters(mut self, iters: usize) -> Result<Self> {
        self.max_newton_iters = iters;
        self.validate()?;
        Ok(self)
    }

    pub fn with_record_stride(mut self, stride: usize) -> Result<Self> {
        self.record_stride = stride;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt must be positive and finite, got {}", self.dt));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad(format!(
                "t_end must be positive and finite, got {}",
                self.t_end
            ));
        }
        if self.t_end < self.dt {
            return bad(format!(
                "t_end ({}) must be at least dt ({})",
                self.t_end, self.dt
            ));
        }
        if !(self.newton_tol.is_finite() && self.newton_tol > 0.0) {
            return bad(format!(
                "newton_tol must be positive, got {}",
                self.newton_tol
            ));
        }
        if self.max_newton_iters == 0 {
            return bad("max_newton_iters must be at least 1".into());
        }
        if self.record_stride == 0 {
            return bad("record_stride must be at least 1".into());
        }
        if self.t_end / self.dt > usize::MAX as f64 / 2.0 {
            return bad("too many steps".into());
        }
        Ok(())
    }

    /// Number of steps `N = round(t_end / dt)`.
    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }
}

/// Result of one scheme step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub next: State,
    /// Newton iterations plus any bisection iterations.
    pub iterations: usize,
    /// `|R(x1)| dt^2/2`: the residual expressed as a position defect.
    /// At most `newton_tol * max(1, |x1|)` on success.
    pub final_residual: f64,
    /// The residual derivative was non-positive somewhere on the bracket,
    /// so the root may not be unique; the root nearest the predictor was kept.
    pub multi_root_suspected: bool,
}

/// Residual of the second scheme equation after eliminating `y1`:
///
/// `R = 2(x1 - x0)/dt^2 - 2 y0/dt + G(x1, x0) + (mu/dt)(x1 - x0)`.
pub fn sp_residual(params: &DuffingParams, dt: f64, prev: State, x_next: f64) -> Result<f64> {
    let dx = x_next - prev.x;
    let r = 2.0 * dx / (dt * dt) - 2.0 * prev.y / dt
        + discrete_gradient(params, x_next, prev.x)?
        + params.mu() / dt * dx;
    finite(r, "scheme residual")
}

/// `dR/dx1 = 2/dt^2 + mu/dt + alpha/(p+1) sum_{l<p} (p-l) x1^(p-l-1) x0^l`.
pub fn sp_residual_derivative(
    params: &DuffingParams,
    dt: f64,
    prev: State,
    x_next: f64,
) -> Result<f64> {
    let d = 2.0 / (dt * dt)
        + params.mu() / dt
        + params.alpha() / f64::from(params.p() + 1) * power_sum_da(params.p(), x_next, prev.x);
    finite(d, "scheme residual derivative")
}

#[inline]
fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(what))
    }
}

/// `R * dt^2 / 2`, evaluated directly so its rounding floor is a few ulps of
/// `x1` rather than `ulp(x1) * 2/dt^2`.
struct ScaledResidual {
    x0: f64,
    y0_dt: f64,
    damping: f64,
    force_scale: f64,
    p: u32,
}

impl ScaledResidual {
    fn new(params: &DuffingParams, dt: f64, prev: State) -> Self {
        ScaledResidual {
            x0: prev.x,
            y0_dt: prev.y * dt,
            damping: 1.0 + 0.5 * params.mu() * dt,
            force_scale: 0.5 * dt * dt * params.alpha() / f64::from(params.p() + 1),
            p: params.p(),
        }
    }

    fn value(&self, x: f64) -> f64 {
        (x - self.x0) * self.damping - self.y0_dt + self.force_scale * power_sum(self.p, x, self.x0)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.damping + self.force_scale * power_sum_da(self.p, x, self.x0)
    }
}

/// Advance one step of the discrete-gradient scheme.
///
/// Newton starts from the explicit Euler predictor `x0 + dt y0`. If it
/// stalls or produces a non-finite iterate the root is bracketed by outward
/// expansion from the predictor and bisected.
pub fn sp_step(params: &DuffingParams, config: &SchemeConfig, prev: State) -> Result<StepOutcome> {
    prev.ensure_finite()?;
    let dt = config.dt;
    let tol = config.newton_tol;
    let res = ScaledResidual::new(params, dt, prev);
    let predictor = prev.x + dt * prev.y;
    let scale = |x: f64| tol * x.abs().max(1.0);

    let mut x = predictor;
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..config.max_newton_iters {
        iterations += 1;
        let r = res.value(x);
        let d = res.derivative(x);
        if !(r.is_finite() && d.is_finite()) || d <= 0.0 {
            break;
        }
        let delta = r / d;
        let x_new = x - delta;
        if !x_new.is_finite() {
            break;
        }
        x = x_new;
        let r_new = res.value(x);
        if r_new.abs() <= scale(x) && delta.abs() <= scale(x) {
            converged = true;
            break;
        }
    }

    let mut multi_root_suspected = false;
    if !converged {
        let (root, used, suspect) = bisect(&res, predictor, scale)?;
        x = root;
        iterations += used;
        multi_root_suspected = suspect;
    }

    let final_residual = res.value(x).abs();
    if !final_residual.is_finite() {
        return Err(Error::Overflow("scheme residual"));
    }
    if final_residual > scale(x) {
        return Err(Error::NonConvergence {
            last_iterate: x,
            residual: final_residual,
            iterations,
        });
    }
    if res.derivative(x) <= 0.0 {
        multi_root_suspected = true;
    }

    let y = 2.0 * (x - prev.x) / dt - prev.y;
    let next = State::new(x, y);
    if !next.is_finite() {
        return Err(Error::Overflow("scheme step"));
    }
    Ok(StepOutcome {
        next,
        iterations,
        final_residual,
        multi_root_suspected,
    })
}

/// Bracket the root by doubling outward from `start`, then bisect.
/// Returns the root, the iterations spent and whether the derivative was
/// seen to be non-positive on the bracket.
fn bisect(
    res: &ScaledResidual,
    start: f64,
    scale: impl Fn(f64) -> f64,
) -> Result<(f64, usize, bool)> {
    let mut width = start.abs().max(1.0);
    let (mut lo, mut hi);
    let mut expansions = 0;
    loop {
        lo = start - width;
        hi = start + width;
        let (r_lo, r_hi) = (res.value(lo), res.value(hi));
        if !(r_lo.is_finite() && r_hi.is_finite()) {
            return Err(Error::Overflow("root bracket"));
        }
        if r_lo <= 0.0 && r_hi >= 0.0 {
            break;
        }
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS {
            return Err(Error::NonConvergence {
                last_iterate: start,
                residual: res.value(start).abs(),
                iterations: expansions,
            });
        }
        width *= 2.0;
    }
    let suspect = [lo, hi].iter().any(|&x| res.derivative(x) <= 0.0);

    let mut used = 0;
    let mut mid = 0.5 * (lo + hi);
    while used < MAX_BISECTION_ITERS {
        used += 1;
        mid = 0.5 * (lo + hi);
        let r = res.value(mid);
        if r.abs() <= scale(mid) && (hi - lo) <= 2.0 * scale(mid) {
            break;
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if r > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((mid, used + expansions, suspect))
}

/// One stored point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: State,
    /// `(mu/4) sum (y^(l+1) + y^(l))^2 dt` over every step up to this sample.
    pub dissipation: f64,
    /// Iterations spent on the step that produced this sample.
    pub newton_iters: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: DuffingParams,
    pub config: SchemeConfig,
    /// Every `record_stride`-th step, plus the final step.
    pub samples: Vec<Sample>,
    /// Steps whose solve reported a possible multi-root regime.
    pub multi_root_steps: usize,
}

impl Trajectory {
    pub fn initial(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory always holds the initial sample")
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }
}

/// Integrate from `init` over `N = round(t_end/dt)` steps.
///
/// The dissipation sum is accumulated at every step, independent of the
/// record stride. Times are `n * dt`.
pub fn integrate(params: &DuffingParams, config: &SchemeConfig, init: State) -> Result<Trajectory> {
    config.validate()?;
    init.ensure_finite()?;
    let steps = config.steps();
    let stride = config.record_stride;
    let quarter_mu_dt = 0.25 * params.mu() * config.dt;

    let mut samples = Vec::with_capacity(steps / stride + 2);
    samples.push(Sample {
        t: 0.0,
        state: init,
        dissipation: 0.0,
        newton_iters: 0,
    });
    let mut state = init;
    let mut dissipation = 0.0;
    let mut multi_root_steps = 0;
    for n in 0..steps {
        let outcome = sp_step(params, config, state).map_err(|e| Error::StepFailed {
            step: n,
            time: n as f64 * config.dt,
            source: Box::new(e),
        })?;
        let ysum = outcome.next.y + state.y;
        dissipation += quarter_mu_dt * ysum * ysum;
        if outcome.multi_root_suspected {
            multi_root_steps += 1;
        }
        state = outcome.next;
        let done = n + 1;
        if done % stride == 0 || done == steps {
            samples.push(Sample {
                t: done as f64 * config.dt,
                state,
                dissipation,
                newton_iters: outcome.iterations,
            });
        }
    }
    Ok(Trajectory {
        params: *params,
        config: *config,
        samples,
        multi_root_steps,
    })
}

/// Classical four-stage Runge-Kutta step of the first-order system.
pub fn rk4_step(params: &DuffingParams, dt: f64, prev: State) -> Result<State> {
    let shift = |s: State, k: (f64, f64), h: f64| State::new(s.x + h * k.0, s.y + h * k.1);
    let k1 = vector_field(params, prev)?;
    let k2 = vector_field(params, shift(prev, k1, 0.5 * dt))?;
    let k3 = vector_field(params, shift(prev, k2, 0.5 * dt))?;
    let k4 = vector_field(params, shift(prev, k3, dt))?;
    let next = State::new(
        prev.x + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        prev.y + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    );
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::Overflow("rk4 step"))
    }
}

/// `steps + 1` states of fixed-step RK4 starting at `init`.
pub fn rk4_trajectory(
    params: &DuffingParams,
    dt: f64,
    steps: usize,
    init: State,
) -> Result<Vec<State>> {
    init.ensure_finite()?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(init);
    let mut s = init;
    for _ in 0..steps {
        s = rk4_step(params, dt, s)?;
        out.push(s);
    }
    Ok(out)
}
