//! Equation parameters, energies and the discrete gradient of the potential.
//!
//! Every function here is a pure evaluation. Non-finite intermediates are
//! reported as [`Error::Overflow`] instead of being propagated as NaN/inf.

use std::fmt;

use crate::error::{Error, Result};

/// The triple `(p, mu, alpha)` of `x'' + mu x' + alpha x^p = 0`.
///
/// Construct through [`DuffingParams::new`] (or [`validate_params`]); the
/// fields are private so an instance always satisfies odd `p >= 3`,
/// `mu >= 0`, `alpha > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuffingParams {
    p: u32,
    mu: f64,
    alpha: f64,
}

impl DuffingParams {
    pub fn new(p: i64, mu: f64, alpha: f64) -> Result<Self> {
        validate_params(p, mu, alpha)
    }

    /// Exponent of the restoring force.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Damping coefficient.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Restoring coefficient.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Decay exponent of the mechanical energy, `-(p+1)/(p-1)`.
    pub fn energy_decay_slope(&self) -> f64 {
        let p = f64::from(self.p);
        -(p + 1.0) / (p - 1.0)
    }

    /// Decay exponent of the solution amplitude, `-1/(p-1)`.
    pub fn solution_decay_slope(&self) -> f64 {
        -1.0 / (f64::from(self.p) - 1.0)
    }

    /// Decay exponent of the modified energy bound, `-2/(p-1)`.
    pub fn modified_energy_decay_slope(&self) -> f64 {
        -2.0 / (f64::from(self.p) - 1.0)
    }
}

impl fmt::Display for DuffingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} alpha={} mu={}", self.p, self.alpha, self.mu)
    }
}

/// A point `(x, y)` of phase space, `y = x'`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub const ORIGIN: State = State { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        State { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub(crate) fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFiniteState {
                x: self.x,
                y: self.y,
            })
        }
    }
}

pub fn validate_params(p: i64, mu: f64, alpha: f64) -> Result<DuffingParams> {
    if !mu.is_finite() {
        return Err(Error::NonFiniteParameter {
            name: "mu",
            value: mu,
        });
    }
    if !alpha.is_finite() {
        return Err(Error::NonFiniteParameter {
            name: "alpha",
            value: alpha,
        });
    }
    if p < 3 {
        return Err(Error::ExponentTooSmall(p));
    }
    if p % 2 == 0 {
        return Err(Error::EvenExponent(p));
    }
    // powi takes an i32 exponent; p + 1 must fit
    if p >= i64::from(i32::MAX) {
        return Err(Error::Overflow("exponent p"));
    }
    if mu < 0.0 {
        return Err(Error::NegativeDamping(mu));
    }
    if alpha <= 0.0 {
        return Err(Error::NonPositiveRestoring(alpha));
    }
    Ok(DuffingParams {
        p: p as u32,
        mu,
        alpha,
    })
}

#[inline]
fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(what))
    }
}

/// `alpha/(p+1) * x^(p+1)`.
pub fn potential(params: &DuffingParams, x: f64) -> Result<f64> {
    let p1 = params.p + 1;
    finite(
        params.alpha * x.powi(p1 as i32) / f64::from(p1),
        "potential",
    )
}

/// Right-hand side `(y, -alpha x^p - mu y)` of the first-order system.
pub fn vector_field(params: &DuffingParams, s: State) -> Result<(f64, f64)> {
    s.ensure_finite()?;
    let dy = -params.alpha * s.x.powi(params.p as i32) - params.mu * s.y;
    Ok((s.y, finite(dy, "vector field")?))
}

/// Mechanical energy `y^2/2 + alpha/(p+1) x^(p+1)`.
pub fn energy(params: &DuffingParams, s: State) -> Result<f64> {
    s.ensure_finite()?;
    finite(0.5 * s.y * s.y + potential(params, s.x)?, "energy")
}

/// Modified energy `y^2/2 + (mu/2) x y + (mu^2/4) x^2 + alpha/(p+1) x^(p+1)`.
///
/// Along exact solutions it satisfies `d/dt modified_energy = -dissipation_functional`.
pub fn modified_energy(params: &DuffingParams, s: State) -> Result<f64> {
    s.ensure_finite()?;
    let mu = params.mu;
    let value = 0.5 * s.y * s.y
        + 0.5 * mu * s.x * s.y
        + 0.25 * mu * mu * s.x * s.x
        + potential(params, s.x)?;
    finite(value, "modified energy")
}

/// `(mu/2) y^2 + (mu alpha/2) x^(p+1)`.
pub fn dissipation_functional(params: &DuffingParams, s: State) -> Result<f64> {
    s.ensure_finite()?;
    let mu = params.mu;
    let value = 0.5 * mu * s.y * s.y + 0.5 * mu * params.alpha * s.x.powi(params.p as i32 + 1);
    finite(value, "dissipation functional")
}

/// Sum `a^p + a^(p-1) b + ... + b^p`, Horner in `a` with the powers of `b`
/// accumulated in ascending order.
#[inline]
pub(crate) fn power_sum(p: u32, a: f64, b: f64) -> f64 {
    let mut acc = 1.0;
    let mut b_pow = 1.0;
    for _ in 0..p {
        b_pow *= b;
        acc = acc * a + b_pow;
    }
    acc
}

/// Derivative of [`power_sum`] with respect to `a`:
/// `sum_{l=0}^{p-1} (p-l) a^(p-l-1) b^l`.
#[inline]
pub(crate) fn power_sum_da(p: u32, a: f64, b: f64) -> f64 {
    // Horner in `a`; coefficient of a^(p-1-k) is (p-k) b^k
    let mut acc = f64::from(p);
    let mut b_pow = 1.0;
    for k in 1..p {
        b_pow *= b;
        acc = acc * a + f64::from(p - k) * b_pow;
    }
    acc
}

/// Discrete gradient of the potential,
/// `alpha/(p+1) * sum_{l=0}^{p} a^(p-l) b^l`.
///
/// `discrete_gradient(a, b) * (a - b) == potential(a) - potential(b)` up to
/// rounding, and `discrete_gradient(x, x) == alpha x^p`.
pub fn discrete_gradient(params: &DuffingParams, a: f64, b: f64) -> Result<f64> {
    let sum = power_sum(params.p, a, b);
    finite(
        params.alpha * sum / f64::from(params.p + 1),
        "discrete gradient",
    )
}
