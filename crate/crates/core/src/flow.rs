//! Fixed-step integration of the continuous system and numerical checks of
//! its Lyapunov functions.

use rayon::prelude::*;

use crate::model::{positive_fixed_point, vector_field, Params, State};
use crate::{Error, Result};

pub const DEFAULT_DT: f64 = 1e-3;

/// Slack used for the closed-quadrant check along trajectories.
pub const QUADRANT_EPS: f64 = 1e-12;

/// Tolerance on `dL/dt ≤ 0` in grid verification.
pub const DOT_TOL: f64 = 1e-12;

/// Samples closer than this to the target equilibrium are skipped.
pub const EXCLUSION_RADIUS: f64 = 1e-6;

/// Step used for the central-difference check of `dL/dt`.
pub const DERIVATIVE_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// Set when some state left `x, y ≥ −1e-12`.
    pub left_quadrant: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn final_state(&self) -> State {
        *self
            .states
            .last()
            .expect("trajectory holds at least the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory holds at least the initial time")
    }
}

fn rk4_step(s: State, p: &Params, h: f64) -> State {
    let f = |s: State| vector_field(s, p);
    let shift = |s: State, k: (f64, f64), c: f64| State::new(s.x + c * k.0, s.y + c * k.1);
    let k1 = f(s);
    let k2 = f(shift(s, k1, 0.5 * h));
    let k3 = f(shift(s, k2, 0.5 * h));
    let k4 = f(shift(s, k3, h));
    State::new(
        s.x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        s.y + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

/// Integrates the continuous system with the classical fourth-order
/// Runge–Kutta scheme on a fixed step.
///
/// Every step is recorded. The last step is shortened so that the final
/// time equals `t_end` exactly.
pub fn integrate(s0: State, p: &Params, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_end must be > 0, got {t_end}"
        )));
    }
    if !(dt.is_finite() && dt > 0.0 && dt <= t_end) {
        return Err(Error::InvalidArgument(format!(
            "dt must satisfy 0 < dt <= t_end, got dt = {dt}, t_end = {t_end}"
        )));
    }
    if !(s0.is_finite() && s0.in_closed_quadrant(0.0)) {
        return Err(Error::InvalidArgument(format!(
            "initial state ({}, {}) is not in the closed positive quadrant",
            s0.x, s0.y
        )));
    }

    let ratio = t_end / dt;
    let steps = if (ratio - ratio.round()).abs() < 1e-9 {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(s0);
    let mut left_quadrant = false;
    let mut s = s0;
    for k in 1..=steps {
        let t_prev = (k - 1) as f64 * dt;
        let t = if k == steps { t_end } else { k as f64 * dt };
        s = rk4_step(s, p, t - t_prev);
        left_quadrant |= !s.in_closed_quadrant(QUADRANT_EPS);
        times.push(t);
        states.push(s);
    }
    Ok(Trajectory {
        times,
        states,
        left_quadrant,
    })
}

/// Final state only, without recording the trajectory.
pub fn integrate_final(s0: State, p: &Params, t_end: f64, dt: f64) -> Result<State> {
    integrate(s0, p, t_end, dt).map(|t| t.final_state())
}

/// `x − ln x + y/γ − 1`, the Lyapunov function for `E1 = (1, 0)`.
pub fn lyap1_value(s: State, p: &Params) -> Result<f64> {
    if s.x <= 0.0 {
        return Err(Error::DomainError(format!("x must be > 0, got {}", s.x)));
    }
    Ok(s.x - s.x.ln() + s.y / p.gamma() - 1.0)
}

/// Derivative of [`lyap1_value`] along the flow: `−(1 − x)² + y(1 − r/γ)`.
pub fn lyap1_dot(s: State, p: &Params) -> Result<f64> {
    if s.x <= 0.0 {
        return Err(Error::DomainError(format!("x must be > 0, got {}", s.x)));
    }
    Ok(-(1.0 - s.x).powi(2) + s.y * (1.0 - p.r() / p.gamma()))
}

/// `a ln(a/b) + b − a`, nonnegative for `a, b > 0`.
fn log_gap(a: f64, b: f64) -> f64 {
    a * (a / b).ln() + b - a
}

fn e2_domain(s: State, p: &Params) -> Result<State> {
    if s.x <= 0.0 || s.y <= 0.0 {
        return Err(Error::DomainError(format!(
            "x and y must be > 0, got ({}, {})",
            s.x, s.y
        )));
    }
    positive_fixed_point(p).ok_or_else(|| {
        Error::DomainError(format!(
            "gamma must exceed r (r = {}, gamma = {})",
            p.r(),
            p.gamma()
        ))
    })
}

/// Lyapunov function for the coexistence equilibrium `E2 = (x̂, ŷ)`:
/// `H(x̂, ŷ) − H(x, y)` with `H(x, y) = x̂ ln x − x + (ŷ ln y − y)/γ`.
///
/// Evaluated in the equivalent form `u(x̂, x) + u(ŷ, y)/γ`,
/// `u(a, b) = a ln(a/b) + b − a`, which avoids cancellation near `E2`.
pub fn lyap2_value(s: State, p: &Params) -> Result<f64> {
    let e2 = e2_domain(s, p)?;
    Ok(log_gap(e2.x, s.x) + log_gap(e2.y, s.y) / p.gamma())
}

/// Derivative of [`lyap2_value`] along the flow: `−(x − x̂)²`.
pub fn lyap2_dot(s: State, p: &Params) -> Result<f64> {
    let e2 = e2_domain(s, p)?;
    Ok(-(s.x - e2.x).powi(2))
}

/// Which Lyapunov construction to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LyapunovFunction {
    /// Global stability of `E1` when `0 < γ ≤ r`.
    PreyOnly,
    /// Global stability of `E2` when `γ > r`.
    Coexistence,
}

impl LyapunovFunction {
    pub fn value(&self, s: State, p: &Params) -> Result<f64> {
        match self {
            LyapunovFunction::PreyOnly => lyap1_value(s, p),
            LyapunovFunction::Coexistence => lyap2_value(s, p),
        }
    }

    pub fn dot(&self, s: State, p: &Params) -> Result<f64> {
        match self {
            LyapunovFunction::PreyOnly => lyap1_dot(s, p),
            LyapunovFunction::Coexistence => lyap2_dot(s, p),
        }
    }

    /// The equilibrium the function certifies, after checking the regime.
    pub fn target(&self, p: &Params) -> Result<State> {
        match self {
            LyapunovFunction::PreyOnly if p.gamma() <= p.r() => Ok(State::new(1.0, 0.0)),
            LyapunovFunction::Coexistence if p.gamma() > p.r() => {
                Ok(positive_fixed_point(p).expect("gamma > r"))
            }
            LyapunovFunction::PreyOnly => Err(Error::PreconditionViolated(format!(
                "prey-only Lyapunov function requires 0 < gamma <= r (r = {}, gamma = {})",
                p.r(),
                p.gamma()
            ))),
            LyapunovFunction::Coexistence => Err(Error::PreconditionViolated(format!(
                "coexistence Lyapunov function requires gamma > r (r = {}, gamma = {})",
                p.r(),
                p.gamma()
            ))),
        }
    }

    /// `|dL/dt − (L(s + h f) − L(s − h f)) / 2h|`.
    pub fn derivative_mismatch(&self, s: State, p: &Params, h: f64) -> Result<f64> {
        let (fx, fy) = vector_field(s, p);
        let fwd = self.value(State::new(s.x + h * fx, s.y + h * fy), p)?;
        let bwd = self.value(State::new(s.x - h * fx, s.y - h * fy), p)?;
        Ok((self.dot(s, p)? - (fwd - bwd) / (2.0 * h)).abs())
    }

    /// Checks that `L` grows monotonically along rays through the open
    /// quadrant at radii 10, 100, 1000.
    pub fn radially_unbounded(&self, p: &Params) -> Result<bool> {
        let radii = [10.0, 100.0, 1000.0];
        for angle in [
            std::f64::consts::PI / 12.0,
            std::f64::consts::PI / 4.0,
            5.0 * std::f64::consts::PI / 12.0,
        ] {
            let mut prev = f64::NEG_INFINITY;
            for r in radii {
                let v = self.value(State::new(r * angle.cos(), r * angle.sin()), p)?;
                if v <= prev {
                    return Ok(false);
                }
                prev = v;
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovReport {
    pub grid_points: usize,
    /// Largest of `max(dL/dt − 0, 0)` and `max(−L, 0)` over the grid.
    pub max_violation: f64,
    /// Fraction of samples with `L > 0` and `dL/dt ≤ 1e-12`.
    pub monotone_fraction: f64,
    /// Largest gap between the analytic `dL/dt` and the chain-rule difference.
    pub max_derivative_mismatch: f64,
    pub radially_unbounded: bool,
}

impl LyapunovReport {
    pub fn passed(&self) -> bool {
        self.max_violation <= DOT_TOL && self.monotone_fraction == 1.0 && self.radially_unbounded
    }
}

/// Checks a Lyapunov function on the uniform grid `{2i/n}² ⊂ (0, 2]²`.
pub fn verify_lyapunov(p: &Params, which: LyapunovFunction, grid: usize) -> Result<LyapunovReport> {
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be >= 1".into()));
    }
    let target = which.target(p)?;
    let step = 2.0 / grid as f64;

    // (count, passing, max_violation, max_mismatch) per row, reduced in order
    let rows: Vec<(usize, usize, f64, f64)> = (1..=grid)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * step;
            let mut acc = (0usize, 0usize, 0.0f64, 0.0f64);
            for j in 1..=grid {
                let s = State::new(x, j as f64 * step);
                if s.dist(&target) < EXCLUSION_RADIUS {
                    continue;
                }
                let value = which.value(s, p).expect("grid lies in the open quadrant");
                let dot = which.dot(s, p).expect("grid lies in the open quadrant");
                let mismatch = which
                    .derivative_mismatch(s, p, DERIVATIVE_STEP)
                    .unwrap_or(f64::INFINITY);
                acc.0 += 1;
                if value > 0.0 && dot <= DOT_TOL {
                    acc.1 += 1;
                }
                acc.2 = acc.2.max(dot.max(0.0)).max((-value).max(0.0));
                acc.3 = acc.3.max(mismatch);
            }
            acc
        })
        .collect();

    let (count, passing, max_violation, max_mismatch) =
        rows.iter().fold((0usize, 0usize, 0.0f64, 0.0f64), |a, r| {
            (a.0 + r.0, a.1 + r.1, a.2.max(r.2), a.3.max(r.3))
        });
    Ok(LyapunovReport {
        grid_points: count,
        max_violation,
        monotone_fraction: if count == 0 {
            1.0
        } else {
            passing as f64 / count as f64
        },
        max_derivative_mismatch: max_mismatch,
        radially_unbounded: which.radially_unbounded(p)?,
    })
}
