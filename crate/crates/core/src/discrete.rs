//! Orbits of the discrete map, invariant regions, LaSalle difference
//! functions and convergence detection.

use rayon::prelude::*;

use crate::model::{apply_map, positive_fixed_point, Params, State};
use crate::{Error, Result};

/// Coordinate slack for region membership in invariance checks.
pub const REGION_TOL: f64 = 1e-12;

/// Tolerance on `ΔL ≤ 0` in grid checks.
pub const DELTA_TOL: f64 = 1e-12;

pub const DEFAULT_CONVERGE_TOL: f64 = 1e-8;
pub const DEFAULT_CONVERGE_WINDOW: usize = 50;

/// Dense orbit: `states[k + 1] = apply_map(states[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub states: Vec<State>,
    /// First step at which the orbit left `x, y ≥ −1e-12`, if any.
    pub first_escape: Option<usize>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> State {
        *self.states.last().expect("orbit holds at least the seed")
    }
}

/// Iterates the map `n` times, returning `n + 1` states starting at `s0`.
pub fn iterate(s0: State, p: &Params, n: usize) -> Orbit {
    let mut states = Vec::with_capacity(n + 1);
    let mut first_escape = (!s0.in_closed_quadrant(REGION_TOL)).then_some(0);
    let mut s = s0;
    states.push(s);
    for k in 1..=n {
        s = apply_map(s, p);
        if first_escape.is_none() && !s.in_closed_quadrant(REGION_TOL) {
            first_escape = Some(k);
        }
        states.push(s);
    }
    Orbit {
        states,
        first_escape,
    }
}

/// Iterates without storing the orbit.
pub fn iterate_final(s0: State, p: &Params, n: usize) -> State {
    (0..n).fold(s0, |s, _| apply_map(s, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionVerdict {
    pub inside: bool,
    /// The first violated inequality when outside.
    pub binding_constraint: Option<&'static str>,
}

impl RegionVerdict {
    const INSIDE: RegionVerdict = RegionVerdict {
        inside: true,
        binding_constraint: None,
    };

    fn outside(constraint: &'static str) -> Self {
        RegionVerdict {
            inside: false,
            binding_constraint: Some(constraint),
        }
    }

    fn check(constraints: &[(&'static str, bool)]) -> Self {
        constraints
            .iter()
            .find(|(_, ok)| !ok)
            .map_or(Self::INSIDE, |(name, _)| Self::outside(name))
    }
}

/// `X = {0 ≤ x ≤ 2, y = 0}`.
pub fn in_x(s: State) -> RegionVerdict {
    RegionVerdict::check(&[
        ("y=0", s.y == 0.0),
        ("x>=0", s.x >= 0.0),
        ("x<=2", s.x <= 2.0),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YVerdict {
    pub region: RegionVerdict,
    /// `r ≤ 1`, needed for `Y` to be invariant.
    pub invariance_condition: bool,
}

/// `Y = {x = 0, y ≥ 0}`.
pub fn in_y(s: State, p: &Params) -> YVerdict {
    YVerdict {
        region: RegionVerdict::check(&[("x=0", s.x == 0.0), ("y>=0", s.y >= 0.0)]),
        invariance_condition: p.r() <= 1.0,
    }
}

/// `M = {0 ≤ x ≤ 1, 0 ≤ y ≤ 2 − x}`.
pub fn in_m(s: State) -> RegionVerdict {
    in_m_tol(s, 0.0)
}

/// [`in_m`] with every inequality relaxed by `tol`.
pub fn in_m_tol(s: State, tol: f64) -> RegionVerdict {
    RegionVerdict::check(&[
        ("x>=0", s.x >= -tol),
        ("x<=1", s.x <= 1.0 + tol),
        ("y>=0", s.y >= -tol),
        ("y<=2-x", s.y <= 2.0 - s.x + tol),
    ])
}

/// Amount by which `s` lies outside `M` (0 inside).
pub fn m_violation(s: State) -> f64 {
    [-s.x, s.x - 1.0, -s.y, s.y - (2.0 - s.x)]
        .into_iter()
        .fold(0.0, f64::max)
}

/// `3 − 2√2`, where the two pieces of `S` meet.
pub fn s_split() -> f64 {
    3.0 - 2.0 * 2f64.sqrt()
}

/// Membership in `S = S1 ∪ S2` from the explicit bounds on `γ`.
pub fn s_by_bounds(p: &Params) -> RegionVerdict {
    let (r, g) = (p.r(), p.gamma());
    let upper = (1.0 + r.sqrt()).powi(2) / 2.0;
    if r <= s_split() {
        let lower = (1.0 - r.sqrt()).powi(2) / 2.0;
        RegionVerdict::check(&[
            ("gamma>=(1-sqrt(r))^2/2", g >= lower),
            ("gamma<=(1+sqrt(r))^2/2", g <= upper),
        ])
    } else {
        RegionVerdict::check(&[
            ("r<1", r < 1.0),
            ("gamma>r", g > r),
            ("gamma<=(1+sqrt(r))^2/2", g <= upper),
        ])
    }
}

/// Membership in `S` from `4γ² − 4γr − 4γ + (r − 1)² ≤ 0` and `γ > r`.
pub fn s_by_discriminant(p: &Params) -> RegionVerdict {
    let (r, g) = (p.r(), p.gamma());
    let disc = 4.0 * g * g - 4.0 * g * r - 4.0 * g + (r - 1.0).powi(2);
    RegionVerdict::check(&[("discriminant<=0", disc <= 0.0), ("gamma>r", g > r)])
}

/// Parameter set `S` on which `M` is invariant and `E2` attracts all of `M`.
pub fn in_param_set_s(p: &Params) -> RegionVerdict {
    s_by_bounds(p)
}

/// Smallest admissible constant `c = 1/(r − γ)` for [`lasalle_l1`].
pub fn min_lasalle_constant(p: &Params) -> Result<f64> {
    if p.gamma() >= p.r() {
        return Err(Error::PreconditionViolated(format!(
            "linear LaSalle function requires gamma < r (r = {}, gamma = {})",
            p.r(),
            p.gamma()
        )));
    }
    Ok(1.0 / (p.r() - p.gamma()))
}

fn check_l1(p: &Params, c: f64) -> Result<()> {
    let c_min = min_lasalle_constant(p)?;
    if c.is_nan() || c < c_min * (1.0 - 1e-12) {
        return Err(Error::PreconditionViolated(format!(
            "c = {c} is below 1/(r - gamma) = {c_min}"
        )));
    }
    Ok(())
}

/// `L = 1 − x + cy`, for `γ < r` and `c ≥ 1/(r − γ)`.
pub fn lasalle_l1(s: State, p: &Params, c: f64) -> Result<f64> {
    check_l1(p, c)?;
    Ok(1.0 - s.x + c * s.y)
}

/// `ΔL = L(V(s)) − L(s) = x(x − 1) + y(cγx + x − cr)`.
pub fn delta_l1(s: State, p: &Params, c: f64) -> Result<f64> {
    check_l1(p, c)?;
    let State { x, y } = s;
    Ok(x * (x - 1.0) + y * (c * p.gamma() * x + x - c * p.r()))
}

/// At `γ = r` no finite `c` exists; the zooplankton coordinate is then
/// checked directly: `y' ≤ y` on `M`, up to [`REGION_TOL`].
pub fn zooplankton_nonincreasing(s: State, p: &Params) -> Result<bool> {
    if p.gamma() > p.r() {
        return Err(Error::PreconditionViolated(format!(
            "requires gamma <= r (r = {}, gamma = {})",
            p.r(),
            p.gamma()
        )));
    }
    Ok(apply_map(s, p).y <= s.y + REGION_TOL)
}

fn l2_domain(s: State, p: &Params) -> Result<f64> {
    if s.y <= 0.0 {
        return Err(Error::DomainError(format!("y must be > 0, got {}", s.y)));
    }
    let growth = p.gamma() * s.x + 1.0 - p.r();
    if growth <= 0.0 {
        return Err(Error::DomainError(format!(
            "gamma x + 1 - r must be > 0, got {growth}"
        )));
    }
    Ok(growth)
}

/// Piecewise `L = ln y` for `x ≤ r/γ`, `−ln y` otherwise.
pub fn lasalle_l2(s: State, p: &Params) -> Result<f64> {
    if s.y <= 0.0 {
        return Err(Error::DomainError(format!("y must be > 0, got {}", s.y)));
    }
    Ok(if s.x <= p.r() / p.gamma() {
        s.y.ln()
    } else {
        -s.y.ln()
    })
}

/// `ΔL = ln(γx + 1 − r)` for `x ≤ r/γ`, `−ln(γx + 1 − r)` otherwise.
///
/// This is the difference `L(V(s)) − L(s)` evaluated on the branch of `s`;
/// it equals the literal difference whenever `s` and `V(s)` share a branch.
pub fn delta_l2(s: State, p: &Params) -> Result<f64> {
    let growth = l2_domain(s, p)?;
    Ok(if s.x <= p.r() / p.gamma() {
        growth.ln()
    } else {
        -growth.ln()
    })
}

/// Which LaSalle function to check on `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaSalleFunction {
    /// `1 − x + cy` with the minimal `c`, for `γ < r`.
    Linear,
    /// The piecewise log function, for `(r, γ) ∈ S`.
    PiecewiseLog,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCheck {
    pub points: usize,
    pub max_violation: f64,
    pub passed_fraction: f64,
}

impl GridCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_violation <= tol && self.passed_fraction == 1.0
    }
}

/// `n × n` grid over `M`: `x = i/(n−1)`, `y = (2 − x) j/(n−1)`.
pub fn m_grid(n: usize) -> Vec<State> {
    let d = (n.max(2) - 1) as f64;
    (0..n)
        .flat_map(|i| {
            let x = i as f64 / d;
            (0..n).map(move |j| State::new(x, (2.0 - x) * j as f64 / d))
        })
        .collect()
}

fn reduce(values: impl IntoIterator<Item = Option<f64>>, tol: f64) -> GridCheck {
    let (mut points, mut ok, mut worst) = (0usize, 0usize, 0.0f64);
    for v in values.into_iter().flatten() {
        points += 1;
        if v <= tol {
            ok += 1;
        }
        worst = worst.max(v.max(0.0));
    }
    GridCheck {
        points,
        max_violation: worst,
        passed_fraction: if points == 0 {
            1.0
        } else {
            ok as f64 / points as f64
        },
    }
}

fn require_unit_mortality(p: &Params) -> Result<()> {
    if p.r() > 1.0 {
        return Err(Error::PreconditionViolated(format!(
            "requires 0 < r <= 1, got r = {}",
            p.r()
        )));
    }
    Ok(())
}

/// `ΔL ≤ 0` over an `n × n` grid on `M`. Points outside the function's domain
/// (`y = 0` for the log function) are skipped.
pub fn verify_lasalle(p: &Params, which: LaSalleFunction, n: usize) -> Result<GridCheck> {
    require_unit_mortality(p)?;
    let grid = m_grid(n);
    let values: Vec<Option<f64>> = match which {
        // no finite c exists at γ = r; fall back to y' − y
        LaSalleFunction::Linear if p.gamma() == p.r() => grid
            .par_iter()
            .map(|&s| Some(apply_map(s, p).y - s.y))
            .collect(),
        LaSalleFunction::Linear => {
            let c = min_lasalle_constant(p)?;
            grid.par_iter().map(|&s| delta_l1(s, p, c).ok()).collect()
        }
        LaSalleFunction::PiecewiseLog => {
            if !in_param_set_s(p).inside {
                return Err(Error::PreconditionViolated(format!(
                    "(r, gamma) = ({}, {}) is not in S",
                    p.r(),
                    p.gamma()
                )));
            }
            grid.par_iter().map(|&s| delta_l2(s, p).ok()).collect()
        }
    };
    Ok(reduce(values, DELTA_TOL))
}

/// Whether the parameters satisfy the hypotheses under which `M` is invariant.
pub fn m_invariance_regime(p: &Params) -> bool {
    p.r() <= 1.0 && (p.gamma() <= p.r() || in_param_set_s(p).inside)
}

/// Checks `V(M) ⊂ M` on an `n × n` grid.
pub fn verify_m_invariance(p: &Params, n: usize) -> Result<GridCheck> {
    if !m_invariance_regime(p) {
        return Err(Error::PreconditionViolated(format!(
            "M-invariance requires 0 < r <= 1 and (gamma <= r or (r, gamma) in S); got ({}, {})",
            p.r(),
            p.gamma()
        )));
    }
    let values: Vec<Option<f64>> = m_grid(n)
        .par_iter()
        .map(|&s| Some(m_violation(apply_map(s, p))))
        .collect();
    Ok(reduce(values, REGION_TOL))
}

/// Logistic restriction of the map to `X`: `f(x) = x(2 − x)`.
pub fn restricted_x_map(x: f64) -> f64 {
    x * (2.0 - x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedXReport {
    pub fixed_points: [f64; 2],
    /// `f'(0)` and `f'(1)`.
    pub derivatives: [f64; 2],
    /// Discriminant of `x² − 3x + 3`, whose roots would be period-2 points.
    pub period_two_discriminant: f64,
    pub seeds: usize,
    pub converged: usize,
    /// Most steps any seed needed to get within `1e-9` of 1.
    pub max_steps: usize,
}

impl RestrictedXReport {
    pub fn globally_attracting(&self) -> bool {
        self.converged == self.seeds && self.period_two_discriminant < 0.0
    }
}

/// Dynamics of the map on `X`: fixed points `{0, 1}`, their derivatives,
/// absence of period-2 points and convergence of 100 seeds in `(0, 2)`.
pub fn restricted_x_analysis() -> RestrictedXReport {
    const SEEDS: usize = 100;
    const STEPS: usize = 1000;
    let fixed_points = [0.0, 1.0];
    debug_assert!(fixed_points.iter().all(|&x| restricted_x_map(x) == x));
    let derivative = |x: f64| 2.0 - 2.0 * x;

    let mut converged = 0;
    let mut max_steps = 0;
    for i in 1..=SEEDS {
        let mut x = 2.0 * i as f64 / (SEEDS + 1) as f64;
        for k in 0..=STEPS {
            if (x - 1.0).abs() < 1e-9 {
                converged += 1;
                max_steps = max_steps.max(k);
                break;
            }
            x = restricted_x_map(x);
        }
    }

    RestrictedXReport {
        fixed_points,
        derivatives: [derivative(0.0), derivative(1.0)],
        period_two_discriminant: 3f64.powi(2) - 4.0 * 3.0,
        seeds: SEEDS,
        converged,
        max_steps,
    }
}

/// Returns the mean of the last `window` states when every consecutive step
/// inside that window moved less than `tol`.
pub fn converge_detect(o: &Orbit, tol: f64, window: usize) -> Option<State> {
    if window < 2 || tol.is_nan() || tol <= 0.0 || o.len() < window {
        return None;
    }
    let tail = &o.states[o.len() - window..];
    if !tail.windows(2).all(|w| w[0].dist(&w[1]) < tol) {
        return None;
    }
    let n = tail.len() as f64;
    let (sx, sy) = tail.iter().fold((0.0, 0.0), |a, s| (a.0 + s.x, a.1 + s.y));
    Some(State::new(sx / n, sy / n))
}

/// The limit predicted for seeds in `M` with `x > 0`: `E1` when `γ ≤ r`, `E2`
/// when `(r, γ) ∈ S`, otherwise none.
pub fn predicted_limit(p: &Params) -> Option<State> {
    if p.r() > 1.0 {
        None
    } else if p.gamma() <= p.r() {
        Some(State::new(1.0, 0.0))
    } else if in_param_set_s(p).inside {
        positive_fixed_point(p)
    } else {
        None
    }
}
