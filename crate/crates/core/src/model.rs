//! Parameters, states, the continuous vector field, the discrete map and its
//! fixed points.

use crate::{Error, Result};

/// Dimensional parameters of the original plankton model.
///
/// `alpha` does not survive the reduction to [`Params`]; it only rescales the
/// zooplankton density (see [`RawParams::rescale_state`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    /// Intrinsic growth rate of phytoplankton (1/time).
    pub b: f64,
    /// Carrying capacity (biomass).
    pub k: f64,
    /// Consumption rate.
    pub alpha: f64,
    /// Conversion efficiency of zooplankton.
    pub beta: f64,
    /// Zooplankton mortality (1/time).
    pub r_mort: f64,
    /// Toxin release rate.
    pub theta: f64,
}

impl RawParams {
    fn validate(&self) -> Result<()> {
        let fields = [
            ("b", self.b),
            ("k", self.k),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("r_mort", self.r_mort),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidRaw { name, value });
            }
        }
        // a toxin-free population (theta = 0) is allowed
        if !(self.theta.is_finite() && self.theta >= 0.0) {
            return Err(Error::InvalidRaw {
                name: "theta",
                value: self.theta,
            });
        }
        Ok(())
    }

    /// Maps dimensional densities `(P, Z)` to nondimensional `(x, y)`.
    pub fn rescale_state(&self, phyto: f64, zoo: f64) -> State {
        State::new(phyto / self.k, self.alpha * zoo / self.b)
    }

    /// Maps dimensional time to nondimensional time.
    pub fn rescale_time(&self, t: f64) -> f64 {
        self.b * t
    }
}

/// Reduces the dimensional parameters to `(r, γ) = (r_mort / b, (β − θ) k / b)`.
pub fn nondimensionalize(raw: &RawParams) -> Result<Params> {
    raw.validate()?;
    if raw.beta <= raw.theta {
        return Err(Error::NonPositiveGamma {
            beta: raw.beta,
            theta: raw.theta,
        });
    }
    Params::new(raw.r_mort / raw.b, (raw.beta - raw.theta) * raw.k / raw.b)
}

/// Nondimensional parameter pair `(r, γ)`, both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    r: f64,
    gamma: f64,
}

impl Params {
    pub fn new(r: f64, gamma: f64) -> Result<Self> {
        if r.is_finite() && gamma.is_finite() && r > 0.0 && gamma > 0.0 {
            Ok(Self { r, gamma })
        } else {
            Err(Error::InvalidParams { r, gamma })
        }
    }

    /// Zooplankton mortality.
    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Net conversion rate.
    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Whether the positive fixed point `E2` exists (`γ > r`).
    pub fn has_positive_fixed_point(&self) -> bool {
        self.gamma > self.r
    }
}

/// A point in the phase plane. Coordinates may be negative: the map can
/// leave the positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Max-norm distance.
    pub fn dist_inf(&self, other: &State) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    /// Euclidean distance.
    pub fn dist(&self, other: &State) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// `x ≥ −tol` and `y ≥ −tol`.
    pub fn in_closed_quadrant(&self, tol: f64) -> bool {
        self.x >= -tol && self.y >= -tol
    }
}

impl From<(f64, f64)> for State {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Right-hand side of the continuous system.
#[inline]
pub fn vector_field(s: State, p: &Params) -> (f64, f64) {
    let State { x, y } = s;
    (x * (1.0 - x) - x * y, p.gamma * x * y - p.r * y)
}

/// One step of the discrete map. Out-of-quadrant results are returned as is.
#[inline]
pub fn apply_map(s: State, p: &Params) -> State {
    let State { x, y } = s;
    State {
        x: x * (2.0 - x) - x * y,
        y: p.gamma * x * y + (1.0 - p.r) * y,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedPointLabel {
    /// Extinction, `(0, 0)`.
    E0,
    /// Phytoplankton only, `(1, 0)`.
    E1,
    /// Coexistence, `(r/γ, (γ − r)/γ)`.
    E2,
}

impl std::fmt::Display for FixedPointLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FixedPointLabel::E0 => "E0",
            FixedPointLabel::E1 => "E1",
            FixedPointLabel::E2 => "E2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub label: FixedPointLabel,
    pub state: State,
}

/// The positive fixed point, if `γ > r`.
pub fn positive_fixed_point(p: &Params) -> Option<State> {
    p.has_positive_fixed_point()
        .then(|| State::new(p.r / p.gamma, (p.gamma - p.r) / p.gamma))
}

/// Fixed points of the map (equivalently, equilibria of the flow).
///
/// `E0` and `E1` always; `E2` only when `γ > r`. At `γ = r` the coexistence
/// point merges into `E1` and is not listed separately.
pub fn fixed_points(p: &Params) -> Vec<FixedPoint> {
    let mut out = vec![
        FixedPoint {
            label: FixedPointLabel::E0,
            state: State::new(0.0, 0.0),
        },
        FixedPoint {
            label: FixedPointLabel::E1,
            state: State::new(1.0, 0.0),
        },
    ];
    if let Some(state) = positive_fixed_point(p) {
        out.push(FixedPoint {
            label: FixedPointLabel::E2,
            state,
        });
    }
    out
}
