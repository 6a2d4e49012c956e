//! Jacobians, 2×2 eigenvalues, root location of real quadratics relative to
//! the unit circle, and fixed-point classification.

use num_complex::Complex64;

use crate::model::{FixedPoint, FixedPointLabel, Params, State};
use crate::{Error, Result};

/// Band around the unit circle treated as "on the circle".
pub const HYPERBOLICITY_EPS: f64 = 1e-9;

/// Real 2×2 matrix `[[a11, a12], [a21, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (
            self.a11 * v.0 + self.a12 * v.1,
            self.a21 * v.0 + self.a22 * v.1,
        )
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Mat2::new(
            self.a22 / d,
            -self.a12 / d,
            -self.a21 / d,
            self.a11 / d,
        ))
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Eigenvalue pair of a real 2×2 matrix.
///
/// Either both real (ascending), or a conjugate pair with `imag(lambda1) ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

impl ComplexPair {
    pub fn moduli(&self) -> (f64, f64) {
        (self.lambda1.norm(), self.lambda2.norm())
    }

    pub fn is_real(&self) -> bool {
        self.lambda1.im == 0.0 && self.lambda2.im == 0.0
    }
}

/// Roots of `λ² − tr(m) λ + det(m)`.
pub fn eigen2(m: &Mat2) -> ComplexPair {
    quadratic_roots(-m.trace(), m.det())
}

/// Roots of `λ² + bλ + c` under the [`ComplexPair`] ordering convention.
pub fn quadratic_roots(b: f64, c: f64) -> ComplexPair {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        // avoid cancellation in the smaller root
        let q = -0.5 * (b + b.signum() * sq);
        let (r1, r2) = if q == 0.0 {
            (0.5 * (-b - sq), 0.5 * (-b + sq))
        } else {
            (q, c / q)
        };
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        ComplexPair {
            lambda1: Complex64::new(lo, 0.0),
            lambda2: Complex64::new(hi, 0.0),
        }
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        ComplexPair {
            lambda1: Complex64::new(re, -im),
            lambda2: Complex64::new(re, im),
        }
    }
}

/// Jacobian of the discrete map at `s`.
pub fn jacobian_map(s: State, p: &Params) -> Mat2 {
    let (r, g) = (p.r(), p.gamma());
    Mat2::new(2.0 - 2.0 * s.x - s.y, -s.x, g * s.y, g * s.x + 1.0 - r)
}

/// Position of the non-unit root relative to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulus {
    Inside,
    OnCircle,
    Outside,
}

/// Location of the roots of `F(λ) = λ² + Bλ + C` relative to the unit circle.
///
/// One variant per case of the classical Jury-type lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootLocation {
    /// `F(1) > 0`, `F(−1) > 0`, `C < 1`: `|λ1|, |λ2| < 1`.
    BothInside,
    /// `F(1) > 0`, `F(−1) = 0`, `B ≠ 2`: one root is `−1`, the other is `−C`.
    OneAtMinusOne { other: Modulus },
    /// `F(1) > 0`, `F(−1) < 0`: one root inside, one outside.
    InsideOutside,
    /// `F(1) > 0`, `F(−1) > 0`, `C > 1`: both outside.
    BothOutside,
    /// `−2 < B < 2`, `C = 1`: conjugate pair on the circle.
    ConjugateOnCircle,
    /// `F(−1) = 0`, `B = 2`: double root at `−1`.
    DoubleAtMinusOne,
    /// `F(1) = 0`: one root is `1`; the other is placed by `|C|`.
    RootAtOne { other: Modulus },
    /// `F(1) < 0`, `F(−1) < 0`: one root in `(1, ∞)`, the other below `−1`.
    AboveOneOtherBelowMinusOne,
    /// `F(1) < 0`, `F(−1) = 0`: one root in `(1, ∞)`, the other is `−1`.
    AboveOneOtherAtMinusOne,
    /// `F(1) < 0`, `F(−1) > 0`: one root in `(1, ∞)`, the other in `(−1, 1)`.
    AboveOneOtherInside,
}

impl RootLocation {
    /// Number of roots `(inside, on, outside)` the unit circle.
    pub fn counts(&self) -> (u8, u8, u8) {
        use RootLocation::*;
        match self {
            BothInside => (2, 0, 0),
            OneAtMinusOne { other } => match other {
                Modulus::Inside => (1, 1, 0),
                Modulus::OnCircle => (0, 2, 0),
                Modulus::Outside => (0, 1, 1),
            },
            InsideOutside => (1, 0, 1),
            BothOutside => (0, 0, 2),
            ConjugateOnCircle => (0, 2, 0),
            DoubleAtMinusOne => (0, 2, 0),
            RootAtOne { other } => match other {
                Modulus::Inside => (1, 1, 0),
                Modulus::OnCircle => (0, 2, 0),
                Modulus::Outside => (0, 1, 1),
            },
            AboveOneOtherBelowMinusOne => (0, 0, 2),
            AboveOneOtherAtMinusOne => (0, 1, 1),
            AboveOneOtherInside => (1, 0, 1),
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.counts().1 == 0
    }
}

/// Locates the roots of `λ² + Bλ + C` relative to the unit circle from the
/// signs of `F(1)`, `F(−1)` and `C − 1`, without computing the roots.
///
/// Equalities are decided within [`HYPERBOLICITY_EPS`]; boundary cases win
/// over the open-region cases.
pub fn jury_classify(b: f64, c: f64) -> RootLocation {
    let eps = HYPERBOLICITY_EPS;
    let f1 = 1.0 + b + c;
    let fm1 = 1.0 - b + c;

    // with one root at ±1 the other root has modulus |C|
    let other = if (c.abs() - 1.0).abs() <= eps {
        Modulus::OnCircle
    } else if c.abs() < 1.0 {
        Modulus::Inside
    } else {
        Modulus::Outside
    };

    if f1.abs() <= eps {
        return RootLocation::RootAtOne { other };
    }

    if f1 < 0.0 {
        return if fm1.abs() <= eps {
            RootLocation::AboveOneOtherAtMinusOne
        } else if fm1 < 0.0 {
            RootLocation::AboveOneOtherBelowMinusOne
        } else {
            RootLocation::AboveOneOtherInside
        };
    }

    if fm1.abs() <= eps {
        return if (b - 2.0).abs() <= eps {
            RootLocation::DoubleAtMinusOne
        } else {
            RootLocation::OneAtMinusOne { other }
        };
    }
    if (c - 1.0).abs() <= eps && b > -2.0 && b < 2.0 {
        return RootLocation::ConjugateOnCircle;
    }
    if fm1 < 0.0 {
        RootLocation::InsideOutside
    } else if c < 1.0 {
        RootLocation::BothInside
    } else {
        RootLocation::BothOutside
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityKind {
    Attractive,
    Repelling,
    Saddle,
    Nonhyperbolic,
}

impl StabilityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityKind::Attractive => "attractive",
            StabilityKind::Repelling => "repelling",
            StabilityKind::Saddle => "saddle",
            StabilityKind::Nonhyperbolic => "nonhyperbolic",
        }
    }

    /// Verdict from multiplier moduli alone.
    pub fn from_moduli(m1: f64, m2: f64) -> Self {
        let eps = HYPERBOLICITY_EPS;
        if (m1 - 1.0).abs() <= eps || (m2 - 1.0).abs() <= eps {
            StabilityKind::Nonhyperbolic
        } else if m1 < 1.0 && m2 < 1.0 {
            StabilityKind::Attractive
        } else if m1 > 1.0 && m2 > 1.0 {
            StabilityKind::Repelling
        } else {
            StabilityKind::Saddle
        }
    }

    fn from_location(loc: RootLocation) -> Self {
        match loc.counts() {
            (_, on, _) if on > 0 => StabilityKind::Nonhyperbolic,
            (2, _, _) => StabilityKind::Attractive,
            (_, _, 2) => StabilityKind::Repelling,
            _ => StabilityKind::Saddle,
        }
    }
}

impl std::fmt::Display for StabilityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Stability verdict with its eigenvalue evidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub kind: StabilityKind,
    pub evidence: ComplexPair,
    pub moduli: (f64, f64),
}

/// Classifies a fixed point of the map.
///
/// `E0` and `E1` are classified from their explicit (diagonal/triangular)
/// spectra. `E2` goes through [`jury_classify`] on its characteristic
/// polynomial `λ² − (2 − r/γ)λ + (γ − r)(1 + r)/γ`.
pub fn classify_fixed_point(fp: &FixedPoint, p: &Params) -> Result<Classification> {
    let (r, g) = (p.r(), p.gamma());
    let jac = jacobian_map(fp.state, p);
    let evidence = eigen2(&jac);
    let moduli = evidence.moduli();
    let kind = match fp.label {
        FixedPointLabel::E0 | FixedPointLabel::E1 => StabilityKind::from_moduli(moduli.0, moduli.1),
        FixedPointLabel::E2 => {
            if g <= r {
                return Err(Error::DegenerateInput(format!(
                    "E2 requires gamma > r (r = {r}, gamma = {g})"
                )));
            }
            let (b, c) = e2_characteristic(p);
            StabilityKind::from_location(jury_classify(b, c))
        }
    };
    Ok(Classification {
        kind,
        evidence,
        moduli,
    })
}

/// `(B, C)` of the characteristic polynomial `λ² + Bλ + C` at `E2`.
pub fn e2_characteristic(p: &Params) -> (f64, f64) {
    let (r, g) = (p.r(), p.gamma());
    (-(2.0 - r / g), (g - r) * (1.0 + r) / g)
}
