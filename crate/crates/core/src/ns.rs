//! Neimark–Sacker bifurcation of the coexistence fixed point.
//!
//! At `γ₀ = 1 + r` (`0 < r ≤ 1`) the multipliers of `E2` are the conjugate pair
//! `(r + 2 ∓ i√(3r² + 4r)) / (2(r + 1))` on the unit circle. This module
//! follows the standard route to the sign of the discriminating quantity `𝓛`:
//!
//! 1. shift `E2` to the origin: `u = x − x̂`, `v = y − ŷ`;
//! 2. perturb `γ = γ₀ + γ*` and track the multipliers (`x̂`, `ŷ` frozen at `γ₀`);
//! 3. check transversality `d|λ|/dγ* = x̂ŷ/2 > 0` and nondegeneracy
//!    `λᵐ ≠ 1` for `m = 1..4`;
//! 4. bring the linear part to rotation form with
//!    `M = [[√(3r² + 4r), −r], [0, 2(r + 1)]]`, giving `X' = αX − βY + F`,
//!    `Y' = βX + αY + G`;
//! 5. form `L20, L11, L02, L21` from the partials of `F`, `G` and evaluate
//!
//! ```text
//! 𝓛 = −Re[(1 − 2λ1) λ2² / (1 − λ1) · L11 L20] − ½|L11|² − |L02|² + Re(λ2 L21)
//! ```
//!
//! `𝓛 < 0` means the closed curve born for `γ > γ₀` is attracting, which
//! [`detect_invariant_curve`] checks by direct iteration.

use num_complex::Complex64;

use crate::discrete::in_m;
use crate::linear::{ComplexPair, Mat2};
use crate::model::{apply_map, positive_fixed_point, Params, State};
use crate::{Error, Result};

/// Step for the finite-difference slope of `|λ(γ*)|`.
pub const TRANSVERSALITY_STEP: f64 = 1e-6;

/// Threshold below which `|λᵐ − 1|` counts as a resonance.
pub const RESONANCE_EPS: f64 = 1e-9;

/// Critical point of the bifurcation for a given `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsSetup {
    pub r: f64,
    /// `1 + r`.
    pub gamma0: f64,
    /// `r/γ₀`.
    pub xhat: f64,
    /// `1 − r/γ₀ = 1/γ₀`.
    pub yhat: f64,
}

impl NsSetup {
    /// `√(3r² + 4r)`.
    pub fn root(&self) -> f64 {
        (3.0 * self.r * self.r + 4.0 * self.r).sqrt()
    }

    /// Parameters at `γ = γ₀ + γ*`.
    pub fn params(&self, gamma_star: f64) -> Result<Params> {
        Params::new(self.r, self.gamma0 + gamma_star)
    }
}

pub fn ns_setup(r: f64) -> Result<NsSetup> {
    if !(r.is_finite() && r > 0.0 && r <= 1.0) {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            range: "(0, 1]",
        });
    }
    let gamma0 = 1.0 + r;
    Ok(NsSetup {
        r,
        gamma0,
        xhat: r / gamma0,
        yhat: 1.0 / gamma0,
    })
}

/// Trace `a` and determinant `b` of the shifted map's Jacobian at `γ₀ + γ*`.
///
/// `b = 1 − x̂ + x̂ŷ(γ₀ + γ*)` is evaluated as `1 + x̂ŷγ*` (using `ŷγ₀ = 1`)
/// so that `b(0) = 1` holds exactly.
pub fn characteristic(setup: &NsSetup, gamma_star: f64) -> (f64, f64) {
    (2.0 - setup.xhat, 1.0 + setup.xhat * setup.yhat * gamma_star)
}

/// Multipliers of the shifted map at `γ = γ₀ + γ*` and their common modulus
/// `√b`.
pub fn perturbed_multipliers(setup: &NsSetup, gamma_star: f64) -> Result<(ComplexPair, f64)> {
    let (a, b) = characteristic(setup, gamma_star);
    let disc = a * a - 4.0 * b;
    if disc >= 0.0 {
        return Err(Error::NotComplexRegime { discriminant: disc });
    }
    let im = 0.5 * (-disc).sqrt();
    let pair = ComplexPair {
        lambda1: Complex64::new(0.5 * a, -im),
        lambda2: Complex64::new(0.5 * a, im),
    };
    Ok((pair, b.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transversality {
    /// `x̂ŷ/2`.
    pub analytic: f64,
    /// Central difference of `|λ(γ*)|` at `γ* = 0`.
    pub finite_difference: f64,
}

impl Transversality {
    pub fn agrees(&self, tol: f64) -> bool {
        (self.analytic - self.finite_difference).abs() <= tol
    }
}

pub fn transversality(setup: &NsSetup) -> Result<Transversality> {
    let h = TRANSVERSALITY_STEP;
    let (_, up) = perturbed_multipliers(setup, h)?;
    let (_, down) = perturbed_multipliers(setup, -h)?;
    Ok(Transversality {
        analytic: 0.5 * setup.xhat * setup.yhat,
        finite_difference: (up - down) / (2.0 * h),
    })
}

/// `|λ1ᵐ − 1| > 1e-9` for `m = 1, 2, 3, 4` at `γ* = 0`.
pub fn nondegeneracy(setup: &NsSetup) -> Result<[bool; 4]> {
    let (pair, _) = perturbed_multipliers(setup, 0.0)?;
    let mut out = [false; 4];
    for (m, flag) in (1..=4).zip(out.iter_mut()) {
        *flag = (pair.lambda1.powi(m) - 1.0).norm() > RESONANCE_EPS;
    }
    Ok(out)
}

/// Second partial derivatives at the origin of the quadratic terms `F`, `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondPartials {
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
    pub gxx: f64,
    pub gxy: f64,
    pub gyy: f64,
}

impl SecondPartials {
    pub fn as_array(&self) -> [f64; 6] {
        [self.fxx, self.fxy, self.fyy, self.gxx, self.gxy, self.gyy]
    }

    pub fn max_abs_diff(&self, other: &SecondPartials) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Third partial derivatives at the origin, ordered
/// `[Fxxx, Fxxy, Fxyy, Fyyy, Gxxx, Gxxy, Gxyy, Gyyy]`.
pub type ThirdPartials = [f64; 8];

/// The shifted map at `γ = γ₀` written in the coordinates `(u, v) = M (X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedMap {
    pub setup: NsSetup,
    pub m: Mat2,
    pub m_inv: Mat2,
}

pub fn transformed_map(setup: &NsSetup) -> TransformedMap {
    let s = setup.root();
    let r = setup.r;
    let m = Mat2::new(s, -r, 0.0, 2.0 * (r + 1.0));
    let m_inv = Mat2::new(
        1.0 / s,
        r / (2.0 * (r + 1.0) * s),
        0.0,
        1.0 / (2.0 * (r + 1.0)),
    );
    TransformedMap {
        setup: *setup,
        m,
        m_inv,
    }
}

impl TransformedMap {
    /// Shifted map at `γ₀`:
    /// `u' = (1 − x̂)u − x̂v − u² − uv`, `v' = γ₀ŷu + v + γ₀uv`.
    pub fn shifted(&self, u: f64, v: f64) -> (f64, f64) {
        let NsSetup {
            gamma0, xhat, yhat, ..
        } = self.setup;
        (
            (1.0 - xhat) * u - xhat * v - u * u - u * v,
            gamma0 * yhat * u + v + gamma0 * u * v,
        )
    }

    /// One step in `(X, Y)` coordinates.
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let (u, v) = self.m.apply((x, y));
        self.m_inv.apply(self.shifted(u, v))
    }

    /// `M⁻¹ J M`, which should be the rotation-scaling `[[α, −β], [β, α]]`.
    pub fn linear_part(&self) -> Mat2 {
        let NsSetup {
            gamma0, xhat, yhat, ..
        } = self.setup;
        let jac = Mat2::new(1.0 - xhat, -xhat, gamma0 * yhat, 1.0);
        self.m_inv.mul(&jac.mul(&self.m))
    }

    /// `(F, G)`: the map minus its linear part.
    pub fn nonlinear(&self, x: f64, y: f64) -> (f64, f64) {
        let (fx, fy) = self.eval(x, y);
        let (lx, ly) = self.linear_part().apply((x, y));
        (fx - lx, fy - ly)
    }

    /// Central second differences of the map at the origin.
    pub fn second_partials_fd(&self, h: f64) -> SecondPartials {
        let f = |x: f64, y: f64| self.eval(x, y);
        let c = f(0.0, 0.0);
        let (xp, xm) = (f(h, 0.0), f(-h, 0.0));
        let (yp, ym) = (f(0.0, h), f(0.0, -h));
        let (pp, pm, mp, mm) = (f(h, h), f(h, -h), f(-h, h), f(-h, -h));
        let h2 = h * h;
        SecondPartials {
            fxx: (xp.0 - 2.0 * c.0 + xm.0) / h2,
            fxy: (pp.0 - pm.0 - mp.0 + mm.0) / (4.0 * h2),
            fyy: (yp.0 - 2.0 * c.0 + ym.0) / h2,
            gxx: (xp.1 - 2.0 * c.1 + xm.1) / h2,
            gxy: (pp.1 - pm.1 - mp.1 + mm.1) / (4.0 * h2),
            gyy: (yp.1 - 2.0 * c.1 + ym.1) / h2,
        }
    }

    /// Central third differences of the map at the origin.
    pub fn third_partials_fd(&self, h: f64) -> ThirdPartials {
        let f = |x: f64, y: f64| self.eval(x, y);
        let h3 = h * h * h;
        // along one axis: (f(2h) − 2f(h) + 2f(−h) − f(−2h)) / 2h³
        let axis = |dx: f64, dy: f64| {
            let a = f(2.0 * dx, 2.0 * dy);
            let b = f(dx, dy);
            let c = f(-dx, -dy);
            let d = f(-2.0 * dx, -2.0 * dy);
            (
                (a.0 - 2.0 * b.0 + 2.0 * c.0 - d.0) / (2.0 * h3),
                (a.1 - 2.0 * b.1 + 2.0 * c.1 - d.1) / (2.0 * h3),
            )
        };
        // d/dy of the x-second difference, and d/dx of the y-second difference
        let xxy = |k: f64| {
            let g = |y: f64| {
                let (p, c, m) = (f(h, y), f(0.0, y), f(-h, y));
                (p.0 - 2.0 * c.0 + m.0, p.1 - 2.0 * c.1 + m.1)
            };
            let (a, b) = (g(k), g(-k));
            (
                (a.0 - b.0) / (2.0 * k * h * h),
                (a.1 - b.1) / (2.0 * k * h * h),
            )
        };
        let xyy = |k: f64| {
            let g = |x: f64| {
                let (p, c, m) = (f(x, h), f(x, 0.0), f(x, -h));
                (p.0 - 2.0 * c.0 + m.0, p.1 - 2.0 * c.1 + m.1)
            };
            let (a, b) = (g(k), g(-k));
            (
                (a.0 - b.0) / (2.0 * k * h * h),
                (a.1 - b.1) / (2.0 * k * h * h),
            )
        };
        let (fxxx, gxxx) = axis(h, 0.0);
        let (fyyy, gyyy) = axis(0.0, h);
        let (fxxy, gxxy) = xxy(h);
        let (fxyy, gxyy) = xyy(h);
        [fxxx, fxxy, fxyy, fyyy, gxxx, gxxy, gxyy, gyyy]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormCoeffs {
    pub second: SecondPartials,
    /// Identically zero: the map is quadratic.
    pub third: ThirdPartials,
    pub l20: Complex64,
    pub l11: Complex64,
    pub l02: Complex64,
    pub l21: Complex64,
}

/// Closed-form partials of `F`, `G` at the origin and the `L_jk` built from
/// them.
pub fn normal_form_coeffs(setup: &NsSetup) -> NormalFormCoeffs {
    let r = setup.r;
    let s = setup.root();
    let second = SecondPartials {
        fxx: -2.0 * s,
        fxy: r * r + r - 2.0,
        fyy: (4.0 * r - 2.0 * r * r * r) / s,
        gxx: 0.0,
        gxy: (r + 1.0) * s,
        gyy: -2.0 * r * (r + 1.0),
    };
    let third = [0.0; 8];
    let (l20, l11, l02, l21) = l_coefficients(&second, &third);
    NormalFormCoeffs {
        second,
        third,
        l20,
        l11,
        l02,
        l21,
    }
}

/// `L20, L11, L02, L21` from the second and third partials.
pub fn l_coefficients(
    d2: &SecondPartials,
    d3: &ThirdPartials,
) -> (Complex64, Complex64, Complex64, Complex64) {
    let SecondPartials {
        fxx,
        fxy,
        fyy,
        gxx,
        gxy,
        gyy,
    } = *d2;
    let [fxxx, fxxy, fxyy, fyyy, gxxx, gxxy, gxyy, gyyy] = *d3;
    let l20 = Complex64::new(fxx - fyy + 2.0 * gxy, gxx - gyy - 2.0 * fxy) / 8.0;
    let l11 = Complex64::new(fxx + fyy, gxx + gyy) / 4.0;
    let l02 = Complex64::new(fxx - fyy - 2.0 * gxy, gxx - gyy + 2.0 * fxy) / 8.0;
    let l21 = Complex64::new(fxxx + fxyy + gxxy + gyyy, gxxx + gxyy - fxxy - fyyy) / 16.0;
    (l20, l11, l02, l21)
}

/// Discriminating quantity from the multipliers and `L_jk`.
pub fn discriminating_quantity(pair: &ComplexPair, c: &NormalFormCoeffs) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let (l1, l2) = (pair.lambda1, pair.lambda2);
    let factor = (one - 2.0 * l1) * l2 * l2 / (one - l1);
    -(factor * c.l11 * c.l20).re - 0.5 * c.l11.norm_sqr() - c.l02.norm_sqr() + (l2 * c.l21).re
}

/// Closed-form expression
/// `−(6r⁶ + 32r⁵ + 64r⁴ + 60r³ + 36r² + 19r + 4) / (2(r + 1)(3r + 4))`.
pub fn closed_form_coefficient(r: f64) -> f64 {
    let poly = [6.0, 32.0, 64.0, 60.0, 36.0, 19.0, 4.0]
        .iter()
        .fold(0.0, |acc, c| acc * r + c);
    -poly / (2.0 * (r + 1.0) * (3.0 * r + 4.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsCoefficient {
    /// Evaluated from the multipliers and the normal-form coefficients.
    pub pipeline: f64,
    /// Closed-form expression in `r`.
    pub closed_form: f64,
}

pub fn ns_coefficient(setup: &NsSetup) -> Result<NsCoefficient> {
    let (pair, _) = perturbed_multipliers(setup, 0.0)?;
    let coeffs = normal_form_coeffs(setup);
    Ok(NsCoefficient {
        pipeline: discriminating_quantity(&pair, &coeffs),
        closed_form: closed_form_coefficient(setup.r),
    })
}

/// Every diagnostic of the bifurcation at `γ₀ = 1 + r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsReport {
    pub setup: NsSetup,
    pub multipliers: ComplexPair,
    pub modulus: f64,
    pub transversality: Transversality,
    pub nondegenerate: [bool; 4],
    pub coeffs: NormalFormCoeffs,
    pub l_pipeline: f64,
    pub l_closed_form: f64,
}

impl NsReport {
    /// An attracting closed curve is predicted for `γ > γ₀`.
    pub fn predicts_attracting_curve(&self) -> bool {
        self.transversality.analytic > 0.0
            && self.nondegenerate.iter().all(|&b| b)
            && self.l_pipeline < 0.0
    }
}

pub fn ns_report(r: f64) -> Result<NsReport> {
    let setup = ns_setup(r)?;
    let (multipliers, modulus) = perturbed_multipliers(&setup, 0.0)?;
    let coefficient = ns_coefficient(&setup)?;
    Ok(NsReport {
        setup,
        multipliers,
        modulus,
        transversality: transversality(&setup)?,
        nondegenerate: nondegeneracy(&setup)?,
        coeffs: normal_form_coeffs(&setup),
        l_pipeline: coefficient.pipeline,
        l_closed_form: coefficient.closed_form,
    })
}

/// Controls for [`detect_invariant_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSettings {
    /// Steps discarded before sampling.
    pub transient: usize,
    /// Steps sampled after the transient.
    pub window: usize,
    /// Radii below `10 · tol` count as collapsed onto the fixed point.
    pub tol: f64,
}

impl Default for CurveSettings {
    fn default() -> Self {
        Self {
            transient: 5_000,
            window: 1_000,
            tol: 1e-3,
        }
    }
}

/// Radial statistics of an orbit about the perturbed fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveStats {
    pub gamma_star: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub mean_radius: f64,
    /// Total signed angle swept about the fixed point over the window.
    pub angular_coverage: f64,
    pub closed: bool,
}

impl CurveStats {
    /// Whether two radial bands coincide: both endpoints differ by at most
    /// `rel` times the wider band's width.
    pub fn band_matches(&self, other: &CurveStats, rel: f64) -> bool {
        let width = (self.r_max - self.r_min).max(other.r_max - other.r_min);
        (self.r_min - other.r_min).abs() <= rel * width
            && (self.r_max - other.r_max).abs() <= rel * width
    }
}

/// Iterates at `γ = γ₀ + γ*` from `seed` and returns the radial statistics
/// together with the sampled window.
pub fn trace_invariant_curve(
    setup: &NsSetup,
    gamma_star: f64,
    seed: State,
    settings: &CurveSettings,
) -> Result<(CurveStats, Vec<State>)> {
    if !in_m(seed).inside {
        return Err(Error::InvalidArgument(format!(
            "seed ({}, {}) is not in M",
            seed.x, seed.y
        )));
    }
    if settings.window < 2 || settings.tol.is_nan() || settings.tol <= 0.0 {
        return Err(Error::InvalidArgument(
            "curve window must be >= 2 and tol > 0".into(),
        ));
    }
    let params = setup.params(gamma_star)?;
    let center = positive_fixed_point(&params).ok_or_else(|| {
        Error::PreconditionViolated(format!(
            "gamma = {} does not exceed r = {}",
            params.gamma(),
            params.r()
        ))
    })?;

    let mut s = seed;
    for _ in 0..settings.transient {
        s = apply_map(s, &params);
    }

    let mut window = Vec::with_capacity(settings.window);
    let (mut r_min, mut r_max, mut r_sum) = (f64::INFINITY, 0.0f64, 0.0);
    let mut coverage = 0.0;
    let mut prev_angle: Option<f64> = None;
    for _ in 0..settings.window {
        s = apply_map(s, &params);
        window.push(s);
        let (dx, dy) = (s.x - center.x, s.y - center.y);
        let radius = dx.hypot(dy);
        r_min = r_min.min(radius);
        r_max = r_max.max(radius);
        r_sum += radius;
        let angle = dy.atan2(dx);
        if let Some(prev) = prev_angle {
            let mut d = angle - prev;
            if d > std::f64::consts::PI {
                d -= std::f64::consts::TAU;
            } else if d < -std::f64::consts::PI {
                d += std::f64::consts::TAU;
            }
            coverage += d;
        }
        prev_angle = Some(angle);
    }

    let finite = r_max.is_finite() && r_min.is_finite();
    let closed = finite
        && r_min > 10.0 * settings.tol
        && r_max / r_min < 10.0
        && coverage.abs() > std::f64::consts::TAU;
    let stats = CurveStats {
        gamma_star,
        r_min,
        r_max,
        mean_radius: r_sum / settings.window as f64,
        angular_coverage: coverage,
        closed,
    };
    Ok((stats, window))
}

/// Empirical check for an attracting closed invariant curve around the
/// perturbed coexistence point `(r/γ, (γ − r)/γ)`.
pub fn detect_invariant_curve(
    setup: &NsSetup,
    gamma_star: f64,
    seed: State,
    settings: &CurveSettings,
) -> Result<CurveStats> {
    trace_invariant_curve(setup, gamma_star, seed, settings).map(|(stats, _)| stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn setup_examples() {
        let s = ns_setup(0.5).unwrap();
        assert_eq!(s.gamma0, 1.5);
        assert!(close(s.xhat, 1.0 / 3.0, 1e-16) && close(s.yhat, 2.0 / 3.0, 1e-16));
        let s = ns_setup(1.0).unwrap();
        assert_eq!((s.gamma0, s.xhat, s.yhat), (2.0, 0.5, 0.5));
        let s = ns_setup(0.3).unwrap();
        assert!(close(s.xhat, 3.0 / 13.0, 1e-15) && close(s.yhat, 10.0 / 13.0, 1e-15));
        assert!(close(s.xhat + s.yhat, 1.0, 1e-15));

        for bad in [0.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(ns_setup(bad), Err(Error::OutOfRange { .. })));
        }
    }

    #[test]
    fn multipliers_at_criticality() {
        let s = ns_setup(0.5).unwrap();
        let (pair, modulus) = perturbed_multipliers(&s, 0.0).unwrap();
        let im = 11f64.sqrt() / 6.0;
        assert!(close(pair.lambda1.re, 5.0 / 6.0, 1e-15));
        assert!(close(pair.lambda1.im, -im, 1e-15));
        assert!(close(pair.lambda2.im, im, 1e-15));
        assert_eq!(modulus, 1.0);
        assert!(close(pair.lambda1.norm(), 1.0, 1e-12));

        for r in [0.05, 0.3, 0.77, 1.0] {
            assert_eq!(characteristic(&ns_setup(r).unwrap(), 0.0).1, 1.0);
        }
    }

    #[test]
    fn determinant_matches_raw_form() {
        for r in [0.1, 0.5, 0.9] {
            let s = ns_setup(r).unwrap();
            for gs in [-0.02, 0.0, 0.013] {
                let raw = 1.0 - s.xhat + s.xhat * s.yhat * (s.gamma0 + gs);
                assert!(close(characteristic(&s, gs).1, raw, 1e-15));
            }
        }
    }

    #[test]
    fn perturbed_modulus() {
        let s = ns_setup(0.5).unwrap();
        let (_, m) = perturbed_multipliers(&s, 0.01).unwrap();
        assert!(close(m, (1.0 + 0.01 * 2.0 / 9.0f64).sqrt(), 1e-15));
        assert!(close(m, 1.001_110_5, 1e-7));
        assert!(matches!(
            perturbed_multipliers(&s, -10.0),
            Err(Error::NotComplexRegime { .. })
        ));
    }

    #[test]
    fn transversality_examples() {
        let t = transversality(&ns_setup(0.5).unwrap()).unwrap();
        assert!(close(t.analytic, 1.0 / 9.0, 1e-12));
        assert!(t.agrees(1e-6));
        let t = transversality(&ns_setup(1.0).unwrap()).unwrap();
        assert!(close(t.analytic, 0.125, 1e-15));
        let t = transversality(&ns_setup(1e-6).unwrap()).unwrap();
        assert!(t.analytic > 0.0 && t.analytic < 1e-6);
    }

    #[test]
    fn nondegeneracy_examples() {
        for r in [0.5, 1.0, 0.1] {
            assert_eq!(nondegeneracy(&ns_setup(r).unwrap()).unwrap(), [true; 4]);
        }
    }

    #[test]
    fn linear_part_is_rotation() {
        let s = ns_setup(0.5).unwrap();
        let tm = transformed_map(&s);
        let lin = tm.linear_part();
        let alpha = (0.5 + 2.0) / 3.0;
        let beta = s.root() / 3.0;
        assert!(close(lin.a11, alpha, 1e-14) && close(lin.a22, alpha, 1e-14));
        assert!(close(lin.a12, -beta, 1e-14) && close(lin.a21, beta, 1e-14));
        let id = tm.m.mul(&tm.m_inv);
        assert!(close(id.a11, 1.0, 1e-15) && close(id.a12, 0.0, 1e-15));
    }

    #[test]
    fn partial_examples() {
        let c = normal_form_coeffs(&ns_setup(0.5).unwrap());
        assert_eq!(c.l21, Complex64::new(0.0, 0.0));
        assert!(close(c.second.fxx, -2.0 * 2.75f64.sqrt(), 1e-15));
        assert!(close(c.second.fxx, -3.316_625, 1e-6));
        assert!(close(c.l20.re, 0.125 / 2.75f64.sqrt(), 1e-15));
        assert!(close(c.l20.re, 0.075_378, 1e-6));
        assert!(close(c.l20.im, 0.5, 1e-15));
    }

    #[test]
    fn closed_form_partials_match_the_conjugated_map() {
        for r in [0.05, 0.5, 1.0] {
            let s = ns_setup(r).unwrap();
            let tm = transformed_map(&s);
            let fd = tm.second_partials_fd(1e-5);
            assert!(
                fd.max_abs_diff(&normal_form_coeffs(&s).second) < 1e-6,
                "r = {r}"
            );
            assert!(tm.third_partials_fd(1e-3).iter().all(|v| v.abs() < 1e-4));
        }
    }

    #[test]
    fn nonlinear_part_matches_explicit_f_g() {
        let r: f64 = 0.7;
        let s = ns_setup(r).unwrap();
        let tm = transformed_map(&s);
        let q = s.root();
        for (x, y) in [(0.1, -0.2), (0.03, 0.05), (-0.3, 0.2)] {
            let f = -q * x * x + (r * r + r - 2.0) * x * y + (2.0 * r - r.powi(3)) / q * y * y;
            let g = (r + 1.0) * q * x * y - r * (r + 1.0) * y * y;
            let (nf, ng) = tm.nonlinear(x, y);
            assert!(close(nf, f, 1e-14) && close(ng, g, 1e-14));
        }
    }

    #[test]
    fn closed_form_values() {
        // Horner-free evaluation as an independent check
        let direct = |r: f64| {
            -(6.0 * r.powi(6)
                + 32.0 * r.powi(5)
                + 64.0 * r.powi(4)
                + 60.0 * r.powi(3)
                + 36.0 * r.powi(2)
                + 19.0 * r
                + 4.0)
                / (2.0 * (r + 1.0) * (3.0 * r + 4.0))
        };
        assert!(close(
            closed_form_coefficient(0.5),
            -35.093_75 / 16.5,
            1e-14
        ));
        assert!(close(closed_form_coefficient(0.5), direct(0.5), 1e-14));
        assert!(close(closed_form_coefficient(1.0), -221.0 / 28.0, 1e-14));
    }

    #[test]
    fn coefficient_signs() {
        let c = ns_coefficient(&ns_setup(0.5).unwrap()).unwrap();
        assert!(close(c.pipeline, -101.0 / 48.0, 1e-12));
        assert!(close(c.pipeline, -2.1, 0.05));
        let c = ns_coefficient(&ns_setup(1.0).unwrap()).unwrap();
        assert!(close(c.pipeline, -7.75, 1e-12));
        assert!(close(c.closed_form, -7.892_857, 1e-6));
    }

    #[test]
    fn l11_modulus_is_r_times_r_plus_one_to_the_fourth() {
        for r in [0.2, 0.5, 1.0] {
            let c = normal_form_coeffs(&ns_setup(r).unwrap());
            let expected = r * (r + 1.0f64).powi(4) / (3.0 * r + 4.0);
            assert!(close(c.l11.norm_sqr(), expected, 1e-13));
        }
    }

    #[test]
    fn report_at_example() {
        let rep = ns_report(0.5).unwrap();
        assert!(rep.predicts_attracting_curve());
        assert_eq!(rep.nondegenerate, [true; 4]);
    }

    #[test]
    fn curve_detection_examples() {
        let s = ns_setup(0.5).unwrap();
        let seed = State::new(0.3, 0.7);
        let st = detect_invariant_curve(&s, 0.01, seed, &CurveSettings::default()).unwrap();
        assert!(st.closed, "{st:?}");

        let long = CurveSettings {
            transient: 1_000_000,
            ..CurveSettings::default()
        };
        let st = detect_invariant_curve(&s, 0.0, seed, &long).unwrap();
        assert!(!st.closed, "{st:?}");

        let st = detect_invariant_curve(&s, -0.05, seed, &CurveSettings::default()).unwrap();
        assert!(!st.closed);
        assert!(st.r_max < 1e-12);
    }

    #[test]
    fn curve_detection_rejects_bad_input() {
        let s = ns_setup(0.5).unwrap();
        let set = CurveSettings::default();
        assert!(detect_invariant_curve(&s, 0.01, State::new(1.5, 0.2), &set).is_err());
        assert!(detect_invariant_curve(&s, -1.2, State::new(0.3, 0.7), &set).is_err());
        let bad = CurveSettings { window: 1, ..set };
        assert!(detect_invariant_curve(&s, 0.01, State::new(0.3, 0.7), &bad).is_err());
    }
}
