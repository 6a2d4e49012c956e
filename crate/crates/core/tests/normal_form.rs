use num_complex::Complex64;
use phytozoo::linear::eigen2;
use phytozoo::ns::{
    detect_invariant_curve, discriminating_quantity, l_coefficients, normal_form_coeffs,
    ns_coefficient, ns_setup, perturbed_multipliers, transformed_map, transversality,
    CurveSettings, NormalFormCoeffs, NsSetup,
};
use phytozoo::State;

fn r_grid() -> impl Iterator<Item = f64> {
    (1..=100).map(|i| i as f64 / 100.0)
}

/// First Lyapunov coefficient of the shifted map from its eigenvectors,
/// `½ Re{ μ̄ [2⟨p, B(q, (I − A)⁻¹B(q, q̄))⟩ + ⟨p, B(q̄, (μ²I − A)⁻¹B(q, q))⟩] }`.
fn invariant_lyapunov_coefficient(s: &NsSetup) -> f64 {
    type C = Complex64;
    let (a11, a12, a21, a22) = (1.0 - s.xhat, -s.xhat, s.gamma0 * s.yhat, 1.0);
    let mu = eigen2(&phytozoo::linear::Mat2::new(a11, a12, a21, a22)).lambda2;
    let mut q = [C::new(a12, 0.0), mu - a11];
    let qn = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
    q = [q[0] / qn, q[1] / qn];
    let mut p = [C::new(a21, 0.0), mu.conj() - a11];
    let pq = p[0].conj() * q[0] + p[1].conj() * q[1];
    p = [p[0] / pq.conj(), p[1] / pq.conj()];
    let dot = |a: [C; 2], b: [C; 2]| a[0].conj() * b[0] + a[1].conj() * b[1];
    let bil = |a: [C; 2], b: [C; 2]| {
        let cross = a[0] * b[1] + a[1] * b[0];
        [-2.0 * a[0] * b[0] - cross, s.gamma0 * cross]
    };
    let solve = |m: [[C; 2]; 2], v: [C; 2]| {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        [
            (m[1][1] * v[0] - m[0][1] * v[1]) / det,
            (m[0][0] * v[1] - m[1][0] * v[0]) / det,
        ]
    };
    let qc = [q[0].conj(), q[1].conj()];
    let one = C::new(1.0, 0.0);
    let i_minus_a = [
        [one - a11, C::new(-a12, 0.0)],
        [C::new(-a21, 0.0), one - a22],
    ];
    let mu2 = mu * mu;
    let mu2_minus_a = [
        [mu2 - a11, C::new(-a12, 0.0)],
        [C::new(-a21, 0.0), mu2 - a22],
    ];
    let h11 = solve(i_minus_a, bil(q, qc));
    let h20 = solve(mu2_minus_a, bil(q, q));
    let c = 2.0 * dot(p, bil(q, h11)) + dot(p, bil(qc, h20));
    0.5 * (mu.conj() * c).re
}

#[test]
fn multipliers_on_unit_circle_at_criticality() {
    for r in r_grid() {
        let (pair, modulus) = perturbed_multipliers(&ns_setup(r).unwrap(), 0.0).unwrap();
        assert!((pair.lambda1.norm() - 1.0).abs() < 1e-12, "r = {r}");
        assert!((pair.lambda2.norm() - 1.0).abs() < 1e-12, "r = {r}");
        assert!((modulus - 1.0).abs() < 1e-12);
    }
}

#[test]
fn transversality_matches_slope() {
    for r in r_grid() {
        let t = transversality(&ns_setup(r).unwrap()).unwrap();
        assert!(t.analytic > 0.0);
        assert!((t.analytic - t.finite_difference).abs() < 1e-6, "r = {r}");
    }
}

#[test]
fn partials_match_finite_differences() {
    for r in r_grid() {
        let s = ns_setup(r).unwrap();
        let tm = transformed_map(&s);
        let closed = normal_form_coeffs(&s);
        let fd = tm.second_partials_fd(1e-5);
        assert!(fd.max_abs_diff(&closed.second) < 1e-6, "r = {r}");
        for (k, v) in tm.third_partials_fd(1e-3).iter().enumerate() {
            assert!(v.abs() < 1e-4, "third partial {k} at r = {r}: {v}");
        }
    }
}

#[test]
fn discriminating_quantity_is_negative() {
    for r in r_grid() {
        let c = ns_coefficient(&ns_setup(r).unwrap()).unwrap();
        assert!(c.pipeline < 0.0, "r = {r}: {}", c.pipeline);
    }
}

#[test]
fn finite_difference_pipeline_agrees() {
    // L built from numerically differentiated F, G and eigenvalues of M⁻¹JM
    for r in r_grid() {
        let s = ns_setup(r).unwrap();
        let tm = transformed_map(&s);
        let second = tm.second_partials_fd(1e-5);
        let third = tm.third_partials_fd(1e-3);
        let (l20, l11, l02, l21) = l_coefficients(&second, &third);
        let coeffs = NormalFormCoeffs {
            second,
            third,
            l20,
            l11,
            l02,
            l21,
        };
        let pair = eigen2(&tm.linear_part());
        let numeric = discriminating_quantity(&pair, &coeffs);
        let pipeline = ns_coefficient(&s).unwrap().pipeline;
        assert!(
            (numeric - pipeline).abs() < 1e-5,
            "r = {r}: {numeric} vs {pipeline}"
        );
    }
}

#[test]
fn coordinate_free_coefficient_has_the_same_sign() {
    for r in r_grid() {
        let d = invariant_lyapunov_coefficient(&ns_setup(r).unwrap());
        assert!(d < 0.0, "r = {r}: {d}");
    }
    let d = invariant_lyapunov_coefficient(&ns_setup(0.5).unwrap());
    assert!((d + 0.28125).abs() < 1e-12, "{d}");
}

#[test]
fn curve_radius_grows_like_square_root() {
    let s = ns_setup(0.5).unwrap();
    let seed = State::new(0.3, 0.7);
    let set = CurveSettings::default();
    let small = detect_invariant_curve(&s, 0.005, seed, &set).unwrap();
    let large = detect_invariant_curve(&s, 0.02, seed, &set).unwrap();
    assert!(small.closed && large.closed);
    let ratio = large.mean_radius / small.mean_radius;
    assert!((1.8..=2.2).contains(&ratio), "ratio = {ratio}");
}

#[test]
fn curve_attracts_both_seeds() {
    let s = ns_setup(0.5).unwrap();
    let set = CurveSettings::default();
    let a = detect_invariant_curve(&s, 0.01, State::new(0.3, 0.7), &set).unwrap();
    let b = detect_invariant_curve(&s, 0.01, State::new(0.8, 1.0), &set).unwrap();
    assert!(a.closed && b.closed);
    assert!(a.band_matches(&b, 0.05), "{a:?} {b:?}");
}

#[test]
fn below_criticality_orbits_settle() {
    let s = ns_setup(0.5).unwrap();
    let set = CurveSettings::default();
    for seed in [State::new(0.3, 0.7), State::new(0.8, 1.0)] {
        let st = detect_invariant_curve(&s, -0.05, seed, &set).unwrap();
        assert!(!st.closed && st.r_max < 1e-6, "{st:?}");
    }
}
