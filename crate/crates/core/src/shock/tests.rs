use super::*;
use crate::gas::tests::wide_gas;
use crate::gas::{make_gas, PhaseBounds};
use approx::assert_relative_eq;
use proptest::prelude::*;

fn rest_upstream(theta: f64, l: f64) -> PolarState {
    PolarState {
        theta,
        n: 0.0,
        l,
        rho: 1.0,
        p: 1.0,
    }
}

/// Independent oracle: solve mass, normal momentum and enthalpy continuity by
/// bisection on the downstream density, with no use of the closed forms.
fn oracle_downstream(rho_p: f64, p_p: f64, n_p: f64, gamma: f64) -> (f64, f64, f64) {
    let m = rho_p * n_p;
    let mom = rho_p * n_p * n_p + p_p;
    let h = gamma / (gamma - 1.0) * p_p / rho_p + 0.5 * n_p * n_p;
    let f = |rho: f64| {
        let n = m / rho;
        let p = mom - m * n;
        gamma / (gamma - 1.0) * p / rho + 0.5 * n * n - h
    };
    let rho = crate::numeric::bracket_root(f, rho_p * (1.0 + 1e-9), rho_p * (gamma + 1.0) / (gamma - 1.0))
        .unwrap();
    let n = m / rho;
    (rho, mom - m * n, n)
}

#[test]
fn hugoniot_examples() {
    let g = wide_gas(1.4);
    assert_eq!(hugoniot_value(1.0, 1.0, 1.0, 1.0, &g), 0.0);
    assert_relative_eq!(hugoniot_value(2.0, 1.0, 1.0, 1.0, &g), 3.5, epsilon = 1e-14);
    let s = shock_from_strength(&rest_upstream(0.3, 0.2), 1.0, Orientation::Forward, &g).unwrap();
    assert_relative_eq!(1.0 / s.downstream.rho, 8.0 / 13.0, epsilon = 1e-15);
    assert_relative_eq!(s.downstream.p, 2.0, epsilon = 1e-15);
    assert!(hugoniot_value(8.0 / 13.0, 2.0, 1.0, 1.0, &g).abs() <= 1e-12);
}

#[test]
fn unit_strength_reference() {
    let g = wide_gas(1.4);
    let s = shock_from_strength(&rest_upstream(1.0, 0.5), 1.0, Orientation::Forward, &g).unwrap();
    let c_up = s.upstream.sound_speed(&g);
    let c_down = s.downstream.sound_speed(&g);
    assert_relative_eq!(s.upstream.n / c_up, (13.0f64 / 7.0).sqrt(), epsilon = 1e-15);
    assert_relative_eq!(s.upstream.n / c_up, 1.362_770_287_738_489, epsilon = 1e-14);
    assert_relative_eq!(s.downstream.rho, 1.625, epsilon = 1e-15);
    assert_relative_eq!(s.downstream.p, 2.0, epsilon = 1e-15);
    assert_relative_eq!(s.downstream.n / c_down, (4.0f64 / 7.0).sqrt(), epsilon = 1e-14);
    assert_relative_eq!(s.downstream.n / c_down, 0.755_928_946_018_454_5, epsilon = 1e-14);

    let (rho, p, n) = oracle_downstream(1.0, 1.0, s.upstream.n, 1.4);
    assert_relative_eq!(rho, s.downstream.rho, epsilon = 1e-12);
    assert_relative_eq!(p, s.downstream.p, epsilon = 1e-12);
    assert_relative_eq!(n, s.downstream.n, epsilon = 1e-12);

    // Lax margins against the closed forms
    let lax = check_admissibility(&s, &g);
    assert!(lax.passed());
    let up_margin = lax.get("supersonic_upstream").unwrap().margin;
    assert_relative_eq!(up_margin, 1.4f64.sqrt() * ((13.0f64 / 7.0).sqrt() - 1.0), epsilon = 1e-14);
    let down_margin = lax.get("subsonic_downstream").unwrap().margin;
    let c_minus = (1.4 * 2.0 / 1.625f64).sqrt();
    assert_relative_eq!(down_margin, c_minus * (1.0 - (4.0f64 / 7.0).sqrt()), epsilon = 1e-14);
}

#[test]
fn strength_errors() {
    let g = make_gas(
        1.4,
        PhaseBounds { rho_min: 0.1, rho_max: 10.0, p_min: 1.0, p_max: 10.0, speed_max: 10.0, e_min: 1e-3 },
    )
    .unwrap();
    let up = rest_upstream(0.0, 1.0);
    assert_eq!(shock_from_strength(&up, 0.0, Orientation::Forward, &g), Err(Error::NoJump(0.0)));
    assert!(matches!(
        shock_from_strength(&up, 9.5, Orientation::Forward, &g),
        Err(Error::StrengthTooLarge { .. })
    ));
    // z = 9 from p = 2 leaves the pressure bound
    let up = PolarState { p: 2.0, ..up };
    assert!(matches!(
        shock_from_strength(&up, 9.0, Orientation::Forward, &g),
        Err(Error::OutOfPhaseSpace(_))
    ));
}

#[test]
fn jump_size_vanishes_linearly() {
    let g = wide_gas(1.4);
    let up = rest_upstream(0.7, 0.4);
    let mut prev = f64::INFINITY;
    for k in 1..12 {
        let z = 10f64.powi(-k);
        let s = shock_from_strength(&up, z, Orientation::Forward, &g).unwrap();
        let ratio = s.jump_size(&g) / z;
        assert!(ratio < 10.0 && ratio > 0.1, "ratio {ratio}");
        assert!(s.jump_size(&g) < prev);
        prev = s.jump_size(&g);
    }
}

#[test]
fn classification_cases() {
    let g = wide_gas(1.4);
    let a = PrimitiveState::new(1.0, 0.3, 0.2, 1.0);
    assert_eq!(classify_discontinuity(&a, &a, 0.4, &g).class, DiscontinuityClass::NotAJump);

    let s = shock_from_strength(&rest_upstream(0.9, 0.3), 0.5, Orientation::Forward, &g).unwrap();
    let c = classify_discontinuity(&s.left(), &s.right(), s.theta, &g);
    assert_eq!(c.class, DiscontinuityClass::ForwardShock);
    assert!((c.shock.unwrap().z - 0.5).abs() <= 1e-10);

    let theta = 0.8;
    let left = PolarState { theta, n: 0.0, l: 1.0, rho: 1.0, p: 1.0 }.to_primitive();
    let right = PolarState { theta, n: 0.0, l: -2.0, rho: 3.0, p: 1.0 }.to_primitive();
    assert_eq!(classify_discontinuity(&left, &right, theta, &g).class, DiscontinuityClass::Contact);

    let c = classify_discontinuity(&s.right(), &s.left(), s.theta, &g);
    assert_eq!(c.class, DiscontinuityClass::Inadmissible("entropy decreases".into()));

    let rev = s.reversed();
    let report = check_admissibility(&rev, &g);
    assert!(!report.get("compressive").unwrap().passed);
    assert!(!report.get("entropy").unwrap().passed);

    let b = PrimitiveState::new(2.0, 0.3, 0.2, 1.0);
    assert!(matches!(
        classify_discontinuity(&a, &b, 0.4, &g).class,
        DiscontinuityClass::Inadmissible(_)
    ));
}

#[test]
fn backward_classification_recovers_strength() {
    let g = wide_gas(1.4);
    let s = shock_from_strength(&rest_upstream(2.0, -0.6), 2.5, Orientation::Backward, &g).unwrap();
    assert!(s.upstream.n < 0.0 && s.downstream.n < 0.0);
    let c = classify_discontinuity(&s.left(), &s.right(), s.theta, &g);
    assert_eq!(c.class, DiscontinuityClass::BackwardShock);
    assert!((c.shock.unwrap().z - 2.5).abs() <= 1e-10);
}

#[test]
fn rh_residual_is_flux_difference() {
    let g = wide_gas(1.4);
    let a = PrimitiveState::new(1.0, 0.3, 0.2, 1.0);
    let b = PrimitiveState::new(2.0, -0.1, 0.5, 3.0);
    let theta: f64 = 1.1;
    let (fxa, fya) = crate::gas::physical_fluxes(&a, &g);
    let (fxb, fyb) = crate::gas::physical_fluxes(&b, &g);
    let direct = (fxb - fxa) * theta.sin() - (fyb - fya) * theta.cos();
    assert!((rh_residual(&a, &b, theta, &g) - direct).norm() < 1e-15);
    assert!(rh_residual(&a, &b, theta, &g).norm() > 0.1);
    assert_eq!(rh_residual(&a, &a, theta, &g), Vec4::zeros());
    let s = shock_from_strength(&rest_upstream(0.2, 0.1), 1.0, Orientation::Forward, &g).unwrap();
    assert!(rh_residual(&s.left(), &s.right(), s.theta, &g).amax() <= 1e-12);
}

#[test]
fn inverse_constructions_agree() {
    let g = wide_gas(1.3);
    for orient in [Orientation::Forward, Orientation::Backward] {
        let s = shock_from_strength(&rest_upstream(0.4, 0.7), 3.0, orient, &g).unwrap();
        let t = shock_from_downstream(&s.downstream, 3.0, orient, &g).unwrap();
        assert_relative_eq!(t.upstream.rho, s.upstream.rho, max_relative = 1e-14);
        assert_relative_eq!(t.upstream.p, s.upstream.p, max_relative = 1e-14);
        assert_relative_eq!(t.upstream.n, s.upstream.n, max_relative = 1e-14);
        let m = s.downstream.normal_mach(&g).abs();
        assert_relative_eq!(strength_from_downstream_mach(m, &g).unwrap(), 3.0, max_relative = 1e-12);
        let m = s.upstream.normal_mach(&g).abs();
        assert_relative_eq!(strength_from_upstream_mach(m, &g), 3.0, max_relative = 1e-13);
    }
    assert!(strength_from_downstream_mach(1.0, &g).is_err());
}

#[test]
fn jump_angle_recovers_ray() {
    let g = wide_gas(1.4);
    let s = shock_from_strength(&rest_upstream(2.5, 0.3), 1.5, Orientation::Forward, &g).unwrap();
    let t = jump_angle(&s.left(), &s.right()).unwrap();
    assert!((t - 2.5).abs() < 1e-12);
}

#[test]
fn lax_bound_constants() {
    // gamma = 1.4, z_max = 9, speed_max = 10, c_min = 1
    let g = make_gas(
        1.4,
        PhaseBounds { rho_min: 0.1, rho_max: 1.4, p_min: 1.0, p_max: 10.0, speed_max: 10.0, e_min: 1e-3 },
    )
    .unwrap();
    assert_relative_eq!(g.c_min(), 1.0, epsilon = 1e-15);
    let b = lax_bound(&g);
    assert_relative_eq!(b.a1, 0.021_688_854_475_828_29, epsilon = 1e-15);
    assert!(b.delta_l > 0.0);
    let mut wider = *g.bounds();
    wider.speed_max = 20.0;
    let g2 = make_gas(1.4, wider).unwrap();
    assert!(lax_neighborhood_bound(&g2) < lax_neighborhood_bound(&g));
}

#[test]
fn lax_bound_dominates_margins() {
    // every shock's sonic margins, divided by speed_max, exceed delta_L J
    let g = make_gas(
        1.4,
        PhaseBounds { rho_min: 0.1, rho_max: 10.0, p_min: 0.5, p_max: 20.0, speed_max: 8.0, e_min: 1e-3 },
    )
    .unwrap();
    let dl = lax_neighborhood_bound(&g);
    for z in [1e-3, 0.1, 1.0, 5.0, 20.0] {
        let up = PolarState { theta: 0.0, n: 0.0, l: 0.5, rho: 1.0, p: 0.7 };
        let s = shock_from_strength(&up, z, Orientation::Forward, &g).unwrap();
        let j = s.jump_size(&g);
        let w_up = (s.upstream.n - s.upstream.sound_speed(&g)) / g.bounds().speed_max;
        let w_down = (s.downstream.sound_speed(&g) - s.downstream.n) / g.bounds().speed_max;
        assert!(w_up >= dl * j && w_down >= dl * j);
    }
}

fn shock_case() -> impl Strategy<Value = (f64, f64, f64, f64, f64, f64, bool)> {
    (1.1f64..5.0 / 3.0, 0.0f64..1.0, 0.1f64..10.0, 0.1f64..10.0, -5.0f64..5.0, 0.0f64..6.28, any::<bool>())
}

proptest! {
    #[test]
    fn constructed_shocks_satisfy_everything((gamma, t, rho, p, l, theta, fwd) in shock_case()) {
        let g = wide_gas(gamma);
        let z = 1e-6 + t * (g.bounds().p_max / p - 1.0).min(50.0);
        let orient = if fwd { Orientation::Forward } else { Orientation::Backward };
        let up = PolarState { theta, n: 0.0, l, rho, p };
        let s = shock_from_strength(&up, z, orient, &g).unwrap();
        for r in polar_jump_residuals(&s, &g) {
            prop_assert!(r <= 1e-12);
        }
        prop_assert!(rh_relative_residual(&s.left(), &s.right(), theta, &g) <= 1e-12);
        let h = hugoniot_value(1.0 / s.downstream.rho, s.downstream.p, 1.0 / rho, p, &g);
        prop_assert!(h.abs() <= 1e-12 * (s.downstream.p / s.downstream.rho));
        prop_assert!((s.downstream.p / s.upstream.p - 1.0 - z).abs() <= 1e-12 * (1.0 + z));
        prop_assert!(check_admissibility(&s, &g).passed());
        prop_assert_eq!(s.upstream.l, s.downstream.l);
    }

    #[test]
    fn reflection_gives_backward_shock((gamma, t, rho, p, l, theta, _f) in shock_case()) {
        let g = wide_gas(gamma);
        let z = 1e-3 + t * 10.0;
        let up = PolarState { theta, n: 0.0, l, rho, p };
        let f = shock_from_strength(&up, z, Orientation::Forward, &g).unwrap();
        let b = shock_from_strength(&up, z, Orientation::Backward, &g).unwrap();
        prop_assert_eq!(b.upstream.n, -f.upstream.n);
        prop_assert!((b.downstream.n + f.downstream.n).abs() <= 1e-15 * f.downstream.n.abs());
        prop_assert_eq!(b.downstream.rho, f.downstream.rho);
        let c = classify_discontinuity(&b.left(), &b.right(), theta, &g);
        prop_assert_eq!(c.class, DiscontinuityClass::BackwardShock);
    }
}
