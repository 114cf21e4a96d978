use std::f64::consts::{FRAC_PI_2, PI, TAU};

use approx::assert_relative_eq;

use super::*;
use crate::shock::Orientation;
use crate::gas::tests::wide_gas;
use crate::verify::full_audit;

fn uniform_spec(theta: f64, l: f64) -> FlowSpec {
    FlowSpec {
        anchor: Anchor {
            theta: Angle(theta),
            rho: 1.0,
            p: 1.0,
            l,
        },
        pieces: vec![],
        solver: SolverSpec::default(),
    }
}

#[test]
fn uniform_flow_builds_two_sectors() {
    let g = wide_gas(1.4);
    let f = build_flow(&g, &uniform_spec(0.3, 2.0)).unwrap();
    assert_eq!(f.jumps().len(), 2);
    for (_, d) in f.jumps() {
        assert_eq!(d.norm(), 0.0);
    }
    let s = sector_decompose(&f).unwrap();
    assert_eq!(s.len(), 2);
    // flow angle is 0.3; the axes sit a quarter turn from the zeros of N
    assert_eq!(s[0].direction, Orientation::Forward);
    assert_relative_eq!(s[0].theta_bar, 0.3 + FRAC_PI_2, epsilon = 1e-12);
    assert_eq!(s[1].direction, Orientation::Backward);
    assert_relative_eq!(s[1].theta_bar, 0.3 + 3.0 * FRAC_PI_2, epsilon = 1e-12);
    let report = validate_structure(&f);
    assert!(report.passed(), "{report:?}");
    let audit = full_audit(&f);
    assert!(audit.verdict, "{:?}", audit.failures());
}

#[test]
fn evaluation_is_right_continuous() {
    let g = wide_gas(1.4);
    let f = build_flow(&g, &uniform_spec(0.0, 1.0)).unwrap();
    let s = f.evaluate(1.0);
    assert_eq!(s, f.evaluate(1.0 + TAU));
    assert_eq!(evaluate(&f, PI), f.evaluate_left(PI));
}

#[test]
fn trivial_contact_is_rejected() {
    let g = wide_gas(1.4);
    let mut spec = uniform_spec(0.0, 1.0);
    spec.pieces.push(PieceSpec::Contact { rho: 1.0, l: -1.0 });
    let err = build_flow(&g, &spec).unwrap_err();
    assert!(err.to_string().contains("trivial contact"), "{err}");
}

#[test]
fn four_contacts_are_rejected_before_marching() {
    let g = wide_gas(1.4);
    let mut spec = uniform_spec(0.0, 1.0);
    for _ in 0..3 {
        spec.pieces.push(PieceSpec::Contact { rho: 2.0, l: -1.0 });
    }
    assert_eq!(build_flow(&g, &spec).unwrap_err(), Error::TooManySectors(4));
}

#[test]
fn march_errors_carry_the_piece_index() {
    let g = wide_gas(1.4);
    let mut spec = uniform_spec(0.0, 1.0);
    // a subsonic state cannot reach the normal velocity of a strong shock
    spec.pieces.push(PieceSpec::Shock {
        orientation: Orientation::Forward,
        z: Some(1.0),
        theta: None,
        side: Some(Side::Positive),
    });
    spec.pieces.push(PieceSpec::Shock {
        orientation: Orientation::Backward,
        z: Some(100.0),
        theta: None,
        side: None,
    });
    match build_flow(&g, &spec).unwrap_err() {
        Error::Piece { index, .. } => assert_eq!(index, 1),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn shock_needs_exactly_one_of_strength_and_angle() {
    let g = wide_gas(1.4);
    let mut spec = uniform_spec(0.0, 3.0);
    spec.pieces.push(PieceSpec::Shock {
        orientation: Orientation::Forward,
        z: None,
        theta: None,
        side: None,
    });
    let err = march(&g, &spec).unwrap_err();
    assert!(err.to_string().contains("exactly one"), "{err}");
}

#[test]
fn too_many_shooting_variables() {
    let g = wide_gas(1.4);
    let mut spec = uniform_spec(0.0, 3.0);
    spec.solver.shoot = vec![ShootVar::AnchorL, ShootVar::AnchorP, ShootVar::AnchorRho];
    assert!(matches!(build_flow(&g, &spec), Err(Error::Argument(_))));
    spec.solver.shoot = vec![ShootVar::ShockZ(3)];
    assert!(matches!(build_flow(&g, &spec), Err(Error::Argument(_))));
}

#[test]
fn shock_at_a_given_angle_uses_the_local_normal_mach() {
    let g = wide_gas(1.4);
    let mut spec = uniform_spec(0.0, 3.0);
    // flow angle 0: forward sector on (0, pi) with N = 3 sin(theta)
    spec.pieces.push(PieceSpec::Shock {
        orientation: Orientation::Forward,
        z: None,
        theta: Some(Angle(0.2)),
        side: None,
    });
    let m = march(&g, &spec).unwrap();
    let WavePiece::Shock(s) = &m.pieces[1] else { panic!() };
    assert_relative_eq!(s.theta, 0.2, epsilon = 1e-15);
    let c = (1.4f64).sqrt();
    assert_relative_eq!(s.downstream.n, 3.0 * 0.2f64.sin(), max_relative = 1e-14);
    assert_relative_eq!(
        crate::shock::downstream_normal_mach(s.z, &g),
        3.0 * 0.2f64.sin() / c,
        max_relative = 1e-12
    );
    // gas still has to close the circle
    assert!(m.closure.max_abs() > 1e-3);
}

#[test]
fn wave_samples_are_reproduced_exactly() {
    let g = wide_gas(1.4);
    let mut spec = uniform_spec(0.0, 3.0);
    spec.pieces.push(PieceSpec::PmWave {
        orientation: Orientation::Forward,
        wave: crate::pmwave::WaveKind::Expansion,
        span: None,
        to_axis: true,
    });
    let m = march(&g, &spec).unwrap();
    let WavePiece::Wave(w) = &m.pieces[1] else { panic!() };
    // the expansion ends on the axis where L = 0
    let end = PolarState::from_primitive(&w.end_state(), w.theta_end);
    assert!(end.l.abs() <= 1e-12);
    let pieces = m.pieces.clone();
    let probe = FlowField {
        gas: g,
        origin: 0.0,
        pieces,
        closure: m.closure,
    };
    for s in &w.samples {
        assert_eq!(probe.evaluate(s.theta), s.state);
    }
}

#[test]
fn a_wave_can_continue_from_the_end_of_the_previous_one() {
    let g = wide_gas(1.4);
    let mut spec = uniform_spec(0.0, 3.0);
    for _ in 0..2 {
        spec.pieces.push(PieceSpec::PmWave {
            orientation: Orientation::Forward,
            wave: crate::pmwave::WaveKind::Expansion,
            span: Some(Angle(0.1)),
            to_axis: false,
        });
    }
    let m = march(&g, &spec).unwrap();
    let (WavePiece::Wave(a), WavePiece::Wave(b)) = (&m.pieces[1], &m.pieces[2]) else {
        panic!("{:?}", m.pieces)
    };
    assert_eq!(b.theta_start, a.theta_end);
    assert_eq!(b.samples[0].state, a.end_state());
}
