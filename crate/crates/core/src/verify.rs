//! Quadrature checks of the integrated weak form, the entropy inequality and
//! the smooth equations, plus the aggregate audit of a flow.
//!
//! Residuals are reported relative to the flow's flux scale (the largest
//! `|f^x| + |f^y|` over its stored states), so tolerances do not depend on units.

use serde::Serialize;

use crate::flowfield::{sector_decompose, validate_structure, FlowField, Sector, WavePiece};
use crate::gas::{angular_flux, physical_fluxes, PrimitiveState, Vec4};
use crate::numeric::gauss_legendre;
use crate::polar::PolarState;
use crate::report::CheckList;
use crate::shock::check_admissibility;

/// Tolerance for intervals without waves, where jumps and rotations cancel exactly.
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Tolerance for intervals touching a numerically integrated wave.
pub const WAVE_TOL: f64 = 1e-6;
/// Default Gauss–Legendre panels per smooth segment.
pub const QUAD_PANELS: usize = 4;
/// Step for central differences in [`smooth_residual`].
const FD_STEP: f64 = 1e-5;
/// Longest panel allowed on a constant segment.
const MAX_PANEL: f64 = 0.5;

fn stored_states(f: &FlowField) -> Vec<PrimitiveState> {
    let mut out = Vec::new();
    for p in &f.pieces {
        out.push(p.left_state());
        out.push(p.right_state());
        if let WavePiece::Wave(w) = p {
            out.extend(w.samples.iter().map(|s| s.state));
        }
    }
    out
}

/// Largest `|f^x| + |f^y|` over the flow's stored states.
pub fn flux_scale(f: &FlowField) -> f64 {
    stored_states(f)
        .iter()
        .map(|s| {
            let (fx, fy) = physical_fluxes(s, &f.gas);
            fx.norm() + fy.norm()
        })
        .fold(0.0, f64::max)
}

/// Piece boundaries and wave samples of `f` inside `(a, b)`, for any real `a < b`.
fn splits(f: &FlowField, a: f64, b: f64) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let base = f.breakpoints();
    let mut out = vec![a];
    let k0 = ((a - f.origin) / tau).floor() as i64 - 1;
    let k1 = ((b - f.origin) / tau).ceil() as i64 + 1;
    for k in k0..=k1 {
        for t in &base {
            let x = t + k as f64 * tau;
            if x > a && x < b {
                out.push(x);
            }
        }
    }
    out.push(b);
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup();
    out
}

fn integrate_segments<F>(f: &FlowField, a: f64, b: f64, panels: usize, mut g: F) -> Vec4
where
    F: FnMut(f64) -> Vec4,
{
    let pts = splits(f, a, b);
    let mut acc = Vec4::zeros();
    for w in pts.windows(2) {
        let len = w[1] - w[0];
        let n = panels.max(1) * ((len / MAX_PANEL).ceil() as usize).max(1);
        acc += gauss_legendre(&mut g, w[0], w[1], n, Vec4::zeros());
    }
    acc
}

/// `F(theta2) - F(theta1) - int cos f^x + sin f^y` with `F = sin f^x - cos f^y`,
/// relative to the flux scale. The state at `theta1` is the right limit and at
/// `theta2` the left limit. `quad_points` is the number of 8-node panels per
/// smooth segment.
pub fn weak_residual(f: &FlowField, theta1: f64, theta2: f64, quad_points: usize) -> Vec4 {
    let g = &f.gas;
    let boundary = angular_flux(&f.evaluate_left(theta2), theta2, g)
        - angular_flux(&f.evaluate(theta1), theta1, g);
    let integral = integrate_segments(f, theta1, theta2, quad_points, |eta| {
        let (fx, fy) = physical_fluxes(&f.evaluate(eta), g);
        fx * eta.cos() + fy * eta.sin()
    });
    (boundary - integral) / flux_scale(f).max(f64::MIN_POSITIVE)
}

fn entropy_flux(s: &PrimitiveState, theta: f64, f: &FlowField) -> f64 {
    let p = PolarState::from_primitive(s, theta);
    p.rho * p.n * s.entropy(&f.gas)
}

/// Entropy production `int rho L s - [rho N s]` over `[theta1, theta2]` with the
/// surrogate `s = p / rho^gamma`, relative to the flow's scale of `rho |u| s`.
/// Nonnegative for admissible flows.
pub fn entropy_residual(f: &FlowField, theta1: f64, theta2: f64, quad_points: usize) -> f64 {
    let boundary =
        entropy_flux(&f.evaluate_left(theta2), theta2, f) - entropy_flux(&f.evaluate(theta1), theta1, f);
    let integral = integrate_segments(f, theta1, theta2, quad_points, |eta| {
        let s = f.evaluate(eta);
        let p = PolarState::from_primitive(&s, eta);
        Vec4::new(p.rho * p.l * s.entropy(&f.gas), 0.0, 0.0, 0.0)
    })[0];
    let scale = stored_states(f)
        .iter()
        .map(|s| s.rho * s.speed() * s.entropy(&f.gas))
        .fold(0.0, f64::max);
    (integral - boundary) / scale.max(f64::MIN_POSITIVE)
}

fn polar_terms(s: &PrimitiveState, theta: f64, f: &FlowField) -> (Vec4, Vec4) {
    let p = PolarState::from_primitive(s, theta);
    let e = s.energy(&f.gas);
    let lhs = Vec4::new(
        p.rho * p.n,
        p.rho * p.n * p.n + p.p,
        p.rho * p.l * p.n,
        p.n * (e + p.p),
    );
    let src = Vec4::new(
        p.rho * p.l,
        2.0 * p.rho * p.n * p.l,
        p.rho * (p.l * p.l - p.n * p.n),
        p.l * (e + p.p),
    );
    (lhs, src)
}

/// Componentwise maximum over `samples` evenly spaced angles of the central
/// difference residual of the polar-form equations, relative to the flux
/// scale. Angles within two steps of a piece boundary or wave sample are skipped.
pub fn smooth_residual(f: &FlowField, samples: usize) -> Vec4 {
    let samples = samples.max(1);
    let tau = std::f64::consts::TAU;
    let bps = f.breakpoints();
    let scale = flux_scale(f).max(f64::MIN_POSITIVE);
    let mut worst = Vec4::zeros();
    for k in 0..samples {
        let t = f.origin + tau * (k as f64 + 0.5) / samples as f64;
        if bps.iter().any(|b| (b - t).abs() < 2.0 * FD_STEP) {
            continue;
        }
        let (lp, _) = polar_terms(&f.evaluate(t + FD_STEP), t + FD_STEP, f);
        let (lm, _) = polar_terms(&f.evaluate(t - FD_STEP), t - FD_STEP, f);
        let (_, src) = polar_terms(&f.evaluate(t), t, f);
        let r = ((lp - lm) / (2.0 * FD_STEP) - src) / scale;
        worst = worst.zip_map(&r, |a, b| a.max(b.abs()));
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalResidual {
    pub theta1: f64,
    pub theta2: f64,
    pub residual: [f64; 4],
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyViolation {
    pub theta1: f64,
    pub theta2: f64,
    pub production: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShockAudit {
    pub piece: usize,
    pub theta: f64,
    pub checks: CheckList,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub weak_residual_max: [f64; 4],
    pub weak_intervals: Vec<IntervalResidual>,
    pub entropy_violations: Vec<EntropyViolation>,
    pub entropy_min: f64,
    pub smooth_residual_max: [f64; 4],
    pub admissibility: Vec<ShockAudit>,
    pub structure: CheckList,
    pub sectors: Vec<Sector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector_error: Option<String>,
    pub verdict: bool,
}

impl AuditReport {
    /// One line per failed sub-check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for w in self.weak_intervals.iter().filter(|w| !w.passed) {
            out.push(format!(
                "weak form on [{:.6}, {:.6}]: {:.3e} > {:.0e}",
                w.theta1,
                w.theta2,
                max_abs(&w.residual),
                w.tolerance
            ));
        }
        for e in &self.entropy_violations {
            out.push(format!(
                "entropy production {:.3e} on [{:.6}, {:.6}]",
                e.production, e.theta1, e.theta2
            ));
        }
        if max_abs(&self.smooth_residual_max) > WAVE_TOL {
            out.push(format!(
                "smooth residual {:.3e} > {WAVE_TOL:.0e}",
                max_abs(&self.smooth_residual_max)
            ));
        }
        for s in &self.admissibility {
            for c in s.checks.failures() {
                out.push(format!("shock {} at {:.6}: {} fails", s.piece, s.theta, c.name));
            }
        }
        for c in self.structure.failures() {
            out.push(format!("structure: {} fails {}", c.name, c.detail));
        }
        if let Some(e) = &self.sector_error {
            out.push(format!("sectors: {e}"));
        }
        out
    }
}

fn max_abs(v: &[f64; 4]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn arr(v: Vec4) -> [f64; 4] {
    [v[0], v[1], v[2], v[3]]
}

/// Intervals straddling each jump, reaching halfway into its neighbors when
/// those are constant pieces.
pub fn straddling_intervals(f: &FlowField) -> Vec<(f64, f64)> {
    let n = f.pieces.len();
    let half_width = |j: usize| match &f.pieces[j] {
        WavePiece::Constant { start, end, .. } => 0.5 * (end - start),
        _ => 0.0,
    };
    f.pieces
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_jump())
        .filter_map(|(i, p)| {
            let t = p.extent().0;
            let w = half_width((i + n - 1) % n).min(half_width((i + 1) % n)).min(0.5);
            (w > 0.0).then_some((t - w, t + w))
        })
        .collect()
}

/// Overlapping intervals of length `2 * 2pi / count` starting every `2pi / count`.
pub fn covering_intervals(f: &FlowField, count: usize) -> Vec<(f64, f64)> {
    let h = std::f64::consts::TAU / count.max(1) as f64;
    (0..count)
        .map(|k| {
            let a = f.origin + h * k as f64;
            (a, a + 2.0 * h)
        })
        .collect()
}

fn touches_wave(f: &FlowField, a: f64, b: f64) -> bool {
    let tau = std::f64::consts::TAU;
    f.waves().any(|(_, w)| {
        let (lo, hi) = w.extent();
        (-1..=1).any(|k| {
            let s = k as f64 * tau;
            lo + s < b && hi + s > a
        })
    })
}

/// Runs every check on the flow and aggregates the verdict.
pub fn full_audit(f: &FlowField) -> AuditReport {
    let mut intervals = straddling_intervals(f);
    intervals.extend(covering_intervals(f, 64));
    let mut weak_intervals = Vec::with_capacity(intervals.len());
    let mut weak_max = Vec4::zeros();
    let mut entropy_violations = Vec::new();
    let mut entropy_min = f64::INFINITY;
    for &(a, b) in &intervals {
        let r = weak_residual(f, a, b, QUAD_PANELS);
        let tolerance = if touches_wave(f, a, b) { WAVE_TOL } else { ALGEBRAIC_TOL };
        weak_max = weak_max.zip_map(&r, |m, x| m.max(x.abs()));
        weak_intervals.push(IntervalResidual {
            theta1: a,
            theta2: b,
            residual: arr(r),
            tolerance,
            passed: r.amax() <= tolerance,
        });
        let prod = entropy_residual(f, a, b, QUAD_PANELS);
        entropy_min = entropy_min.min(prod);
        if prod < -tolerance {
            entropy_violations.push(EntropyViolation {
                theta1: a,
                theta2: b,
                production: prod,
            });
        }
    }
    let smooth = smooth_residual(f, 4096);
    let admissibility: Vec<ShockAudit> = f
        .shocks()
        .map(|(i, s)| ShockAudit {
            piece: i,
            theta: s.theta,
            checks: check_admissibility(s, &f.gas),
        })
        .collect();
    let structure = validate_structure(f);
    let (sectors, sector_error) = match sector_decompose(f) {
        Ok(s) => (s, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let verdict = weak_intervals.iter().all(|w| w.passed)
        && entropy_violations.is_empty()
        && smooth.amax() <= WAVE_TOL
        && admissibility.iter().all(|s| s.checks.passed())
        && structure.passed()
        && sector_error.is_none();
    AuditReport {
        weak_residual_max: arr(weak_max),
        weak_intervals,
        entropy_violations,
        entropy_min,
        smooth_residual_max: arr(smooth),
        admissibility,
        structure,
        sectors,
        sector_error,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowfield::{build_flow, Anchor, Angle, FlowSpec, SolverSpec};
    use crate::gas::tests::wide_gas;

    fn uniform() -> FlowField {
        let spec = FlowSpec {
            anchor: Anchor {
                theta: Angle(0.4),
                rho: 1.3,
                p: 0.7,
                l: 2.5,
            },
            pieces: vec![],
            solver: SolverSpec::default(),
        };
        build_flow(&wide_gas(1.4), &spec).unwrap()
    }

    #[test]
    fn constant_interval_matches_the_rotation_identity() {
        let f = uniform();
        for (a, b) in [(0.5, 1.7), (1.0, 1.0001), (2.0, 5.5)] {
            assert!(weak_residual(&f, a, b, 1).amax() <= 1e-12);
        }
        // straddling the trivial contacts and the origin
        assert!(weak_residual(&f, -1.0, 4.0, 2).amax() <= 1e-12);
    }

    #[test]
    fn constant_state_produces_no_entropy() {
        let f = uniform();
        assert!(entropy_residual(&f, 0.1, 3.0, 2).abs() <= 1e-13);
    }

    #[test]
    fn smooth_residual_of_a_constant_state_is_truncation_only() {
        let f = uniform();
        assert!(smooth_residual(&f, 1000).amax() <= 1e-8);
    }

    #[test]
    fn uniform_flow_audit_passes() {
        let f = uniform();
        let a = full_audit(&f);
        assert!(a.verdict, "{:?}", a.failures());
        assert!(a.admissibility.is_empty());
        assert_eq!(a.sectors.len(), 2);
        assert!(max_abs(&a.weak_residual_max) <= 1e-12);
    }

    #[test]
    fn intervals_cover_the_circle() {
        let f = uniform();
        let iv = covering_intervals(&f, 8);
        assert_eq!(iv.len(), 8);
        assert_eq!(iv[0].0, f.origin);
        assert!((iv[7].1 - (f.origin + std::f64::consts::TAU + std::f64::consts::TAU / 8.0)).abs() < 1e-12);
        // the trivial contacts have constant neighbors
        assert_eq!(straddling_intervals(&f).len(), 2);
    }
}
