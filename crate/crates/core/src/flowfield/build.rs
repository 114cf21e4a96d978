//! Marching a wave-sequence description around the circle, and shooting on
//! up to two of its scalars until the flow closes.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Vector2};

use super::spec::{FlowSpec, PieceSpec, ShootVar, Side};
use super::{ClosureResidual, FlowField, WavePiece};
use crate::error::{Error, Result};
use crate::gas::{in_phase_space, GasModel, PrimitiveState};
use crate::pmwave::{integrate_pm, integrate_pm_to_axis, steps_for, WaveKind};
use crate::polar::{next_at_or_after, PolarState};
use crate::shock::{
    downstream_normal_mach, shock_from_downstream, shock_from_strength,
    strength_from_downstream_mach, strength_from_upstream_mach, upstream_normal_mach, EQUAL_TOL,
    Orientation,
};

/// Minimal angular gap between a piece and the next one placed on the same state.
const GAP: f64 = 1e-9;

/// Result of marching once around the circle from the anchor.
#[derive(Debug, Clone)]
pub struct Marched {
    pub pieces: Vec<WavePiece>,
    pub origin: f64,
    /// Angle of the zero of `N` that closes the flow.
    pub theta_close: f64,
    pub closure: ClosureResidual,
}

/// Angles where the constant state's normal velocity vanishes: `phi` and `phi + pi`.
fn normal_zeros(s: &PrimitiveState) -> [f64; 2] {
    let phi = s.v.atan2(s.u);
    [phi, phi + PI]
}

fn next_zero_after(s: &PrimitiveState, pos: f64) -> f64 {
    normal_zeros(s)
        .iter()
        .map(|&z| next_at_or_after(z, pos + GAP))
        .fold(f64::INFINITY, f64::min)
}

/// First angle after `pos` where the constant state `s` has normal velocity
/// `target`, optionally restricted to one sign of `L`.
fn next_normal_value(s: &PrimitiveState, target: f64, side: Option<Side>, pos: f64) -> Result<f64> {
    let q = s.speed();
    if target.abs() > q {
        return Err(Error::Flow(format!(
            "state with speed {q} never reaches normal velocity {target}"
        )));
    }
    let phi = s.v.atan2(s.u);
    let a = (target / q).asin();
    // N = q sin(theta - phi), L = q cos(theta - phi)
    let candidates: Vec<f64> = match side {
        Some(Side::Positive) => vec![phi + a],
        Some(Side::Negative) => vec![phi + PI - a],
        None => vec![phi + a, phi + PI - a],
    };
    let t = candidates
        .iter()
        .map(|&c| next_at_or_after(c, pos + GAP))
        .fold(f64::INFINITY, f64::min);
    if next_zero_after(s, pos) < t {
        return Err(Error::Flow(
            "normal velocity vanishes before the piece is reached".into(),
        ));
    }
    Ok(t)
}

struct Marcher<'a> {
    g: &'a GasModel,
    steps_per_radian: usize,
    pieces: Vec<WavePiece>,
    cur: PrimitiveState,
    pos: f64,
}

impl Marcher<'_> {
    fn close_constant(&mut self, until: f64) {
        if until > self.pos {
            self.pieces.push(WavePiece::Constant {
                start: self.pos,
                end: until,
                state: self.cur,
            });
        }
        self.pos = until;
    }

    fn shock(
        &mut self,
        orientation: Orientation,
        z: Option<f64>,
        theta: Option<f64>,
        side: Option<Side>,
    ) -> Result<()> {
        let c = self.cur.sound_speed(self.g);
        let g = self.g;
        let (theta_s, z) = match (z, theta) {
            (Some(z), None) => {
                if !(z > 0.0) {
                    return Err(Error::NoJump(z));
                }
                // marching towards larger angles: forward shocks are met from
                // their downstream side, backward shocks from upstream
                let target = match orientation {
                    Orientation::Forward => c * downstream_normal_mach(z, g),
                    Orientation::Backward => -c * upstream_normal_mach(z, g),
                };
                (next_normal_value(&self.cur, target, side, self.pos)?, z)
            }
            (None, Some(t)) => {
                let t = next_at_or_after(t, self.pos + GAP);
                if next_zero_after(&self.cur, self.pos) < t {
                    return Err(Error::Flow(
                        "normal velocity vanishes before the shock angle".into(),
                    ));
                }
                let m = PolarState::from_primitive(&self.cur, t).normal_mach(g);
                let z = match orientation {
                    Orientation::Forward => strength_from_downstream_mach(m, g)?,
                    Orientation::Backward => {
                        if -m <= 1.0 {
                            return Err(Error::Flow(format!(
                                "normal Mach {m} at the shock angle is not supersonic"
                            )));
                        }
                        strength_from_upstream_mach(-m, g)
                    }
                };
                (t, z)
            }
            _ => {
                return Err(Error::Flow(
                    "a shock needs exactly one of z and theta".into(),
                ))
            }
        };
        let here = PolarState::from_primitive(&self.cur, theta_s);
        let sol = match orientation {
            Orientation::Forward => shock_from_downstream(&here, z, orientation, g)?,
            Orientation::Backward => shock_from_strength(&here, z, orientation, g)?,
        };
        self.close_constant(theta_s);
        self.cur = sol.right();
        self.pieces.push(WavePiece::Shock(sol));
        Ok(())
    }

    fn contact(&mut self, rho: f64, l: f64) -> Result<()> {
        let t = next_zero_after(&self.cur, self.pos);
        let right = PrimitiveState::new(rho, l * t.cos(), l * t.sin(), self.cur.p);
        in_phase_space(&right, self.g).into_result()?;
        let left_l = PolarState::from_primitive(&self.cur, t).l;
        if (rho - self.cur.rho).abs() <= EQUAL_TOL * rho
            && (l - left_l).abs() <= EQUAL_TOL * l.abs().max(left_l.abs())
        {
            return Err(Error::Flow(
                "trivial contact: density and tangential velocity do not jump".into(),
            ));
        }
        self.close_constant(t);
        self.pieces.push(WavePiece::Contact {
            theta: t,
            left: self.cur,
            right,
        });
        self.cur = right;
        Ok(())
    }

    fn wave(
        &mut self,
        orientation: Orientation,
        kind: WaveKind,
        span: Option<f64>,
        to_axis: bool,
    ) -> Result<()> {
        let c = self.cur.sound_speed(self.g);
        let side = match kind {
            WaveKind::Expansion => Side::Positive,
            WaveKind::Compression => Side::Negative,
        };
        let here = PolarState::from_primitive(&self.cur, self.pos);
        let sonic_here = matches!(self.pieces.last(), Some(WavePiece::Wave(_)))
            && (here.n - orientation.sign() * c).abs() <= 1e-9 * c
            && side.sign() * here.l > 0.0;
        // a wave may continue directly from the end of the previous one
        let start = if sonic_here {
            self.pos
        } else {
            next_normal_value(&self.cur, orientation.sign() * c, Some(side), self.pos)?
        };
        let w = match (span, to_axis) {
            (Some(span), false) => {
                if !(span > 0.0) {
                    return Err(Error::Wave(format!("span must be positive (got {span})")));
                }
                integrate_pm(
                    &self.cur,
                    start,
                    start + span,
                    orientation,
                    steps_for(span, self.steps_per_radian),
                    self.g,
                )?
            }
            (None, true) => {
                let w = integrate_pm_to_axis(&self.cur, start, orientation, self.steps_per_radian, self.g)?;
                if w.theta_end < w.theta_start {
                    return Err(Error::Wave(
                        "this wave reaches the axis only at smaller angles".into(),
                    ));
                }
                w
            }
            _ => {
                return Err(Error::Wave(
                    "a wave needs exactly one of span and to_axis".into(),
                ))
            }
        };
        if w.kind != kind {
            return Err(Error::Wave(format!("integrated wave is a {:?}", w.kind)));
        }
        self.close_constant(start);
        self.cur = w.end_state();
        self.pos = w.theta_end;
        self.pieces.push(WavePiece::Wave(w));
        Ok(())
    }
}

/// Marches the description once around the circle, without shooting.
pub fn march(g: &GasModel, spec: &FlowSpec) -> Result<Marched> {
    let a = &spec.anchor;
    let origin = a.theta.0;
    let anchor = PrimitiveState::new(a.rho, a.l * origin.cos(), a.l * origin.sin(), a.p);
    in_phase_space(&anchor, g)
        .into_result()
        .map_err(|e| Error::Flow(format!("anchor: {e}")))?;
    let mut m = Marcher {
        g,
        steps_per_radian: spec.solver.pm_steps_per_radian.max(1),
        pieces: Vec::new(),
        cur: anchor,
        pos: origin,
    };
    for (i, p) in spec.pieces.iter().enumerate() {
        let r = match p {
            PieceSpec::Shock {
                orientation,
                z,
                theta,
                side,
            } => m.shock(*orientation, *z, theta.map(|t| t.0), *side),
            PieceSpec::Contact { rho, l } => m.contact(*rho, *l),
            PieceSpec::PmWave {
                orientation,
                wave,
                span,
                to_axis,
            } => m.wave(*orientation, *wave, span.map(|s| s.0), *to_axis),
        };
        r.map_err(|e| e.at_piece(i))?;
        if m.pos > origin + TAU + GAP {
            return Err(Error::Flow("pieces overrun the full circle".into()).at_piece(i));
        }
    }
    if spec.pieces.is_empty() {
        // uniform flow: the two zeros of N are sector boundaries with no jump
        let half = next_zero_after(&anchor, origin);
        m.close_constant(half);
        m.pieces.push(WavePiece::Contact {
            theta: half,
            left: anchor,
            right: anchor,
        });
    }
    let theta_close = next_zero_after(&m.cur, m.pos);
    let closure = ClosureResidual {
        angle: theta_close - (origin + TAU),
        pressure: (m.cur.p - anchor.p) / anchor.p,
    };
    // the residual is reported separately; the pieces always tile exactly
    let end = origin + TAU;
    m.close_constant(end);
    let left = m.cur;
    m.pieces.push(WavePiece::Contact {
        theta: end,
        left,
        right: anchor,
    });
    Ok(Marched {
        pieces: m.pieces,
        origin,
        theta_close,
        closure,
    })
}

fn residual_vec(c: &ClosureResidual) -> Vector2<f64> {
    Vector2::new(c.angle, c.pressure)
}

/// Builds the flow, adjusting the shooting variables until it closes in angle
/// and pressure to `spec.solver.tolerance`.
pub fn build_flow(g: &GasModel, spec: &FlowSpec) -> Result<FlowField> {
    if spec.contact_count() > 3 {
        return Err(Error::TooManySectors(spec.contact_count()));
    }
    let vars = &spec.solver.shoot;
    if vars.len() > 2 {
        return Err(Error::Argument("at most two shooting variables".into()));
    }
    let mut x: Vec<f64> = Vec::with_capacity(vars.len());
    for v in vars {
        x.push(spec.get(*v).ok_or_else(|| {
            Error::Argument(format!("shooting variable {v} does not name a value in the description"))
        })?);
    }
    let tol = spec.solver.tolerance;
    let eval = |x: &[f64]| -> Result<Marched> {
        let mut s = spec.clone();
        for (v, xi) in vars.iter().zip(x) {
            s.set(*v, *xi);
        }
        march(g, &s)
    };
    let mut best = eval(&x)?;
    if !vars.is_empty() {
        best = shoot(vars, &mut x, best, &eval, tol, spec.solver.max_iterations)?;
    }
    let c = best.closure;
    if c.max_abs() > tol.max(1e-15) {
        return Err(Error::Closure {
            angle: c.angle,
            pressure: c.pressure,
        });
    }
    let mut f = FlowField::from_pieces(*g, best.pieces)?;
    f.closure = c;
    Ok(f)
}

fn shoot<F>(
    vars: &[ShootVar],
    x: &mut [f64],
    start: Marched,
    eval: &F,
    tol: f64,
    max_iterations: usize,
) -> Result<Marched>
where
    F: Fn(&[f64]) -> Result<Marched>,
{
    let n = vars.len();
    let mut best = start;
    let mut r = residual_vec(&best.closure);
    for _ in 0..max_iterations {
        if r.amax() <= tol {
            break;
        }
        // forward-difference Jacobian
        let mut jac = Matrix2::zeros();
        for k in 0..n {
            let h = 1e-7 * x[k].abs().max(1e-3);
            let mut xp = x.to_vec();
            xp[k] += h;
            let rp = match eval(&xp) {
                Ok(m) => residual_vec(&m.closure),
                Err(_) => {
                    xp[k] = x[k] - h;
                    let rm = residual_vec(&eval(&xp)?.closure);
                    (r - rm) + r
                }
            };
            jac.set_column(k, &((rp - r) / h));
        }
        let dx: Vec<f64> = if n == 2 {
            match jac.try_inverse() {
                Some(inv) => {
                    let d = -(inv * r);
                    vec![d[0], d[1]]
                }
                None => break,
            }
        } else {
            let col = jac.column(0);
            let denom = col.norm_squared();
            if denom == 0.0 {
                break;
            }
            vec![-col.dot(&r) / denom]
        };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + lambda * d).collect();
            if let Ok(m) = eval(&trial) {
                let rt = residual_vec(&m.closure);
                if rt.norm() < r.norm() {
                    x.copy_from_slice(&trial);
                    r = rt;
                    best = m;
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if r.amax() > tol {
        return Err(Error::Closure {
            angle: r[0],
            pressure: r[1],
        });
    }
    Ok(best)
}
