//! Flows `U(theta)` on the circle as ordered sequences of wave pieces.
//!
//! Pieces are stored in increasing angle over `[origin, origin + 2 pi)`,
//! where `origin` is the anchor angle. Jumps (shocks and contacts) have zero
//! width and evaluation is right-continuous at them.

mod build;
mod sbv;
mod sectors;
pub mod spec;

pub use build::{build_flow, march, Marched};
pub use sbv::{bv_decompose, SBVDecomposition};
pub use sectors::{sector_decompose, validate_structure, Sector};
pub use spec::{Anchor, Angle, FlowSpec, PieceSpec, ShootVar, Side, SolverSpec};

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{in_phase_space, GasModel, PrimitiveState, Vec4};
use crate::pmwave::PMWave;
use crate::polar::{wrap_angle, PolarState};
use crate::shock::ShockSolution;

/// Angular tiling tolerance.
pub const TILE_TOL: f64 = 1e-12;
/// Relative state mismatch tolerated where pieces meet.
pub const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WavePiece {
    Constant {
        start: f64,
        end: f64,
        state: PrimitiveState,
    },
    Shock(ShockSolution),
    Contact {
        theta: f64,
        left: PrimitiveState,
        right: PrimitiveState,
    },
    Wave(PMWave),
}

impl WavePiece {
    /// `(start, end)` in unrolled angle; equal for jumps.
    pub fn extent(&self) -> (f64, f64) {
        match self {
            WavePiece::Constant { start, end, .. } => (*start, *end),
            WavePiece::Shock(s) => (s.theta, s.theta),
            WavePiece::Contact { theta, .. } => (*theta, *theta),
            WavePiece::Wave(w) => w.extent(),
        }
    }

    pub fn is_jump(&self) -> bool {
        matches!(self, WavePiece::Shock(_) | WavePiece::Contact { .. })
    }

    /// State at the left end of the piece (left limit for jumps).
    pub fn left_state(&self) -> PrimitiveState {
        match self {
            WavePiece::Constant { state, .. } => *state,
            WavePiece::Shock(s) => s.left(),
            WavePiece::Contact { left, .. } => *left,
            WavePiece::Wave(w) => w.start_state(),
        }
    }

    /// State at the right end of the piece (right limit for jumps).
    pub fn right_state(&self) -> PrimitiveState {
        match self {
            WavePiece::Constant { state, .. } => *state,
            WavePiece::Shock(s) => s.right(),
            WavePiece::Contact { right, .. } => *right,
            WavePiece::Wave(w) => w.end_state(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            WavePiece::Constant { .. } => "constant",
            WavePiece::Shock(_) => "shock",
            WavePiece::Contact { .. } => "contact",
            WavePiece::Wave(_) => "pm_wave",
        }
    }
}

/// How far the marched flow missed closing on itself.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClosureResidual {
    /// Angle of the closing contact minus `origin + 2 pi`.
    pub angle: f64,
    /// Relative pressure mismatch across the closing contact.
    pub pressure: f64,
}

impl ClosureResidual {
    pub fn max_abs(&self) -> f64 {
        self.angle.abs().max(self.pressure.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowField {
    #[serde(skip)]
    pub gas: GasModel,
    pub origin: f64,
    pub pieces: Vec<WavePiece>,
    pub closure: ClosureResidual,
}

impl FlowField {
    /// Assembles a flow from pieces, checking that they tile
    /// `[origin, origin + 2 pi)` and that the circle closes. State matching
    /// between neighbors is left to [`validate_structure`].
    pub fn from_pieces(gas: GasModel, pieces: Vec<WavePiece>) -> Result<FlowField> {
        let first = pieces.first().ok_or_else(|| Error::Flow("no pieces".into()))?;
        let origin = first.extent().0;
        let mut at = origin;
        for (i, p) in pieces.iter().enumerate() {
            let (a, b) = p.extent();
            if (a - at).abs() > TILE_TOL {
                return Err(Error::Flow(format!(
                    "piece {i} ({}) starts at {a}, expected {at}",
                    p.label()
                )));
            }
            if b < a || (!p.is_jump() && b <= a) {
                return Err(Error::Flow(format!("piece {i} ({}) is empty", p.label())));
            }
            at = b;
        }
        if (at - (origin + TAU)).abs() > TILE_TOL {
            return Err(Error::Flow(format!(
                "pieces cover [{origin}, {at}] instead of a full turn"
            )));
        }
        let last = pieces.last().unwrap().right_state();
        if last.rel_diff(&first.left_state()) > MATCH_TOL {
            return Err(Error::Flow("state at the end of the circle differs from the start".into()));
        }
        Ok(FlowField {
            gas,
            origin,
            pieces,
            closure: ClosureResidual::default(),
        })
    }

    /// Maps any angle into `[origin, origin + 2 pi)`.
    pub fn unroll(&self, theta: f64) -> f64 {
        let t = self.origin + wrap_angle(theta - self.origin);
        if t >= self.origin + TAU {
            self.origin
        } else {
            t
        }
    }

    /// Right-continuous evaluation.
    pub fn evaluate(&self, theta: f64) -> PrimitiveState {
        let t = self.unroll(theta);
        for p in &self.pieces {
            match p {
                WavePiece::Constant { start, end, state } if *start <= t && t < *end => return *state,
                WavePiece::Wave(w) => {
                    let (lo, hi) = w.extent();
                    if lo <= t && t < hi {
                        return w.eval(t);
                    }
                }
                _ => {}
            }
        }
        self.pieces[0].left_state()
    }

    /// Left limit at `theta`.
    pub fn evaluate_left(&self, theta: f64) -> PrimitiveState {
        let mut t = self.unroll(theta);
        if t == self.origin {
            t += TAU;
        }
        for p in &self.pieces {
            match p {
                WavePiece::Constant { start, end, state } if *start < t && t <= *end => return *state,
                WavePiece::Wave(w) => {
                    let (lo, hi) = w.extent();
                    if lo < t && t <= hi {
                        return w.eval(t);
                    }
                }
                _ => {}
            }
        }
        self.pieces[self.pieces.len() - 1].right_state()
    }

    pub fn polar(&self, theta: f64) -> PolarState {
        PolarState::from_primitive(&self.evaluate(theta), theta)
    }

    pub fn shocks(&self) -> impl Iterator<Item = (usize, &ShockSolution)> {
        self.pieces.iter().enumerate().filter_map(|(i, p)| match p {
            WavePiece::Shock(s) => Some((i, s)),
            _ => None,
        })
    }

    pub fn waves(&self) -> impl Iterator<Item = (usize, &PMWave)> {
        self.pieces.iter().enumerate().filter_map(|(i, p)| match p {
            WavePiece::Wave(w) => Some((i, w)),
            _ => None,
        })
    }

    /// Angles of all jumps (shocks and contacts) in unrolled coordinates.
    pub fn jump_angles(&self) -> Vec<f64> {
        self.pieces
            .iter()
            .filter(|p| p.is_jump())
            .map(|p| p.extent().0)
            .collect()
    }

    /// Jump `U_right - U_left` in conserved variables at each jump piece.
    pub fn jumps(&self) -> Vec<(f64, Vec4)> {
        self.pieces
            .iter()
            .filter(|p| p.is_jump())
            .map(|p| {
                let d = p.right_state().to_conserved(&self.gas).0
                    - p.left_state().to_conserved(&self.gas).0;
                (p.extent().0, d)
            })
            .collect()
    }

    /// Piece boundaries and wave sample angles, sorted, in `[origin, origin + 2 pi]`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for p in &self.pieces {
            let (a, b) = p.extent();
            out.push(a);
            out.push(b);
            if let WavePiece::Wave(w) = p {
                out.extend(w.samples.iter().map(|s| s.theta));
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }

    /// Every state stored in the flow lies in the phase space.
    pub fn phase_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |i: usize, s: &PrimitiveState| {
            let r = in_phase_space(s, &self.gas);
            if !r.ok() {
                out.push(format!("piece {i}: {}", r.into_result().unwrap_err()));
            }
        };
        for (i, p) in self.pieces.iter().enumerate() {
            check(i, &p.left_state());
            check(i, &p.right_state());
            if let WavePiece::Wave(w) = p {
                for s in &w.samples {
                    check(i, &s.state);
                }
            }
        }
        out
    }
}

pub fn evaluate(f: &FlowField, theta: f64) -> PrimitiveState {
    f.evaluate(theta)
}

#[cfg(test)]
mod tests;
