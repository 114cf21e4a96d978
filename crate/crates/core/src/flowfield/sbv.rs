//! Splitting `U = U_L + U_S` into a Lipschitz part and a pure jump part.

use std::f64::consts::TAU;

use serde::Serialize;

use super::{FlowField, WavePiece};
use crate::gas::Vec4;

/// Offset used to take one-sided limits of the Lipschitz part at a jump.
const LIMIT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SBVDecomposition {
    /// Start of the unrolled interval; lies inside a constant piece so that
    /// every jump is interior.
    pub theta0: f64,
    /// `(theta, [U])` for every shock and contact, in increasing angle.
    pub jumps: Vec<(f64, [f64; 4])>,
    /// `(theta, U_L(theta))` at the sample angles.
    pub lipschitz_part: Vec<(f64, [f64; 4])>,
    /// `sum |[U]|` over the jumps.
    pub total_variation_jump: f64,
    /// Sampled total variation of `U_L`.
    pub total_variation_lipschitz: f64,
    /// Largest sampled difference quotient of `U_L`.
    pub lipschitz_constant: f64,
    /// Largest mismatch between the left and right limits of `U_L` at a jump.
    pub limit_mismatch_max: f64,
}

fn arr(v: &Vec4) -> [f64; 4] {
    [v[0], v[1], v[2], v[3]]
}

impl SBVDecomposition {
    /// Sum of the jumps strictly before `theta`, plus the one at `theta` when `inclusive`.
    fn saltus(&self, theta: f64, inclusive: bool) -> Vec4 {
        let mut s = Vec4::zeros();
        for (t, d) in &self.jumps {
            if *t < theta || (inclusive && *t == theta) {
                s += Vec4::from(*d);
            }
        }
        s
    }
}

/// Decomposes the flow over one turn starting inside its first constant
/// piece, with `samples` evenly spaced samples of `U_L`.
pub fn bv_decompose(f: &FlowField, samples: usize) -> SBVDecomposition {
    let g = &f.gas;
    let theta0 = f
        .pieces
        .iter()
        .find_map(|p| match p {
            WavePiece::Constant { start, end, .. } => Some(0.5 * (start + end)),
            _ => None,
        })
        .unwrap_or(f.origin);
    let mut jumps: Vec<(f64, [f64; 4])> = f
        .jumps()
        .into_iter()
        .map(|(t, d)| (if t < theta0 { t + TAU } else { t }, arr(&d)))
        .collect();
    jumps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let total_variation_jump = jumps.iter().map(|(_, d)| Vec4::from(*d).norm()).sum();
    let mut out = SBVDecomposition {
        theta0,
        jumps,
        lipschitz_part: Vec::new(),
        total_variation_jump,
        total_variation_lipschitz: 0.0,
        lipschitz_constant: 0.0,
        limit_mismatch_max: 0.0,
    };
    let u = |t: f64| f.evaluate(t).to_conserved(g).0;
    let u_left = |t: f64| f.evaluate_left(t).to_conserved(g).0;

    // U_L = U - U_S with U right-continuous and U_S counting jumps at or before theta
    let samples = samples.max(2);
    let h = TAU / samples as f64;
    let mut prev: Option<(f64, Vec4)> = None;
    let mut tv = 0.0;
    let mut lip: f64 = 0.0;
    for k in 0..=samples {
        let t = theta0 + h * k as f64;
        let ul = u(t) - out.saltus(t, true);
        if let Some((tp, up)) = prev {
            let d = (ul - up).norm();
            tv += d;
            lip = lip.max(d / (t - tp));
        }
        out.lipschitz_part.push((t, arr(&ul)));
        prev = Some((t, ul));
    }
    out.total_variation_lipschitz = tv;
    out.lipschitz_constant = lip;

    let mut mismatch: f64 = 0.0;
    for (t, _) in &out.jumps {
        let scale = 1.0 + u(*t).norm().max(u_left(*t).norm());
        let right = u(*t) - out.saltus(*t, true);
        let left = u_left(*t) - out.saltus(*t, false);
        mismatch = mismatch.max((right - left).norm() / scale);
        // the limits taken slightly off the jump agree with the exact ones
        let near_r = u(*t + LIMIT_EPS) - out.saltus(*t + LIMIT_EPS, true);
        let near_l = u_left(*t - LIMIT_EPS) - out.saltus(*t - LIMIT_EPS, true);
        mismatch = mismatch.max((near_r - near_l).norm() / scale);
    }
    out.limit_mismatch_max = mismatch;
    out
}
