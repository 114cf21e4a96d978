//! Normal/tangential velocity frame at a polar angle, and the flow angle.
//!
//! At angle `theta` the normal velocity is `N = u sin(theta) - v cos(theta)`
//! and the tangential velocity is `L = u cos(theta) + v sin(theta)`. Angles are
//! radians; the canonical domain is `[0, 2 pi)`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{GasModel, PrimitiveState};

pub fn to_polar(u: f64, v: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (u * s - v * c, u * c + v * s)
}

pub fn from_polar(n: f64, l: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (n * s + l * c, -n * c + l * s)
}

/// Direction of the velocity `(u, v)`, in `(-pi, pi]`.
pub fn flow_angle(n: f64, l: f64, theta: f64) -> Result<f64> {
    if n == 0.0 && l == 0.0 {
        return Err(Error::ZeroVelocity);
    }
    let (u, v) = from_polar(n, l, theta);
    Ok(wrap_pi(v.atan2(u)))
}

/// Wraps into `[0, 2 pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Wraps into `(-pi, pi]`.
pub fn wrap_pi(theta: f64) -> f64 {
    let t = wrap_angle(theta);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

/// Smallest `t >= from` congruent to `theta` modulo `2 pi`.
pub fn next_at_or_after(theta: f64, from: f64) -> f64 {
    from + wrap_angle(theta - from)
}

/// Thermodynamic state seen in the frame at angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarState {
    pub theta: f64,
    pub n: f64,
    pub l: f64,
    pub rho: f64,
    pub p: f64,
}

impl PolarState {
    pub fn from_primitive(s: &PrimitiveState, theta: f64) -> Self {
        let (n, l) = to_polar(s.u, s.v, theta);
        PolarState {
            theta,
            n,
            l,
            rho: s.rho,
            p: s.p,
        }
    }

    pub fn to_primitive(&self) -> PrimitiveState {
        let (u, v) = from_polar(self.n, self.l, self.theta);
        PrimitiveState::new(self.rho, u, v, self.p)
    }

    pub fn sound_speed(&self, g: &GasModel) -> f64 {
        (g.gamma() * self.p / self.rho).sqrt()
    }

    /// Normal Mach number `N / c`.
    pub fn normal_mach(&self, g: &GasModel) -> f64 {
        self.n / self.sound_speed(g)
    }

    pub fn mass_flux(&self) -> f64 {
        self.rho * self.n
    }

    pub fn flow_angle(&self) -> Result<f64> {
        flow_angle(self.n, self.l, self.theta)
    }
}
