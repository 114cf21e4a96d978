//! Polytropic thermodynamics, state representations and physical fluxes.
//!
//! All quantities are nondimensional. Entropy is tracked through the
//! surrogate `s = p / rho^gamma`, which is monotone in physical entropy.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec4 = Vector4<f64>;
pub type Mat4 = Matrix4<f64>;

/// Bounds describing the admissible phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseBounds {
    pub rho_min: f64,
    pub rho_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub speed_max: f64,
    pub e_min: f64,
}

impl PhaseBounds {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.rho_min,
            self.rho_max,
            self.p_min,
            self.p_max,
            self.speed_max,
            self.e_min,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Bounds("bounds must be finite".into()));
        }
        if !(self.rho_min > 0.0 && self.rho_min <= self.rho_max) {
            return Err(Error::Bounds(format!(
                "need 0 < rho_min <= rho_max (got {}, {})",
                self.rho_min, self.rho_max
            )));
        }
        if !(self.p_min > 0.0 && self.p_min <= self.p_max) {
            return Err(Error::Bounds(format!(
                "need 0 < p_min <= p_max (got {}, {})",
                self.p_min, self.p_max
            )));
        }
        if self.speed_max <= 0.0 {
            return Err(Error::Bounds("speed_max must be positive".into()));
        }
        if self.e_min <= 0.0 {
            return Err(Error::Bounds("e_min must be positive".into()));
        }
        Ok(())
    }
}

/// Ratio of specific heats plus phase-space bounds and derived extremal constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasModel {
    gamma: f64,
    bounds: PhaseBounds,
    c_min: f64,
    z_max: f64,
}

impl GasModel {
    pub fn new(gamma: f64, bounds: PhaseBounds) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::Gamma(gamma));
        }
        bounds.validate()?;
        Ok(GasModel {
            gamma,
            bounds,
            c_min: (gamma * bounds.p_min / bounds.rho_max).sqrt(),
            z_max: (bounds.p_max - bounds.p_min) / bounds.p_min,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn bounds(&self) -> &PhaseBounds {
        &self.bounds
    }

    /// Smallest sound speed in the phase space.
    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    /// Largest shock strength that keeps both pressures in bounds.
    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    /// `(gamma + 1) / (2 gamma)`
    pub fn k_plus(&self) -> f64 {
        (self.gamma + 1.0) / (2.0 * self.gamma)
    }

    /// `(gamma - 1) / (2 gamma)`
    pub fn k_minus(&self) -> f64 {
        (self.gamma - 1.0) / (2.0 * self.gamma)
    }
}

pub fn make_gas(gamma: f64, bounds: PhaseBounds) -> Result<GasModel> {
    GasModel::new(gamma, bounds)
}

/// Primitive variables `(rho, u, v, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl PrimitiveState {
    pub fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        PrimitiveState { rho, u, v, p }
    }

    pub fn speed_sq(&self) -> f64 {
        self.u * self.u + self.v * self.v
    }

    pub fn speed(&self) -> f64 {
        self.u.hypot(self.v)
    }

    pub fn tau(&self) -> f64 {
        1.0 / self.rho
    }

    /// Specific internal energy.
    pub fn e(&self, g: &GasModel) -> f64 {
        self.p / ((g.gamma - 1.0) * self.rho)
    }

    pub fn sound_speed(&self, g: &GasModel) -> f64 {
        (g.gamma * self.p / self.rho).sqrt()
    }

    /// Total specific enthalpy.
    pub fn h(&self, g: &GasModel) -> f64 {
        g.gamma * self.p / ((g.gamma - 1.0) * self.rho) + 0.5 * self.speed_sq()
    }

    /// Total energy per unit volume.
    pub fn energy(&self, g: &GasModel) -> f64 {
        self.p / (g.gamma - 1.0) + 0.5 * self.rho * self.speed_sq()
    }

    /// Entropy indicator `p / rho^gamma`.
    pub fn entropy(&self, g: &GasModel) -> f64 {
        self.p / self.rho.powf(g.gamma)
    }

    pub fn to_conserved(&self, g: &GasModel) -> ConservedState {
        primitive_to_conserved(self, g)
    }

    /// Largest relative componentwise difference, scaled by the speed and
    /// pressure magnitudes of both states.
    pub fn rel_diff(&self, other: &PrimitiveState) -> f64 {
        let vs = self.speed().max(other.speed()).max(f64::MIN_POSITIVE);
        let dr = (self.rho - other.rho).abs() / self.rho.abs().max(other.rho.abs());
        let dp = (self.p - other.p).abs() / self.p.abs().max(other.p.abs());
        let du = (self.u - other.u).abs() / vs;
        let dv = (self.v - other.v).abs() / vs;
        dr.max(dp).max(du).max(dv)
    }
}

/// Conserved variables `(rho, rho u, rho v, rho E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedState(pub Vec4);

impl ConservedState {
    pub fn to_primitive(&self, g: &GasModel) -> Result<PrimitiveState> {
        conserved_to_primitive(self, g)
    }
}

pub fn primitive_to_conserved(s: &PrimitiveState, g: &GasModel) -> ConservedState {
    ConservedState(Vec4::new(
        s.rho,
        s.rho * s.u,
        s.rho * s.v,
        s.energy(g),
    ))
}

pub fn conserved_to_primitive(c: &ConservedState, g: &GasModel) -> Result<PrimitiveState> {
    let [rho, mu, mv, en] = [c.0[0], c.0[1], c.0[2], c.0[3]];
    if !(rho > 0.0) {
        return Err(Error::NonpositiveDensity);
    }
    let u = mu / rho;
    let v = mv / rho;
    let p = (g.gamma - 1.0) * (en - 0.5 * rho * (u * u + v * v));
    if !(p > 0.0) {
        return Err(Error::NonpositivePressure);
    }
    Ok(PrimitiveState { rho, u, v, p })
}

/// Cartesian fluxes `(f^x, f^y)`.
pub fn physical_fluxes(s: &PrimitiveState, g: &GasModel) -> (Vec4, Vec4) {
    let en = s.energy(g);
    let fx = Vec4::new(
        s.rho * s.u,
        s.rho * s.u * s.u + s.p,
        s.rho * s.u * s.v,
        s.u * (en + s.p),
    );
    let fy = Vec4::new(
        s.rho * s.v,
        s.rho * s.u * s.v,
        s.rho * s.v * s.v + s.p,
        s.v * (en + s.p),
    );
    (fx, fy)
}

/// Flux through a ray at angle `theta`: `sin(theta) f^x - cos(theta) f^y`.
pub fn angular_flux(s: &PrimitiveState, theta: f64, g: &GasModel) -> Vec4 {
    let (fx, fy) = physical_fluxes(s, g);
    fx * theta.sin() - fy * theta.cos()
}

/// Single bound violated by a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseViolation {
    DensityBelow { rho: f64, min: f64 },
    DensityAbove { rho: f64, max: f64 },
    PressureBelow { p: f64, min: f64 },
    PressureAbove { p: f64, max: f64 },
    InternalEnergyBelow { e: f64, min: f64 },
    SpeedAbove { speed: f64, max: f64 },
    Stagnation,
}

impl std::fmt::Display for PhaseViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhaseViolation::DensityBelow { rho, min } => write!(f, "density {rho} below floor {min}"),
            PhaseViolation::DensityAbove { rho, max } => write!(f, "density {rho} above ceiling {max}"),
            PhaseViolation::PressureBelow { p, min } => write!(f, "pressure {p} below floor {min}"),
            PhaseViolation::PressureAbove { p, max } => write!(f, "pressure {p} above ceiling {max}"),
            PhaseViolation::InternalEnergyBelow { e, min } => {
                write!(f, "internal energy {e} below floor {min}")
            }
            PhaseViolation::SpeedAbove { speed, max } => write!(f, "speed {speed} above {max}"),
            PhaseViolation::Stagnation => write!(f, "stagnation (zero velocity)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub violations: Vec<PhaseViolation>,
}

impl PhaseReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.ok() {
            Ok(())
        } else {
            let msg: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::OutOfPhaseSpace(msg.join("; ")))
        }
    }
}

// Bounds are compared with a relative slack so that states sitting exactly on
// a bound after a round trip through arithmetic are not rejected.
const BOUND_SLACK: f64 = 1e-12;

pub fn in_phase_space(s: &PrimitiveState, g: &GasModel) -> PhaseReport {
    let b = &g.bounds;
    let lo = |x: f64, m: f64| x < m * (1.0 - BOUND_SLACK);
    let hi = |x: f64, m: f64| x > m * (1.0 + BOUND_SLACK);
    let mut violations = Vec::new();
    if lo(s.rho, b.rho_min) || !s.rho.is_finite() {
        violations.push(PhaseViolation::DensityBelow { rho: s.rho, min: b.rho_min });
    }
    if hi(s.rho, b.rho_max) {
        violations.push(PhaseViolation::DensityAbove { rho: s.rho, max: b.rho_max });
    }
    if lo(s.p, b.p_min) || !s.p.is_finite() {
        violations.push(PhaseViolation::PressureBelow { p: s.p, min: b.p_min });
    }
    if hi(s.p, b.p_max) {
        violations.push(PhaseViolation::PressureAbove { p: s.p, max: b.p_max });
    }
    if s.rho > 0.0 {
        let e = s.e(g);
        if lo(e, b.e_min) {
            violations.push(PhaseViolation::InternalEnergyBelow { e, min: b.e_min });
        }
    }
    let q = s.speed();
    if hi(q, b.speed_max) || !q.is_finite() {
        violations.push(PhaseViolation::SpeedAbove { speed: q, max: b.speed_max });
    }
    if q <= 1e-12 * b.speed_max {
        violations.push(PhaseViolation::Stagnation);
    }
    PhaseReport { violations }
}
