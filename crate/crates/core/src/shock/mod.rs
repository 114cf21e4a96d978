//! Jump conditions across a ray, shock construction from strength,
//! discontinuity classification and admissibility.
//!
//! Sign convention: at a jump angle `theta`, "left" is the limit from smaller
//! angles and "right" from larger ones. Gas with `N > 0` travels towards
//! decreasing `theta`, so a forward shock has its upstream ("+") state on the
//! right; a backward shock (`N < 0`) has it on the left.

mod oblique;

pub use oblique::{
    deflection_angle, max_deflection, max_deflection_limit, solve_shock_angle, Branch,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{angular_flux, in_phase_space, GasModel, PrimitiveState, Vec4};
use crate::polar::PolarState;
use crate::report::{Check, CheckList};

/// States are equal when their relative difference is below this.
pub const EQUAL_TOL: f64 = 1e-9;
/// `|N| <= N_ZERO_TOL * speed_max` counts as zero normal velocity.
pub const N_ZERO_TOL: f64 = 1e-9;
/// Relative jump-condition residual accepted by classification.
pub const RH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Forward,
    Backward,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Forward => 1.0,
            Orientation::Backward => -1.0,
        }
    }

    pub fn of_normal_velocity(n: f64) -> Orientation {
        if n >= 0.0 {
            Orientation::Forward
        } else {
            Orientation::Backward
        }
    }
}

/// A shock at angle `theta` with its upstream ("+") and downstream ("-") states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockSolution {
    pub theta: f64,
    pub orientation: Orientation,
    pub upstream: PolarState,
    pub downstream: PolarState,
    /// `(p_- - p_+) / p_+`
    pub z: f64,
    /// Signed mass flux `rho N` through the shock.
    pub mass_flux: f64,
}

impl ShockSolution {
    pub fn left(&self) -> PrimitiveState {
        match self.orientation {
            Orientation::Forward => self.downstream.to_primitive(),
            Orientation::Backward => self.upstream.to_primitive(),
        }
    }

    pub fn right(&self) -> PrimitiveState {
        match self.orientation {
            Orientation::Forward => self.upstream.to_primitive(),
            Orientation::Backward => self.downstream.to_primitive(),
        }
    }

    /// Euclidean norm of the jump in conserved variables.
    pub fn jump_size(&self, g: &GasModel) -> f64 {
        (self.right().to_conserved(g).0 - self.left().to_conserved(g).0).norm()
    }

    /// Tangential velocity, which is continuous through the shock.
    pub fn l(&self) -> f64 {
        self.upstream.l
    }

    /// Exchanges upstream and downstream, producing the reversed (expansion) jump.
    pub fn reversed(&self) -> ShockSolution {
        ShockSolution {
            upstream: self.downstream,
            downstream: self.upstream,
            z: self.upstream.p / self.downstream.p - 1.0,
            mass_flux: self.downstream.mass_flux(),
            ..*self
        }
    }
}

/// `e(tau, p) - e(tau+, p+) + (tau - tau+)(p + p+) / 2` with `e = p tau / (gamma - 1)`.
pub fn hugoniot_value(tau: f64, p: f64, tau_plus: f64, p_plus: f64, g: &GasModel) -> f64 {
    let gm1 = g.gamma() - 1.0;
    p * tau / gm1 - p_plus * tau_plus / gm1 + 0.5 * (tau - tau_plus) * (p + p_plus)
}

/// Normal Mach number of the upstream state for strength `z`.
pub fn upstream_normal_mach(z: f64, g: &GasModel) -> f64 {
    (1.0 + z * g.k_plus()).sqrt()
}

/// Normal Mach number of the downstream state for strength `z`.
pub fn downstream_normal_mach(z: f64, g: &GasModel) -> f64 {
    ((1.0 + z * g.k_minus()) / (1.0 + z)).sqrt()
}

/// Strength of the shock whose upstream normal Mach number is `m > 1`.
pub fn strength_from_upstream_mach(m: f64, g: &GasModel) -> f64 {
    (m * m - 1.0) / g.k_plus()
}

/// Strength of the shock whose downstream normal Mach number is `m`,
/// valid for `k- < m^2 < 1`.
pub fn strength_from_downstream_mach(m: f64, g: &GasModel) -> Result<f64> {
    let m2 = m * m;
    if !(m2 > g.k_minus() && m2 < 1.0) {
        return Err(Error::Argument(format!(
            "downstream normal Mach {m} outside ({}, 1)",
            g.k_minus().sqrt()
        )));
    }
    Ok((1.0 - m2) / (m2 - g.k_minus()))
}

fn check_strength(z: f64, g: &GasModel) -> Result<()> {
    if !(z > 0.0) {
        return Err(Error::NoJump(z));
    }
    if z > g.z_max() * (1.0 + 1e-12) {
        return Err(Error::StrengthTooLarge { z, z_max: g.z_max() });
    }
    Ok(())
}

fn finish(
    theta: f64,
    orientation: Orientation,
    upstream: PolarState,
    downstream: PolarState,
    z: f64,
    g: &GasModel,
) -> Result<ShockSolution> {
    for (side, s) in [("upstream", &upstream), ("downstream", &downstream)] {
        in_phase_space(&s.to_primitive(), g)
            .into_result()
            .map_err(|e| Error::OutOfPhaseSpace(format!("{side} state: {e}")))?;
    }
    Ok(ShockSolution {
        theta,
        orientation,
        upstream,
        downstream,
        z,
        mass_flux: upstream.mass_flux(),
    })
}

/// Builds the shock of strength `z` at `upstream.theta`. The upstream density,
/// pressure and tangential velocity are taken from `upstream`; its normal
/// velocity is set by `z`.
pub fn shock_from_strength(
    upstream: &PolarState,
    z: f64,
    orient: Orientation,
    g: &GasModel,
) -> Result<ShockSolution> {
    check_strength(z, g)?;
    let (kp, km) = (g.k_plus(), g.k_minus());
    let sg = orient.sign();
    let c_up = upstream.sound_speed(g);
    let up = PolarState {
        n: sg * c_up * (1.0 + z * kp).sqrt(),
        ..*upstream
    };
    let rho_down = up.rho * (1.0 + z * kp) / (1.0 + z * km);
    let down = PolarState {
        theta: up.theta,
        n: up.rho * up.n / rho_down,
        l: up.l,
        rho: rho_down,
        p: up.p * (1.0 + z),
    };
    finish(up.theta, orient, up, down, z, g)
}

/// Builds the shock of strength `z` whose downstream state has the density,
/// pressure and tangential velocity of `downstream`.
pub fn shock_from_downstream(
    downstream: &PolarState,
    z: f64,
    orient: Orientation,
    g: &GasModel,
) -> Result<ShockSolution> {
    check_strength(z, g)?;
    let (kp, km) = (g.k_plus(), g.k_minus());
    let sg = orient.sign();
    let c_down = downstream.sound_speed(g);
    let down = PolarState {
        n: sg * c_down * downstream_normal_mach(z, g),
        ..*downstream
    };
    let rho_up = down.rho * (1.0 + z * km) / (1.0 + z * kp);
    let up = PolarState {
        theta: down.theta,
        n: down.rho * down.n / rho_up,
        l: down.l,
        rho: rho_up,
        p: down.p / (1.0 + z),
    };
    finish(down.theta, orient, up, down, z, g)
}

/// `sin(theta) [f^x] - cos(theta) [f^y]` with `[X] = X_right - X_left`.
pub fn rh_residual(left: &PrimitiveState, right: &PrimitiveState, theta: f64, g: &GasModel) -> Vec4 {
    angular_flux(right, theta, g) - angular_flux(left, theta, g)
}

/// Residual of `rh_residual` relative to the size of the fluxes involved.
pub fn rh_relative_residual(
    left: &PrimitiveState,
    right: &PrimitiveState,
    theta: f64,
    g: &GasModel,
) -> f64 {
    let fl = angular_flux(left, theta, g);
    let fr = angular_flux(right, theta, g);
    let scale = fl.norm().max(fr.norm()).max(f64::MIN_POSITIVE);
    (fr - fl).norm() / scale
}

/// Per-component relative residuals of the four polar jump conditions
/// (mass, normal momentum, tangential momentum, enthalpy).
pub fn polar_jump_residuals(s: &ShockSolution, g: &GasModel) -> [f64; 4] {
    let (a, b) = (&s.upstream, &s.downstream);
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
    let gm = g.gamma() / (g.gamma() - 1.0);
    let h = |q: &PolarState| gm * q.p / q.rho + 0.5 * (q.n * q.n + q.l * q.l);
    [
        rel(a.rho * a.n, b.rho * b.n),
        rel(a.rho * a.n * a.n + a.p, b.rho * b.n * b.n + b.p),
        rel(a.rho * a.n * a.l, b.rho * b.n * b.l),
        rel(h(a), h(b)),
    ]
}

/// Angle (modulo pi) of the ray across which two states can satisfy the
/// mass jump condition: `sin(theta)[rho u] = cos(theta)[rho v]`.
pub fn jump_angle(left: &PrimitiveState, right: &PrimitiveState) -> Option<f64> {
    let dmu = right.rho * right.u - left.rho * left.u;
    let dmv = right.rho * right.v - left.rho * left.v;
    if dmu == 0.0 && dmv == 0.0 {
        return None;
    }
    Some(dmv.atan2(dmu).rem_euclid(std::f64::consts::PI))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "class", content = "reason", rename_all = "snake_case")]
pub enum DiscontinuityClass {
    ForwardShock,
    BackwardShock,
    Contact,
    NotAJump,
    Inadmissible(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub class: DiscontinuityClass,
    pub shock: Option<ShockSolution>,
}

impl Classification {
    fn bare(class: DiscontinuityClass) -> Self {
        Classification { class, shock: None }
    }

    fn reject(reason: &str) -> Self {
        Classification::bare(DiscontinuityClass::Inadmissible(reason.to_string()))
    }
}

pub fn classify_discontinuity(
    left: &PrimitiveState,
    right: &PrimitiveState,
    theta: f64,
    g: &GasModel,
) -> Classification {
    if left.rel_diff(right) <= EQUAL_TOL {
        return Classification::bare(DiscontinuityClass::NotAJump);
    }
    let pl = PolarState::from_primitive(left, theta);
    let pr = PolarState::from_primitive(right, theta);
    let n_zero = N_ZERO_TOL * g.bounds().speed_max;
    let dp = (pl.p - pr.p).abs() / pl.p.max(pr.p);
    if pl.n.abs() <= n_zero && pr.n.abs() <= n_zero {
        return if dp <= EQUAL_TOL {
            Classification::bare(DiscontinuityClass::Contact)
        } else {
            Classification::reject("pressure jumps across a zero mass flux discontinuity")
        };
    }
    if rh_relative_residual(left, right, theta, g) > RH_TOL {
        return Classification::reject("jump conditions violated");
    }
    let orientation = if pl.n > 0.0 && pr.n > 0.0 {
        Orientation::Forward
    } else if pl.n < 0.0 && pr.n < 0.0 {
        Orientation::Backward
    } else {
        return Classification::reject("normal velocity changes sign");
    };
    let m = 0.5 * (pl.mass_flux() + pr.mass_flux());
    if m * (right.entropy(g) - left.entropy(g)) > 0.0 {
        return Classification::reject("entropy decreases");
    }
    let (upstream, downstream) = match orientation {
        Orientation::Forward => (pr, pl),
        Orientation::Backward => (pl, pr),
    };
    let shock = ShockSolution {
        theta,
        orientation,
        upstream,
        downstream,
        z: downstream.p / upstream.p - 1.0,
        mass_flux: upstream.mass_flux(),
    };
    let lax = check_admissibility(&shock, g);
    if let Some(f) = lax.failures().next() {
        return Classification::reject(&format!("{} fails", f.name));
    }
    let class = match orientation {
        Orientation::Forward => DiscontinuityClass::ForwardShock,
        Orientation::Backward => DiscontinuityClass::BackwardShock,
    };
    Classification {
        class,
        shock: Some(shock),
    }
}

/// Lower bound on `|N|` on either side of any admissible shock in the phase space.
pub fn normal_velocity_floor(g: &GasModel) -> f64 {
    let b = g.bounds();
    g.c_min() * b.rho_min / b.rho_max
}

/// Compressivity, Lax and entropy conditions with measured margins.
pub fn check_admissibility(s: &ShockSolution, g: &GasModel) -> CheckList {
    let (up, down) = (&s.upstream, &s.downstream);
    let sg = s.orientation.sign();
    let (c_up, c_down) = (up.sound_speed(g), down.sound_speed(g));
    let mut out = CheckList::default();
    out.push(Check::new("compressive", 1.0 / up.rho - 1.0 / down.rho));
    out.push(Check::new("normal_sign", (sg * up.n).min(sg * down.n)));
    out.push(Check::new("supersonic_upstream", sg * up.n - c_up));
    out.push(Check::new("subsonic_downstream", c_down - sg * down.n));
    // M [s] <= 0 with [s] = s_right - s_left, i.e. entropy rises front to back
    let s_up = up.p / up.rho.powf(g.gamma());
    let s_down = down.p / down.rho.powf(g.gamma());
    out.push(Check::new("entropy", s.mass_flux.abs() * (s_down - s_up)));
    out.push(Check::new(
        "normal_floor",
        up.n.abs().min(down.n.abs()) - normal_velocity_floor(g),
    ));
    for c in out.checks.iter_mut() {
        if c.margin == 0.0 {
            c.passed = false;
        }
    }
    out
}

/// Constants bounding the width of the constant neighborhoods of a shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaxBound {
    /// Upstream margin rate: `(N+ - c+)/speed_max >= a1 z`.
    pub a1: f64,
    /// Downstream margin rate: `(c- - N-)/speed_max >= a2 z`.
    pub a2: f64,
    /// Angular distance bound independent of the strength.
    pub delta: f64,
    /// `|[U]| <= c_j z` for every shock in the phase space.
    pub c_j: f64,
    /// Largest jump size, `c_j z_max`.
    pub j_max: f64,
    pub delta_l: f64,
}

pub fn lax_bound(g: &GasModel) -> LaxBound {
    let b = g.bounds();
    let gam = g.gamma();
    let (kp, km) = (g.k_plus(), g.k_minus());
    let zm = g.z_max();
    let cmin = g.c_min();
    // chord slopes of the concave margin functions over [0, z_max]
    let k1 = ((1.0 + zm * kp).sqrt() - 1.0) / zm;
    let k2 = ((1.0 + zm).sqrt() - (1.0 + zm * km).sqrt()) / zm;
    let a1 = cmin * k1 / b.speed_max;
    let a2 = cmin * ((gam - 1.0) / (gam + 1.0)).sqrt() * k2 / b.speed_max;
    let delta = cmin * km.sqrt() / b.speed_max;
    // |[rho]| <= rho_max z / gamma, |[p]| <= p_max z, |[N]| <= speed_max z / gamma
    let c_v = ((b.rho_max / gam).powi(2) + b.p_max.powi(2) + (b.speed_max / gam).powi(2)).sqrt();
    // Frobenius bound of dU/dV over the phase space, V = (rho, u, v, p)
    let (q, r) = (b.speed_max, b.rho_max);
    let c_u =
        (1.0 + q * q + 2.0 * r * r + 0.25 * q.powi(4) + r * r * q * q + (gam - 1.0).powi(-2)).sqrt();
    let c_j = c_u * c_v;
    let j_max = c_j * zm;
    LaxBound {
        a1,
        a2,
        delta,
        c_j,
        j_max,
        delta_l: (a1 / c_j).min(a2 / c_j).min(delta / j_max),
    }
}

/// `delta_L`: every shock with jump size `J` is surrounded by constant states
/// over at least `delta_L * J` on each side.
pub fn lax_neighborhood_bound(g: &GasModel) -> f64 {
    lax_bound(g).delta_l
}

/// Minimum angular separation between a forward and a backward shock.
pub fn separation_distance(g: &GasModel) -> f64 {
    let b = g.bounds();
    g.c_min() * b.rho_min / (2.0 * b.rho_max * b.speed_max)
}

#[cfg(test)]
mod tests;
