//! Oblique shocks: deflection as a function of Mach number and shock angle,
//! its inverse on either branch, and the maximum deflection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::numeric::bracket_root;

use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Weak,
    Strong,
}

fn check_mach(m: f64) -> Result<()> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::Subsonic(m));
    }
    Ok(())
}

fn deflection_unchecked(m: f64, beta: f64, gamma: f64) -> f64 {
    let s = beta.sin();
    let num = 2.0 * beta.cos() / s * (m * m * s * s - 1.0);
    let den = m * m * (gamma + (2.0 * beta).cos()) + 2.0;
    (num / den).atan()
}

/// Flow deflection behind an oblique shock at angle `beta` to an upstream
/// flow of Mach number `mach`.
pub fn deflection_angle(mach: f64, beta: f64, g: &GasModel) -> Result<f64> {
    check_mach(mach)?;
    let lo = (1.0 / mach).asin();
    // small slack so that a computed Mach angle is accepted
    if !(beta >= lo * (1.0 - 1e-14) && beta <= FRAC_PI_2 * (1.0 + 1e-15)) {
        return Err(Error::ShockAngle {
            beta,
            lo,
            hi: FRAC_PI_2,
        });
    }
    Ok(deflection_unchecked(mach, beta, g.gamma()).max(0.0))
}

/// Shock angle of maximum deflection, in closed form.
fn beta_at_max(m: f64, gamma: f64) -> f64 {
    let m2 = m * m;
    let gp = gamma + 1.0;
    let disc = gp * (gp * m2 * m2 + 8.0 * (gamma - 1.0) * m2 + 16.0);
    let s2 = (gp * m2 - 4.0 + disc.sqrt()) / (4.0 * gamma * m2);
    s2.sqrt().asin()
}

/// Maximum deflection at Mach `mach` and the shock angle attaining it.
pub fn max_deflection(mach: f64, g: &GasModel) -> Result<(f64, f64)> {
    check_mach(mach)?;
    let b = beta_at_max(mach, g.gamma());
    Ok((deflection_unchecked(mach, b, g.gamma()), b))
}

/// Supremum of the deflection over all Mach numbers: `arcsin(1/gamma)`.
pub fn max_deflection_limit(g: &GasModel) -> f64 {
    (1.0 / g.gamma()).asin()
}

/// Shock angle producing deflection `alpha` on the requested branch.
pub fn solve_shock_angle(mach: f64, alpha: f64, branch: Branch, g: &GasModel) -> Result<f64> {
    check_mach(mach)?;
    if !(alpha >= 0.0) {
        return Err(Error::Argument(format!("deflection must be nonnegative (got {alpha})")));
    }
    let gamma = g.gamma();
    let mu = (1.0 / mach).asin();
    let (amax, bmax) = max_deflection(mach, g)?;
    if alpha > amax {
        return Err(Error::Detached { alpha, max: amax });
    }
    if alpha == 0.0 {
        return Ok(match branch {
            Branch::Weak => mu,
            Branch::Strong => FRAC_PI_2,
        });
    }
    let (a, b) = match branch {
        Branch::Weak => (mu, bmax),
        Branch::Strong => (bmax, FRAC_PI_2),
    };
    let f = |beta: f64| deflection_unchecked(mach, beta, gamma) - alpha;
    Ok(bracket_root(f, a, b).unwrap_or(bmax))
}
