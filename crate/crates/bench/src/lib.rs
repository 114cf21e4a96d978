//! Shared inputs for the benchmarks.

use polarflow::flowfield::FlowSpec;
use polarflow::{make_gas, GasModel, PhaseBounds, PolarState, PrimitiveState};

pub fn gas() -> GasModel {
    make_gas(
        1.4,
        PhaseBounds {
            rho_min: 1e-2,
            rho_max: 1e2,
            p_min: 1e-2,
            p_max: 1e2,
            speed_max: 10.0,
            e_min: 1e-6,
        },
    )
    .expect("valid gas")
}

/// The two-sector flow with shocks, a contact and a compression wave.
pub fn two_sector_spec() -> FlowSpec {
    serde_json::from_value(serde_json::json!({
        "anchor": {"theta": 0.0, "rho": 1.0, "p": 1.0, "l": -4.2},
        "pieces": [
            {"kind": "shock", "orientation": "backward", "z": 1.25, "side": "positive"},
            {"kind": "contact", "rho": 0.5, "l": 3.0},
            {"kind": "shock", "orientation": "forward", "z": 0.2, "side": "positive"},
            {"kind": "shock", "orientation": "forward", "z": 0.3, "side": "negative"},
            {"kind": "pm_wave", "orientation": "forward", "wave": "compression", "span": 0.1},
            {"kind": "shock", "orientation": "forward", "z": 0.3, "side": "negative"}
        ],
        "solver": {"shoot": ["pieces[0].z", "anchor.l"], "pm_steps_per_radian": 64}
    }))
    .expect("valid spec")
}

/// A state with sonic forward normal velocity at `theta`.
pub fn sonic_start(g: &GasModel, l: f64, theta: f64) -> PrimitiveState {
    let c = g.gamma().sqrt();
    let (u, v) = polarflow::from_polar(c, l, theta);
    PrimitiveState::new(1.0, u, v, 1.0)
}

pub fn polar(rho: f64, n: f64, l: f64, p: f64, theta: f64) -> PolarState {
    PolarState {
        rho,
        n,
        l,
        p,
        theta,
    }
}
