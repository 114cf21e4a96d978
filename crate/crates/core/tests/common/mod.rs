#![allow(dead_code)]

use polarflow::flowfield::FlowSpec;
use polarflow::{build_flow, make_gas, FlowField, GasModel, PhaseBounds};

pub fn two_sector_gas() -> GasModel {
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
    .unwrap()
}

pub fn three_sector_gas(gamma: f64) -> GasModel {
    make_gas(
        gamma,
        PhaseBounds {
            rho_min: 1e-3,
            rho_max: 1e3,
            p_min: 1e-3,
            p_max: 1e3,
            speed_max: 200.0,
            e_min: 1e-8,
        },
    )
    .unwrap()
}

/// Backward sector with one shock where `L > 0`; forward sector with one
/// shock where `L > 0` and shock, compression, shock where `L < 0`.
pub fn two_sector_spec(pm_steps_per_radian: usize) -> FlowSpec {
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
        "solver": {
            "shoot": ["pieces[0].z", "anchor.l"],
            "pm_steps_per_radian": pm_steps_per_radian
        }
    }))
    .unwrap()
}

/// Forward, backward, forward sectors with one shock each where `L > 0`.
pub fn three_sector_spec() -> FlowSpec {
    serde_json::from_value(serde_json::json!({
        "anchor": {"theta": 0.0, "rho": 1.0, "p": 1.0, "l": 1.4},
        "pieces": [
            {"kind": "shock", "orientation": "forward", "z": 59.4, "side": "positive"},
            {"kind": "contact", "rho": 1.0, "l": -8.3},
            {"kind": "shock", "orientation": "backward", "theta": 3.9585},
            {"kind": "contact", "rho": 60.0, "l": 1.45},
            {"kind": "shock", "orientation": "forward", "z": 59.4, "side": "positive"}
        ],
        "solver": {"shoot": ["anchor.l", "pieces[4].z"]}
    }))
    .unwrap()
}

pub fn golden() -> FlowField {
    build_flow(&two_sector_gas(), &two_sector_spec(64)).unwrap()
}
