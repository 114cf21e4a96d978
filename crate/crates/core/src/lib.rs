//! Construction and verification of steady self-similar solutions `U(theta)`
//! of the two-dimensional polytropic Euler equations.
//!
//! A flow is a 2π-periodic sequence of constant states, shocks, contacts and
//! Prandtl–Meyer waves in the polar angle. The crate builds such flows from a
//! wave-sequence description, then checks jump conditions, admissibility,
//! sector structure and the integrated weak form.

pub mod error;
pub mod flowfield;
pub mod gas;
pub mod numeric;
pub mod pmwave;
pub mod polar;
pub mod report;
pub mod roe;
pub mod shock;
pub mod verify;

pub use error::{Error, Result};
pub use flowfield::{
    bv_decompose, build_flow, evaluate, sector_decompose, validate_structure, FlowField,
    FlowSpec, Sector, SBVDecomposition, WavePiece,
};
pub use gas::{
    conserved_to_primitive, in_phase_space, make_gas, physical_fluxes, primitive_to_conserved,
    ConservedState, GasModel, Mat4, PhaseBounds, PrimitiveState, Vec4,
};
pub use pmwave::{classify_pm, integrate_pm, pm_rhs, PMWave, WaveKind};
pub use polar::{flow_angle, from_polar, to_polar, PolarState};
pub use report::{Check, CheckList};
pub use roe::{eigensystem, genuine_nonlinearity, jacobian, roe_average, roe_matrix, EigenSystem, RoeAverage};
pub use shock::{
    check_admissibility, classify_discontinuity, deflection_angle, hugoniot_value,
    lax_neighborhood_bound, max_deflection, max_deflection_limit, rh_residual,
    shock_from_strength, solve_shock_angle, Branch, DiscontinuityClass, Orientation,
    ShockSolution,
};
pub use verify::{entropy_residual, full_audit, smooth_residual, weak_residual, AuditReport};
