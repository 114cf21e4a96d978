//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma must exceed 1 (got {0})")]
    Gamma(f64),

    #[error("invalid phase bounds: {0}")]
    Bounds(String),

    #[error("nonpositive density")]
    NonpositiveDensity,

    #[error("nonpositive pressure")]
    NonpositivePressure,

    #[error("zero velocity has no flow angle")]
    ZeroVelocity,

    #[error("no jump: shock strength must be positive (got {0})")]
    NoJump(f64),

    #[error("shock strength {z} exceeds z_max = {z_max}")]
    StrengthTooLarge { z: f64, z_max: f64 },

    #[error("state leaves phase space: {0}")]
    OutOfPhaseSpace(String),

    #[error("upstream Mach number must exceed 1 (got {0})")]
    Subsonic(f64),

    #[error("shock angle {beta} outside [{lo}, {hi}]")]
    ShockAngle { beta: f64, lo: f64, hi: f64 },

    #[error("detached shock regime: deflection {alpha} exceeds maximum {max} at this Mach number")]
    Detached { alpha: f64, max: f64 },

    #[error("state is not sonic for this orientation (|N| - c = {0:e})")]
    NotSonic(f64),

    #[error("invalid wave: {0}")]
    Wave(String),

    #[error("degenerate averaged sound speed (c^2 = {0})")]
    DegenerateSoundSpeed(f64),

    #[error("piece {index}: {source}")]
    Piece { index: usize, source: Box<Error> },

    #[error("flow does not close up around the circle (angle residual {angle:e}, pressure residual {pressure:e})")]
    Closure { angle: f64, pressure: f64 },

    #[error("{0} sectors exceed the maximum of three")]
    TooManySectors(usize),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid flow: {0}")]
    Flow(String),
}

impl Error {
    pub(crate) fn at_piece(self, index: usize) -> Error {
        match self {
            e @ Error::Piece { .. } => e,
            e => Error::Piece {
                index,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
