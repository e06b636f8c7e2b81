use thiserror::Error;

/// Failures raised by the plate, wave and balance routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("jet entry {index:?} of `{field}` is not finite ({value})")]
    NonFiniteJet {
        field: &'static str,
        index: [u8; 3],
        value: f64,
    },

    #[error("point {point:?} lies on the front; request the ahead or behind side explicitly")]
    AmbiguousSide { point: [f64; 3] },

    #[error("front gradient vanishes at {point:?} (|grad| = {norm:e}); normal is undefined")]
    SingularFront { point: [f64; 3], norm: f64 },

    #[error("point {point:?} is not on the front (level-set value {level:e})")]
    NotOnFront { point: [f64; 3], level: f64 },

    #[error(
        "point {point:?} is within {distance:e} of the front; the stencil of half-width {reach:e} would straddle it"
    )]
    TooCloseToFront {
        point: [f64; 3],
        distance: f64,
        reach: f64,
    },

    #[error("record is not an admissible acceleration wave: {reason}; run check_acceleration_wave first")]
    NotAdmissible { reason: String },

    #[error("field has no front")]
    NoFront,

    #[error("law {0} has no closed-form jump condition; use balance_jump_residual")]
    NoClosedForm(u8),

    #[error("unknown conservation law `{name}`; valid names: {valid}")]
    UnknownLaw { name: String, valid: String },

    #[error("front crosses the boundary of the region between t-dt and t+dt")]
    FrontLeavesRegion,
}

pub type Result<T> = std::result::Result<T, Error>;
