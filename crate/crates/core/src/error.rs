use thiserror::Error;

/// Errors raised by the geometry, decomposition, toolpath and simulation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("station {station} is outside the curve extent [{min}, {max}]")]
    OutOfRange { station: f64, min: f64, max: f64 },
    #[error("point ({x}, {y}) is outside the surface domain")]
    OutsideDomain { x: f64, y: f64 },
    #[error("plane at station {station} crosses the curve {crossings} times")]
    Ambiguous { station: f64, crossings: usize },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("program is empty: {0}")]
    EmptyProgram(String),
    #[error("kinematic violation: {0}")]
    Kinematics(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
