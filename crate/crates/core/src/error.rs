//! Error type shared by every module of the crate.

use core::fmt;

/// Errors raised by operators, sets, schedules and the solver.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `f(x) > 0` while the selected subgradient is zero, so `min f > 0` and
    /// the declared nonempty sublevel set is contradicted.
    InconsistentProblem {
        /// Function value at the offending point.
        value: f64,
    },
    /// An operator produced NaN or infinite components.
    NonFiniteResult,
    /// A parameter is outside its admissible range.
    InvalidParameter(&'static str),
    /// An input violates the precondition of the operation.
    InvalidInput(&'static str),
    /// Vector or set dimensions disagree.
    DimensionMismatch {
        /// Dimension the operation expected.
        expected: usize,
        /// Dimension it received.
        found: usize,
    },
    /// The set is not a cone, so reflection or the polar-cone audit is undefined.
    NotACone,
    /// A relaxed cone projector was requested for a cone not declared obtuse.
    NotObtuse,
    /// The relaxation function returned a value outside `[1, 2]`.
    InvalidRelaxation {
        /// The offending value of `λ(x)`.
        lambda: f64,
    },
    /// A state-dependent schedule was advanced without the iterate and cutter.
    MissingContext,
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InconsistentProblem { value } => write!(
                f,
                "inconsistent problem: f(x) = {value} > 0 with a zero subgradient"
            ),
            Error::NonFiniteResult => f.write_str("operator produced a non-finite result"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotACone => f.write_str("set is not a cone"),
            Error::NotObtuse => f.write_str("cone is not declared obtuse"),
            Error::InvalidRelaxation { lambda } => {
                write!(f, "relaxation λ(x) = {lambda} is outside [1, 2]")
            }
            Error::MissingContext => {
                f.write_str("schedule needs the current iterate and cutter to advance")
            }
        }
    }
}

impl core::error::Error for Error {}
