//! Crate-wide error type.
//!
//! Geometry, parsing, and integration failures all funnel into [`Error`] so
//! that pipeline code (grid sweeps, CLI, FFI) can fold per-point failures
//! into reports without juggling conversions.

use thiserror::Error;

/// Everything that can go wrong while parsing, evaluating, or integrating.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Causal classification of the zero vector is undefined.
    #[error("causal class of the zero vector is undefined")]
    ZeroVector,

    /// A frame failed its Gram-matrix invariants.
    #[error("invalid frame: {0} (defect {1:.3e})")]
    InvalidFrame(&'static str, f64),

    /// Expression text failed to parse.
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },

    /// Unknown function name in an expression.
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    /// Function called with the wrong number of arguments.
    #[error("`{name}` takes {expected} argument(s), got {got}")]
    Arity {
        name: &'static str,
        expected: usize,
        got: usize,
    },

    /// A variable is not bound in the current evaluation context.
    #[error("variable `{0}` is not bound here")]
    UnboundVariable(char),

    /// Evaluation left the mathematical domain of a node.
    #[error("domain error in `{node}` at value {value:.6e}")]
    Domain { node: &'static str, value: f64 },

    /// Adaptive quadrature could not meet its tolerance.
    #[error("quadrature failed to converge on [{lo}, {hi}]")]
    QuadratureFailure { lo: f64, hi: f64 },

    /// The immersion is not regular at the requested point.
    #[error("surface not regular at (u, v) = ({u}, {v})")]
    NotRegular { u: f64, v: f64 },

    /// The induced metric is not indefinite at the requested point.
    #[error("surface not timelike: E*G - F^2 = {0:.6e} is not negative")]
    NotTimelike(f64),

    /// First-fundamental matrix is singular.
    #[error("singular first-fundamental matrix (det {0:.6e})")]
    SingularMetric(f64),

    /// A surface family spec violates its own nondegeneracy requirements.
    #[error("degenerate spec: {0}")]
    DegenerateSpec(String),

    /// A moving frame lost transversality or nullity along the base curve.
    #[error("degenerate frame at u = {u}: {reason}")]
    DegenerateFrame { u: f64, reason: &'static str },

    /// Frame integration diverged.
    #[error("integration blowup: state norm {0:.3e} exceeds 1e12")]
    IntegrationBlowup(f64),

    /// No sign change found while bracketing a root.
    #[error("no root bracketed in [{lo}, {hi}]")]
    NoRootInRange { lo: f64, hi: f64 },

    /// The operation is not defined for this spec kind.
    #[error("unsupported for this surface spec: {0}")]
    UnsupportedSpec(&'static str),

    /// Invalid user-facing input (ranges, grid sizes, flags).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// I/O failure while writing an export.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;
