use crate::graph::{BoundaryKind, ValidationReport};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{kind} boundary condition is only allowed at valence 1, got valence {valence}")]
    IllegalValence { kind: BoundaryKind, valence: usize },

    #[error("size mismatch for {what}: expected {expected}, got {got}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),

    #[error("unknown bond `{0}`")]
    UnknownBond(String),

    #[error("graph is not a star with a Kirchhoff center and piston leaves")]
    NotAStar,

    #[error("no closed form is known for this graph")]
    NoClosedForm,

    #[error("bond lengths are not all equal")]
    UnequalLengths,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("spectrum cutoff {omega_max} is below the required {required}")]
    CutoffTooLow { omega_max: f64, required: f64 },

    #[error("finite-difference step {step} is too large for bond length {length}")]
    StepTooLarge { step: f64, length: f64 },

    #[error("extrapolation nodes coincide")]
    DegenerateNodes,

    #[error("dilogarithm argument {0} outside [-1, 1]")]
    Domain(f64),

    #[error("cycle is disconnected at step {position}")]
    DisconnectedStep { position: usize },

    #[error("root finding failed: {0}")]
    ConvergenceFailure(String),

    #[error("orbit search exceeded the node budget of {budget}")]
    BudgetExceeded { budget: u64 },

    #[error("reference error estimate {reference_error:e} exceeds 10% of the smallest grid error {smallest_error:e}")]
    ReferenceTooCoarse {
        reference_error: f64,
        smallest_error: f64,
    },
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure(_)
                | Error::BudgetExceeded { .. }
                | Error::ReferenceTooCoarse { .. }
                | Error::DegenerateNodes
        )
    }
}
