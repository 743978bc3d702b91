//! Error type shared by all modules, with the process exit codes used by the CLI.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data failed validation (bad ordering, signs, normalization, parse).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Evaluation requested at (or too close to) a pole.
    #[error("evaluation at pole gamma_{index} = {pole}")]
    PoleEvaluation { index: usize, pole: f64 },

    /// Level equals the constant term at infinity; one root escapes to infinity.
    #[error("level {level} equals the constant term at infinity")]
    LevelEqualsAlpha { level: f64 },

    /// The function has a pole at zero, so the parameter flip is undefined.
    #[error("pole at zero")]
    PoleAtZero,

    /// Inversion of the zero function.
    #[error("cannot invert the zero function")]
    ZeroFunction,

    /// Two transformed mass positions collide within tolerance.
    #[error("coincident mass positions: xi_{i} and xi_{j} differ by {gap:e}")]
    CoincidentPositions { i: usize, j: usize, gap: f64 },

    /// A mass sits on the interval endpoint; the inverse Liouville map is undefined there.
    #[error("mass at interval endpoint: xi_{index} = {xi}")]
    BoundaryMass { index: usize, xi: f64 },

    /// Boundary pair with a + 4b = 0 degenerates the root count.
    #[error("degenerate boundary condition: a + 4b = 0 for (a, b) = ({a}, {b})")]
    DegenerateBoundary { a: f64, b: f64 },

    /// Chart parameter outside the admissible range.
    #[error("inadmissible chart parameter: {0}")]
    InadmissibleParameter(String),

    /// Evolution requested with a Hamiltonian bound to a different chart.
    #[error("hamiltonian is bound to a different chart than the one being evolved")]
    ChartMismatch,

    /// Continued-fraction peeling extracted a nonpositive mass or gap.
    #[error("non-Herglotz remainder during peeling (step {step}): {what} = {value}")]
    NonHerglotzRemainder {
        step: usize,
        what: &'static str,
        value: f64,
    },

    /// Peeling did not terminate after the expected number of mass extractions.
    #[error("peeling degree mismatch: {0}")]
    DegreeMismatch(String),

    /// Rebuilt Weyl function violates its normalization at zero.
    #[error("normalization violated: {flavor}(0) = {value}, expected {expected}")]
    NormalizationViolation {
        flavor: &'static str,
        value: f64,
        expected: f64,
    },

    /// Finite-difference gradient failed the step-halving consistency check.
    #[error("finite-difference gradient inconsistent at coordinate {coord}: ratio {ratio}")]
    GradientConsistency { coord: usize, ratio: f64 },

    /// Bracket of a function with itself at coincident arguments.
    #[error("coincident arguments x = y = {0}")]
    CoincidentArguments(f64),

    /// Index outside the coordinate range.
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// Adaptive integrator could not take a step above the minimum size.
    #[error("integrator step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    /// A numerical routine left its guaranteed operating regime.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// One or more verification checks failed.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// I/O error from reading inputs or writing artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code associated with the error.
    ///
    /// 1 verification failure, 2 input error, 3 numerical error,
    /// 4 inadmissible parameter.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::VerificationFailed(_) => 1,
            Error::InvalidInput(_)
            | Error::PoleAtZero
            | Error::ZeroFunction
            | Error::CoincidentPositions { .. }
            | Error::BoundaryMass { .. }
            | Error::DegenerateBoundary { .. }
            | Error::IndexOutOfRange { .. }
            | Error::Io(_) => 2,
            Error::InadmissibleParameter(_) | Error::ChartMismatch => 4,
            Error::PoleEvaluation { .. }
            | Error::LevelEqualsAlpha { .. }
            | Error::NonHerglotzRemainder { .. }
            | Error::DegreeMismatch(_)
            | Error::NormalizationViolation { .. }
            | Error::GradientConsistency { .. }
            | Error::CoincidentArguments(_)
            | Error::StepFailure { .. }
            | Error::Numerical(_) => 3,
        }
    }

    /// Stable machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::PoleEvaluation { .. } => "pole_evaluation",
            Error::LevelEqualsAlpha { .. } => "level_equals_alpha",
            Error::PoleAtZero => "pole_at_zero",
            Error::ZeroFunction => "zero_function",
            Error::CoincidentPositions { .. } => "coincident_positions",
            Error::BoundaryMass { .. } => "boundary_mass",
            Error::DegenerateBoundary { .. } => "degenerate_boundary",
            Error::InadmissibleParameter(_) => "inadmissible_parameter",
            Error::ChartMismatch => "chart_mismatch",
            Error::NonHerglotzRemainder { .. } => "non_herglotz_remainder",
            Error::DegreeMismatch(_) => "degree_mismatch",
            Error::NormalizationViolation { .. } => "normalization_violation",
            Error::GradientConsistency { .. } => "gradient_consistency",
            Error::CoincidentArguments(_) => "coincident_arguments",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::StepFailure { .. } => "step_failure",
            Error::Numerical(_) => "numerical",
            Error::VerificationFailed(_) => "verification_failed",
            Error::Io(_) => "io",
        }
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
