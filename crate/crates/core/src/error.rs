use std::fmt;

use thiserror::Error;

/// Algebra axiom checked by [`crate::algebra::validate_algebra`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Commutativity,
    Associativity,
    Unit,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LiftFailure {
    /// The system `phi(a) = psi(phi o f)` has no solution in `A`.
    NoSolution { residual: f64 },
    /// The supplied functions do not span the function algebra.
    NotSpanning { rank: usize, dim: usize },
    /// The assembled map violates an A-character law.
    InvariantViolated { law: &'static str, residual: f64 },
}

impl fmt::Display for LiftFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftFailure::NoSolution { residual } => {
                write!(f, "no solution (residual {residual:e})")
            }
            LiftFailure::NotSpanning { rank, dim } => {
                write!(f, "spanning set has rank {rank}, expected {dim}")
            }
            LiftFailure::InvariantViolated { law, residual } => {
                write!(f, "{law} law violated (residual {residual:e})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionAlgebraDefect {
    ConstantsMissing,
    PointsNotSeparated,
}

impl fmt::Display for FunctionAlgebraDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionAlgebraDefect::ConstantsMissing => "constant functions missing",
            FunctionAlgebraDefect::PointsNotSeparated => "points not separated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{axiom} axiom violated (max residual {max_residual:e})")]
    AxiomViolation { axiom: Axiom, max_residual: f64 },

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("element is not invertible (smallest singular value {smallest_singular_value:e})")]
    NotInvertible { smallest_singular_value: f64 },

    #[error("character solver failed after {attempts} attempts (worst residual {worst_residual:e})")]
    CharacterSolveFailure { attempts: usize, worst_residual: f64 },

    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),

    #[error("realization of dimension {size} exceeds the cap {cap}")]
    SizeOverflow { size: usize, cap: usize },

    #[error("numerical failure: residual {residual:e} lies in the ambiguous zone")]
    NumericalFailure { residual: f64 },

    #[error("character lift failed: {0}")]
    LiftFailure(LiftFailure),

    #[error("operation requires a semisimple algebra")]
    SemisimplicityRequired,

    #[error("not a function algebra: {0}")]
    NotAFunctionAlgebra(FunctionAlgebraDefect),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid point set: {0}")]
    InvalidSpace(String),

    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("unknown gallery algebra {0:?}")]
    UnknownGallery(String),

    #[error("assertion failed at step {step}: {detail}")]
    AssertionFailure { step: usize, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::AxiomViolation { .. } => "AxiomViolation",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::NotInvertible { .. } => "NotInvertible",
            Error::CharacterSolveFailure { .. } => "CharacterSolveFailure",
            Error::OracleDisagreement(_) => "OracleDisagreement",
            Error::SizeOverflow { .. } => "SizeOverflow",
            Error::NumericalFailure { .. } => "NumericalFailure",
            Error::LiftFailure(_) => "LiftFailure",
            Error::SemisimplicityRequired => "SemisimplicityRequired",
            Error::NotAFunctionAlgebra(_) => "NotAFunctionAlgebra",
            Error::InvalidMetric(_) => "InvalidMetric",
            Error::InvalidSpace(_) => "InvalidSpace",
            Error::ParseError { .. } => "ParseError",
            Error::UnknownGallery(_) => "UnknownGallery",
            Error::AssertionFailure { .. } => "AssertionFailure",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// Bad input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::AxiomViolation { .. }
                | Error::AlgebraMismatch
                | Error::InvalidMetric(_)
                | Error::InvalidSpace(_)
                | Error::ParseError { .. }
                | Error::UnknownGallery(_)
                | Error::InvalidArgument(_)
        )
    }

    /// A cross-check or asserted law failed.
    pub fn is_failure(&self) -> bool {
        matches!(self, Error::OracleDisagreement(_) | Error::AssertionFailure { .. })
    }
}
