use thiserror::Error;

use crate::spectra::{ManifoldId, SpinStructure};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("truncation radius must be positive, got {0}")]
    NonpositiveLambdaMax(f64),

    #[error("cutoff scale must be positive, got {0}")]
    NonpositiveLambda(f64),

    #[error("heat-trace parameter must be positive, got {0}")]
    NonpositiveP(f64),

    #[error("circle slope must be positive, got {0}")]
    NonpositiveAlpha(String),

    #[error("multiplicity factor must be positive, got {0}")]
    NonpositiveFactor(String),

    #[error("eigenvalue {eigenvalue} would get negative multiplicity {multiplicity}")]
    NegativeMultiplicity { eigenvalue: f64, multiplicity: String },

    #[error("spectra truncated at different radii ({0} vs {1})")]
    LambdaMaxMismatch(f64, f64),

    #[error("spin structure {spin} is not admissible on {manifold}")]
    InadmissibleSpin { manifold: ManifoldId, spin: SpinStructure },

    #[error("negative eigenvalue square {0}")]
    NegativeSquare(String),

    #[error("truncation at {lambda_max} too tight for cutoff scale {lambda}: tail bound {tail:e} exceeds {allowed:e}")]
    TruncationTooTight {
        lambda_max: f64,
        lambda: f64,
        tail: f64,
        allowed: f64,
    },

    #[error("moment integral did not converge: {0}")]
    DivergentMoment(String),

    #[error("least-squares fit ill-conditioned (condition number {0:e})")]
    IllConditionedFit(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid cutoff table: {0}")]
    InvalidTable(String),

    #[error("invalid torus angle: {0}")]
    InvalidAngle(String),

    #[error("arithmetic overflow in exact key computation")]
    Overflow,
}

impl Error {
    /// Variant name, used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonpositiveLambdaMax(_) => "NonpositiveLambdaMax",
            Error::NonpositiveLambda(_) => "NonpositiveLambda",
            Error::NonpositiveP(_) => "NonpositiveP",
            Error::NonpositiveAlpha(_) => "NonpositiveAlpha",
            Error::NonpositiveFactor(_) => "NonpositiveFactor",
            Error::NegativeMultiplicity { .. } => "NegativeMultiplicity",
            Error::LambdaMaxMismatch(..) => "LambdaMaxMismatch",
            Error::InadmissibleSpin { .. } => "InadmissibleSpin",
            Error::NegativeSquare(_) => "NegativeSquare",
            Error::TruncationTooTight { .. } => "TruncationTooTight",
            Error::DivergentMoment(_) => "DivergentMoment",
            Error::IllConditionedFit(_) => "IllConditionedFit",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidTable(_) => "InvalidTable",
            Error::InvalidAngle(_) => "InvalidAngle",
            Error::Overflow => "Overflow",
        }
    }
}
