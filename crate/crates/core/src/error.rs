use thiserror::Error;

use crate::quaternion::Quaternion;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a quaternion of modulus {0:e}")]
    ZeroDivision(f64),

    #[error("series must have at least one coefficient and finite entries")]
    InvalidSeries,

    #[error("constant term {modulus:e} is below the reciprocal threshold {threshold:e}")]
    ZeroConstantTerm { modulus: f64, threshold: f64 },

    #[error("regular conjugate vanishes at {at} (|f^c(q)| = {modulus:e})")]
    ZeroDenominator { at: Quaternion, modulus: f64 },

    #[error(
        "point {at} is too close to the zero set of the symmetrization (|f^s(q)| = {modulus:e})"
    )]
    NearZeroSet { at: Quaternion, modulus: f64 },

    #[error("linear division residual {residual:e} exceeds {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("Moebius parameter {0} is not inside the unit ball")]
    ParameterOutOfBall(Quaternion),

    #[error("point {0} is (numerically) real; the spherical expansion needs a non-real centre")]
    RealPoint(Quaternion),

    #[error(
        "quantity expected to be real has imaginary part {defect:e} (tolerance {tolerance:e})"
    )]
    NotReal {
        value: Quaternion,
        defect: f64,
        tolerance: f64,
    },

    #[error("direction {0} is not a unit vector")]
    NotUnit(Quaternion),

    #[error("point {0} is not on the unit sphere")]
    NotOnBoundary(Quaternion),

    #[error(
        "series tail {tail:e} is too large for the function to be regular across the unit sphere"
    )]
    NotRegularOnClosedBall { tail: f64 },

    #[error("closed-form and division-path jet coefficients disagree by {0:e}")]
    JetMismatch(f64),

    #[error("coefficient {index} is {modulus:e}; the first {order} coefficients must vanish")]
    VanishingHypothesisViolated {
        order: usize,
        index: usize,
        modulus: f64,
    },

    #[error("fixed-point hypothesis violated: {0}")]
    FixedPointViolated(String),

    #[error("invalid region parameter: {0}")]
    InvalidRegion(String),

    #[error("Cayley transform has a pole at -1 (got {0})")]
    PoleAtMinusOne(Quaternion),

    #[error("rejection sampler exceeded its budget of {0} draws")]
    RejectionBudgetExceeded(usize),

    #[error("invalid sample configuration: {0}")]
    InvalidConfig(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("rigidity mode hypothesis violated: {0}")]
    ModeHypothesisViolated(String),

    #[error("range hypothesis violated: Re f = {re:e} at {at}")]
    RangeHypothesisViolated { at: Quaternion, re: f64 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("coefficient file: {0}")]
    CoefficientFile(String),
}

impl Error {
    /// Errors that mean the input did not satisfy the hypotheses of a check,
    /// as opposed to a numerical failure.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::HypothesisViolated(_)
                | Error::ModeHypothesisViolated(_)
                | Error::RangeHypothesisViolated { .. }
                | Error::VanishingHypothesisViolated { .. }
                | Error::FixedPointViolated(_)
                | Error::NotOnBoundary(_)
                | Error::NotRegularOnClosedBall { .. }
                | Error::ParameterOutOfBall(_)
        )
    }
}
