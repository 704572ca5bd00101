use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not anti-Hermitian (residual {residual:e})")]
    NotAntiHermitian { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("requested order {requested} exceeds the cap {cap}")]
    OrderTooLarge { requested: usize, cap: usize },
    #[error("table order {available} is insufficient, need {required}")]
    InsufficientOrder { required: usize, available: usize },
    #[error("BCH convergence gate failed: ad-norm sum {sum} >= log 2")]
    ConvergenceGateFailed { sum: f64 },
    #[error("norm gate failed: {norm} >= {gate}")]
    NormGateFailed { norm: f64, gate: f64 },
    #[error("synthesis did not converge within {0} sweeps")]
    MaxSweepsExceeded(usize),
    #[error("synthesis gate violated after {0} restarts")]
    GateRestartLimit(usize),
    #[error("generator outside algebra (residual {residual:e})")]
    GeneratorOutsideAlgebra { residual: f64 },
    #[error("small-time gate failed: alpha*T = {alpha_t}, beta*T = {beta_t}")]
    SmallTimeGateFailed { alpha_t: f64, beta_t: f64 },
    #[error("no branch in the window passes the algebra filter")]
    NoAdmissibleCandidate,
    #[error("zero deviation with nonzero angle {angle}")]
    ZeroDeviation { angle: f64 },
    #[error("commutator denominator vanishes ({0:e})")]
    DegenerateDenominator(f64),
    #[error("parameter constraint violated: {0}")]
    ParamConstraintViolated(String),
    #[error("eigenphases do not match the diagonal form (mismatch {0:e})")]
    DiagonalizationMismatch(f64),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Malformed or out-of-contract input, as opposed to a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::NotHermitian { .. }
                | Error::NotAntiHermitian { .. }
                | Error::NotUnitary { .. }
                | Error::InvalidTolerance(_)
                | Error::EmptyGenerators
                | Error::OrderTooLarge { .. }
                | Error::GeneratorOutsideAlgebra { .. }
                | Error::ConvergenceGateFailed { .. }
                | Error::NormGateFailed { .. }
                | Error::SmallTimeGateFailed { .. }
                | Error::ParamConstraintViolated(_)
                | Error::InvalidSchedule(_)
                | Error::InvalidInput(_)
        )
    }
}
