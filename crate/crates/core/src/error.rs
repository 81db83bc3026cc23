use thiserror::Error;

/// Every failure mode of the library. Variants carry enough context to be
/// reported by the CLI without access to the originating call.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("symbolic driver has no pointwise evaluation")]
    SymbolicDriver,
    #[error("unknown coefficient `{0}`")]
    UnknownCoefficient(String),
    #[error("invalid driver: {0}")]
    InvalidDriver(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("solution left the guard region at t = {t_escape}")]
    BlowUp { t_escape: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("family is not coercive (absorbing radius validation failed)")]
    NotCoercive,
    #[error("pullback did not converge within horizon cap {horizon_cap}")]
    NoConvergence { horizon_cap: f64 },
    #[error("basin classification ambiguous: {0}")]
    AmbiguousBasin(String),

    #[error("inconclusive: {reason}")]
    Inconclusive { reason: String },
    #[error("pattern unresolved: {reason}")]
    PatternUnresolved { reason: String },
    #[error("ordering hypothesis violated: {0}")]
    OrderingViolated(String),

    #[error("driver does not present a1 as the derivative of a bounded primitive: {0}")]
    NotCPDriver(String),
    #[error("spectrum is only estimated for this driver kind")]
    EstimatedSpectrumOnly,
    #[error("inconsistent bounds: {0}")]
    InconsistentBounds(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("hypothesis (H) fails: {which}")]
    HypothesisHFails { which: String },
    #[error("route inequality fails: {which}")]
    RouteInequalityFails { which: String },

    #[error("coefficient does not change sign")]
    NoSignChange,
    #[error("bisection failed: {0}")]
    BisectionFailed(String),
    #[error("epsilon {epsilon} is not below epsilon1 = {epsilon1}")]
    EpsilonTooLarge { epsilon: f64, epsilon1: f64 },
    #[error("coefficient matrix is not certifiably invertible")]
    SingularMatrix,
    #[error("target unreachable: {0}")]
    TargetUnreachable(String),

    #[error("bracket [{lo}, {hi}] does not contain a threshold")]
    BracketFailed { lo: f64, hi: f64 },
    #[error("law `{which}` violated: {witness}")]
    LawViolated { which: String, witness: String },

    #[error("invalid config at `{path}`: {message}")]
    ConfigInvalid { path: String, message: String },
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
