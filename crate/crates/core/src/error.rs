use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("total population is zero; the mixing term lambda*I*S/N is undefined")]
    ZeroPopulation,

    #[error("point ({s}, {i}, {r}) is not strictly interior; the curl formula is singular")]
    SingularPoint { s: f64, i: f64, r: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rest points are not isolated (the two nullclines share a component)")]
    NonIsolatedRestPoints,

    #[error("Newton polishing diverged from resultant root near ({s}, {i})")]
    PolishDiverged { s: f64, i: f64 },

    #[error("vector field vanishes on the curve near ({x}, {y}) (|X| = {norm:e})")]
    FieldVanishesOnCurve { x: f64, y: f64, norm: f64 },

    #[error("winding computation exceeded its sample budget of {budget} points")]
    NoConvergence { budget: usize },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("orbit did not settle on a rest point within t = {max_time} (distance {distance:e})")]
    Unconverged { max_time: f64, distance: f64 },

    #[error("growth threshold denominator d + eps1*i + eps2*r is zero")]
    ZeroDenominator,

    #[error("growth threshold T = {threshold} is within the 0.05 margin of 1")]
    Inconclusive { threshold: f64 },

    #[error("admissible T0/T1 interval is empty: {0}")]
    EmptyInterval(String),

    #[error("no perturbation size in the schedule produced two sinks and a saddle")]
    PersistenceFailure,

    #[error("rest-point configuration contradicts the two-regime dichotomy: {0}")]
    InconsistentWithTheorem(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Module-qualified name of the violated contract, used in CLI messages.
    pub fn contract(&self) -> &'static str {
        match self {
            Error::InvalidParams { .. } => "model::InvalidParams",
            Error::ZeroPopulation => "model::ZeroPopulation",
            Error::SingularPoint { .. } => "model::SingularPoint",
            Error::Precondition(_) => "Precondition",
            Error::NonIsolatedRestPoints => "equilibria::NonIsolatedRestPoints",
            Error::PolishDiverged { .. } => "equilibria::PolishDiverged",
            Error::FieldVanishesOnCurve { .. } => "index::FieldVanishesOnCurve",
            Error::NoConvergence { .. } => "index::NoConvergence",
            Error::InvalidCurve(_) => "index::InvalidCurve",
            Error::StepSizeUnderflow { .. } => "dynamics::StepSizeUnderflow",
            Error::NonFiniteState { .. } => "dynamics::NonFiniteState",
            Error::Unconverged { .. } => "dynamics::Unconverged",
            Error::ZeroDenominator => "dynamics::ZeroDenominator",
            Error::Inconclusive { .. } => "dynamics::Inconclusive",
            Error::EmptyInterval(_) => "analysis::EmptyInterval",
            Error::PersistenceFailure => "analysis::PersistenceFailure",
            Error::InconsistentWithTheorem(_) => "analysis::InconsistentWithTheorem",
            Error::Config { .. } => "io::Config",
            Error::Io(_) => "io::Io",
        }
    }

    /// True for errors caused by bad input rather than a numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams { .. }
                | Error::Precondition(_)
                | Error::Config { .. }
                | Error::Io(_)
                | Error::EmptyInterval(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
