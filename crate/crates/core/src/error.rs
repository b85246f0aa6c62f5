use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quantum efficiency eta = {0} outside (0.5, 1]; the estimator kernels are unbounded for eta <= 0.5")]
    EfficiencyOutOfRange(f64),

    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("Laguerre parameter alpha = {0} must exceed -1")]
    LaguerreAlpha(f64),

    #[error("Phi(2, 1/2; z) is only supported for z <= 0, got z = {0}")]
    KummerDomain(f64),

    #[error("quadrature order {0} outside supported range 1..=512")]
    QuadratureOrder(usize),

    #[error("{what}: expected {expected}, got {got}")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("angle theta = {0} outside [0, pi/2]")]
    ThetaRange(f64),

    #[error("photon number {0} exceeds the supported maximum of 170")]
    FactorialOverflow(usize),

    #[error("generating-function argument z = {0} outside [0, 1]")]
    MgfDomain(f64),

    #[error("squeezing parameter |xi| = {0} must be < 1")]
    SqueezingRange(f64),

    #[error("mean photon number {0} must be finite and >= 0")]
    MeanPhotonRange(f64),

    #[error("sample count must be positive")]
    EmptySampleCount,

    #[error("non-finite value at sample index {index}")]
    NonFiniteValue { index: u64 },

    #[error("observable {observable} is incompatible with a {dataset} dataset")]
    Incompatible {
        observable: String,
        dataset: &'static str,
    },

    #[error("observable set is empty")]
    NoObservables,

    #[error("partition count must be positive")]
    Partitions,

    #[error("{0}")]
    Format(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
