use thiserror::Error;

/// Errors surfaced by the library layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("cannot invert zero in F_{0}")]
    ZeroInverse(u64),
    #[error("operands belong to different fields (F_{0} vs F_{1})")]
    FieldMismatch(u64, u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("spanning directions are linearly dependent")]
    DependentDirections,
    #[error("point ({0}) does not lie on the plane")]
    PointOffPlane(String),
    #[error("duplicate point ({0}) in tableau point set")]
    DuplicatePoint(String),
    #[error("point ({0}) is missing from the handicap domain")]
    MissingHandicap(String),
    #[error("stacked direction matrix is singular")]
    SingularDirections,
    #[error("plane enumeration would produce {count} planes, above the cap {cap}")]
    PlaneCapExceeded { count: u128, cap: u128 },
    #[error("support is not connected ({components} components)")]
    DisconnectedSupport { components: usize },
    #[error("support point ({0}) has no witness tuple")]
    NoWitness(String),
    #[error("support point ({0}) is not a multijoint of the configuration")]
    SupportOffJoints(String),
    #[error("perturbation index {t} out of range 1..={max}")]
    PerturbationIndex { t: usize, max: usize },
    #[error("support of the weight function is empty")]
    EmptySupport,
    #[error("oracle guard violated: {0}")]
    OracleGuard(String),
    #[error("no representative plane for trace {0}")]
    MissingTrace(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("lambda {lambda}: {source}")]
    Stage {
        lambda: u32,
        #[source]
        source: Box<Error>,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("malformed rational literal `{0}`")]
    MalformedRational(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
