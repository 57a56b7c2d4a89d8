use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown distribution family `{0}`")]
    UnknownFamily(String),

    #[error("family `{family}`: parameter `{param}` must satisfy {constraint} (got {value})")]
    InvalidParameter {
        family: String,
        param: String,
        constraint: String,
        value: f64,
    },

    #[error("family `{family}`: missing parameter `{param}`")]
    MissingParameter { family: String, param: String },

    #[error("family `{family}`: unexpected parameter `{param}`")]
    UnexpectedParameter { family: String, param: String },

    #[error("invalid truncation interval: {0}")]
    InvalidInterval(String),

    #[error("projected mode {mode} lies outside the truncated support")]
    ModeOutsideInterval { mode: f64 },

    /// The inverse-transform route produced a value that is not a valid
    /// draw from the truncated law.
    #[error("truncation overflow: quantile route returned {value} for p = {p}")]
    TruncationOverflow { p: f64, value: f64 },

    #[error("family `{0}` provides no quantile function")]
    MissingQuantile(String),

    #[error("degenerate target: log P(I) underflowed to -inf")]
    DegenerateTarget,

    #[error("sampler broke down at variate {index}: {reason}")]
    SamplerBreakdown { index: usize, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("malformed report: {0}")]
    Parse(String),
}
