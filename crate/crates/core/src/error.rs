use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime in the range 2 < p < 2^31")]
    InvalidPrime(u64),

    #[error("cannot parse {what} from token {token:?}: {reason}")]
    Parse {
        what: &'static str,
        token: String,
        reason: String,
    },

    #[error("classes have different numbers of points ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },

    #[error("generator {generator} is out of range for n = {n}")]
    GeneratorOutOfRange { generator: String, n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("class {0} is not exceptional")]
    NotExceptional(String),

    #[error("class {0} is not in the effective monoid")]
    NotEffective(String),

    #[error("binary forms have a common factor of degree {0}")]
    CommonFactor(usize),

    #[error("degenerate point configuration: {0}")]
    Degenerate(String),

    #[error("no usable point configuration after {attempts} attempts: {last}")]
    RetriesExhausted { attempts: usize, last: String },

    #[error("computation infeasible: {rows}x{cols} matrix exceeds the ceiling of {ceiling} entries")]
    Infeasible {
        rows: usize,
        cols: usize,
        ceiling: usize,
    },

    #[error("negative expected h^1 ({value}) for class {class}")]
    ShghInconsistent { class: String, value: i64 },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(what: &'static str, token: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            token: token.to_string(),
            reason: reason.into(),
        }
    }
}
