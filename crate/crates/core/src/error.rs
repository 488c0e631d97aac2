use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("variable `{0}` is bound more than once")]
    Rebound(String),

    #[error("quantifier inside the matrix at {line}:{column}: only prenex formulas are accepted")]
    NonPrenex { line: usize, column: usize },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("universes overlap on {0:?}")]
    OverlappingUniverse(Vec<String>),

    #[error("block {0:?} is not existential")]
    NotExistential(Vec<String>),

    #[error("variable sets do not partition: {0}")]
    Partition(String),

    #[error("too many variables in one alphabet ({found}, limit {limit})")]
    AlphabetTooLarge { found: usize, limit: usize },

    #[error("resource limit exceeded in stage `{stage}` (limit {limit})")]
    ResourceExceeded { stage: String, limit: usize },

    #[error("time limit exceeded in stage `{stage}`")]
    Timeout { stage: String },

    #[error("the even team does not win this game")]
    NotWinning,

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("tree is not behavioral: {0}")]
    NotBehavioral(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn resource(stage: impl Into<String>, limit: usize) -> Self {
        Error::ResourceExceeded {
            stage: stage.into(),
            limit,
        }
    }

    /// True for failures caused by budgets rather than by the input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceExceeded { .. } | Error::Timeout { .. })
    }
}
