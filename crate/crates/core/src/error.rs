use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("rule {0} is defined more than once")]
    DuplicateRule(String),
    #[error("rule {rule}: head index {head} is out of range for {arity} daughter(s)")]
    BadHead { rule: String, head: usize, arity: usize },
    #[error("rule {rule}: declared {declared} but its daughters make it {inferred}")]
    ClassMismatch {
        rule: String,
        declared: String,
        inferred: String,
    },
    #[error("rule {rule}: non-kernel list at {path} grows by {growth} elements; at most one is supported")]
    NonSkGrowth { rule: String, path: String, growth: usize },
    #[error("{0}: feature constraints do not unify")]
    Inconsistent(String),
    #[error("lexical entry \"{surface}\": {reason}")]
    InvalidLexEntry { surface: String, reason: String },
    #[error("goal has no atomic cat feature")]
    MissingCategory,
    #[error("non-kernel path {0} holds a value that is not a list")]
    NotAList(String),
    #[error("unknown word \"{0}\"")]
    UnknownToken(String),
    #[error("cannot parse an empty sentence")]
    EmptyInput,
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
