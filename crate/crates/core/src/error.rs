use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid symbol `{0}`")]
    InvalidSymbol(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("production `{0}` is not left-regular")]
    NotLeftRegular(String),
    #[error("language is not contained in X*#X*: {0}")]
    LanguageNotShaped(String),
    #[error("production `{production}` violates the required shape: {reason}")]
    ShapeViolation { production: String, reason: String },
    #[error("table `{table}` has several productions for `{symbol}`")]
    NotDeterministic { table: String, symbol: String },
    #[error("table `{table}` has no production for `{symbol}`")]
    MissingProduction { table: String, symbol: String },
    #[error("counter automaton uses zero tests; a blind automaton is required")]
    GuardedInput,
    #[error("transducer label `{0}` is not over a one-letter alphabet")]
    NonUnaryLabel(String),
    #[error("symbol `{0}` clashes with the alphabet")]
    AlphabetClash(String),
    #[error("sample bounds differ ({0} vs {1})")]
    BoundMismatch(usize, usize),
    #[error("unknown zoo entry `{0}`")]
    UnknownEntry(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("{0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn shape(production: impl ToString, reason: impl Into<String>) -> Self {
        Error::ShapeViolation { production: production.to_string(), reason: reason.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
