use thiserror::Error;

/// Errors raised by table construction, the missing-data verbs and the
/// plot builders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("name collision: column `{0}` already exists")]
    NameCollision(String),

    #[error("type error: {0}")]
    Type(String),

    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("invalid argument: {0}")]
    Validation(String),

    #[error("singular design: {0}")]
    Singular(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        let row = err.position().map(|p| p.line() as usize).unwrap_or_default();
        match err.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                Error::Parse { row, message: format!("expected {expected_len} fields, found {len}") }
            }
            csv::ErrorKind::Utf8 { err, .. } => Error::Parse { row, message: err.to_string() },
            other => Error::Parse { row, message: format!("{other:?}") },
        }
    }
}
