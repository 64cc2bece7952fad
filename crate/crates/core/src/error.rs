use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("beam penetrates the electrode: theta = {theta:e} rad >= {limit:e} rad")]
    Penetration { theta: f64, limit: f64 },

    #[error("cascade mixes frequencies: {expected} Hz and {found} Hz")]
    MixedFrequency { expected: f64, found: f64 },

    #[error("ABCD to S conversion is singular (A + B/Z + C*Z + D = 0)")]
    SingularConversion,

    #[error("touchstone: {0}")]
    Touchstone(String),

    #[error("target {target_deg} deg needs {required} cells but the line has {available}")]
    Unachievable {
        target_deg: f64,
        required: usize,
        available: usize,
    },

    /// A design file value violates an invariant; `path` is the JSON path.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    #[error("design file has no `{0}` section")]
    MissingSection(&'static str),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Invalid { .. } | Error::MissingSection(_) | Error::Parse { .. } | Error::Io(_)
        )
    }
}
