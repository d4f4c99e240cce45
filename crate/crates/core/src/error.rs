use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input; `pos` is a byte offset into `input`.
    #[error("parse error at column {}: {msg}", pos + 1)]
    Parse {
        input: String,
        pos: usize,
        msg: String,
    },
    /// An operation was called outside its domain.
    #[error("{invariant}: {detail}")]
    Precondition { invariant: String, detail: String },
}

impl Error {
    pub fn parse(input: &str, pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            pos,
            msg: msg.into(),
        }
    }

    pub fn pre(invariant: &str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }

    /// Caret-annotated rendering for parse errors.
    pub fn diagnostic(&self) -> String {
        match self {
            Error::Parse { input, pos, msg } => {
                let col = input[..(*pos).min(input.len())].chars().count();
                format!(
                    "error: {msg}\n  {input}\n  {}^",
                    " ".repeat(col)
                )
            }
            other => format!("error: {other}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
