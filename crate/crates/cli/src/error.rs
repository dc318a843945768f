use jsr_core::engine::UnknownAveraging;
use jsr_core::JsrError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("matrix {index} is {rows}x{cols}, expected 2x2")]
    Shape {
        index: usize,
        rows: usize,
        cols: usize,
    },

    #[error(transparent)]
    UnknownAveraging(#[from] UnknownAveraging),

    #[error("{0}")]
    UnknownInterpolation(String),

    #[error("invalid {name}: {value:?}")]
    Env { name: &'static str, value: String },

    #[error(transparent)]
    Core(#[from] JsrError),
}
