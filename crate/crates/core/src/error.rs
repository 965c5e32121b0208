use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {value} out of range 1..={bound}")]
    Index { what: &'static str, value: usize, bound: usize },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("non-productive economy{}: {detail}", period_suffix(*period))]
    NonProductive { period: Option<i32>, detail: String },

    #[error("{algorithm} did not converge after {iterations} iterations (last residual {residual:e})")]
    NotConverged {
        algorithm: &'static str,
        iterations: usize,
        residual: f64,
        /// Residual per iteration, when the algorithm keeps one.
        trace: Vec<f64>,
    },

    #[error(
        "matrix is reducible ({components} strongly connected components); \
         restrict to the largest strongly connected component"
    )]
    Reducible { components: usize },

    #[error("{0} is identically zero")]
    ZeroMatrix(&'static str),

    #[error("network has no arcs in any period")]
    EmptyNetwork,

    #[error("baseline total max flow is zero; criticality index is undefined")]
    ZeroBaseline,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn period_suffix(period: Option<i32>) -> String {
    period.map(|p| format!(" in period {p}")).unwrap_or_default()
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code: 2 validation, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Index { .. } | Error::Validation(_) | Error::Parse { .. } => 2,
            Error::NonProductive { .. }
            | Error::NotConverged { .. }
            | Error::Reducible { .. }
            | Error::ZeroMatrix(_)
            | Error::EmptyNetwork
            | Error::ZeroBaseline => 3,
            Error::Io { .. } => 4,
        }
    }

    /// Attach a period label to a non-productive error raised without one.
    pub(crate) fn in_period(self, year: i32) -> Self {
        match self {
            Error::NonProductive { period: None, detail } => Error::NonProductive { period: Some(year), detail },
            Error::NotConverged { .. } => Error::NonProductive { period: Some(year), detail: self.to_string() },
            other => other,
        }
    }
}
