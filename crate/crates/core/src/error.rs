use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the solver stack can report.
///
/// The variants line up with the exit codes of the command-line front end, so
/// keep them coarse: callers dispatch on the category, the message carries the
/// detail.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("cannot parse stepper id `{id}`: {reason} (at token `{token}`)")]
    Parse {
        id: String,
        token: String,
        reason: String,
    },

    #[error("contour misconfiguration: {0}")]
    Contour(String),

    #[error("singular shifted system for m={m}, alpha={alpha_re:+.6e}{alpha_im:+.6e}i: {detail}")]
    Solver {
        m: i64,
        alpha_re: f64,
        alpha_im: f64,
        detail: String,
    },

    #[error("rational sum: pole collision at term {index}")]
    PoleCollision { index: usize },

    #[error("diverged after {steps} steps (t = {time:.1} s){}", position.map(|p| format!(" in {p}")).unwrap_or_default())]
    Divergence {
        steps: usize,
        time: f64,
        position: Option<&'static str>,
    },

    #[error("worker failure on REXI terms {terms:?}: {detail}")]
    Worker { terms: Vec<usize>, detail: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
