use thiserror::Error;

/// Errors raised across the pipeline.
///
/// The variants map onto the CLI exit codes: configuration problems exit
/// with 1, numerical failures with 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: last estimates {last} and {previous}")]
    Quadrature { last: String, previous: String },

    #[error("degenerate state: trace {0:e} is below the floor")]
    Degenerate(f64),

    #[error("state is not positive semidefinite (min eigenvalue {0:e}); enable PSD projection")]
    NotPsd(f64),

    #[error("Fock truncation overflow: top-level population {0:e}")]
    Truncation(f64),

    #[error("time stepping did not converge: halving dt changed the state by {0:e}")]
    Trotter(f64),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) | Error::Io { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
