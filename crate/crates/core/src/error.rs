use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("singular evaluation: distance {distance:e} is within exclusion radius {epsilon:e}")]
    Singularity { distance: f64, epsilon: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("array has no elements")]
    EmptyArray,

    #[error("every grid cell lies within the exclusion radius of an antenna")]
    FullyExcluded,

    #[error("field is identically zero on non-excluded cells")]
    AllZero,

    #[error("spectral analysis error: {0}")]
    Spectral(String),

    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short category label used by the CLI for error reporting and exit codes.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Geometry(_) => "geometry",
            Error::Singularity { .. } => "wavefield",
            Error::GridMismatch(_) | Error::EmptyArray | Error::FullyExcluded | Error::AllZero => {
                "imaging"
            }
            Error::Spectral(_) => "spectral",
            Error::Parse { .. } | Error::Config { .. } => "config",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
