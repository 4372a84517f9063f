use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid antenna count {which}={value}: each node needs at least 2 antennas")]
    InvalidAntennaCount { which: &'static str, value: usize },

    #[error("parameter {name}={value} outside {range}")]
    InvalidRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("link matrix is {rows}x{cols}; selection needs at least 2x2")]
    MatrixTooSmall { rows: usize, cols: usize },

    #[error("degenerate size n_a*n_b={product}: {reason}")]
    DegenerateSize { product: usize, reason: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failed to reach tolerance {tolerance:e} after {subdivisions} subdivisions (estimated error {estimate:e})")]
    ConvergenceFailure {
        tolerance: f64,
        subdivisions: usize,
        estimate: f64,
    },

    #[error("asymptotic perfect-cancellation analysis requires eta = 0 (got {eta})")]
    RequiresPerfectCancellation { eta: f64 },

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("config parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("at grid point {context}: {source}")]
    AtGridPoint {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than numerics or I/O.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidAntennaCount { .. }
            | Error::InvalidRange { .. }
            | Error::MatrixTooSmall { .. }
            | Error::DegenerateSize { .. }
            | Error::RequiresPerfectCancellation { .. }
            | Error::UnknownPreset(_)
            | Error::InvalidSweep(_)
            | Error::Parse { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_validation(),
            _ => false,
        }
    }

    /// True for numerical failures (quadrature non-convergence, domain errors).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Domain(_) | Error::ConvergenceFailure { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
