use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("size mismatch: expected {expected} samples, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("critical radius is unbounded: the potential vanishes identically")]
    RhoInfinite,

    #[error("unsupported dimension parameter n = {0}; only n = 1 is implemented")]
    UnsupportedDimension(u32),

    #[error("ball centered at index {center} with radius {radius} contains no grid point")]
    EmptyBall { center: usize, radius: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver failed to converge")]
    EigenConvergence,

    #[error("spectral invariant violated: {0}")]
    SpectralInvariant(String),

    #[error("spectral multiplier is not finite at eigenvalue {0:e}")]
    NonFiniteMultiplier(f64),

    #[error("{route}: deviation {deviation:e} from the spectral oracle exceeds {tolerance:e}")]
    OracleMismatch {
        route: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("operator has no spectral gap (smallest eigenvalue {0:e})")]
    NoSpectralGap(f64),

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("unresolvable test function: {0}")]
    Unresolvable(String),

    #[error("mode index {index} out of range for {len} modes")]
    ModeOutOfRange { index: usize, len: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Failures of the numerical machinery itself (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenConvergence
                | Error::SpectralInvariant(_)
                | Error::NonFiniteMultiplier(_)
                | Error::OracleMismatch { .. }
                | Error::NoSpectralGap(_)
        )
    }
}
