use thiserror::Error;

/// Errors surfaced by the solver and its analysis layers.
///
/// Numeric blow-up inside a trajectory is *not* reported through this
/// type; the stepping loop records it as a stop reason so that sibling
/// paths keep running.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}; only d = 1 and d = 2 are supported")]
    InvalidDimension(usize),
    #[error("grid size {0} is not a power of two >= 16")]
    NonPowerOfTwo(usize),
    #[error("invalid grid parameter: {0}")]
    InvalidGrid(String),
    #[error("field is not localized: relative boundary amplitude {amp:.3e} exceeds {threshold:.3e}")]
    FieldNotLocalized { amp: f64, threshold: f64 },
    #[error("empty time grid")]
    EmptyTimeGrid,
    #[error("time {0} is not a node of the noise step grid")]
    TimeOffGrid(f64),
    #[error("profile parameter b = {0} out of range (|b| < 0.5 required)")]
    BOutOfRange(f64),
    #[error("nonpositive b = {0}")]
    NonpositiveB(f64),
    #[error("shooting bracket failure: {0}")]
    ShootingBracket(String),
    #[error("ground-state solvers disagree: {0}")]
    GroundStateMismatch(String),
    #[error("field has no usable peak (flat or zero)")]
    FlatField,
    #[error("Newton iteration diverged: {0}")]
    NewtonDivergence(String),
    #[error("remainder too large: ||eps|| + b = {0:.4} >= alpha = {1:.4}")]
    EpsTooLarge(f64, f64),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("insufficient fit window: {0}")]
    InsufficientWindow(String),
    #[error("rate fit diverged: {0}")]
    FitDivergence(String),
    #[error("invalid initial-data spec: {0}")]
    InvalidSpec(String),
    #[error("config parse error: {0}")]
    ConfigParse(String),
    #[error("config validation error: {0}")]
    ConfigValidation(String),
    #[error("checkpoint format error: {0}")]
    Checkpoint(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
