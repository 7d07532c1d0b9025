use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too small: {len} points, at least {min} required")]
    GridTooSmall { len: usize, min: usize },

    #[error("grids do not match")]
    GridMismatch,

    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shift {shift} moves significant mass off the grid (edge ratio {edge_ratio:e})")]
    DomainOverflow { shift: f64, edge_ratio: f64 },

    #[error("quadrature window centred at {centre} leaves the state grid (edge value {edge_value:e})")]
    QuadratureOverflow { centre: f64, edge_value: f64 },

    #[error("state has zero norm")]
    ZeroState,

    #[error("Möbius denominator {modulus:e} too small at sample {index}")]
    NearPole { index: usize, modulus: f64 },

    #[error("circle function is not band-limited (top-quarter spectrum ratio {ratio:e})")]
    NotBandLimited { ratio: f64 },

    #[error("mode {mode} leaves the resolved band")]
    SpectrumOverflow { mode: i64 },

    #[error("disk geometry: {0}")]
    Geometry(String),

    #[error("weight e^(pi r^2/2) overflows for grid radius {radius}")]
    WeightOverflow { radius: f64 },

    #[error("no normalizable kernel: smallest singular value {sigma_min:e} (relative {relative:e})")]
    NoNormalizableKernel { sigma_min: f64, relative: f64 },

    #[error("ambiguous kernel: singular values {sigma_min:e} and {sigma_next:e} not separated")]
    AmbiguousKernel { sigma_min: f64, sigma_next: f64 },

    #[error("recovered state fails the equality check: gap {gap:e}")]
    PostVerification { gap: f64 },

    #[error("{} sample points fall outside the covered region: {}", .dropped.len(), .dropped.join(", "))]
    Coverage { dropped: Vec<String> },

    #[error("observable `{0}` has no matrix form")]
    NoMatrixForm(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
