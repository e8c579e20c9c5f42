use thiserror::Error;

/// Errors raised by state construction, operators and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("squeeze angle must satisfy Im Φ < 0 for a normalizable state (got Im Φ = {phi2})")]
    NonNormalizable { phi2: f64 },

    #[error("non-finite squeeze angle component")]
    NonFiniteAngle,

    #[error("state must belong to Landau level 0 (got N = {n})")]
    WrongLevel { n: usize },

    #[error("domain too small: boundary amplitude is {ratio:.3e} of the peak (limit {limit:.1e})")]
    DomainTooSmall { ratio: f64, limit: f64 },

    #[error("grid not converged: boundary amplitude is {ratio:.3e} of the peak (limit {limit:.1e})")]
    GridNotConverged { ratio: f64, limit: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grids have different geometry")]
    GridMismatch,

    #[error("degenerate principal frame: zero-line system is singular")]
    DegenerateFrame,

    #[error("gauges describe different fields: curl {left} vs {right}")]
    CurlMismatch { left: f64, right: f64 },

    #[error("shift ({ax}, {ay}) is not an integer multiple of the grid spacing")]
    OffGridShift { ax: f64, ay: f64 },

    #[error("finite rotation by {angle} rad is not a multiple of π/2")]
    UnsupportedAngle { angle: f64 },

    #[error("grid is not symmetric under the requested transformation: {0}")]
    AsymmetricGrid(String),

    #[error("lattice patch of {size} states exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("states use different magnetic lengths ({left} vs {right})")]
    UnitsMismatch { left: f64, right: f64 },

    #[error("unsupported stencil order {0}; use 2, 4 or 6")]
    UnsupportedOrder(usize),

    #[error("invalid magnetic length {0}")]
    InvalidLength(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
