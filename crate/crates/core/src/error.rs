use thiserror::Error;

use crate::regions::BoundaryKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid map: {0}")]
    InvalidMap(String),

    /// The map does not send `[1-k, 1]` onto itself, so the unit conjugate is undefined.
    #[error("map (k={k}, r={r}) is not reducible to the unit interval (need k > 1 and r <= k/(k-1))")]
    NotReducible { k: f64, r: f64 },

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("parameters lie in region {found}, expected {expected}")]
    WrongRegion { expected: &'static str, found: String },

    /// A numerical verification step failed; `defect` is the measured violation.
    #[error("precision loss while checking {what}: defect {defect:e}")]
    PrecisionLoss { what: &'static str, defect: f64 },

    #[error("depth {p} overflows binary64")]
    DepthOverflow { p: usize },

    #[error("parameters lie on a region boundary ({0})")]
    NotClassified(BoundaryKind),

    #[error("word is not admissible for this shift")]
    Inadmissible,

    #[error("symbol {symbol} is outside the alphabet")]
    InvalidWord { symbol: u32 },

    #[error("every sampled orbit escaped")]
    NoBoundedOrbit,
}
