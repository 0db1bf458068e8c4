use thiserror::Error;

/// Every failure the library reports. Variants carry enough context to be printed as-is.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("point lies outside the closed cardioid")]
    OutsideCardioid,
    #[error("derivative undefined at the critical point 0")]
    CriticalPoint,
    #[error("parameter lies on the slit: maxima at t={t1} and t={t2}")]
    SlitError { t1: f64, t2: f64 },
    #[error("point lies in the interior of the ideal triangle")]
    InteriorOfPi,
    #[error("angle {0} lies on a vertex of the partition")]
    OnVertex(f64),
    #[error("word is not admissible: {0}")]
    InadmissibleWord(String),
    #[error("orbit hits a fixed angle at iterate {index}")]
    HitsFixedPoint { index: usize },
    #[error("itinerary {0} has no rational realization")]
    NoRealization(String),
    #[error("point has no image: it lies in the fundamental tile")]
    NoImage,
    #[error("point is within the singular collar of the droplet")]
    SingularPoint,
    #[error("critical orbit does not escape within the iteration budget")]
    NonEscaping,
    #[error("two inverse branches are closer than the continuation tolerance")]
    BranchAmbiguity,
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    #[error("bracket does not straddle a multiplier crossing")]
    NoBracketedCrossing,
    #[error("no attracting cycle of odd period {0}")]
    NotOddAttracting(usize),
    #[error("linearization did not converge")]
    LinearizationDiverged,
    #[error("contour passes through a fixed point")]
    ContourThroughZero,
    #[error("derivative requested at the critical point")]
    DerivativeAtCritical,
    #[error("parameter does not escape: it lies in the connectedness locus")]
    InsideTricorn,
    #[error("ray pullback stalled at level {level}")]
    NewtonStall { level: usize },
    #[error("parameter ray continuation stalled at radius {radius}")]
    ContinuationStall { radius: f64 },
    #[error("pair does not generate a portrait: {0}")]
    NoPortrait(String),
    #[error("landing clusters are not resolved: {0}")]
    AmbiguousRoot(String),
    #[error("center search could not be seeded: {0}")]
    SeedFailed(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Failures of an iterative method, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_)
                | Error::NoBracketedCrossing
                | Error::LinearizationDiverged
                | Error::NewtonStall { .. }
                | Error::ContinuationStall { .. }
                | Error::AmbiguousRoot(_)
                | Error::SeedFailed(_)
                | Error::VerificationFailed(_)
                | Error::NonEscaping
                | Error::BranchAmbiguity
                | Error::ContourThroughZero
                | Error::NotOddAttracting(_)
                | Error::NoPortrait(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
