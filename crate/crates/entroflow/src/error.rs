use thiserror::Error;

/// Errors reported by constructors and evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The process has no stationary density (`a >= 0` for the plain
    /// Ornstein-Uhlenbeck process).
    #[error("no stationary density: {0}")]
    NoStationaryDensity(String),
    /// The delay equation has no stationary solution (parameters outside
    /// the Hayes stable wedge, or zero noise).
    #[error("no stationary solution: {0}")]
    NoStationarySolution(String),
    /// A time argument lies beyond the horizon a fundamental-solution
    /// table was built for.
    #[error("time {t} exceeds the tabulated horizon {horizon}")]
    HorizonExceeded { t: f64, horizon: f64 },
    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },
    /// A simulated trajectory left the representable range.
    #[error("trajectory blow-up at t = {t}: |x| > 1e100")]
    BlowUp { t: f64 },
    /// Samples unusable for the requested estimate.
    #[error("degenerate sample set: {0}")]
    DegenerateSamples(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}
