use thiserror::Error;

/// Errors produced by the analysis and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The legitimate channel over the selected antennas has zero norm, so the
    /// MRT beamformer is undefined.
    #[error("degenerate channel: selected sub-vector has zero norm")]
    DegenerateChannel,

    /// One of the detector scale parameters is zero; the detector is either
    /// trivially perfect or blind and has no interior optimal threshold.
    #[error("degenerate detection: phi0 = {phi0}, phi1 = {phi1}")]
    DegenerateDetection { phi0: f64, phi1: f64 },

    /// The reformulated constraint divides by `(1-a) D_ae^b - a D_je^b`,
    /// which vanishes at this allocation.
    #[error("singular point of the log-form constraint at alpha = {alpha}")]
    SingularPoint { alpha: f64 },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("infeasible: no power split satisfies the covertness constraint")]
    Infeasible,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
