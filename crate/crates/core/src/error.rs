//! Error type shared by the modeling and extraction routines.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while modeling or extracting.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A physical quantity violated a type invariant (non-positive
    /// thickness, doping at or below intrinsic, unsorted bias grid, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested operation is undefined for the given stack kind,
    /// e.g. a flat-band voltage of a metal-insulator-metal capacitor.
    #[error("{operation} is not defined for a {kind} stack")]
    Unsupported {
        /// Name of the rejected operation.
        operation: &'static str,
        /// Stack kind it was asked to run on.
        kind: &'static str,
    },

    /// An iterative solver ran out of iterations or lost its bracket.
    #[error("{context}: no convergence (last bracket [{bracket_low}, {bracket_high}])")]
    Convergence {
        /// Which solve failed, annotated with the offending bias where known.
        context: String,
        /// Lower end of the last bracket examined.
        bracket_low: f64,
        /// Upper end of the last bracket examined.
        bracket_high: f64,
    },

    /// A curve offered for plateau extraction has no stable
    /// accumulation-side plateau.
    #[error(
        "no accumulation plateau: relative spread {spread:.3} over the \
         {samples} deepest accumulation samples exceeds {limit}"
    )]
    NoPlateau {
        /// Observed relative spread over the plateau window.
        spread: f64,
        /// Number of samples in the window.
        samples: usize,
        /// Maximum spread accepted as a plateau.
        limit: f64,
    },

    /// A capacitance ratio required by an inversion is outside its
    /// physically meaningful range.
    #[error("invalid capacitance ratio: {0}")]
    InvalidRatio(String),

    /// A root search exhausted its bracket without enclosing a solution.
    #[error("{quantity} outside the search range [{low:.3e}, {high:.3e}]")]
    OutOfRange {
        /// Quantity being solved for.
        quantity: &'static str,
        /// Lower bracket bound.
        low: f64,
        /// Upper bracket bound.
        high: f64,
    },

    /// A doping profile cannot be evaluated on some bias interval because
    /// the curve is flat or non-monotone there.
    #[error(
        "doping profile undefined between {bias_low} V and {bias_high} V: \
         1/C^2 is not strictly monotone on that interval"
    )]
    ProfileUndefined {
        /// Left edge of the offending bias interval.
        bias_low: f64,
        /// Right edge of the offending bias interval.
        bias_high: f64,
    },

    /// The least-squares normal equations are singular because the listed
    /// parameters cannot be distinguished by the supplied data.
    #[error("fit is rank-deficient: parameters {parameters:?} are indistinguishable")]
    RankDeficient {
        /// Names of the entangled parameters.
        parameters: Vec<&'static str>,
    },

    /// Too few points for the requested computation.
    #[error("insufficient data: {needed} points required, {got} provided")]
    InsufficientData {
        /// Minimum point count for the operation.
        needed: usize,
        /// Point count actually supplied.
        got: usize,
    },

    /// A least-squares fit left the finite domain. The best parameter set
    /// seen before the failure is attached.
    #[error("fit diverged: {reason}; best residual so far {:.3e} F rms", best.residual_rms)]
    FitDiverged {
        /// What rendered the iteration unusable.
        reason: String,
        /// Best parameters found before the failure.
        best: Box<crate::fit::ExtractionResult>,
    },
}

impl Error {
    /// Convenience constructor for invalid-input errors.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
