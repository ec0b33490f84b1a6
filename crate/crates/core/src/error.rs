use alloc::string::String;

/// Errors produced by the sampling toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A kernel parameter fell outside the family's interval.
    #[error("kernel parameter u = {u} outside [{lo}, {hi}]")]
    ParameterDomain {
        /// Offending parameter.
        u: f64,
        /// Lower end of the interval.
        lo: f64,
        /// Upper end of the interval.
        hi: f64,
    },
    /// Adaptive quadrature stopped before reaching its tolerance.
    #[error(
        "quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e}"
    )]
    NumericalAccuracy {
        /// Achieved error estimate.
        estimate: f64,
        /// Requested tolerance.
        tolerance: f64,
    },
    /// A sampling set ended up with no points.
    #[error("sampling set is empty")]
    EmptySet,
    /// Separation needs at least two points.
    #[error("separation is undefined for fewer than two points")]
    UndefinedSeparation,
    /// A jitter value would reorder or merge neighbouring points.
    #[error("jitter {value} at index {index} exceeds half the spacing {limit}")]
    InvalidJitter {
        /// Progression index `k` of the offending point.
        index: i64,
        /// Jitter value.
        value: f64,
        /// Half spacing `1/(2a)`.
        limit: f64,
    },
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Sizes of two objects do not fit together.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension {
        /// Expected length.
        expected: usize,
        /// Actual length.
        got: usize,
    },
    /// The assembled operator would exceed the memory cap.
    #[error(
        "operator {rows}x{cols} needs {bytes} bytes (cap {cap}); use a coarser spectrum grid or fewer u nodes"
    )]
    Size {
        /// Row count.
        rows: usize,
        /// Column count.
        cols: usize,
        /// Required bytes.
        bytes: usize,
        /// Configured cap.
        cap: usize,
    },
    /// The singular value decomposition failed to converge.
    #[error("singular value decomposition did not converge")]
    Svd,
}

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
