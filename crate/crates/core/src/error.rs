use thiserror::Error;

/// Everything that can go wrong while building a configuration or
/// evaluating a derivative.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("intersection {index}: angle {angle} is not in the open interval (0, pi)")]
    DegenerateAngle { index: usize, angle: f64 },

    #[error("intersection {index}: offsets must start at 0 and be strictly increasing")]
    UnorderedLengths { index: usize },

    #[error("offset {offset} does not fit inside a geodesic of length {total_length}")]
    LengthOutOfRange { offset: f64, total_length: f64 },

    #[error("{what}: got {got} values, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("partition sums to {sum}, expected {expected}")]
    PartitionSumMismatch { sum: u64, expected: u64 },

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("jet orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },

    #[error("derivative of order {requested} requested from a jet of order {order}")]
    OrderExceeded { requested: usize, order: usize },

    #[error("arccosh argument {value} is within {eps:e} of the branch point at 1 (L too small)")]
    BranchPoint { value: f64, eps: f64 },

    #[error("finite-difference step {step:e} is below the cancellation guard {min:e}")]
    StepTooSmall { step: f64, min: f64 },

    #[error("finite differences are only available up to order 3, got {0}")]
    UnsupportedOrder(usize),

    #[error("expansion would contain {terms} terms (limit {limit})")]
    SizeGuard { terms: u128, limit: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
