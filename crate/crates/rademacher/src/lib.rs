//! Generalized Rademacher systems on `]0, 1]`.
//!
//! Intervals are split recursively in ratio `alpha_k : 1 - alpha_k`; the
//! resulting `+-1` functions are independent under Lebesgue measure. The crate
//! also transports these functions through a distribution function with a
//! single jump and builds the sequences of ratios that keep the jump gap inside
//! one partition cell at every level.

mod partition;
mod scheme;
mod transport;

pub use partition::{beta_product, PartitionSystem};
pub use scheme::{AlphaScheme, AlternatingLimits, Condition, SchemeVariant};
pub use transport::{independence_report, JumpCdf, TupleCheck};

use laws::Q;
use num_traits::One;
use thiserror::Error;

/// Errors raised by partition construction, evaluation and the ratio schemes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RademacherError {
    #[error("ratio {0} must lie strictly between 0 and 1")]
    AlphaOutOfRange(String),
    #[error("level {level} exceeds partition depth {depth}")]
    DepthExceeded { level: usize, depth: usize },
    #[error("point {0} lies outside ]0, 1]")]
    PointOutOfRange(String),
    #[error("levels must be strictly increasing, start at 1 and match the sign list")]
    InvalidLevels,
    #[error("invalid distribution function: {0}")]
    InvalidCdf(String),
    #[error("invalid scheme parameter: {0}")]
    InvalidParameter(String),
    #[error("condition {condition} fails at depth {depth}")]
    ConditionFailed { condition: Condition, depth: usize },
}

/// Probability of `b_k = eps` for a ratio `alpha_k`:
/// `phi(x) = ((1 - alpha)(1 - x) + (1 + x) alpha) / 2`.
pub fn phi(alpha: &Q, eps: i8) -> Q {
    if eps > 0 {
        alpha.clone()
    } else {
        Q::one() - alpha
    }
}
