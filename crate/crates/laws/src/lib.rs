//! Exact moment sequences and samplers for a catalog of probability laws.
//!
//! Moments come from the exact Taylor expansion of each closed-form Laplace
//! transform; the reciprocal-transform coefficients `a_n` feed the Wick layer.
//! Samplers draw the centered, reduced version of each law.

pub mod law;
pub mod moments;
pub mod poly;
pub mod rational;
pub mod sample;
pub mod series;

pub use law::{touchard, LawKind, LawSpec};
pub use moments::{binomial_convolution, InverseLaplaceCoeffs, MomentSequence};
pub use poly::Poly;
pub use rational::Q;
pub use sample::{sample, Sampler};

use thiserror::Error;

/// Errors raised by the law layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("invalid law parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse: {0}")]
    Parse(String),
    #[error("moment of order {needed} requested but only {available} available")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("standardization is not exact: {0}")]
    IrrationalScale(String),
    #[error("law has no sampler")]
    NoSampler,
}
