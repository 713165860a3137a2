//! Truncated second-order chaos over i.i.d. centered, reduced variables.
//!
//! The reference space is `L²([0,1])` with an orthonormal basis `(e_j)`;
//! `Φ(h) = Σ_j <h, e_j> X_j` maps it into `L²` of the sample space. On top of
//! `Φ` the crate builds the quadratic operators `φ^(1,1)` and `φ^(2)`, the
//! stochastic integral `I(h, g)`, the law-dependent operators `Φ^{∘n}` and
//! `a_k^n`, the order decomposition of `J_2(f)²`, the fourth-moment bound and
//! the quadratic-variation experiment. Every identity that is algebraic at a
//! fixed truncation is checked exactly over rationals.

pub mod basis;
pub mod bound;
pub mod func;
pub mod kernel;
pub mod mc;
pub mod multipoly;
pub mod qv;
pub mod scalar;
pub mod tables;
pub mod tensor;

pub use basis::{coeffs_of, coeffs_of_fn, phi, Basis, BasisKind, ChaosVector};
pub use bound::{fourth_moment_check, fourth_moment_grid, BoundGrid, FourthMoment};
pub use func::PiecewisePoly;
pub use kernel::{
    equivalence_constants, isometry_residual, ito_bracket, ito_residual, norm_identity, phi11, phi2,
    product_identity_residual, riemann_diagnostic, triangle_kernel, Matrix, NormIdentity, NormVariant,
    SymmetricKernel2, TriangleKernel,
};
pub use mc::{Estimate, Moments};
pub use multipoly::MultiPoly;
pub use qv::{quadratic_variation, QvConfig, QvReport, QvRow};
pub use scalar::Scalar;
pub use tables::GammaTables;
pub use tensor::{order_components, order_decomposition, OrderComponents, OrderDecomposition, SymTensor};

use laws::LawError;
use thiserror::Error;

/// Errors raised by the chaos layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChaosError {
    #[error(transparent)]
    Law(#[from] LawError),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge (residual estimate {residual:e})")]
    Quadrature { residual: f64 },
    #[error("moment of order {needed} requested but only {available} available")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("value is not rational: {0}")]
    Irrational(String),
    #[error("degenerate law: {0}")]
    DegenerateLaw(String),
    #[error("law is not centered and reduced")]
    NotStandardized,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}
