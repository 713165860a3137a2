//! Coefficient fields shared by the exact and floating-point code paths.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use laws::rational::to_f64;
use laws::Q;
use num_traits::{One, Zero};

/// A commutative field the tensor and polynomial code can run over: exact
/// rationals for identities, `f64` for evaluation on realizations.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    /// Embeds an exact rational.
    fn from_q(q: &Q) -> Self;
    /// Nearest `f64`.
    fn to_f64(&self) -> f64;
}

impl Scalar for Q {
    fn from_q(q: &Q) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
}

impl Scalar for f64 {
    fn from_q(q: &Q) -> Self {
        to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}
