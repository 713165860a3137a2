//! Small helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::LawError;

/// Exact rational number used throughout the exact layers.
pub type Q = BigRational;

/// Builds `n/d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` as a big integer (zero when `k > n`).
pub fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient `C(x, k)` for a rational upper argument.
pub fn binom_q(x: &Q, k: usize) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * (x - qi(i as i64)) / qi(i as i64 + 1);
    }
    acc
}

/// Rising factorial `(x)_k = x (x+1) ... (x+k-1)`.
pub fn rising(x: &Q, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, i| acc * (x + qi(i as i64)))
}

/// Integer power of a rational, including negative exponents.
pub fn powi(x: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Exact square root when `x` is the square of a rational.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Nearest `f64` to a rational, robust to operands beyond the `f64` range.
pub fn to_f64(x: &Q) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let shift = x.numer().bits() as i64 - x.denom().bits() as i64 - 64;
    let v = if shift >= 0 {
        x.numer() / (x.denom() << shift as usize)
    } else {
        (x.numer() << (-shift) as usize) / x.denom()
    };
    v.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Exact rational equal to the binary value of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.25` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q, LawError> {
    let s = s.trim();
    let bad = || LawError::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_abs = int.trim_start_matches(['-', '+']);
        let int_part: BigInt = if int_abs.is_empty() {
            BigInt::zero()
        } else {
            int_abs.parse().map_err(|_| bad())?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_part: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}
