//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, qi, to_f64, Q};

/// Polynomial `c_0 + c_1 x + ... + c_n x^n`, stored without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients.
    pub fn new(coeffs: Vec<Q>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    /// Builds a polynomial from ascending integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| qi(c)).collect())
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(Q::one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Ascending coefficients; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when the leading coefficient is one.
    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * qi(k as i64))
                .collect(),
        )
    }

    /// `k`-th formal derivative.
    pub fn nth_derivative(&self, k: usize) -> Poly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = vec![Q::zero()];
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / qi(k as i64 + 1)),
        );
        Poly::new(coeffs)
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// Floating-point evaluation by Horner's rule.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// Coefficients converted to `f64`.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Composition `p(a x + b)`.
    pub fn compose_affine(&self, a: &Q, b: &Q) -> Poly {
        let inner = Poly::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * &inner) + &Poly::constant(c.clone()))
    }

    /// Integer power.
    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::constant(Q::one()), |acc, _| &acc * self)
    }

    /// Pairs the coefficients with raw moments: `sum_k c_k m_k`.
    ///
    /// Returns `None` when the polynomial degree exceeds the moment table.
    pub fn expectation(&self, moments: &[Q]) -> Option<Q> {
        if self.coeffs.len() > moments.len() {
            return None;
        }
        Some(
            self.coeffs
                .iter()
                .zip(moments)
                .fold(Q::zero(), |acc, (c, m)| acc + c * m),
        )
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    /// Renders in descending powers, e.g. `x^3 - 3x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = if abs.is_one() && k > 0 {
                String::new()
            } else if abs.denom().is_one() || k == 0 {
                fmt_q(&abs)
            } else {
                format!("({})", fmt_q(&abs))
            };
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}x")?,
                _ => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn arithmetic_and_display() {
        let p = Poly::from_ints(&[-1, 0, 1]);
        let sq = &p * &p;
        assert_eq!(sq, Poly::from_ints(&[1, 0, -2, 0, 1]));
        assert_eq!(p.to_string(), "x^2 - 1");
        assert_eq!(Poly::new(vec![q(1, 2), q(-3, 2)]).to_string(), "-(3/2)x + 1/2");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn calculus() {
        let p = Poly::from_ints(&[0, 0, 0, 1]);
        assert_eq!(p.derivative(), Poly::from_ints(&[0, 0, 3]));
        assert_eq!(p.derivative().antiderivative(), p);
        assert_eq!(p.nth_derivative(4), Poly::zero());
    }

    #[test]
    fn affine_composition() {
        let p = Poly::from_ints(&[0, 0, 1]);
        let c = p.compose_affine(&qi(2), &qi(1));
        assert_eq!(c, Poly::from_ints(&[1, 4, 4]));
    }

    #[test]
    fn moment_pairing() {
        let p = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(p.expectation(&[qi(1), qi(0), qi(1)]), Some(qi(0)));
        assert_eq!(p.expectation(&[qi(1)]), None);
    }
}
