//! Wick polynomials of an arbitrary moment sequence, in exact rational arithmetic.
//!
//! The `n`-th Wick power `W_n` is the monic, mean-zero polynomial generated by
//! `e^{tX} / phi(t) = sum W_n(X) t^n / n!`. Three independent constructions are
//! provided (explicit formula and two recurrences) together with the residuals
//! of the two differential equations `W_n` satisfies, the Laguerre expression
//! for Gamma laws and the exact Gram matrix.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use laws::rational::{binom, binom_q, factorial, qi, Q};
use laws::{LawError, MomentSequence, Poly};
use num_traits::{One, Zero};
use thiserror::Error;

/// Errors raised by the Wick layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WickError {
    #[error(transparent)]
    Law(#[from] LawError),
    #[error("polynomial was built from a different moment sequence")]
    LawMismatch,
    #[error("degree must be at least {0}")]
    DegreeTooSmall(usize),
}

/// The Wick power `W_n` of a moment sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WickPolynomial {
    poly: Poly,
    degree: usize,
    law_tag: u64,
}

/// Auxiliary sequence `b_n = sum_k C(n,k) k m_k a_{n-k}` of the first recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceAux {
    b: Vec<Q>,
}

fn law_tag(m: &MomentSequence, n: usize) -> Result<u64, WickError> {
    let mut h = DefaultHasher::new();
    m.truncate(n)?.as_slice().hash(&mut h);
    Ok(h.finish())
}

fn choose(n: usize, k: usize) -> Q {
    Q::from_integer(binom(n, k))
}

impl WickPolynomial {
    fn build(poly: Poly, degree: usize, m: &MomentSequence) -> Result<Self, WickError> {
        Ok(WickPolynomial { poly, degree, law_tag: law_tag(m, degree)? })
    }

    /// Underlying polynomial.
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Degree `n`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients `c_0..c_n` of `x^0..x^n`.
    pub fn coeffs(&self) -> &[Q] {
        self.poly.coeffs()
    }

    /// True when `sum_k c_k m_k = 0` (always the case for `n >= 1`).
    pub fn is_centered(&self, m: &MomentSequence) -> bool {
        self.poly
            .expectation(m.as_slice())
            .is_some_and(|e| e.is_zero())
    }
}

/// Explicit formula `W_n(x) = sum_k C(n,k) a_k x^{n-k}`.
pub fn wick_explicit(m: &MomentSequence, n: usize) -> Result<WickPolynomial, WickError> {
    let a = m.inverse_laplace_coeffs(n)?;
    let mut c = vec![Q::zero(); n + 1];
    for k in 0..=n {
        c[n - k] = choose(n, k) * &a.as_slice()[k];
    }
    WickPolynomial::build(Poly::new(c), n, m)
}

/// All Wick powers `W_0..W_n` from the explicit formula.
pub fn wick_table(m: &MomentSequence, n: usize) -> Result<Vec<WickPolynomial>, WickError> {
    (0..=n).map(|k| wick_explicit(m, k)).collect()
}

impl RecurrenceAux {
    /// Builds `b_0..b_k`.
    pub fn new(m: &MomentSequence, k: usize) -> Result<Self, WickError> {
        let a = m.inverse_laplace_coeffs(k)?;
        let (m, a) = (m.as_slice(), a.as_slice());
        let b = (0..=k)
            .map(|n| {
                (0..=n).fold(Q::zero(), |acc, j| {
                    acc + choose(n, j) * qi(j as i64) * &m[j] * &a[n - j]
                })
            })
            .collect();
        Ok(RecurrenceAux { b })
    }

    /// Values `b_0..b_K`.
    pub fn as_slice(&self) -> &[Q] {
        &self.b
    }
}

/// First recurrence:
/// `W_n = (X - m_1) W_{n-1} - (1/n) sum_{k=0}^{n-2} C(n,k) b_{n-k} W_k`.
pub fn wick_recurrence1(m: &MomentSequence, n: usize) -> Result<WickPolynomial, WickError> {
    let b = RecurrenceAux::new(m, n)?;
    let m1 = if n >= 1 { m.get(1)?.clone() } else { Q::zero() };
    let shift = Poly::new(vec![-m1, Q::one()]);
    let mut w: Vec<Poly> = vec![Poly::constant(Q::one())];
    for j in 1..=n {
        let mut next = &shift * &w[j - 1];
        let inv_j = qi(j as i64).recip();
        for k in 0..j.saturating_sub(1) {
            let coef = choose(j, k) * &b.b[j - k] * &inv_j;
            next = &next - &w[k].scale(&coef);
        }
        w.push(next);
    }
    WickPolynomial::build(w.swap_remove(n), n, m)
}

/// Second recurrence: `n W_n = sum_{k=1}^n C(n,k) W_{n-k} (k X m_{k-1} - n m_k)`.
pub fn wick_recurrence2(m: &MomentSequence, n: usize) -> Result<WickPolynomial, WickError> {
    m.get(n)?;
    let ms = m.as_slice();
    let mut w: Vec<Poly> = vec![Poly::constant(Q::one())];
    for j in 1..=n {
        let mut acc = Poly::zero();
        for k in 1..=j {
            let factor = Poly::new(vec![-qi(j as i64) * &ms[k], qi(k as i64) * &ms[k - 1]]);
            acc = &acc + &(&w[j - k] * &factor).scale(&choose(j, k));
        }
        w.push(acc.scale(&qi(j as i64).recip()));
    }
    WickPolynomial::build(w.swap_remove(n), n, m)
}

/// Which differential equation to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ode {
    /// `n W - (X - m_1) W' + sum_{k>=2} (b_k / k!) W^{(k)} = 0`.
    First,
    /// `n W - sum_{k>=1} ((k X m_{k-1} - n m_k) / k!) W^{(k)} = 0`.
    Second,
}

/// Residual of an ODE applied to a polynomial of nominal degree `n`; identically zero
/// when `p` is the true `W_n`.
pub fn ode_residual_poly(p: &Poly, n: usize, m: &MomentSequence, which: Ode) -> Result<Poly, WickError> {
    let nq = qi(n as i64);
    let mut res = p.scale(&nq);
    match which {
        Ode::First => {
            let b = RecurrenceAux::new(m, n)?;
            let m1 = if n >= 1 { m.get(1)?.clone() } else { Q::zero() };
            let shift = Poly::new(vec![-m1, Q::one()]);
            res = &res - &(&shift * &p.derivative());
            for k in 2..=n {
                let c = &b.b[k] / Q::from_integer(factorial(k));
                res = &res + &p.nth_derivative(k).scale(&c);
            }
        }
        Ode::Second => {
            m.get(n)?;
            let ms = m.as_slice();
            for k in 1..=n {
                let inv = Q::from_integer(factorial(k)).recip();
                let factor = Poly::new(vec![-&nq * &ms[k] * &inv, qi(k as i64) * &ms[k - 1] * &inv]);
                res = &res - &(&factor * &p.nth_derivative(k));
            }
        }
    }
    Ok(res)
}

/// Residual of an ODE for a Wick polynomial built from `m`.
pub fn ode_residual(w: &WickPolynomial, m: &MomentSequence, which: Ode) -> Result<Poly, WickError> {
    if law_tag(m, w.degree)? != w.law_tag {
        return Err(WickError::LawMismatch);
    }
    ode_residual_poly(&w.poly, w.degree, m, which)
}

/// Formal derivative `D(sum a_k x^k) = sum k a_k x^{k-1}`.
pub fn derive(w: &WickPolynomial) -> Result<Poly, WickError> {
    if w.degree == 0 {
        return Err(WickError::DegreeTooSmall(1));
    }
    Ok(w.poly.derivative())
}

/// Generalized Laguerre polynomial `L_n^alpha(x) = sum_j (-1)^j C(n+alpha, n-j) x^j / j!`.
pub fn laguerre(n: usize, alpha: &Q) -> Poly {
    let top = qi(n as i64) + alpha;
    Poly::new(
        (0..=n)
            .map(|j| {
                let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
                sign * binom_q(&top, n - j) / Q::from_integer(factorial(j))
            })
            .collect(),
    )
}

/// Wick power of `Gamma(a, b)` through Laguerre polynomials:
/// `(n!/b^n) sum_{k=0}^{n-1} (-1)^{n-k} C(n-1,k) L_{n-k}^{a-1}(b x)`, and `1` for `n = 0`.
pub fn laguerre_wick(a: &Q, b: &Q, n: usize) -> Poly {
    if n == 0 {
        return laguerre(0, &(a - Q::one()));
    }
    let alpha = a - Q::one();
    let mut acc = Poly::zero();
    for k in 0..n {
        let sign = if (n - k) % 2 == 0 { Q::one() } else { -Q::one() };
        let l = laguerre(n - k, &alpha).compose_affine(b, &Q::zero());
        acc = &acc + &l.scale(&(sign * choose(n - 1, k)));
    }
    acc.scale(&(Q::from_integer(factorial(n)) / num_traits::pow(b.clone(), n)))
}

/// Exact `E[W_n(X) W_k(X)]`.
pub fn wick_gram(m: &MomentSequence, n: usize, k: usize) -> Result<Q, WickError> {
    m.get(n + k)?;
    let wn = wick_explicit(m, n)?;
    let wk = wick_explicit(m, k)?;
    let prod = wn.poly() * wk.poly();
    Ok(prod
        .expectation(m.as_slice())
        .expect("moment table covers the product degree"))
}

/// Gram matrix `(E[W_i W_j])_{0 <= i, j <= n}`.
pub fn wick_gram_matrix(m: &MomentSequence, n: usize) -> Result<Vec<Vec<Q>>, WickError> {
    (0..=n)
        .map(|i| (0..=n).map(|j| wick_gram(m, i, j)).collect())
        .collect()
}

/// Human-readable table `n | W_n(x)`, one row per degree.
pub fn format_table(table: &[WickPolynomial]) -> String {
    let width = table.last().map_or(1, |w| w.degree.to_string().len());
    table
        .iter()
        .map(|w| format!("W_{:<width$} = {}\n", w.degree, w.poly))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use laws::LawKind;

    #[test]
    fn hermite_h2() {
        let m = LawKind::Normal01.moments(4).unwrap();
        let w = wick_explicit(&m, 2).unwrap();
        assert_eq!(w.poly(), &Poly::from_ints(&[-1, 0, 1]));
        assert!(w.poly().is_monic());
        assert!(w.is_centered(&m));
    }

    #[test]
    fn recurrences_agree_on_first_degree() {
        let m = LawKind::Poisson { a: qi(2) }.moments(3).unwrap();
        let one = Poly::new(vec![-qi(2), qi(1)]);
        assert_eq!(wick_recurrence1(&m, 1).unwrap().poly(), &one);
        assert_eq!(wick_recurrence2(&m, 1).unwrap().poly(), &one);
    }

    #[test]
    fn mismatched_law_rejected() {
        let g = LawKind::Normal01.moments(4).unwrap();
        let e = LawKind::exponential(qi(1)).moments(4).unwrap();
        let w = wick_explicit(&g, 3).unwrap();
        assert_eq!(ode_residual(&w, &e, Ode::First), Err(WickError::LawMismatch));
    }

    #[test]
    fn insufficient_moments() {
        let m = LawKind::Normal01.moments(3).unwrap();
        assert!(wick_explicit(&m, 4).is_err());
        assert!(wick_gram(&m, 2, 2).is_err());
    }

    #[test]
    fn constant_derivative_is_error() {
        let m = LawKind::Normal01.moments(2).unwrap();
        let w0 = wick_explicit(&m, 0).unwrap();
        assert_eq!(derive(&w0), Err(WickError::DegreeTooSmall(1)));
    }
}
