//! Sparse multivariate polynomials in independent variables `X_1, X_2, ...`
//! and their exact expectations under a common law.
//!
//! Expectations factor over distinct variables by independence and reduce to
//! moments within each variable. For variables rescaled as `X_j = sqrt(nu_j) U_j`
//! the moments of `U_j` are `m_p nu_j^{-p/2}`, which stay rational unless an odd
//! power meets a non-square `nu_j`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use laws::rational::sqrt_exact;
use laws::{Poly, Q};
use num_traits::Zero;

use crate::scalar::Scalar;
use crate::ChaosError;

/// A monomial `Π X_j^{e_j}` as sorted `(j, e_j)` pairs with `e_j > 0`.
pub type Monomial = Vec<(usize, u32)>;

/// `Σ c_α X^α` with coefficients in `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<T: Scalar> {
    terms: BTreeMap<Monomial, T>,
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl<T: Scalar> Default for MultiPoly<T> {
    fn default() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }
}

impl<T: Scalar> MultiPoly<T> {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant `c`.
    pub fn constant(c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// `c X^α`.
    pub fn monomial(c: T, mono: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(mono, c);
        p
    }

    /// The variable `X_j`.
    pub fn var(j: usize) -> Self {
        Self::monomial(T::one(), vec![(j, 1)])
    }

    /// Univariate polynomial `p(X_j)`.
    pub fn univariate(p: &Poly, j: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in p.coeffs().iter().enumerate() {
            let mono = if e == 0 { Vec::new() } else { vec![(j, e as u32)] };
            out.add_term(mono, T::from_q(c));
        }
        out
    }

    /// Adds `c X^mono`, dropping cancelled terms.
    pub fn add_term(&mut self, mono: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Terms in monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when there are no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `X^mono`.
    pub fn coeff(&self, mono: &Monomial) -> T {
        self.terms.get(mono).cloned().unwrap_or_else(T::zero)
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    /// Product by a scalar.
    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Monomial, T> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let slot = acc.entry(mul_monomials(ma, mb)).or_insert_with(T::zero);
                *slot += ca.clone() * cb.clone();
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly { terms: acc }
    }

    /// Value at `xs` (missing variables count as zero).
    pub fn eval_f64(&self, xs: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter().fold(c.to_f64(), |acc, &(j, e)| acc * xs.get(j).map_or(0.0, |x| x.powi(e as i32)))
            })
            .sum()
    }

    /// `E` of the polynomial when every variable has raw moments `m`.
    pub fn expect(&self, m: &[Q]) -> Result<T, ChaosError> {
        let mut total = T::zero();
        for (mono, c) in &self.terms {
            let mut v = c.clone();
            for &(_, e) in mono {
                let me = m.get(e as usize).ok_or(ChaosError::InsufficientMoments {
                    needed: e as usize,
                    available: m.len().saturating_sub(1),
                })?;
                v = v * T::from_q(me);
            }
            total += v;
        }
        Ok(total)
    }
}

impl MultiPoly<Q> {
    /// `E` of the polynomial in variables `U_j = X_j / sqrt(nu_j)`, where the
    /// `X_j` have raw moments `m`. Terms containing some `U_j^1` vanish when
    /// `m_1 = 0` before any square root is needed.
    pub fn expect_scaled(&self, m: &[Q], nu: &[Q]) -> Result<Q, ChaosError> {
        let mut total = Q::zero();
        'terms: for (mono, c) in &self.terms {
            let mut v = c.clone();
            let mut pending = Vec::new();
            for &(j, e) in mono {
                let me = m.get(e as usize).ok_or(ChaosError::InsufficientMoments {
                    needed: e as usize,
                    available: m.len().saturating_sub(1),
                })?;
                if me.is_zero() {
                    continue 'terms;
                }
                let half = num_traits::pow(nu[j].clone(), (e / 2) as usize);
                v = v * me / half;
                if e % 2 == 1 {
                    pending.push(j);
                }
            }
            for j in pending {
                let root = sqrt_exact(&nu[j]).ok_or_else(|| {
                    ChaosError::Irrational(format!("odd power of a variable with scale {}", nu[j]))
                })?;
                v /= root;
            }
            total += v;
        }
        Ok(total)
    }

    /// Conversion to floating-point coefficients.
    pub fn to_f64(&self) -> MultiPoly<f64> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Scalar::to_f64(c));
        }
        out
    }
}

/// Total degree of a monomial.
pub fn degree(m: &Monomial) -> u32 {
    m.iter().map(|&(_, e)| e).sum()
}
