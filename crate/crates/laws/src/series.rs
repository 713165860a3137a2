//! Truncated formal power series in `t` with exact rational coefficients.
//!
//! Laplace transforms are expanded here; raw moments are `n!` times the
//! ordinary coefficients.

use num_traits::{One, Zero};

use crate::rational::{factorial, qi, Q};

/// Series `c_0 + c_1 t + ... + c_K t^K` truncated at order `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    c: Vec<Q>,
}

impl Series {
    /// Series from ordinary coefficients; the order is `c.len() - 1`.
    pub fn new(c: Vec<Q>) -> Self {
        assert!(!c.is_empty(), "series needs at least one coefficient");
        Series { c }
    }

    /// The constant `1` truncated at order `k`.
    pub fn one(k: usize) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[0] = Q::one();
        Series { c }
    }

    /// `e^t - 1` truncated at order `k`.
    pub fn expm1(k: usize) -> Self {
        let c = (0..=k)
            .map(|n| {
                if n == 0 {
                    Q::zero()
                } else {
                    Q::from_integer(factorial(n)).recip()
                }
            })
            .collect();
        Series { c }
    }

    /// The affine series `a + b t`.
    pub fn affine(a: Q, b: Q, k: usize) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[0] = a;
        if k >= 1 {
            c[1] = b;
        }
        Series { c }
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    /// Ordinary coefficients.
    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    /// Coefficients multiplied by `n!`, i.e. derivatives at zero.
    pub fn egf_coeffs(&self) -> Vec<Q> {
        self.c
            .iter()
            .enumerate()
            .map(|(n, c)| c * Q::from_integer(factorial(n)))
            .collect()
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: &Q) -> Series {
        Series::new(self.c.iter().map(|c| c * s).collect())
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, rhs: &Series) -> Series {
        let k = self.order().min(rhs.order());
        let mut out = vec![Q::zero(); k + 1];
        for i in 0..=k {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                out[i + j] += &self.c[i] * &rhs.c[j];
            }
        }
        Series::new(out)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Option<Series> {
        if self.c[0].is_zero() {
            return None;
        }
        let k = self.order();
        let inv0 = self.c[0].recip();
        let mut out = vec![Q::zero(); k + 1];
        out[0] = inv0.clone();
        for n in 1..=k {
            let s = (1..=n).fold(Q::zero(), |acc, i| acc + &self.c[i] * &out[n - i]);
            out[n] = -s * &inv0;
        }
        Some(Series::new(out))
    }

    fn derivative(&self) -> Vec<Q> {
        self.c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * qi(n as i64))
            .collect()
    }

    /// `exp(f)` for a series with zero constant term.
    pub fn exp(&self) -> Option<Series> {
        if !self.c[0].is_zero() {
            return None;
        }
        // g = exp(f) satisfies n g_n = sum_{i=1}^n i f_i g_{n-i}.
        let k = self.order();
        let mut g = vec![Q::zero(); k + 1];
        g[0] = Q::one();
        for n in 1..=k {
            let s = (1..=n).fold(Q::zero(), |acc, i| acc + qi(i as i64) * &self.c[i] * &g[n - i]);
            g[n] = s / qi(n as i64);
        }
        Some(Series::new(g))
    }

    /// `log(f)` for a series with constant term one.
    pub fn ln(&self) -> Option<Series> {
        if !self.c[0].is_one() {
            return None;
        }
        let inv = self.recip()?;
        let d = self.derivative();
        let k = self.order();
        let mut out = vec![Q::zero(); k + 1];
        for n in 1..=k {
            // n * out_n = [t^{n-1}] f'/f
            let s = (0..n).fold(Q::zero(), |acc, i| acc + &d[i] * &inv.c[n - 1 - i]);
            out[n] = s / qi(n as i64);
        }
        Some(Series::new(out))
    }

    /// `f^r` for rational `r` and a series with constant term one.
    pub fn pow_q(&self, r: &Q) -> Option<Series> {
        self.ln()?.scale(r).exp()
    }

    /// Non-negative integer power.
    pub fn powi(&self, e: usize) -> Series {
        (0..e).fold(Series::one(self.order()), |acc, _| acc.mul(self))
    }
}
