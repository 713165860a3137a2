//! Raw moment sequences and the reciprocal-Laplace coefficients built from them.

use num_traits::{One, Signed, Zero};

use crate::rational::{binom, qi, sqrt_exact, Q};
use crate::LawError;

/// Raw moments `m_0 = 1, m_1, ..., m_K` of a law, as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MomentSequence {
    m: Vec<Q>,
}

/// Coefficients `a_n` of the reciprocal Laplace transform `1/phi(t) = sum a_n t^n / n!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseLaplaceCoeffs {
    a: Vec<Q>,
}

impl MomentSequence {
    /// Wraps a moment table, checking `m_0 = 1`.
    pub fn new(m: Vec<Q>) -> Result<Self, LawError> {
        if m.first().is_none_or(|m0| !m0.is_one()) {
            return Err(LawError::InvalidParameter(
                "moment sequence must start with m_0 = 1".into(),
            ));
        }
        Ok(MomentSequence { m })
    }

    /// Highest available order `K`.
    pub fn order(&self) -> usize {
        self.m.len() - 1
    }

    /// All moments `m_0..m_K`.
    pub fn as_slice(&self) -> &[Q] {
        &self.m
    }

    /// Moment `m_n`, or an error when `n > K`.
    pub fn get(&self, n: usize) -> Result<&Q, LawError> {
        self.m.get(n).ok_or(LawError::InsufficientMoments {
            needed: n,
            available: self.order(),
        })
    }

    /// The first `k + 1` moments.
    pub fn truncate(&self, k: usize) -> Result<MomentSequence, LawError> {
        self.get(k)?;
        Ok(MomentSequence {
            m: self.m[..=k].to_vec(),
        })
    }

    /// Moments of `a X + b`, by binomial expansion.
    pub fn affine(&self, a: &Q, b: &Q) -> MomentSequence {
        let m = (0..self.m.len())
            .map(|n| {
                (0..=n).fold(Q::zero(), |acc, k| {
                    acc + Q::from_integer(binom(n, k))
                        * num_traits::pow(a.clone(), k)
                        * &self.m[k]
                        * num_traits::pow(b.clone(), n - k)
                })
            })
            .collect();
        MomentSequence { m }
    }

    /// Mean `m_1`.
    pub fn mean(&self) -> Result<Q, LawError> {
        self.get(1).cloned()
    }

    /// Variance `m_2 - m_1^2`.
    pub fn variance(&self) -> Result<Q, LawError> {
        let m1 = self.get(1)?;
        Ok(self.get(2)? - m1 * m1)
    }

    /// Moments of `(X - m_1) / sigma`.
    ///
    /// Exact only when the variance is the square of a rational; otherwise
    /// [`LawError::IrrationalScale`] is returned.
    pub fn standardized(&self) -> Result<MomentSequence, LawError> {
        let var = self.variance()?;
        if !var.is_positive() {
            return Err(LawError::InvalidParameter("variance must be positive".into()));
        }
        let sigma = sqrt_exact(&var).ok_or_else(|| {
            LawError::IrrationalScale(format!("variance {var} is not a rational square"))
        })?;
        let inv = sigma.recip();
        Ok(self.affine(&inv, &(-self.mean()? * &inv)))
    }

    /// Solves `a_0 = 1`, `sum_k C(n,k) m_k a_{n-k} = 0` for `n = 1..=k`.
    pub fn inverse_laplace_coeffs(&self, k: usize) -> Result<InverseLaplaceCoeffs, LawError> {
        self.get(k)?;
        let mut a: Vec<Q> = Vec::with_capacity(k + 1);
        a.push(Q::one());
        for n in 1..=k {
            let s = (1..=n).fold(Q::zero(), |acc, j| {
                acc + Q::from_integer(binom(n, j)) * &self.m[j] * &a[n - j]
            });
            a.push(-s);
        }
        Ok(InverseLaplaceCoeffs { a })
    }

    /// Hankel matrix `(m_{i+j})` for `0 <= i, j <= K/2`.
    pub fn hankel(&self) -> Vec<Vec<Q>> {
        let h = self.order() / 2;
        (0..=h)
            .map(|i| (0..=h).map(|j| self.m[i + j].clone()).collect())
            .collect()
    }

    /// Exact positive semidefiniteness of the Hankel matrix.
    pub fn hankel_is_psd(&self) -> bool {
        is_psd(self.hankel())
    }
}

/// Exact PSD test by symmetric elimination with diagonal pivoting.
fn is_psd(mut a: Vec<Vec<Q>>) -> bool {
    let mut alive: Vec<usize> = (0..a.len()).collect();
    loop {
        if alive.iter().any(|&i| a[i][i].is_negative()) {
            return false;
        }
        let Some(pos) = alive.iter().position(|&i| a[i][i].is_positive()) else {
            // Only zero pivots remain: the remaining block must vanish.
            return alive
                .iter()
                .all(|&i| alive.iter().all(|&j| a[i][j].is_zero()));
        };
        let p = alive.remove(pos);
        let piv = a[p][p].clone();
        for &i in &alive {
            let f = &a[i][p] / &piv;
            for &j in &alive {
                let v = &f * &a[p][j];
                a[i][j] -= v;
            }
        }
    }
}

impl InverseLaplaceCoeffs {
    /// Coefficients `a_0..a_K`.
    pub fn as_slice(&self) -> &[Q] {
        &self.a
    }

    /// Coefficient `a_n`.
    pub fn get(&self, n: usize) -> Option<&Q> {
        self.a.get(n)
    }

    /// Highest order `K`.
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }
}

/// Binomial convolution `sum_k C(n,k) m_k a_{n-k}` for each `n`; the Kronecker
/// delta exactly when `a` inverts `m`.
pub fn binomial_convolution(m: &[Q], a: &[Q]) -> Vec<Q> {
    let k = m.len().min(a.len());
    (0..k)
        .map(|n| {
            (0..=n).fold(Q::zero(), |acc, j| {
                acc + Q::from_integer(binom(n, j)) * &m[j] * &a[n - j]
            })
        })
        .collect()
}

/// Integer moments helper: wraps small integer tables.
pub fn moments_from_ints(m: &[i64]) -> Result<MomentSequence, LawError> {
    MomentSequence::new(m.iter().map(|&v| qi(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn gaussian_inverse_coefficients() {
        let m = moments_from_ints(&[1, 0, 1, 0, 3]).unwrap();
        let a = m.inverse_laplace_coeffs(4).unwrap();
        let expect: Vec<Q> = [1, 0, -1, 0, 3].iter().map(|&v| qi(v)).collect();
        assert_eq!(a.as_slice(), expect.as_slice());
    }

    #[test]
    fn psd_detection() {
        assert!(moments_from_ints(&[1, 0, 1, 0, 3]).unwrap().hankel_is_psd());
        // m_4 < m_2^2 is impossible for a real law.
        assert!(!moments_from_ints(&[1, 0, 1, 0, 0]).unwrap().hankel_is_psd());
        // Two-point law has a singular but PSD Hankel matrix.
        assert!(moments_from_ints(&[1, 0, 1, 0, 1]).unwrap().hankel_is_psd());
    }

    #[test]
    fn standardization_requires_square_variance() {
        let m = MomentSequence::new(vec![qi(1), qi(1), qi(3)]).unwrap();
        assert!(matches!(m.standardized(), Err(LawError::IrrationalScale(_))));
        let m = MomentSequence::new(vec![qi(1), qi(2), q(25, 4)]).unwrap();
        let s = m.standardized().unwrap();
        assert_eq!(s.as_slice()[1], qi(0));
        assert_eq!(s.as_slice()[2], qi(1));
    }

    #[test]
    fn missing_leading_one_rejected() {
        assert!(moments_from_ints(&[2, 0]).is_err());
    }
}
