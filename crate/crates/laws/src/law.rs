//! The law catalog: closed-form Laplace transforms expanded into exact moments.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::moments::MomentSequence;
use crate::rational::{fmt_q, parse_q, q, qi, Q};
use crate::series::Series;
use crate::LawError;

/// A probability law of the catalog, with exact rational parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawKind {
    /// Standard normal, Laplace transform `e^{t^2/2}`.
    Normal01,
    /// Exponential with rate `lambda`, i.e. `Gamma(1, lambda)`.
    Exponential { lambda: Q },
    /// Gamma with shape `a` and rate `b`, Laplace transform `(b/(b-t))^a`.
    Gamma { a: Q, b: Q },
    /// `alpha X + beta Y` with independent `X ~ Gamma(a1, b1)`, `Y ~ Gamma(a2, b2)`.
    GammaCombo {
        alpha: Q,
        a1: Q,
        b1: Q,
        beta: Q,
        a2: Q,
        b2: Q,
    },
    /// Poisson with mean `a`, Laplace transform `exp(a(e^t - 1))`.
    Poisson { a: Q },
    /// Binomial with `n` trials and success probability `p`.
    Binomial { n: u32, p: Q },
    /// User-supplied raw moments.
    Custom { moments: MomentSequence },
}

/// A law together with the highest moment order `K` it must provide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawSpec {
    pub kind: LawKind,
    pub max_order: usize,
}

impl LawSpec {
    /// Validates the parameters and the availability of `max_order` moments.
    pub fn new(kind: LawKind, max_order: usize) -> Result<Self, LawError> {
        kind.validate()?;
        if let LawKind::Custom { moments } = &kind {
            moments.get(max_order)?;
        }
        Ok(LawSpec { kind, max_order })
    }

    /// Raw moments up to `max_order`.
    pub fn moments(&self) -> Result<MomentSequence, LawError> {
        self.kind.moments(self.max_order)
    }
}

fn positive(name: &str, v: &Q) -> Result<(), LawError> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(LawError::InvalidParameter(format!("{name} must be positive, got {}", fmt_q(v))))
    }
}

impl LawKind {
    /// Exponential law with rate `lambda`.
    pub fn exponential(lambda: Q) -> Self {
        LawKind::Exponential { lambda }
    }

    /// Checks the positivity constraints of each family.
    pub fn validate(&self) -> Result<(), LawError> {
        match self {
            LawKind::Normal01 => Ok(()),
            LawKind::Exponential { lambda } => positive("lambda", lambda),
            LawKind::Gamma { a, b } => positive("a", a).and(positive("b", b)),
            LawKind::GammaCombo { alpha, a1, b1, beta, a2, b2 } => {
                for (n, v) in [("alpha", alpha), ("a1", a1), ("b1", b1), ("beta", beta), ("a2", a2), ("b2", b2)] {
                    positive(n, v)?;
                }
                Ok(())
            }
            LawKind::Poisson { a } => positive("a", a),
            LawKind::Binomial { n, p } => {
                if *n == 0 {
                    return Err(LawError::InvalidParameter("N must be at least 1".into()));
                }
                if !p.is_positive() || *p >= Q::one() {
                    return Err(LawError::InvalidParameter(format!(
                        "p must lie in (0,1), got {}",
                        fmt_q(p)
                    )));
                }
                Ok(())
            }
            LawKind::Custom { .. } => Ok(()),
        }
    }

    /// Raw moments `m_0..m_k` from the exact Taylor expansion of the Laplace transform.
    pub fn moments(&self, k: usize) -> Result<MomentSequence, LawError> {
        self.validate()?;
        let gamma_series = |a: &Q, rate: &Q| {
            // (1 - t/rate)^(-a)
            Series::affine(Q::one(), -rate.recip(), k)
                .pow_q(&-a)
                .expect("constant term is one")
        };
        let series = match self {
            LawKind::Normal01 => {
                let mut c = vec![Q::zero(); k + 1];
                if k >= 2 {
                    c[2] = q(1, 2);
                }
                Series::new(c).exp().expect("zero constant term")
            }
            LawKind::Exponential { lambda } => gamma_series(&Q::one(), lambda),
            LawKind::Gamma { a, b } => gamma_series(a, b),
            LawKind::GammaCombo { alpha, a1, b1, beta, a2, b2 } => {
                gamma_series(a1, &(b1 / alpha)).mul(&gamma_series(a2, &(b2 / beta)))
            }
            LawKind::Poisson { a } => Series::expm1(k).scale(a).exp().expect("zero constant term"),
            // p e^t + q = 1 + p (e^t - 1)
            LawKind::Binomial { n, p } => Series::expm1(k)
                .scale(p)
                .add_constant(&Q::one())
                .powi(*n as usize),
            LawKind::Custom { moments } => return moments.truncate(k),
        };
        MomentSequence::new(series.egf_coeffs())
    }

    /// Moments of the centered, reduced law `(X - m_1)/sigma`.
    pub fn standardized_moments(&self, k: usize) -> Result<MomentSequence, LawError> {
        self.moments(k.max(2))?.standardized()?.truncate(k)
    }

    /// Short identifier used in reports, e.g. `gamma(1/2,1/2)`.
    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Parses `normal`, `exp:1`, `gamma:a,b`, `gammacombo:alpha,a1,b1,beta,a2,b2`,
    /// `poisson:a`, `binomial:n,p` or `custom:m0,m1,...`.
    pub fn parse(spec: &str) -> Result<Self, LawError> {
        let spec = spec.trim();
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let args: Vec<&str> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',').collect()
        };
        let nums = || args.iter().map(|s| parse_q(s)).collect::<Result<Vec<Q>, _>>();
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(LawError::Parse(format!("{name} expects {n} parameters: {spec}")))
            }
        };
        let law = match name.to_ascii_lowercase().as_str() {
            "normal" | "gaussian" | "normal01" => {
                arity(0)?;
                LawKind::Normal01
            }
            "exp" | "exponential" => {
                if args.is_empty() {
                    LawKind::exponential(Q::one())
                } else {
                    arity(1)?;
                    LawKind::exponential(nums()?.remove(0))
                }
            }
            "gamma" => {
                arity(2)?;
                let v = nums()?;
                LawKind::Gamma { a: v[0].clone(), b: v[1].clone() }
            }
            "gammacombo" => {
                arity(6)?;
                let v = nums()?;
                LawKind::GammaCombo {
                    alpha: v[0].clone(),
                    a1: v[1].clone(),
                    b1: v[2].clone(),
                    beta: v[3].clone(),
                    a2: v[4].clone(),
                    b2: v[5].clone(),
                }
            }
            "poisson" => {
                arity(1)?;
                LawKind::Poisson { a: nums()?.remove(0) }
            }
            "binomial" => {
                arity(2)?;
                let n: u32 = args[0]
                    .trim()
                    .parse()
                    .map_err(|_| LawError::Parse(format!("bad trial count in {spec}")))?;
                LawKind::Binomial { n, p: parse_q(args[1])? }
            }
            "custom" => LawKind::Custom { moments: MomentSequence::new(nums()?)? },
            _ => return Err(LawError::Parse(format!("unknown law: {spec}"))),
        };
        law.validate()?;
        Ok(law)
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawKind::Normal01 => write!(f, "normal"),
            LawKind::Exponential { lambda } => write!(f, "exp:{}", fmt_q(lambda)),
            LawKind::Gamma { a, b } => write!(f, "gamma:{},{}", fmt_q(a), fmt_q(b)),
            LawKind::GammaCombo { alpha, a1, b1, beta, a2, b2 } => write!(
                f,
                "gammacombo:{},{},{},{},{},{}",
                fmt_q(alpha),
                fmt_q(a1),
                fmt_q(b1),
                fmt_q(beta),
                fmt_q(a2),
                fmt_q(b2)
            ),
            LawKind::Poisson { a } => write!(f, "poisson:{}", fmt_q(a)),
            LawKind::Binomial { n, p } => write!(f, "binomial:{n},{}", fmt_q(p)),
            LawKind::Custom { moments } => {
                let m: Vec<String> = moments.as_slice().iter().map(fmt_q).collect();
                write!(f, "custom:{}", m.join(","))
            }
        }
    }
}

impl Series {
    /// Adds `c` to the constant term.
    pub fn add_constant(&self, c: &Q) -> Series {
        let mut v = self.coeffs().to_vec();
        v[0] += c;
        Series::new(v)
    }
}

/// Touchard polynomial `T_k(x) = sum_j S(k, j) x^j` evaluated at `x`.
///
/// `T_k(-a)` equals `e^a (aD)^k e^{-a}`, the constants of the Poisson Wick table.
pub fn touchard(k: usize, x: &Q) -> Q {
    // Stirling numbers of the second kind by the triangle recurrence.
    let mut s = vec![vec![Q::zero(); k + 1]; k + 1];
    s[0][0] = Q::one();
    for n in 1..=k {
        for j in 1..=n {
            s[n][j] = qi(j as i64) * &s[n - 1][j] + &s[n - 1][j - 1];
        }
    }
    (0..=k).fold(Q::zero(), |acc, j| acc + &s[k][j] * num_traits::pow(x.clone(), j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(m: &MomentSequence) -> Vec<String> {
        m.as_slice().iter().map(fmt_q).collect()
    }

    #[test]
    fn normal_moments() {
        let m = LawKind::Normal01.moments(8).unwrap();
        assert_eq!(ints(&m), ["1", "0", "1", "0", "3", "0", "15", "0", "105"]);
    }

    #[test]
    fn exponential_moments_are_factorials() {
        let m = LawKind::exponential(qi(1)).moments(4).unwrap();
        assert_eq!(ints(&m), ["1", "1", "2", "6", "24"]);
        let m = LawKind::exponential(qi(2)).moments(2).unwrap();
        assert_eq!(m.as_slice()[2], q(1, 2));
    }

    #[test]
    fn poisson_moments_are_touchard() {
        let a = q(3, 2);
        let m = LawKind::Poisson { a: a.clone() }.moments(6).unwrap();
        for k in 0..=6 {
            assert_eq!(m.as_slice()[k], touchard(k, &a));
        }
    }

    #[test]
    fn binomial_first_moments() {
        let m = LawKind::Binomial { n: 4, p: q(1, 2) }.moments(2).unwrap();
        assert_eq!(m.as_slice()[1], qi(2));
        assert_eq!(m.variance().unwrap(), qi(1));
    }

    #[test]
    fn gamma_combo_mean() {
        let law = LawKind::GammaCombo {
            alpha: qi(2),
            a1: qi(1),
            b1: qi(1),
            beta: qi(3),
            a2: q(1, 2),
            b2: qi(2),
        };
        let m = law.moments(3).unwrap();
        // 2 * 1/1 + 3 * (1/2)/2
        assert_eq!(m.as_slice()[1], q(11, 4));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["normal", "exp:2", "gamma:1/2,1/2", "poisson:1", "binomial:3,1/2", "gammacombo:1,2,3,1,1,1"] {
            let law = LawKind::parse(s).unwrap();
            assert_eq!(LawKind::parse(&law.to_string()).unwrap(), law);
        }
        assert!(LawKind::parse("gamma:1").is_err());
        assert!(LawKind::parse("binomial:3,2").is_err());
        assert!(LawKind::parse("poisson:-1").is_err());
    }

    #[test]
    fn standardized_exponential() {
        let m = LawKind::exponential(qi(5)).standardized_moments(4).unwrap();
        assert_eq!(ints(&m), ["1", "0", "1", "2", "9"]);
    }
}
