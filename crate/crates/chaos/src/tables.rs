//! Change-of-basis tables between monomials and orthogonal polynomials.
//!
//! For a centered, reduced law with moments `m`, the monic orthogonal
//! polynomials `P_0..P_4` are obtained by exact Gram-Schmidt, and
//! `X^n = Σ_k γ_{n,k} P_k(X)`. The same construction on the standard normal
//! moments yields the Hermite polynomials and `X^n = Σ_k Γ_{n,k} H_k(X)`.

use laws::rational::{factorial, to_f64};
use laws::{LawKind, MomentSequence, Poly, Q};
use num_traits::{One, Signed, Zero};

use crate::ChaosError;

/// Highest chaos order handled by the tables.
pub const MAX_ORDER: usize = 4;

/// Moment order needed to build every table entry.
pub const MOMENT_ORDER: usize = 2 * MAX_ORDER;

#[derive(Debug, Clone, PartialEq)]
struct Family {
    polys: Vec<Poly>,
    norms: Vec<Q>,
    coeffs: Vec<Vec<Q>>,
}

impl Family {
    fn build(m: &[Q]) -> Result<Self, ChaosError> {
        let mut polys: Vec<Poly> = Vec::new();
        let mut norms: Vec<Q> = Vec::new();
        let expect = |p: &Poly| p.expectation(m).ok_or(ChaosError::InsufficientMoments {
            needed: MOMENT_ORDER,
            available: m.len().saturating_sub(1),
        });
        for k in 0..=MAX_ORDER {
            let xk = Poly::monomial(Q::one(), k);
            let mut p = xk.clone();
            for (pi, ni) in polys.iter().zip(&norms) {
                let proj = expect(&(&xk * pi))? / ni;
                p = &p - &pi.scale(&proj);
            }
            let norm = expect(&(&p * &p))?;
            if !norm.is_positive() {
                return Err(ChaosError::DegenerateLaw(format!(
                    "orthogonal polynomial of degree {k} has zero norm"
                )));
            }
            polys.push(p);
            norms.push(norm);
        }
        let mut coeffs = Vec::with_capacity(MAX_ORDER + 1);
        for n in 0..=MAX_ORDER {
            let xn = Poly::monomial(Q::one(), n);
            let row = (0..=n)
                .map(|k| Ok(expect(&(&xn * &polys[k]))? / &norms[k]))
                .collect::<Result<Vec<Q>, ChaosError>>()?;
            coeffs.push(row);
        }
        Ok(Family { polys, norms, coeffs })
    }
}

/// `γ`, `Γ`, the orthogonal polynomials and the derived constants for one law.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaTables {
    moments: Vec<Q>,
    law: Family,
    hermite: Family,
    p_f64: Vec<Vec<f64>>,
}

impl GammaTables {
    /// Tables for a centered, reduced moment sequence known to order 8.
    pub fn new(m: &MomentSequence) -> Result<Self, ChaosError> {
        let m = m.truncate(MOMENT_ORDER)?;
        let s = m.as_slice();
        if !s[1].is_zero() || !s[2].is_one() {
            return Err(ChaosError::NotStandardized);
        }
        let gauss = LawKind::Normal01.moments(MOMENT_ORDER)?;
        let law = Family::build(s)?;
        let hermite = Family::build(gauss.as_slice())?;
        let p_f64 = law.polys.iter().map(Poly::to_f64_coeffs).collect();
        Ok(GammaTables { moments: s.to_vec(), law, hermite, p_f64 })
    }

    /// Tables for the centered, reduced version of `law`.
    pub fn for_law(law: &LawKind) -> Result<Self, ChaosError> {
        Self::new(&law.standardized_moments(MOMENT_ORDER)?)
    }

    /// Moments `m_0..m_8` of the reduced law.
    pub fn moments(&self) -> &[Q] {
        &self.moments
    }

    /// Moment `m_p`.
    pub fn m(&self, p: usize) -> &Q {
        &self.moments[p]
    }

    /// Monic orthogonal polynomial `P_k` of the law.
    pub fn p(&self, k: usize) -> &Poly {
        &self.law.polys[k]
    }

    /// Hermite polynomial `H_k`.
    pub fn hermite(&self, k: usize) -> &Poly {
        &self.hermite.polys[k]
    }

    /// `E P_k(X)²`.
    pub fn p_norm_sq(&self, k: usize) -> &Q {
        &self.law.norms[k]
    }

    /// `γ_{n,k}`, zero when `k > n`.
    pub fn gamma(&self, n: usize, k: usize) -> Q {
        self.law.coeffs[n].get(k).cloned().unwrap_or_default()
    }

    /// `Γ_{n,k}`, zero when `k > n`.
    pub fn big_gamma(&self, n: usize, k: usize) -> Q {
        self.hermite.coeffs[n].get(k).cloned().unwrap_or_default()
    }

    /// `γ_{n,k} - Γ_{n,k}`.
    pub fn delta(&self, n: usize, k: usize) -> Q {
        self.gamma(n, k) - self.big_gamma(n, k)
    }

    /// `P_0(x)..P_4(x)` in floating point.
    pub fn eval_p(&self, x: f64) -> [f64; MAX_ORDER + 1] {
        let mut out = [0.0; MAX_ORDER + 1];
        for (o, c) in out.iter_mut().zip(&self.p_f64) {
            *o = c.iter().rev().fold(0.0, |acc, v| acc * x + v);
        }
        out
    }

    /// Weight `Π E|P_{α_i}|² / Π α_i!` of a monomial with multiplicities `alphas`.
    pub fn a_weight(&self, alphas: &[usize]) -> Q {
        alphas.iter().fold(Q::one(), |acc, &a| {
            acc * &self.law.norms[a] / Q::from_integer(factorial(a))
        })
    }

    /// `C_{(k,n)}`: the largest `|Π_{k_i≠0} (γ_{α_i,α_i-k_i} - Γ_{α_i,α_i-k_i})|` over
    /// multiplicities `α` summing to `n` and `k_i <= α_i` summing to `k`.
    pub fn c_const(&self, k: usize, n: usize) -> Q {
        let mut best = Q::zero();
        for alphas in partitions(n) {
            for ks in bounded_compositions(&alphas, k) {
                let v = alphas.iter().zip(&ks).filter(|(_, &ki)| ki > 0).fold(
                    Q::one(),
                    |acc, (&a, &ki)| acc * self.delta(a, a - ki),
                );
                if v.abs() > best {
                    best = v.abs();
                }
            }
        }
        best
    }

    /// `A_{(n)}`: the largest A-weight over multiplicities summing to `n`.
    pub fn a_const(&self, n: usize) -> Q {
        partitions(n)
            .iter()
            .map(|a| self.a_weight(a))
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Floating-point `C_{(k,n)}`.
    pub fn c_const_f64(&self, k: usize, n: usize) -> f64 {
        to_f64(&self.c_const(k, n))
    }
}

/// Partitions of `n` into positive parts, in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All `(k_1..k_r)` with `0 <= k_i <= bounds[i]` and `Σ k_i = k`.
pub fn bounded_compositions(bounds: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(bounds: &[usize], k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if bounds.is_empty() {
            if k == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for ki in 0..=bounds[0].min(k) {
            cur.push(ki);
            go(&bounds[1..], k - ki, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(bounds, k, &mut Vec::new(), &mut out);
    out
}
