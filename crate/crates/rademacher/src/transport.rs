//! Transport of a Rademacher system through a distribution function with at
//! most one jump.
//!
//! On the probability scale the jump of height `delta` at `X_0` leaves the gap
//! `I = ]F(X_0-), F(X_0-) + delta]` uncovered by the continuous part of `F`. A
//! partition cell `]a, b]` strictly enclosing the gap keeps its full length
//! (the atom lands in the same cell); any other cell loses its overlap with
//! the gap.

use laws::rational::fmt_q;
use laws::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::partition::{check_levels, masses_joint_law};
use crate::{PartitionSystem, RademacherError};

/// Distribution function with affine continuous parts and one jump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpCdf {
    f0: Q,
    delta: Q,
}

impl JumpCdf {
    /// Jump of height `delta` starting at level `f0 = F(X_0-)`; requires
    /// `f0 >= 0`, `delta >= 0` and `f0 + delta < 1`.
    pub fn new(f0: Q, delta: Q) -> Result<Self, RademacherError> {
        if f0.is_negative() || delta.is_negative() {
            return Err(RademacherError::InvalidCdf("negative level or jump".into()));
        }
        if !delta.is_zero() && &f0 + &delta >= Q::one() {
            return Err(RademacherError::InvalidCdf(format!(
                "F(X_0) + delta = {} must be below 1",
                fmt_q(&(&f0 + &delta))
            )));
        }
        Ok(JumpCdf { f0, delta })
    }

    /// A continuous distribution function.
    pub fn diffuse() -> Self {
        JumpCdf { f0: Q::zero(), delta: Q::zero() }
    }

    /// Left limit `F(X_0-)`.
    pub fn f0(&self) -> &Q {
        &self.f0
    }

    /// Jump height.
    pub fn delta(&self) -> &Q {
        &self.delta
    }

    /// Right end of the gap, `F(X_0)`.
    pub fn gap_end(&self) -> Q {
        &self.f0 + &self.delta
    }

    /// True when `]a, b]` strictly encloses the gap.
    pub fn gap_inside(&self, a: &Q, b: &Q) -> bool {
        *a < self.f0 && self.gap_end() < *b
    }

    /// Transported mass of the cell `]a, b]`.
    pub fn cell_mass(&self, a: &Q, b: &Q) -> Q {
        let len = b - a;
        if self.delta.is_zero() || self.gap_inside(a, b) {
            return len;
        }
        let lo = if *a > self.f0 { a.clone() } else { self.f0.clone() };
        let end = self.gap_end();
        let hi = if *b < end { b.clone() } else { end };
        if hi > lo {
            len - (hi - lo)
        } else {
            len
        }
    }

    /// Transported masses of the level-`k` cells.
    pub fn cell_masses(&self, ps: &PartitionSystem, k: usize) -> Result<Vec<Q>, RademacherError> {
        Ok(ps
            .level(k)?
            .windows(2)
            .map(|w| self.cell_mass(&w[0], &w[1]))
            .collect())
    }

    /// True when some level-`k` cell strictly encloses the gap.
    pub fn gap_contained(&self, ps: &PartitionSystem, k: usize) -> Result<bool, RademacherError> {
        if self.delta.is_zero() {
            return Ok(true);
        }
        Ok(ps.level(k)?.windows(2).any(|w| self.gap_inside(&w[0], &w[1])))
    }

    /// Measure of `{r_{k_1} o F = eps_1, ..., r_{k_N} o F = eps_N}`.
    pub fn transport_joint_law(
        &self,
        ps: &PartitionSystem,
        ks: &[usize],
        eps: &[i8],
    ) -> Result<Q, RademacherError> {
        let top = check_levels(ks, eps, ps.depth())?;
        Ok(masses_joint_law(&self.cell_masses(ps, top)?, top, ks, eps))
    }

    /// Product of the transported one-dimensional laws.
    pub fn transport_product_law(
        &self,
        ps: &PartitionSystem,
        ks: &[usize],
        eps: &[i8],
    ) -> Result<Q, RademacherError> {
        check_levels(ks, eps, ps.depth())?;
        ks.iter().zip(eps).try_fold(Q::one(), |acc, (&k, &e)| {
            Ok(acc * self.transport_joint_law(ps, &[k], &[e])?)
        })
    }

    /// Expectation of `prod_i r_{k_i} o F`.
    pub fn transport_expectation(&self, ps: &PartitionSystem, ks: &[usize]) -> Result<Q, RademacherError> {
        let top = check_levels(ks, &vec![1; ks.len()], ps.depth())?;
        let masses = self.cell_masses(ps, top)?;
        Ok(masses.iter().enumerate().fold(Q::zero(), |acc, (j, m)| {
            let odd = ks.iter().filter(|&&k| (j >> (top - k)) & 1 == 1).count();
            if odd % 2 == 0 {
                acc + m
            } else {
                acc - m
            }
        }))
    }
}

/// Joint and product probabilities for one level tuple and sign pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleCheck {
    pub levels: Vec<usize>,
    pub signs: Vec<i8>,
    pub joint: Q,
    pub product: Q,
}

impl TupleCheck {
    /// Exact factorization flag.
    pub fn factorizes(&self) -> bool {
        self.joint == self.product
    }
}

/// Checks every increasing level tuple of size `1..=max_arity` and every sign
/// pattern at the partition depth.
pub fn independence_report(
    ps: &PartitionSystem,
    cdf: &JumpCdf,
    max_arity: usize,
) -> Result<Vec<TupleCheck>, RademacherError> {
    let depth = ps.depth();
    let top_masses: Vec<Vec<Q>> = (0..=depth)
        .map(|k| cdf.cell_masses(ps, k))
        .collect::<Result<_, _>>()?;
    let marginals: Vec<[Q; 2]> = (0..=depth)
        .map(|k| {
            if k == 0 {
                [Q::one(), Q::zero()]
            } else {
                [1, -1].map(|e| masses_joint_law(&top_masses[k], k, &[k], &[e]))
            }
        })
        .collect();
    let scaled: Vec<(Vec<BigInt>, BigInt)> = top_masses.iter().map(|m| common_denominator(m)).collect();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << depth) {
        let levels: Vec<usize> = (1..=depth).filter(|k| mask >> (k - 1) & 1 == 1).collect();
        if levels.len() > max_arity {
            continue;
        }
        let top = *levels.last().expect("nonempty mask");
        // One pass over the top-level cells fills every sign pattern at once,
        // adding integer numerators over the level's common denominator.
        let (nums, den) = &scaled[top];
        let mut buckets = vec![BigInt::zero(); 1 << levels.len()];
        for (j, m) in nums.iter().enumerate() {
            let pattern = levels
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &k)| acc | (((j >> (top - k)) & 1) << i));
            buckets[pattern] += m;
        }
        for (pattern, sum) in buckets.into_iter().enumerate() {
            let joint = Q::new(sum, den.clone());
            let signs: Vec<i8> = (0..levels.len())
                .map(|i| if pattern >> i & 1 == 0 { 1 } else { -1 })
                .collect();
            let product = levels
                .iter()
                .zip(&signs)
                .fold(Q::one(), |acc, (&k, &e)| acc * &marginals[k][usize::from(e < 0)]);
            out.push(TupleCheck { levels: levels.clone(), signs, joint, product });
        }
    }
    Ok(out)
}

/// Numerators over the least common denominator.
fn common_denominator(values: &[Q]) -> (Vec<BigInt>, BigInt) {
    let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = values.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    (nums, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use laws::rational::{q, qi};

    #[test]
    fn cell_mass_rules() {
        let cdf = JumpCdf::new(q(1, 2), q(1, 4)).unwrap();
        assert_eq!(cdf.cell_mass(&qi(0), &q(1, 4)), q(1, 4));
        assert_eq!(cdf.cell_mass(&q(1, 2), &q(3, 4)), qi(0));
        assert_eq!(cdf.cell_mass(&q(1, 4), &qi(1)), q(3, 4));
        assert_eq!(cdf.cell_mass(&q(5, 8), &qi(1)), q(1, 4));
        assert_eq!(cdf.cell_mass(&q(1, 4), &q(7, 8)), q(5, 8));
    }

    #[test]
    fn invalid_cdf() {
        assert!(JumpCdf::new(q(3, 4), q(1, 4)).is_err());
        assert!(JumpCdf::new(q(-1, 4), q(1, 4)).is_err());
    }
}
