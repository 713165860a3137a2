//! Nested interval partitions and their `+-1` functions.

use laws::rational::fmt_q;
use laws::Q;
use num_traits::{One, Signed, Zero};

use crate::{phi, RademacherError};

/// Endpoints `a_0^k = 0 < ... < a_{2^k}^k = 1` for every level `k <= depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSystem {
    alphas: Vec<Q>,
    levels: Vec<Vec<Q>>,
}

impl PartitionSystem {
    /// Builds levels `0..=depth` by the refinement
    /// `a_{2j}^{k+1} = a_j^k`, `a_{2j+1}^{k+1} = a_j^k + alpha_{k+1} (a_{j+1}^k - a_j^k)`.
    pub fn build(alphas: &[Q], depth: usize) -> Result<Self, RademacherError> {
        if depth > alphas.len() {
            return Err(RademacherError::DepthExceeded { level: depth, depth: alphas.len() });
        }
        if let Some(bad) = alphas.iter().find(|a| !(a.is_positive() && **a < Q::one())) {
            return Err(RademacherError::AlphaOutOfRange(fmt_q(bad)));
        }
        let mut levels = vec![vec![Q::zero(), Q::one()]];
        for alpha in &alphas[..depth] {
            let prev = levels.last().expect("level 0 exists");
            let mut next = Vec::with_capacity(2 * prev.len() - 1);
            for w in prev.windows(2) {
                next.push(w[0].clone());
                next.push(&w[0] + alpha * (&w[1] - &w[0]));
            }
            next.push(Q::one());
            levels.push(next);
        }
        Ok(PartitionSystem { alphas: alphas[..depth].to_vec(), levels })
    }

    /// The classical dyadic system (`alpha_k = 1/2`).
    pub fn dyadic(depth: usize) -> Self {
        let half = Q::new(1.into(), 2.into());
        Self::build(&vec![half; depth], depth).expect("1/2 is a valid ratio")
    }

    /// Number of refinement levels.
    pub fn depth(&self) -> usize {
        self.alphas.len()
    }

    /// Ratios `alpha_1..alpha_depth`.
    pub fn alphas(&self) -> &[Q] {
        &self.alphas
    }

    /// Endpoints of level `k`.
    pub fn level(&self, k: usize) -> Result<&[Q], RademacherError> {
        self.levels
            .get(k)
            .map(Vec::as_slice)
            .ok_or(RademacherError::DepthExceeded { level: k, depth: self.depth() })
    }

    /// Value of `r_k` at `x`: `(-1)^j` where `x` lies in `]a_j^k, a_{j+1}^k]`.
    pub fn evaluate_r(&self, k: usize, x: &Q) -> Result<i8, RademacherError> {
        let pts = self.level(k)?;
        if !(x.is_positive() && *x <= Q::one()) {
            return Err(RademacherError::PointOutOfRange(fmt_q(x)));
        }
        // First endpoint >= x is a_{j+1}.
        let j = pts.partition_point(|a| a < x) - 1;
        Ok(if j % 2 == 0 { 1 } else { -1 })
    }

    /// Lengths of the level-`k` intervals.
    pub fn lengths(&self, k: usize) -> Result<Vec<Q>, RademacherError> {
        Ok(self.level(k)?.windows(2).map(|w| &w[1] - &w[0]).collect())
    }

    /// Lebesgue measure of `{r_{k_1} = eps_1, ..., r_{k_N} = eps_N}`.
    pub fn joint_law(&self, ks: &[usize], eps: &[i8]) -> Result<Q, RademacherError> {
        let top = check_levels(ks, eps, self.depth())?;
        Ok(masses_joint_law(&self.lengths(top)?, top, ks, eps))
    }

    /// Product `prod_i phi_{k_i}(eps_i)` predicted by independence.
    pub fn product_law(&self, ks: &[usize], eps: &[i8]) -> Result<Q, RademacherError> {
        check_levels(ks, eps, self.depth())?;
        Ok(ks
            .iter()
            .zip(eps)
            .fold(Q::one(), |acc, (&k, &e)| acc * phi(&self.alphas[k - 1], e)))
    }
}

/// Validates an increasing level list and returns its top level.
pub(crate) fn check_levels(ks: &[usize], eps: &[i8], depth: usize) -> Result<usize, RademacherError> {
    let ok = !ks.is_empty()
        && ks.len() == eps.len()
        && ks[0] >= 1
        && ks.windows(2).all(|w| w[0] < w[1])
        && eps.iter().all(|e| *e == 1 || *e == -1);
    if !ok {
        return Err(RademacherError::InvalidLevels);
    }
    let top = *ks.last().expect("nonempty");
    if top > depth {
        return Err(RademacherError::DepthExceeded { level: top, depth });
    }
    Ok(top)
}

/// Sums the masses of level-`top` cells whose signs match the pattern.
///
/// Cell `j` at level `top` has ancestor `j >> (top - k)` at level `k`, so the
/// sign of `r_k` on it is the parity of that ancestor index.
pub(crate) fn masses_joint_law(masses: &[Q], top: usize, ks: &[usize], eps: &[i8]) -> Q {
    masses
        .iter()
        .enumerate()
        .filter(|(j, _)| {
            ks.iter().zip(eps).all(|(&k, &e)| {
                let odd = (j >> (top - k)) & 1 == 1;
                (e == 1) != odd
            })
        })
        .fold(Q::zero(), |acc, (_, m)| acc + m)
}

/// Length `beta_nu(N)` of the `nu`-th level-`N` interval (`nu >= 1`): the product
/// over the binary digits of `nu - 1`, most significant first, of `alpha_i`
/// (digit 0) or `1 - alpha_i` (digit 1).
pub fn beta_product(alphas: &[Q], n: usize, nu: usize) -> Q {
    let idx = nu - 1;
    (1..=n).fold(Q::one(), |acc, i| {
        let bit = (idx >> (n - i)) & 1;
        acc * phi(&alphas[i - 1], if bit == 0 { 1 } else { -1 })
    })
}
