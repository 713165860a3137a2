//! Independence on finite probability spaces.
//!
//! Two random variables `b`, `c` on atoms with weights `p_1..p_n` are
//! independent iff `(f(b), A g(c)) = 0` for all functions `f`, `g`, where
//! `a_ii = p_i^2 - p_i` and `a_ij = p_i p_j`. Indicators of level sets span
//! all functions of a variable, so testing them is complete. The crate also
//! evaluates the necessary counting conditions, builds the maximal dyadic
//! system and computes exact Gram ranks of monomial bases.

mod linalg;

pub use linalg::rank;

use std::collections::BTreeMap;

use laws::rational::fmt_q;
use laws::Q;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors raised by the finite-space layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscreteError {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("random variable has {got} values but the space has {expected} atoms")]
    LengthMismatch { expected: usize, got: usize },
    #[error("Gram matrix of size {size} exceeds the cap {cap}")]
    SizeLimit { size: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Atoms with positive rational weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    p: Vec<Q>,
}

impl FiniteSpace {
    /// Validates positivity and total mass one.
    pub fn new(p: Vec<Q>) -> Result<Self, DiscreteError> {
        if p.is_empty() {
            return Err(DiscreteError::InvalidSpace("no atoms".into()));
        }
        if let Some(bad) = p.iter().find(|x| !x.is_positive()) {
            return Err(DiscreteError::InvalidSpace(format!("weight {} is not positive", fmt_q(bad))));
        }
        let total: Q = p.iter().sum();
        if !total.is_one() {
            return Err(DiscreteError::InvalidSpace(format!("weights sum to {}", fmt_q(&total))));
        }
        Ok(FiniteSpace { p })
    }

    /// `n` atoms of weight `1/n`.
    pub fn uniform(n: usize) -> Self {
        let w = Q::new(1.into(), (n as i64).into());
        FiniteSpace { p: vec![w; n] }
    }

    /// Number of atoms.
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Atom weights.
    pub fn weights(&self) -> &[Q] {
        &self.p
    }

    /// Probability of a set of atoms.
    pub fn prob(&self, atoms: &[usize]) -> Q {
        atoms.iter().map(|&i| &self.p[i]).sum()
    }
}

/// A random variable given by its value on each atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteRV {
    values: Vec<Q>,
}

impl DiscreteRV {
    pub fn new(values: Vec<Q>) -> Self {
        DiscreteRV { values }
    }

    /// Variable with small integer values.
    pub fn from_ints(values: &[i64]) -> Self {
        DiscreteRV { values: values.iter().map(|&v| Q::from_integer(v.into())).collect() }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    /// Level sets `{i : v_i = x}` in increasing order of `x`.
    pub fn level_sets(&self) -> Vec<(Q, Vec<usize>)> {
        let mut map: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
        for (i, v) in self.values.iter().enumerate() {
            map.entry(v.clone()).or_default().push(i);
        }
        map.into_iter().collect()
    }

    /// Number of distinct values, the dimension of the functions of the variable.
    pub fn ncd(&self) -> usize {
        self.level_sets().len()
    }

    pub fn is_constant(&self) -> bool {
        self.ncd() <= 1
    }

    fn check(&self, sp: &FiniteSpace) -> Result<(), DiscreteError> {
        if self.values.len() == sp.n() {
            Ok(())
        } else {
            Err(DiscreteError::LengthMismatch { expected: sp.n(), got: self.values.len() })
        }
    }
}

fn indicator(n: usize, atoms: &[usize]) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for &i in atoms {
        v[i] = Q::one();
    }
    v
}

/// The matrix `a_ii = p_i^2 - p_i`, `a_ij = p_i p_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndepMatrix {
    a: Vec<Vec<Q>>,
}

impl IndepMatrix {
    pub fn rows(&self) -> &[Vec<Q>] {
        &self.a
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.a
            .iter()
            .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// Bilinear form `(u, A v)`.
    pub fn bilinear(&self, u: &[Q], v: &[Q]) -> Q {
        u.iter().zip(self.apply(v)).map(|(x, y)| x * y).sum()
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        rank(&self.a)
    }
}

/// Builds the independence matrix of a space.
pub fn a_matrix(sp: &FiniteSpace) -> IndepMatrix {
    let p = &sp.p;
    let a = (0..p.len())
        .map(|i| {
            (0..p.len())
                .map(|j| if i == j { &p[i] * &p[i] - &p[i] } else { &p[i] * &p[j] })
                .collect()
        })
        .collect();
    IndepMatrix { a }
}

/// True iff `(1_{b = x}, A 1_{c = y}) = 0` for every pair of values `x`, `y`.
pub fn independent(sp: &FiniteSpace, b: &DiscreteRV, c: &DiscreteRV) -> Result<bool, DiscreteError> {
    b.check(sp)?;
    c.check(sp)?;
    let a = a_matrix(sp);
    let n = sp.n();
    let cs: Vec<Vec<Q>> = c.level_sets().iter().map(|(_, s)| a.apply(&indicator(n, s))).collect();
    Ok(b.level_sets().iter().all(|(_, sb)| {
        let f = indicator(n, sb);
        cs.iter().all(|ag| f.iter().zip(ag).map(|(x, y)| x * y).sum::<Q>().is_zero())
    }))
}

/// Largest size of a globally independent family on `n` atoms:
/// `max{k : 2^{k-1} <= n}`.
pub fn n_max(n: usize) -> Result<usize, DiscreteError> {
    if n == 0 {
        return Err(DiscreteError::InvalidArgument("n must be at least 1".into()));
    }
    Ok(usize::BITS as usize - n.leading_zeros() as usize)
}

/// Outcome of one necessary condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    /// Short identifier of the condition.
    pub name: String,
    /// Index of the variable in `bs` the check refers to, if any.
    pub subject: Option<usize>,
    pub passed: bool,
    /// Human-readable witness or explanation.
    pub detail: String,
}

/// Evaluates the necessary conditions for `c, b_1, ..., b_N` to be independent.
///
/// * `singleton_level`: if some level set of `c` is a single atom, every `b_i`
///   must be constant.
/// * `level_size` and `level_count` (per non-constant `b_i`, when every level
///   set of `c` has between 2 and `n - 1` atoms): each level set of `b_i` has at
///   least 2 atoms, and `NCD(b_i) <= min_j min(N_j, n - N_j)` over the level
///   sizes `N_j` of `c`. The bound holds for every choice of the excluded index
///   `k`; the tightest one is reported.
/// * `counting`: `NCD(c) * prod n(b_i) <= n` over the non-constant `b_i`.
pub fn necessary_conditions(
    sp: &FiniteSpace,
    c: &DiscreteRV,
    bs: &[DiscreteRV],
) -> Result<Vec<ConditionCheck>, DiscreteError> {
    c.check(sp)?;
    for b in bs {
        b.check(sp)?;
    }
    let n = sp.n();
    let c_levels = c.level_sets();
    let mut out = Vec::new();

    let singleton = c_levels.iter().find(|(_, s)| s.len() == 1);
    let offender = bs.iter().position(|b| !b.is_constant());
    out.push(ConditionCheck {
        name: "singleton_level".into(),
        subject: offender.filter(|_| singleton.is_some()),
        passed: singleton.is_none() || offender.is_none(),
        detail: match (singleton, offender) {
            (Some((v, s)), Some(i)) => {
                format!("c = {} only on atom {}, yet b_{} is not constant", fmt_q(v), s[0], i + 1)
            }
            (Some(_), None) => "c has a singleton level set and every b is constant".into(),
            _ => "no singleton level set".into(),
        },
    });

    let applicable = c_levels.len() >= 2 && c_levels.iter().all(|(_, s)| s.len() >= 2 && s.len() < n);
    for (i, b) in bs.iter().enumerate() {
        if b.is_constant() {
            continue;
        }
        if !applicable {
            out.push(ConditionCheck {
                name: "level_count".into(),
                subject: Some(i),
                passed: true,
                detail: "not applicable: c needs level sets of size 2..n-1".into(),
            });
            continue;
        }
        let b_levels = b.level_sets();
        let small = b_levels.iter().find(|(_, s)| s.len() < 2);
        out.push(ConditionCheck {
            name: "level_size".into(),
            subject: Some(i),
            passed: small.is_none(),
            detail: match small {
                Some((v, _)) => format!("b_{} = {} on a single atom", i + 1, fmt_q(v)),
                None => "every level set has at least 2 atoms".into(),
            },
        });
        let (j, bound) = c_levels
            .iter()
            .enumerate()
            .map(|(j, (_, s))| (j, s.len().min(n - s.len())))
            .min_by_key(|&(_, b)| b)
            .expect("c has level sets");
        let q = b_levels.len();
        out.push(ConditionCheck {
            name: "level_count".into(),
            subject: Some(i),
            passed: q <= bound,
            detail: format!("NCD(b_{}) = {q}, bound {bound} from level set {} of c", i + 1, j + 1),
        });
    }

    let dims: Vec<usize> = bs.iter().filter(|b| !b.is_constant()).map(DiscreteRV::ncd).collect();
    let product = dims.iter().fold(c_levels.len() as u128, |acc, &d| acc.saturating_mul(d as u128));
    out.push(ConditionCheck {
        name: "counting".into(),
        subject: None,
        passed: product <= n as u128,
        detail: format!("NCD(c) * prod n(b_i) = {product}, n = {n}"),
    });
    Ok(out)
}

/// The canonical independent family on `2^N` uniform atoms:
/// `b_k(i) = (-1)^{bit N-k of i}`, i.e. blocks of length `2^{N-k}`.
pub fn build_max_system(n_vars: usize) -> Result<(FiniteSpace, Vec<DiscreteRV>), DiscreteError> {
    if n_vars == 0 || n_vars > 20 {
        return Err(DiscreteError::InvalidArgument(format!("N = {n_vars} outside 1..=20")));
    }
    let n = 1usize << n_vars;
    let vars = (1..=n_vars)
        .map(|k| {
            DiscreteRV::from_ints(
                &(0..n).map(|i| if (i >> (n_vars - k)) & 1 == 0 { 1 } else { -1 }).collect::<Vec<_>>(),
            )
        })
        .collect();
    Ok((FiniteSpace::uniform(n), vars))
}

/// Global independence by the atom condition: for every choice of one level
/// set per variable, the probability of the intersection is the product of
/// the probabilities.
pub fn globally_independent(sp: &FiniteSpace, vars: &[DiscreteRV]) -> Result<bool, DiscreteError> {
    for v in vars {
        v.check(sp)?;
    }
    let levels: Vec<Vec<(Q, Vec<usize>)>> = vars.iter().map(DiscreteRV::level_sets).collect();
    let probs: Vec<Vec<Q>> = levels.iter().map(|ls| ls.iter().map(|(_, s)| sp.prob(s)).collect()).collect();
    let mut choice = vec![0usize; vars.len()];
    loop {
        let joint: Q = (0..sp.n())
            .filter(|&i| (0..vars.len()).all(|v| vars[v].values[i] == levels[v][choice[v]].0))
            .map(|i| &sp.p[i])
            .sum();
        let product: Q = (0..vars.len()).map(|v| &probs[v][choice[v]]).product();
        if joint != product {
            return Ok(false);
        }
        // Odometer over the level choices.
        let mut v = 0;
        loop {
            if v == vars.len() {
                return Ok(true);
            }
            choice[v] += 1;
            if choice[v] < levels[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

/// Cap on the number of monomials in [`walsh_gram_rank`].
pub const GRAM_CAP: usize = 4096;

/// Exact rank of the Gram matrix of the monomials `X_1^{a_1} ... X_n^{a_n}`,
/// `a_i in {0..N-1}`, for `n_vars` i.i.d. copies of a variable taking `values`
/// with probabilities `probs`.
pub fn walsh_gram_rank(values: &[Q], probs: &[Q], n_vars: usize) -> Result<usize, DiscreteError> {
    if values.len() != probs.len() {
        return Err(DiscreteError::LengthMismatch { expected: values.len(), got: probs.len() });
    }
    FiniteSpace::new(probs.to_vec())?;
    let big_n = values.len();
    let size = big_n
        .checked_pow(n_vars as u32)
        .filter(|&s| s <= GRAM_CAP)
        .ok_or(DiscreteError::SizeLimit { size: big_n.saturating_pow(n_vars as u32), cap: GRAM_CAP })?;
    // One-variable moments m_0..m_{2N-2}.
    let moments: Vec<Q> = (0..2 * big_n - 1)
        .map(|r| values.iter().zip(probs).map(|(v, p)| p * num_traits::pow(v.clone(), r)).sum())
        .collect();
    let exps = |mut idx: usize| {
        let mut e = vec![0usize; n_vars];
        for slot in e.iter_mut() {
            *slot = idx % big_n;
            idx /= big_n;
        }
        e
    };
    let all: Vec<Vec<usize>> = (0..size).map(exps).collect();
    let gram: Vec<Vec<Q>> = all
        .iter()
        .map(|a| {
            all.iter()
                .map(|b| a.iter().zip(b).map(|(x, y)| &moments[x + y]).product())
                .collect()
        })
        .collect();
    Ok(rank(&gram))
}
