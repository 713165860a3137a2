//! Ratio sequences that keep a jump gap inside one partition cell at every level.
//!
//! * `JumpAfter(a)`: the gap stays in the first cell; condition (C1)
//!   `prod_{k<=N} alpha_k > F(X_0) + delta`.
//! * `JumpBefore(a)`: the gap stays in the last cell; condition (C2)
//!   `alpha_1 + sum_{k>=2} alpha_k prod_{j<k} (1 - alpha_j) < F(X_0)`.
//! * `JumpAlternating(p)`: the cell alternates sides; condition (C3)
//!   `g(2k+1) < F(X_0)` and `d(2k) > F(X_0) + delta`.
//!
//! A constant ratio can never work: the enclosing cell shrinks geometrically
//! below the gap width.

use std::fmt;

use laws::rational::{fmt_q, from_f64, to_f64};
use laws::Q;
use num_traits::{One, Signed, Zero};

use crate::{JumpCdf, PartitionSystem, RademacherError};

/// Identifier of the condition a scheme must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    C1,
    C2,
    C3,
    /// The gap lies strictly inside one cell of the level.
    Containment,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
            Condition::Containment => "containment",
        };
        f.write_str(s)
    }
}

/// Ratio construction.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeVariant {
    Constant(Q),
    JumpAfter(Q),
    JumpBefore(Q),
    JumpAlternating(u32),
}

impl SchemeVariant {
    /// Parses `constant:<alpha>`, `after:<a>`, `before:<a>` or `alternating:<p>`.
    pub fn parse(s: &str) -> Result<Self, RademacherError> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let bad = |m: &str| RademacherError::InvalidParameter(format!("{m} in '{s}'"));
        let rat = || laws::rational::parse_q(arg).map_err(|_| bad("bad rational"));
        match name {
            "constant" => Ok(SchemeVariant::Constant(rat()?)),
            "after" => Ok(SchemeVariant::JumpAfter(rat()?)),
            "before" => Ok(SchemeVariant::JumpBefore(rat()?)),
            "alternating" => arg.parse().map(SchemeVariant::JumpAlternating).map_err(|_| bad("bad precision")),
            _ => Err(bad("unknown scheme")),
        }
    }
}

impl fmt::Display for SchemeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeVariant::Constant(a) => write!(f, "constant:{}", fmt_q(a)),
            SchemeVariant::JumpAfter(a) => write!(f, "after:{}", fmt_q(a)),
            SchemeVariant::JumpBefore(a) => write!(f, "before:{}", fmt_q(a)),
            SchemeVariant::JumpAlternating(p) => write!(f, "alternating:{p}"),
        }
    }
}

/// A validated ratio sequence for a given jump.
#[derive(Debug, Clone)]
pub struct AlphaScheme {
    variant: SchemeVariant,
    cdf: JumpCdf,
    alphas: Vec<Q>,
    condition: Condition,
    margins: Vec<f64>,
}

/// Deepest level scanned when locating the failure of a constant ratio.
const CONSTANT_SCAN: usize = 4096;

impl AlphaScheme {
    /// Builds the ratios for `depth` levels and verifies the variant condition and
    /// exact gap containment at every level `1..=depth`.
    pub fn new(variant: SchemeVariant, cdf: &JumpCdf, depth: usize) -> Result<Self, RademacherError> {
        if cdf.delta().is_zero() || cdf.f0().is_zero() {
            return Err(RademacherError::InvalidParameter(
                "schemes need a jump with 0 < F(X_0) and delta > 0".into(),
            ));
        }
        let (alphas, condition, margins) = match &variant {
            SchemeVariant::Constant(alpha) => {
                check_unit(alpha)?;
                let depth_fail = first_containment_failure(std::iter::repeat(alpha.clone()), cdf, CONSTANT_SCAN)
                    .expect("a constant ratio always loses the gap");
                return Err(RademacherError::ConditionFailed { condition: Condition::Containment, depth: depth_fail });
            }
            SchemeVariant::JumpAfter(a) => jump_after(cdf, a, depth)?,
            SchemeVariant::JumpBefore(a) => jump_before(cdf, a, depth)?,
            SchemeVariant::JumpAlternating(p) => jump_alternating(cdf, *p, depth)?,
        };
        if let Some(k) = margins.iter().position(|m| *m <= 0.0) {
            return Err(RademacherError::ConditionFailed { condition, depth: k + 1 });
        }
        if let Some(k) = first_containment_failure(alphas.iter().cloned(), cdf, depth) {
            return Err(RademacherError::ConditionFailed { condition: Condition::Containment, depth: k });
        }
        Ok(AlphaScheme { variant, cdf: cdf.clone(), alphas, condition, margins })
    }

    /// The construction used.
    pub fn variant(&self) -> &SchemeVariant {
        &self.variant
    }

    /// The jump the scheme was built for.
    pub fn cdf(&self) -> &JumpCdf {
        &self.cdf
    }

    /// Exact ratios `alpha_1..alpha_depth`.
    pub fn alphas(&self) -> &[Q] {
        &self.alphas
    }

    /// Condition verified by the construction.
    pub fn condition(&self) -> Condition {
        self.condition
    }

    /// Slack of the condition at each level; all strictly positive.
    pub fn margins(&self) -> &[f64] {
        &self.margins
    }

    /// Partition system built from the ratios.
    pub fn partition(&self) -> PartitionSystem {
        PartitionSystem::build(&self.alphas, self.alphas.len()).expect("scheme ratios lie in ]0, 1[")
    }

    /// Running products `p(N) = prod_{k<=N} alpha_k`.
    pub fn running_products(&self) -> Vec<Q> {
        self.alphas
            .iter()
            .scan(Q::one(), |acc, a| {
                *acc *= a;
                Some(acc.clone())
            })
            .collect()
    }
}

fn check_unit(alpha: &Q) -> Result<(), RademacherError> {
    if alpha.is_positive() && *alpha < Q::one() {
        Ok(())
    } else {
        Err(RademacherError::AlphaOutOfRange(fmt_q(alpha)))
    }
}

/// Follows the single cell enclosing the gap and returns the first level at which
/// a split point falls in `[F(X_0-), F(X_0)]`.
fn first_containment_failure(alphas: impl Iterator<Item = Q>, cdf: &JumpCdf, depth: usize) -> Option<usize> {
    let (mut l, mut r) = (Q::zero(), Q::one());
    let end = cdf.gap_end();
    for (k, alpha) in alphas.take(depth).enumerate() {
        let s = &l + alpha * (&r - &l);
        if s < *cdf.f0() {
            l = s;
        } else if s > end {
            r = s;
        } else {
            return Some(k + 1);
        }
    }
    None
}

type Built = (Vec<Q>, Condition, Vec<f64>);

fn jump_after(cdf: &JumpCdf, a: &Q, depth: usize) -> Result<Built, RademacherError> {
    let top = cdf.gap_end();
    check_unit(a)?;
    if &top + a >= Q::one() {
        return Err(RademacherError::InvalidParameter(format!(
            "need F(X_0) + delta + a < 1, got {}",
            fmt_q(&(&top + a))
        )));
    }
    // alpha_k = (F + delta + a^k) / (F + delta + a^{k-1}), so p(N) = F + delta + a^N.
    let p = |k: usize| &top + num_traits::pow(a.clone(), k);
    let alphas: Vec<Q> = (1..=depth).map(|k| if k == 1 { p(1) } else { p(k) / p(k - 1) }).collect();
    let margins = alphas
        .iter()
        .scan(Q::one(), |acc, al| {
            *acc *= al;
            Some(to_f64(&(&*acc - &top)))
        })
        .collect();
    Ok((alphas, Condition::C1, margins))
}

fn jump_before(cdf: &JumpCdf, a: &Q, depth: usize) -> Result<Built, RademacherError> {
    check_unit(a)?;
    let denom = Q::one() - a * (Q::one() + a);
    if !denom.is_positive() || a / &denom >= *cdf.f0() {
        return Err(RademacherError::InvalidParameter(format!(
            "need a / (1 - a(1 + a)) < F(X_0) for a = {}",
            fmt_q(a)
        )));
    }
    let alphas: Vec<Q> = (1..=depth).map(|k| num_traits::pow(a.clone(), k)).collect();
    let mut left = Q::zero();
    let mut rest = Q::one();
    let margins = alphas
        .iter()
        .map(|al| {
            left += al * &rest;
            rest *= Q::one() - al;
            to_f64(&(cdf.f0() - &left))
        })
        .collect();
    Ok((alphas, Condition::C2, margins))
}

/// Parameters of the alternating construction in floating point.
#[derive(Debug, Clone, Copy)]
struct Alternating {
    big_a: f64,
    delta_t: f64,
    a: f64,
}

impl Alternating {
    fn new(f0: f64, delta: f64, p: u32) -> Self {
        let ln2 = std::f64::consts::LN_2;
        Alternating {
            big_a: 1.0 / ln2,
            delta_t: (delta + 10f64.powi(-(p as i32))) * ln2,
            a: 1.0 - (f0 + delta + 10f64.powi(-(p as i32 + 1))),
        }
    }

    /// Cell length after level `k >= 1`: `A (delta~ + a / k)`.
    fn length(&self, k: usize) -> f64 {
        self.big_a * (self.delta_t + self.a / k as f64)
    }

    fn alpha(&self, k: usize) -> f64 {
        if k == 1 {
            1.0 - self.length(1)
        } else if k % 2 == 0 {
            self.length(k) / self.length(k - 1)
        } else {
            1.0 - self.length(k) / self.length(k - 1)
        }
    }
}

fn jump_alternating(cdf: &JumpCdf, p: u32, depth: usize) -> Result<Built, RademacherError> {
    let (f0, delta) = (to_f64(cdf.f0()), to_f64(cdf.delta()));
    let alt = Alternating::new(f0, delta, p);
    let a1 = alt.alpha(1);
    if alt.a <= 0.0 || !(a1 > 0.0 && a1 < 1.0) {
        return Err(RademacherError::InvalidParameter(format!(
            "precision {p} gives a = {} and alpha_1 = {a1}",
            alt.a
        )));
    }
    let alphas_f: Vec<f64> = (1..=depth).map(|k| alt.alpha(k)).collect();
    let alphas = alphas_f
        .iter()
        .map(|&x| from_f64(x).ok_or_else(|| RademacherError::AlphaOutOfRange(x.to_string())))
        .collect::<Result<Vec<Q>, _>>()?;
    let margins = alternating_endpoints(&alphas_f)
        .iter()
        .enumerate()
        .map(|(i, &(g, d))| if i % 2 == 0 { f0 - g } else { d - (f0 + delta) })
        .collect();
    Ok((alphas, Condition::C3, margins))
}

/// Endpoints `(g(k), d(k))` of the enclosing cell for `k = 1..`, taking the right
/// part at odd levels and the left part at even levels.
fn alternating_endpoints(alphas: &[f64]) -> Vec<(f64, f64)> {
    let (mut g, mut d) = (0.0, 1.0);
    alphas
        .iter()
        .enumerate()
        .map(|(i, &al)| {
            let s = g + al * (d - g);
            if i % 2 == 0 {
                g = s;
            } else {
                d = s;
            }
            (g, d)
        })
        .collect()
}

/// Diagnostics of the alternating construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingLimits {
    /// Closed-form limit `g = F(X_0) - 9 / 10^{p+1}`.
    pub g: f64,
    /// Closed-form limit `d = F(X_0) + delta + 1 / 10^{p+1}`.
    pub d: f64,
    /// `g(2k+1)` for `2k + 1 <= depth`.
    pub g_odd: Vec<f64>,
    /// `d(2k)` for `2k <= depth`.
    pub d_even: Vec<f64>,
    /// Largest deviation between the recursions and the closed forms with their
    /// exact tails `g - A a R_k` and `d - A a R_{k-1} + A a / (2k)`, where
    /// `R_k = sum_{j>k} 1 / (2j (2j + 1)) = 1 - ln 2 - sum_{j<=k} 1 / (2j (2j + 1))`.
    pub max_deviation: f64,
}

impl AlternatingLimits {
    /// Runs the recursions to `depth` for the jump `cdf` and precision `p`.
    pub fn compute(cdf: &JumpCdf, p: u32, depth: usize) -> Self {
        let (f0, delta) = (to_f64(cdf.f0()), to_f64(cdf.delta()));
        let alt = Alternating::new(f0, delta, p);
        let alphas: Vec<f64> = (1..=depth).map(|k| alt.alpha(k)).collect();
        let ends = alternating_endpoints(&alphas);
        let tail = 10f64.powi(-(p as i32 + 1));
        let g = f0 - 9.0 * tail;
        let d = f0 + delta + tail;
        let aa = alt.big_a * alt.a;
        let mut partial = 0.0;
        let mut remainders = vec![1.0 - std::f64::consts::LN_2];
        for j in 1..=depth {
            let jf = j as f64;
            partial += 1.0 / (2.0 * jf * (2.0 * jf + 1.0));
            remainders.push(1.0 - std::f64::consts::LN_2 - partial);
        }
        let mut g_odd = Vec::new();
        let mut d_even = Vec::new();
        let mut max_deviation: f64 = 0.0;
        for (i, &(gk, dk)) in ends.iter().enumerate() {
            let level = i + 1;
            if level % 2 == 1 {
                let k = level / 2;
                max_deviation = max_deviation.max((gk - (g - aa * remainders[k])).abs());
                g_odd.push(gk);
            } else {
                let k = level / 2;
                let predicted = d - aa * remainders[k - 1] + aa / (2.0 * k as f64);
                max_deviation = max_deviation.max((dk - predicted).abs());
                d_even.push(dk);
            }
        }
        AlternatingLimits { g, d, g_odd, d_even, max_deviation }
    }

    /// `g(2k+1)` strictly increasing and `d(2k)` strictly decreasing.
    pub fn monotone(&self) -> bool {
        self.g_odd.windows(2).all(|w| w[0] < w[1]) && self.d_even.windows(2).all(|w| w[0] > w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use laws::rational::q;

    #[test]
    fn parse_round_trip() {
        for s in ["constant:1/2", "after:1/4", "before:1/10", "alternating:2"] {
            assert_eq!(SchemeVariant::parse(s).unwrap().to_string(), s);
        }
        assert!(SchemeVariant::parse("sideways:1").is_err());
    }

    #[test]
    fn constant_rejected() {
        let cdf = JumpCdf::new(q(1, 3), q(1, 10)).unwrap();
        let err = AlphaScheme::new(SchemeVariant::Constant(q(1, 2)), &cdf, 4).unwrap_err();
        assert!(matches!(err, RademacherError::ConditionFailed { condition: Condition::Containment, .. }));
    }
}
