//! `rademacher verify` and the transported-correlation example.

use anyhow::Result;
use laws::rational::{fmt_q, q};
use laws::Q;
use rademacher::{independence_report, AlphaScheme, JumpCdf, PartitionSystem, RademacherError, SchemeVariant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::input::q_strings;
use crate::report::{ExperimentReport, Value};

/// Where the ratios come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Explicit ratios `alpha_1, alpha_2, ...`.
    Alphas(Vec<Q>),
    /// A construction adapted to the jump.
    Scheme(SchemeVariant),
}

/// Jump used by the schemes when none is given: `F(X_0) = 1/2`, `delta = 1/10`.
pub fn default_jump() -> (Q, Q) {
    (q(1, 2), q(1, 10))
}

/// Verifies exact factorization of every level tuple of size at most
/// `max_arity`, after transport through the jump when one is given.
pub fn verify(source: &Source, jump: Option<(Q, Q)>, depth: usize, max_arity: usize) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("rademacher verify");
    r.config("depth", depth).config("max_arity", max_arity);
    let (ps, cdf) = match source {
        Source::Alphas(alphas) => {
            r.config("alphas", q_strings(alphas));
            let cdf = match &jump {
                Some((f0, delta)) => JumpCdf::new(f0.clone(), delta.clone())?,
                None => JumpCdf::diffuse(),
            };
            (PartitionSystem::build(alphas, depth)?, cdf)
        }
        Source::Scheme(variant) => {
            let (f0, delta) = jump.clone().unwrap_or_else(default_jump);
            r.config("scheme", variant.to_string());
            let cdf = JumpCdf::new(f0, delta)?;
            match AlphaScheme::new(variant.clone(), &cdf, depth) {
                Ok(s) => {
                    r.check(format!("condition {} holds to depth {depth}", s.condition()), Value::flag(true), true);
                    r.config("alphas", q_strings(s.alphas()));
                    (s.partition(), cdf)
                }
                Err(RademacherError::ConditionFailed { condition, depth: at }) => {
                    r.check(
                        format!("condition {condition} holds to depth {depth}"),
                        Value::Exact { value: format!("fails at depth {at}") },
                        false,
                    );
                    if let Some((f0, delta)) = &jump {
                        r.config("jump", vec![fmt_q(f0), fmt_q(delta)]);
                    }
                    return Ok(r.finish());
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    r.config("jump", vec![fmt_q(cdf.f0()), fmt_q(cdf.delta())]);
    let contained = (1..=depth).map(|k| cdf.gap_contained(&ps, k)).collect::<Result<Vec<_>, _>>()?;
    let first_bad = contained.iter().position(|c| !c).map(|i| i + 1);
    r.check(
        "jump gap inside one cell at every level",
        match first_bad {
            None => Value::flag(true),
            Some(k) => Value::Exact { value: format!("lost at level {k}") },
        },
        first_bad.is_none(),
    );
    let report = independence_report(&ps, &cdf, max_arity)?;
    let bad = report.iter().filter(|t| !t.factorizes()).count();
    r.check_against(
        "tuples whose joint law differs from the product law",
        Value::Exact { value: bad.to_string() },
        Value::Exact { value: "0".into() },
        bad == 0,
    );
    let tuples: Vec<_> = report
        .iter()
        .map(|t| {
            json!({
                "levels": t.levels,
                "signs": t.signs,
                "joint": fmt_q(&t.joint),
                "product": fmt_q(&t.product),
                "equal": t.factorizes(),
            })
        })
        .collect();
    r.data = json!({ "tuples": tuples });
    Ok(r.finish())
}

/// Random ratios `n/32`, `1 <= n <= 31`.
pub fn random_alphas(rng: &mut ChaCha8Rng, depth: usize) -> Vec<Q> {
    (0..depth).map(|_| q(rng.gen_range(1..=31), 32)).collect()
}

/// Verifies `systems` random ratio systems of the given depth.
pub fn random_systems(seed: u64, systems: usize, depth: usize) -> Result<ExperimentReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = ExperimentReport::new("rademacher random");
    r.config("seed", seed).config("systems", systems).config("depth", depth);
    for _ in 0..systems {
        let alphas = random_alphas(&mut rng, depth);
        let mut s = verify(&Source::Alphas(alphas), None, depth, depth)?;
        s.data = serde_json::Value::Null;
        r.sections.push(s);
    }
    Ok(r.finish())
}

/// Dyadic system transported through a jump of size `1/4` at `F(X_0) = 1/2`:
/// `E(r_1 o F r_2 o F)` and `E(r_1 o F) E(r_2 o F)`.
pub fn correlated_example() -> Result<ExperimentReport> {
    let ps = PartitionSystem::dyadic(2);
    let cdf = JumpCdf::new(q(1, 2), q(1, 4))?;
    let joint = cdf.transport_expectation(&ps, &[1, 2])?;
    let means = cdf.transport_expectation(&ps, &[1])? * cdf.transport_expectation(&ps, &[2])?;
    let mut r = ExperimentReport::new("rademacher example");
    r.config("alphas", vec!["1/2", "1/2"]).config("jump", vec!["1/2", "1/4"]);
    let (t_joint, t_means) = (q(1, 4), q(-1, 16));
    r.check_against("E(r_1 o F r_2 o F)", Value::exact(&joint), Value::exact(&t_joint), joint == t_joint);
    r.check_against("E(r_1 o F) E(r_2 o F)", Value::exact(&means), Value::exact(&t_means), means == t_means);
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schemes_and_constant_ratio() {
        let ok = verify(&Source::Scheme(SchemeVariant::JumpAfter(q(1, 4))), None, 6, 3).unwrap();
        assert!(ok.passed());
        let bad = verify(&Source::Scheme(SchemeVariant::Constant(q(1, 2))), None, 6, 3).unwrap();
        assert!(!bad.passed());
        assert!(correlated_example().unwrap().passed());
    }

    #[test]
    fn boundary_gap_breaks_independence() {
        let r = verify(&Source::Alphas(vec![q(1, 2); 2]), Some((q(3, 8), q(1, 4))), 2, 2).unwrap();
        assert!(!r.passed());
    }
}
