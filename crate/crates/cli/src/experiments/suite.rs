//! `all`: every experiment family in one report.

use anyhow::Result;
use chaos::func::identity;
use laws::rational::{q, qi};
use laws::LawKind;
use rademacher::SchemeVariant;

use super::chaos::{self as chaos_exp, ChaosOpts};
use super::rademacher::{self as rad, Source};
use super::{discrete, wick as wick_exp};
use crate::report::ExperimentReport;

/// Resource limits of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Profile {
    pub max_truncation: usize,
    pub max_paths: usize,
    pub max_depth: u32,
    pub rademacher_depth: usize,
    pub random_systems: usize,
}

impl Profile {
    /// Caps truncation at 8, paths at 10^4 and depths at 6.
    pub fn quick() -> Self {
        Profile { max_truncation: 8, max_paths: 10_000, max_depth: 6, rademacher_depth: 8, random_systems: 3 }
    }

    pub fn full() -> Self {
        Profile { max_truncation: 16, max_paths: 10_000, max_depth: 7, rademacher_depth: 12, random_systems: 10 }
    }
}

/// The six parametric families of the law catalog.
pub fn catalog() -> Vec<LawKind> {
    vec![
        LawKind::Normal01,
        LawKind::exponential(qi(1)),
        LawKind::Gamma { a: qi(2), b: qi(3) },
        LawKind::GammaCombo { alpha: qi(1), a1: qi(2), b1: qi(1), beta: q(1, 2), a2: q(1, 3), b2: qi(2) },
        LawKind::Poisson { a: qi(1) },
        LawKind::Binomial { n: 4, p: q(1, 2) },
    ]
}

fn group(command: &str, sections: Vec<ExperimentReport>) -> ExperimentReport {
    let mut r = ExperimentReport::new(command);
    r.sections = sections;
    r.finish()
}

/// Runs the whole suite.
pub fn all(seed: u64, quick: bool) -> Result<ExperimentReport> {
    let p = if quick { Profile::quick() } else { Profile::full() };
    let mut r = ExperimentReport::new("all");
    r.config("seed", seed)
        .config("quick", quick)
        .config("max_truncation", p.max_truncation)
        .config("max_paths", p.max_paths)
        .config("max_depth", p.max_depth);

    let mut wick_sections = Vec::new();
    for law in catalog() {
        wick_sections.push(wick_exp::table(&law, 6)?);
    }
    for law in [LawKind::Normal01, LawKind::exponential(qi(1)), LawKind::Gamma { a: qi(2), b: qi(3) }, LawKind::Poisson { a: qi(1) }] {
        wick_sections.push(wick_exp::gram(&law, 5)?);
    }
    for s in &mut wick_sections {
        s.data = serde_json::Value::Null;
    }
    r.sections.push(group("wick", wick_sections));

    let depth = p.rademacher_depth;
    let mut rad_sections = vec![rad::random_systems(seed, p.random_systems, 8)?, rad::correlated_example()?];
    for v in [SchemeVariant::JumpAfter(q(1, 4)), SchemeVariant::JumpBefore(q(1, 5)), SchemeVariant::JumpAlternating(2)] {
        let mut s = rad::verify(&Source::Scheme(v), None, depth, 3)?;
        s.data = serde_json::Value::Null;
        rad_sections.push(s);
    }
    r.sections.push(group("rademacher", rad_sections));

    let mut disc = Vec::new();
    for n in [1, 4, 8] {
        disc.push(discrete::nmax(n)?);
    }
    let uniform = vec![q(1, 4); 4];
    let signs = |v: [i64; 4]| v.iter().map(|&x| qi(x)).collect::<Vec<_>>();
    disc.push(discrete::check(&uniform, &[signs([1, 1, -1, -1]), signs([1, -1, 1, -1])])?);
    disc.push(discrete::walsh(&[qi(-1), qi(1)], &[q(1, 2), q(1, 2)], 3)?);
    for n in [2, 3] {
        disc.push(discrete::walsh(&[qi(-1), qi(3), qi(-2)], &vec![q(1, 3); 3], n)?);
    }
    r.sections.push(group("discrete", disc));

    let laws = [LawKind::Normal01, LawKind::exponential(qi(1))];
    let n_small = p.max_truncation.min(6);
    let paths = p.max_paths;
    let mut ch = Vec::new();
    for law in &laws {
        let mut o = ChaosOpts::new(law.clone(), p.max_truncation.min(8), paths, seed, Vec::new());
        o.g = identity();
        ch.push(chaos_exp::norm(&o)?);
    }
    let mut o = ChaosOpts::new(LawKind::exponential(qi(1)), p.max_truncation.min(8), paths, seed, (1..=p.max_depth).collect());
    o.g = identity();
    ch.push(chaos_exp::ito(&o)?);
    for law in &laws {
        let o = ChaosOpts::new(law.clone(), n_small, paths, seed, Vec::new());
        ch.push(chaos_exp::order4(&o)?);
    }
    for law in &laws {
        let o = ChaosOpts::new(law.clone(), p.max_truncation, paths, seed, (3..=p.max_depth).collect());
        ch.push(chaos_exp::qv(&o, &qi(1))?);
    }
    if !quick {
        // Haar functions resolve the finest partition exactly, so the truncated
        // process keeps its rough increments down to depth `max_depth`.
        let mut o = ChaosOpts::new(LawKind::Normal01, 1 << p.max_depth, paths, seed, (3..=p.max_depth).collect());
        o.basis = chaos::BasisKind::Haar;
        ch.push(chaos_exp::qv(&o, &qi(1))?);
    }
    for law in &laws {
        let o = ChaosOpts::new(law.clone(), n_small, paths, seed, (2..=5).collect());
        ch.push(chaos_exp::bound4(&o, &chaos_exp::default_lefts())?);
    }
    r.sections.push(group("chaos", ch));
    Ok(r.finish())
}
