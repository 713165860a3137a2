//! `discrete check`, `discrete nmax` and `discrete walsh`.

use anyhow::{bail, Result};
use discrete_indep::{
    build_max_system, globally_independent, independent, n_max, necessary_conditions, walsh_gram_rank, DiscreteRV,
    FiniteSpace,
};
use laws::Q;
use serde_json::json;

use crate::input::q_strings;
use crate::report::{ExperimentReport, Value};

/// Largest variable count for which `nmax` also builds and checks the maximal system.
const BUILD_CAP: usize = 10;

/// Pairwise and global independence of `rvs` on the space with weights `p`,
/// plus the necessary conditions for `rvs[0]` against the others.
pub fn check(p: &[Q], rvs: &[Vec<Q>]) -> Result<ExperimentReport> {
    if rvs.len() < 2 {
        bail!("need at least two random variables");
    }
    let sp = FiniteSpace::new(p.to_vec())?;
    let vars: Vec<DiscreteRV> = rvs.iter().map(|v| DiscreteRV::new(v.clone())).collect();
    let mut r = ExperimentReport::new("discrete check");
    r.config("space", q_strings(p));
    r.config("rv", rvs.iter().map(|v| q_strings(v)).collect::<Vec<_>>());
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            let ind = independent(&sp, &vars[i], &vars[j])?;
            r.check(format!("X_{} and X_{} independent", i + 1, j + 1), Value::flag(ind), ind);
        }
    }
    if vars.len() > 2 {
        let g = globally_independent(&sp, &vars)?;
        r.check("all variables jointly independent", Value::flag(g), g);
    }
    let conditions = necessary_conditions(&sp, &vars[0], &vars[1..])?;
    let mut details = Vec::new();
    for c in &conditions {
        let name = match c.subject {
            Some(i) => format!("necessary condition {} for X_{}", c.name, i + 2),
            None => format!("necessary condition {}", c.name),
        };
        r.check(name, Value::flag(c.passed), c.passed);
        details.push(json!({ "name": c.name, "subject": c.subject.map(|i| i + 2), "detail": c.detail }));
    }
    r.data = json!({ "conditions": details });
    Ok(r.finish())
}

/// Largest number of non-degenerate independent variables (counting the
/// constant) on `n` equally likely atoms, with the canonical system checked.
pub fn nmax(n: usize) -> Result<ExperimentReport> {
    let k = n_max(n)?;
    let mut r = ExperimentReport::new("discrete nmax");
    r.config("n", n);
    r.check("n_max", Value::Exact { value: k.to_string() }, true);
    let vars_count = k - 1;
    if (1..=BUILD_CAP).contains(&vars_count) {
        let (sp, vars) = build_max_system(vars_count)?;
        let fits = sp.n() <= n;
        r.check(format!("maximal system uses {} <= {n} atoms", sp.n()), Value::flag(fits), fits);
        let g = globally_independent(&sp, &vars)?;
        r.check(format!("maximal system of {vars_count} variables is independent"), Value::flag(g), g);
    }
    Ok(r.finish())
}

/// Gram rank of the monomials in `n_vars` i.i.d. copies of a variable with
/// `values` and `probs`, compared with `N^n_vars`.
pub fn walsh(values: &[Q], probs: &[Q], n_vars: usize) -> Result<ExperimentReport> {
    let rank = walsh_gram_rank(values, probs, n_vars)?;
    let full = values.len().pow(n_vars as u32);
    let mut r = ExperimentReport::new("discrete walsh");
    r.config("values", q_strings(values)).config("probs", q_strings(probs)).config("n_vars", n_vars);
    r.check_against(
        "monomial Gram rank",
        Value::Exact { value: rank.to_string() },
        Value::Exact { value: full.to_string() },
        rank == full,
    );
    Ok(r.finish())
}
