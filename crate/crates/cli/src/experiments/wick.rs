//! `wick table` and `wick gram`.

use anyhow::Result;
use laws::rational::{binom, fmt_q, qi};
use laws::{LawKind, MomentSequence, Q};
use num_traits::{One, Zero};
use serde_json::json;
use wick::{format_table, ode_residual, wick_explicit, wick_gram_matrix, wick_recurrence1, wick_recurrence2, Ode};

use crate::report::{ExperimentReport, Value};

/// Wick polynomials `W_0..W_max_n` with the cross-method and ODE checks.
pub fn table(law: &LawKind, max_n: usize) -> Result<ExperimentReport> {
    let m = law.moments(max_n)?;
    let mut r = ExperimentReport::new("wick table");
    r.config("law", law.label()).config("max_n", max_n);
    let mut table = Vec::with_capacity(max_n + 1);
    let mut rows = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let w = wick_explicit(&m, n)?;
        let agree = w == wick_recurrence1(&m, n)? && w == wick_recurrence2(&m, n)?;
        r.check(format!("W_{n}: explicit = recurrence 1 = recurrence 2"), Value::flag(agree), agree);
        for (label, which) in [("first", Ode::First), ("second", Ode::Second)] {
            let zero = ode_residual(&w, &m, which)?.is_zero();
            r.check(format!("W_{n}: {label} differential equation residual is zero"), Value::flag(zero), zero);
        }
        if n > 0 {
            let centered = w.is_centered(&m);
            r.check(format!("W_{n}: E W_{n}(X) = 0"), Value::flag(centered), centered);
        }
        rows.push(json!({
            "n": n,
            "coeffs": w.coeffs().iter().map(fmt_q).collect::<Vec<_>>(),
            "poly": w.poly().to_string(),
        }));
        table.push(w);
    }
    r.data = json!({ "polynomials": rows, "text": format_table(&table) });
    Ok(r.finish())
}

/// Raw moments `m_0..m_k` of the normal law with the given mean and variance.
fn gaussian_moments(mean: &Q, var: &Q, k: usize) -> Vec<Q> {
    // Central moments: var^j (2j-1)!! at even orders, zero at odd orders.
    let mut central = vec![Q::zero(); k + 1];
    central[0] = Q::one();
    for i in (2..=k).step_by(2) {
        central[i] = &central[i - 2] * var * qi(i as i64 - 1);
    }
    (0..=k)
        .map(|n| {
            (0..=n).fold(Q::zero(), |acc, i| {
                acc + Q::from_integer(binom(n, i)) * &central[i] * num_traits::pow(mean.clone(), n - i)
            })
        })
        .collect()
}

/// True when the moments up to order `k` are those of a normal law.
fn has_gaussian_moments(m: &MomentSequence, k: usize) -> Result<bool> {
    let mean = m.mean()?;
    let var = m.variance()?;
    Ok(!var.is_zero() && m.truncate(k)?.as_slice() == gaussian_moments(&mean, &var, k).as_slice())
}

/// Gram matrix of `W_0..W_max_n`, checked against the orthogonality dichotomy:
/// diagonal exactly for normal laws.
pub fn gram(law: &LawKind, max_n: usize) -> Result<ExperimentReport> {
    let m = law.moments(2 * max_n)?;
    let g = wick_gram_matrix(&m, max_n)?;
    let mut r = ExperimentReport::new("wick gram");
    r.config("law", law.label()).config("max_n", max_n);
    let off: Vec<(usize, usize)> = (0..=max_n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .filter(|&(i, j)| !g[i][j].is_zero())
        .collect();
    let diagonal = off.is_empty();
    let gaussian = has_gaussian_moments(&m, 2 * max_n)?;
    r.check_against(
        "Gram matrix is diagonal exactly when the law is normal",
        Value::flag(diagonal),
        Value::flag(gaussian),
        diagonal == gaussian,
    );
    let matrix: Vec<Vec<String>> = g.iter().map(|row| row.iter().map(fmt_q).collect()).collect();
    r.data = json!({ "gram": matrix, "nonzero_off_diagonal": off.len() });
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use laws::rational::q;

    #[test]
    fn gaussian_moment_oracle() {
        let m = gaussian_moments(&qi(0), &qi(1), 6);
        assert_eq!(m, [1, 0, 1, 0, 3, 0, 15].map(|v| qi(v)).to_vec());
        let shifted = LawKind::Custom { moments: MomentSequence::new(gaussian_moments(&q(1, 2), &qi(3), 8)).unwrap() };
        assert!(gram(&shifted, 4).unwrap().passed());
    }

    #[test]
    fn tables_pass_for_the_catalog() {
        for law in [LawKind::Normal01, LawKind::Poisson { a: qi(2) }] {
            assert!(table(&law, 5).unwrap().passed());
            assert!(gram(&law, 4).unwrap().passed());
        }
    }
}
