//! Parsing of command-line values: rationals, lists, piecewise polynomials
//! and finite spaces given as JSON.

use anyhow::{anyhow, bail, Context, Result};
use chaos::PiecewisePoly;
use laws::rational::{fmt_q, parse_q};
use laws::{Poly, Q};
use serde::Deserialize;
use serde_json::{json, Value as Json};

/// A rational written as a JSON integer or a `"p/q"` / decimal string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Rat {
    Int(i64),
    Str(String),
}

impl Rat {
    fn to_q(&self) -> Result<Q> {
        match self {
            Rat::Int(i) => Ok(Q::from_integer((*i).into())),
            Rat::Str(s) => parse_q(s).map_err(|e| anyhow!("{e}")),
        }
    }
}

/// A function on `[0, 1]`: a constant, one polynomial (ascending
/// coefficients) or pieces on `]breaks[i], breaks[i+1]]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum FuncSpec {
    Constant(Rat),
    Poly { poly: Vec<Rat> },
    Piecewise { breaks: Vec<Rat>, pieces: Vec<Vec<Rat>> },
}

fn poly_of(c: &[Rat]) -> Result<Poly> {
    Ok(Poly::new(c.iter().map(Rat::to_q).collect::<Result<_>>()?))
}

/// Parses a piecewise polynomial from JSON, e.g. `1`, `{"poly": ["0", "1"]}`
/// or `{"breaks": [0, "1/2", 1], "pieces": [[1], [0, 2]]}`.
pub fn parse_function(s: &str) -> Result<PiecewisePoly> {
    let spec: FuncSpec = serde_json::from_str(s).with_context(|| format!("bad function JSON: {s}"))?;
    match spec {
        FuncSpec::Constant(c) => Ok(PiecewisePoly::constant(c.to_q()?)),
        FuncSpec::Poly { poly } => Ok(PiecewisePoly::poly(poly_of(&poly)?)),
        FuncSpec::Piecewise { breaks, pieces } => {
            let breaks = breaks.iter().map(Rat::to_q).collect::<Result<_>>()?;
            let pieces = pieces.iter().map(|p| poly_of(p)).collect::<Result<_>>()?;
            Ok(PiecewisePoly::new(breaks, pieces)?)
        }
    }
}

/// JSON echo of a piecewise polynomial in the `breaks`/`pieces` form.
pub fn function_json(f: &PiecewisePoly) -> Json {
    let breaks: Vec<String> = f.breaks().iter().map(fmt_q).collect();
    let pieces: Vec<Vec<String>> = f.pieces().iter().map(|p| p.coeffs().iter().map(fmt_q).collect()).collect();
    json!({ "breaks": breaks, "pieces": pieces })
}

/// Parses a JSON array of rationals, e.g. `["1/4", "3/4"]` or `[1, 2]`.
pub fn parse_rational_array(s: &str) -> Result<Vec<Q>> {
    let v: Vec<Rat> = serde_json::from_str(s).with_context(|| format!("expected a JSON array of rationals: {s}"))?;
    v.iter().map(Rat::to_q).collect()
}

/// Parses a comma-separated list of rationals such as `1/3,1/2,2/5`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_q(p).map_err(|e| anyhow!("{e}")))
        .collect()
}

/// Parses a jump `F(X_0),delta`.
pub fn parse_jump(s: &str) -> Result<(Q, Q)> {
    match parse_rational_list(s)?.as_slice() {
        [f0, delta] => Ok((f0.clone(), delta.clone())),
        _ => bail!("a jump is given as 'F(X_0),delta', got '{s}'"),
    }
}

pub fn q_strings(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}
