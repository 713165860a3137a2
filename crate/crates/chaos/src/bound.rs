//! Fourth-moment bound for increments of the integral process
//! `Z_t = I(h_1, h_2 1_{]0,t]})` and its scaling in `t - s`.

use laws::rational::to_f64;
use laws::Q;
use num_traits::Zero;

use crate::basis::{coeffs_of, Basis};
use crate::func::PiecewisePoly;
use crate::kernel::triangle_kernel;
use crate::tables::GammaTables;
use crate::tensor::order_components;
use crate::ChaosError;

/// Both sides of `E|Z_t - Z_s|⁴ <= (7/2 C_{4,1} + C_{4,2} + C_{4,3} + C_{4,4} + 2)
/// ‖h_1‖_A⁴ ‖h_2 1_{]s,t]}‖_A⁴` at one `(s, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourthMoment {
    /// Left end `s`.
    pub s: Q,
    /// Right end `t`.
    pub t: Q,
    /// `Σ_i E[(order i)²]` from the order decomposition.
    pub lhs: f64,
    /// `E[J_2(f)⁴]` expanded directly, as a cross-check of `lhs`.
    pub lhs_direct: f64,
    /// The bound with the untruncated norms `‖h_1‖⁴ ‖h_2 1_{]s,t]}‖⁴`.
    pub rhs: f64,
    /// The bound with both norms truncated at `N`.
    pub rhs_truncated: f64,
    /// `C_{4,1}..C_{4,4}`.
    pub constants: [Q; 4],
    /// `‖h_1‖²`.
    pub h1_norm_sq: Q,
    /// `‖h_2 1_{]s,t]}‖²`.
    pub h2_norm_sq: Q,
}

impl FourthMoment {
    /// `lhs <= rhs`, with a relative rounding allowance.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-9)
    }

    /// `lhs <= rhs_truncated`, with a relative rounding allowance.
    pub fn holds_truncated(&self) -> bool {
        self.lhs <= self.rhs_truncated * (1.0 + 1e-9)
    }
}

/// The bound's constant `7/2 C_{4,1} + C_{4,2} + C_{4,3} + C_{4,4} + 2`.
pub fn bound_constant(c: &[Q; 4]) -> Q {
    Q::new(7.into(), 2.into()) * &c[0] + &c[1] + &c[2] + &c[3] + Q::from_integer(2.into())
}

/// Evaluates the fourth-moment bound at one `(s, t)`.
pub fn fourth_moment_check(
    h1: &PiecewisePoly,
    h2: &PiecewisePoly,
    s: &Q,
    t: &Q,
    basis: &Basis,
    tables: &GammaTables,
) -> Result<FourthMoment, ChaosError> {
    if s > t || s < &Q::zero() || t > &Q::from_integer(1.into()) {
        return Err(ChaosError::InvalidArgument(format!("need 0 <= s <= t <= 1, got s={s}, t={t}")));
    }
    let g = h2.cut(s, t);
    let f = triangle_kernel(h1, &g, basis).symmetric();
    let comps = order_components(&f, tables)?;
    let lhs: f64 = comps.components.iter().map(|c| c.a_norm_sq(tables)).sum();
    let j = f.j2_poly();
    let sq = j.mul(&j);
    let lhs_direct = sq.mul(&sq).expect(tables.moments())?;
    let constants = [1, 2, 3, 4].map(|k| tables.c_const(k, 4));
    let k = bound_constant(&constants);
    let bound = |a: &Q, b: &Q| to_f64(&(&k * a * a * b * b));
    let h1_norm_sq = h1.norm_sq();
    let h2_norm_sq = g.norm_sq();
    let rhs = bound(&h1_norm_sq, &h2_norm_sq);
    let rhs_truncated = bound(
        &coeffs_of(h1, None, basis).norm_sq_exact().unwrap_or_default(),
        &coeffs_of(&g, None, basis).norm_sq_exact().unwrap_or_default(),
    );
    Ok(FourthMoment {
        s: s.clone(),
        t: t.clone(),
        lhs,
        lhs_direct,
        rhs,
        rhs_truncated,
        constants,
        h1_norm_sq,
        h2_norm_sq,
    })
}

/// Least-squares slope of `log y` against `log x`, skipping non-positive `y`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Fourth-moment checks over a grid of left ends and widths.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundGrid {
    /// One entry per `(s, t - s)` pair, grouped by `s`.
    pub points: Vec<FourthMoment>,
    /// Log-log slope of `lhs` against `t - s`, one per left end.
    pub slopes: Vec<(Q, Option<f64>)>,
}

impl BoundGrid {
    /// True when the bound holds at every grid point.
    pub fn all_hold(&self) -> bool {
        self.points.iter().all(FourthMoment::holds)
    }

    /// Smallest per-`s` slope.
    pub fn min_slope(&self) -> Option<f64> {
        self.slopes.iter().filter_map(|(_, v)| *v).reduce(f64::min)
    }
}

/// Runs the fourth-moment check on every `(s, s + w)` with `s + w <= 1`.
pub fn fourth_moment_grid(
    h1: &PiecewisePoly,
    h2: &PiecewisePoly,
    lefts: &[Q],
    widths: &[Q],
    basis: &Basis,
    tables: &GammaTables,
) -> Result<BoundGrid, ChaosError> {
    let mut points = Vec::new();
    let mut slopes = Vec::new();
    for s in lefts {
        let mut curve = Vec::new();
        for w in widths {
            let t = s + w;
            if t > Q::from_integer(1.into()) {
                continue;
            }
            let p = fourth_moment_check(h1, h2, s, &t, basis, tables)?;
            curve.push((to_f64(w), p.lhs));
            points.push(p);
        }
        slopes.push((s.clone(), loglog_slope(&curve)));
    }
    Ok(BoundGrid { points, slopes })
}
