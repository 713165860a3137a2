//! `chaos norm`, `chaos ito`, `chaos order4`, `chaos qv` and `chaos bound4`.

use anyhow::{bail, Result};
use chaos::{
    coeffs_of, equivalence_constants, fourth_moment_grid, isometry_residual, ito_residual, mc, norm_identity,
    order_components, phi, quadratic_variation, riemann_diagnostic, triangle_kernel, Basis, BasisKind, GammaTables,
    NormVariant, PiecewisePoly, QvConfig, SymmetricKernel2,
};
use laws::rational::{fmt_q, q, to_f64};
use laws::{LawKind, Q};
use num_traits::{One, Zero};
use serde_json::json;

use crate::input::{function_json, q_strings};
use crate::report::{ExperimentReport, Table, TableRow, Value};

/// Standard errors allowed between a Monte Carlo mean and its exact target.
pub const MC_SIGMAS: f64 = 4.0;
/// Bound on relative pointwise residuals of algebraic identities.
pub const POINTWISE_TOL: f64 = 1e-10;
/// Smallest acceptable log-log slope of the fourth moment in `t - s`.
pub const MIN_SLOPE: f64 = 1.9;
/// Combined standard errors allowed between the finest quadratic variation and the limit.
pub const QV_SIGMAS: f64 = 3.0;

/// Settings shared by the chaos experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosOpts {
    pub law: LawKind,
    pub truncation: usize,
    pub basis: BasisKind,
    pub paths: usize,
    pub seed: u64,
    /// Dyadic depths; their meaning depends on the experiment.
    pub depths: Vec<u32>,
    /// First function (`h`, or `h_1`).
    pub h: PiecewisePoly,
    /// Second function (`g`, or `h_2`).
    pub g: PiecewisePoly,
}

impl ChaosOpts {
    /// Gaussian law, Legendre basis, `N = 8`, `h = g = 1`.
    pub fn new(law: LawKind, truncation: usize, paths: usize, seed: u64, depths: Vec<u32>) -> Self {
        let one = PiecewisePoly::constant(Q::one());
        ChaosOpts { law, truncation, basis: BasisKind::Legendre, paths, seed, depths, h: one.clone(), g: one }
    }

    fn setup(&self, command: &str) -> Result<(ExperimentReport, Basis, GammaTables)> {
        let mut r = ExperimentReport::new(command);
        r.config("law", self.law.label())
            .config("truncation", self.truncation)
            .config("basis", self.basis.to_string())
            .config("paths", self.paths)
            .config("seed", self.seed)
            .config("depths", self.depths.clone())
            .config("h", function_json(&self.h))
            .config("g", function_json(&self.g))
            .config("mc_sigmas", MC_SIGMAS)
            .config("pointwise_tol", POINTWISE_TOL);
        Ok((r, Basis::new(self.basis, self.truncation)?, GammaTables::for_law(&self.law)?))
    }
}

fn mc_check(r: &mut ExperimentReport, name: &str, est: &chaos::Estimate, target: f64) {
    r.check_against(name, Value::estimate(est), Value::float(target), est.within(target, MC_SIGMAS));
}

/// Exact second-moment identity of `I(h, g)` and the weighted-norm isometries.
pub fn norm(o: &ChaosOpts) -> Result<ExperimentReport> {
    let (mut r, basis, t) = o.setup("chaos norm")?;
    let k = triangle_kernel(&o.h, &o.g, &basis);
    let id = norm_identity(&k, &t)?;
    r.check_against("E|I(h,g)|^2 equals the kernel-norm identity", Value::exact(&id.lhs), Value::exact(&id.rhs()), id.holds());
    if o.law == LawKind::Normal01 {
        let zero = id.fourth_cumulant_term.is_zero();
        r.check("fourth-cumulant term vanishes for the normal law", Value::exact(&id.fourth_cumulant_term), zero);
    }
    let n = basis.len();
    let m = mc::run(&o.law, o.seed, o.paths, n, 2, |xs, out| {
        let v = k.integral(xs);
        out[0] = v;
        out[1] = v * v;
    })?;
    mc_check(&mut r, "E I(h,g)", &m.estimate(0), 0.0);
    mc_check(&mut r, "E I(h,g)^2", &m.estimate(1), to_f64(&id.lhs));
    // The raw triangle coefficients give a rational symmetric kernel for the
    // exact isometry and equivalence checks.
    let f = SymmetricKernel2::symmetrize(k.raw())?;
    for (label, v) in [("A", NormVariant::A), ("B", NormVariant::B), ("C", NormVariant::C)] {
        let res = isometry_residual(&f, v, &t)?;
        let zero = res.is_zero();
        r.check(format!("isometry residual for norm {label}"), Value::exact(&res), zero);
    }
    let (a, b) = equivalence_constants(&t);
    let j = f.j2_poly();
    let e = j.mul(&j).expect(t.moments())?;
    let fn2 = f.norm_sq();
    let inside = &a * &fn2 <= e && e <= &b * &fn2;
    r.check_against(
        "a |f|^2 <= E J_2(f)^2 <= b |f|^2",
        Value::exact(&e),
        Value::Exact { value: format!("[{}, {}]", fmt_q(&(&a * &fn2)), fmt_q(&(&b * &fn2))) },
        inside,
    );
    r.data = json!({
        "kernel_norm_sq": fmt_q(&id.kernel_norm_sq),
        "fourth_cumulant_term": fmt_q(&id.fourth_cumulant_term),
        "transpose_term": fmt_q(&id.transpose_term),
        "equivalence_constants": [fmt_q(&a), fmt_q(&b)],
    });
    Ok(r.finish())
}

/// Itô decomposition `Φ(h)Φ(g) = I(h,g) + I(g,h) + <h,g>` on Monte Carlo paths
/// and Riemann sums on `2^d` cells.
pub fn ito(o: &ChaosOpts) -> Result<ExperimentReport> {
    let (mut r, basis, t) = o.setup("chaos ito")?;
    let (ch, cg) = (coeffs_of(&o.h, None, &basis), coeffs_of(&o.g, None, &basis));
    let (khg, kgh) = (triangle_kernel(&o.h, &o.g, &basis), triangle_kernel(&o.g, &o.h, &basis));
    let m = mc::run(&o.law, o.seed, o.paths, basis.len(), 1, |xs, out| {
        let scale = 1.0 + (phi(&ch, xs) * phi(&cg, xs)).abs() + khg.integral(xs).abs() + kgh.integral(xs).abs();
        out[0] = (ito_residual(&ch, &cg, &khg, &kgh, xs) / scale).powi(2);
    })?;
    let rms = m.estimate(0).mean.sqrt();
    r.check_against("relative Ito residual (root mean square)", Value::float(rms), Value::float(POINTWISE_TOL), rms < POINTWISE_TOL);
    if o.depths.is_empty() {
        bail!("chaos ito needs at least one depth");
    }
    let cells: Vec<usize> = o.depths.iter().map(|&d| 1usize << d).collect();
    let rows = riemann_diagnostic(&o.h, &o.g, &basis, &cells, &t);
    let errs: Vec<Q> = rows.iter().map(|row| row.l2_error.clone()).collect();
    let monotone = errs.windows(2).all(|w| w[1] <= w[0]);
    r.check("Riemann-sum L2 error is non-increasing in depth", Value::flag(monotone), monotone);
    if let (Some(first), Some(last)) = (errs.first(), errs.last()) {
        let shrinks = errs.len() < 2 || last < first;
        r.check("Riemann-sum L2 error at the finest depth", Value::exact(last), shrinks);
    }
    r.tables.push(Table {
        name: "riemann_l2_error".into(),
        rows: o
            .depths
            .iter()
            .zip(&errs)
            .map(|(&depth, e)| TableRow { depth, estimate: to_f64(e), stderr: 0.0 })
            .collect(),
    });
    Ok(r.finish())
}

/// Order decomposition of `J_2(f)²` for the symmetrized triangle kernel of `(h, g)`.
pub fn order4(o: &ChaosOpts) -> Result<ExperimentReport> {
    let (mut r, basis, t) = o.setup("chaos order4")?;
    let f = triangle_kernel(&o.h, &o.g, &basis).symmetric();
    let comps = order_components(&f, &t)?;
    let lhs: f64 = comps.components.iter().map(|c| c.a_norm_sq(&t)).sum();
    let j = f.j2_poly();
    let sq = j.mul(&j);
    let direct = sq.mul(&sq).expect(t.moments())?;
    let agree = (lhs - direct).abs() <= 1e-9 * (1.0 + direct.abs());
    r.check_against("E J_2(f)^4 as the sum of the order norms", Value::float(lhs), Value::float(direct), agree);
    let m = mc::run(&o.law, o.seed, o.paths, basis.len(), 6, |xs, out| {
        let d = comps.evaluate(&f, &t, xs).expect("realizations have one coordinate per basis function");
        out[0] = (d.residual / d.scale).powi(2);
        out[1..5].copy_from_slice(&d.values[1..5]);
        out[5] = d.square * d.square;
    })?;
    let rms = m.estimate(0).mean.sqrt();
    r.check_against("relative decomposition residual (root mean square)", Value::float(rms), Value::float(POINTWISE_TOL), rms < POINTWISE_TOL);
    for i in 1..5 {
        mc_check(&mut r, &format!("E[order {i} component]"), &m.estimate(i), 0.0);
    }
    mc_check(&mut r, "E J_2(f)^4", &m.estimate(5), lhs);
    let norms: Vec<f64> = comps.components.iter().map(|c| c.a_norm_sq(&t)).collect();
    r.data = json!({ "order_norms": norms });
    Ok(r.finish())
}

/// Quadratic variation of `Z_t = I(h_1, h_2 1_{]0,t]})` along dyadic partitions.
pub fn qv(o: &ChaosOpts, horizon: &Q) -> Result<ExperimentReport> {
    let (mut r, basis, t) = o.setup("chaos qv")?;
    r.config("horizon", fmt_q(horizon)).config("qv_sigmas", QV_SIGMAS);
    let cfg = QvConfig { t: horizon.clone(), depths: o.depths.clone(), paths: o.paths, seed: o.seed };
    let rep = quadratic_variation(&o.h, &o.g, &basis, &o.law, &t, &cfg)?;
    mc_check(&mut r, "E RHS", &rep.rhs, to_f64(&rep.rhs_exact_mean));
    let monotone = rep.monotone();
    r.check("E|QV_d - RHS|^2 non-increasing in d within one standard error", Value::flag(monotone), monotone);
    if let (Some(last), Some((gap, se))) = (rep.rows.last(), rep.final_gap()) {
        r.check_against(
            format!("E QV_{} matches E RHS", last.depth),
            Value::estimate(&last.qv),
            Value::estimate(&rep.rhs),
            gap <= QV_SIGMAS * se,
        );
    }
    // Informational: the third-moment correction, zero for symmetric laws.
    r.check("third-moment correction term", Value::estimate(&rep.m3_term), true);
    let table = |name: &str, pick: fn(&chaos::QvRow) -> chaos::Estimate| Table {
        name: name.into(),
        rows: rep
            .rows
            .iter()
            .map(|row| {
                let e = pick(row);
                TableRow { depth: row.depth, estimate: e.mean, stderr: e.stderr }
            })
            .collect(),
    };
    r.tables.push(table("qv_mse", |row| row.mse));
    r.tables.push(table("qv_mean", |row| row.qv));
    r.data = json!({ "rhs_exact_mean": fmt_q(&rep.rhs_exact_mean) });
    Ok(r.finish())
}

/// Left ends of the default fourth-moment grid.
pub fn default_lefts() -> Vec<Q> {
    (0..4).map(|i| q(i, 4)).collect()
}

/// Fourth-moment bound on the grid `s in lefts`, `t - s = 2^-d` for `d in depths`.
pub fn bound4(o: &ChaosOpts, lefts: &[Q]) -> Result<ExperimentReport> {
    let (mut r, basis, t) = o.setup("chaos bound4")?;
    if let Some(d) = o.depths.iter().find(|&&d| d > 62) {
        bail!("width depth {d} is too large");
    }
    r.config("lefts", q_strings(lefts)).config("min_slope", MIN_SLOPE);
    let widths: Vec<Q> = o.depths.iter().map(|&d| q(1, 1i64 << d)).collect();
    let grid = fourth_moment_grid(&o.h, &o.g, lefts, &widths, &basis, &t)?;
    let consistent = grid.points.iter().all(|p| (p.lhs - p.lhs_direct).abs() <= 1e-9 * (1.0 + p.lhs_direct.abs()));
    r.check("order decomposition matches the direct fourth moment at every point", Value::flag(consistent), consistent);
    for p in &grid.points {
        r.check_against(
            format!("E|Z_t - Z_s|^4 <= bound at s={}, t={}", fmt_q(&p.s), fmt_q(&p.t)),
            Value::float(p.lhs),
            Value::float(p.rhs),
            p.holds(),
        );
    }
    for (s, slope) in &grid.slopes {
        let name = format!("log-log slope in t-s at s={}", fmt_q(s));
        match slope {
            Some(v) => r.check_against(name, Value::float(*v), Value::float(MIN_SLOPE), *v >= MIN_SLOPE),
            None => r.check(name, Value::flag(false), false),
        };
    }
    for s in lefts {
        let rows: Vec<TableRow> = grid
            .points
            .iter()
            .filter(|p| &p.s == s)
            .map(|p| {
                let w = &p.t - &p.s;
                let depth = o.depths[widths.iter().position(|x| *x == w).expect("grid widths")];
                TableRow { depth, estimate: p.lhs, stderr: 0.0 }
            })
            .collect();
        r.tables.push(Table { name: format!("fourth_moment_s={}", fmt_q(s)), rows });
    }
    let constants: Vec<String> = grid.points.first().map(|p| q_strings(&p.constants)).unwrap_or_default();
    let truncated: Vec<_> = grid
        .points
        .iter()
        .map(|p| json!({ "s": fmt_q(&p.s), "t": fmt_q(&p.t), "rhs_truncated": p.rhs_truncated, "holds_truncated": p.holds_truncated() }))
        .collect();
    r.data = json!({ "c_constants": constants, "truncated_bounds": truncated });
    Ok(r.finish())
}
