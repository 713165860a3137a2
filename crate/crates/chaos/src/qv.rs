//! Quadratic variation of `Z_t = I(h_1, h_2 1_{]0,t]})` along dyadic
//! partitions, compared per realization with
//! `∫_0^t h_2² Φ(h_1 1_{]0,s]})² ds + m_3 ∫_0^t h_2² Σ_j c_j(s)² X_j ds`.
//!
//! Increments of `Z` over the finest cells are exact rationals converted once
//! to floats; coarser increments are sums of consecutive finest ones.

use laws::rational::{q, to_f64};
use laws::{LawKind, Q};
use num_traits::Zero;
use rayon::prelude::*;

use crate::basis::Basis;
use crate::func::PiecewisePoly;
use crate::mc::{self, Estimate};
use crate::tables::GammaTables;
use crate::ChaosError;

/// Largest supported partition depth.
pub const MAX_DEPTH: u32 = 12;

/// Quadratic-variation experiment settings.
#[derive(Debug, Clone, PartialEq)]
pub struct QvConfig {
    /// Horizon `t`.
    pub t: Q,
    /// Dyadic depths `d`; the partition of `[0, t]` has `2^d` cells.
    pub depths: Vec<u32>,
    /// Monte Carlo paths.
    pub paths: usize,
    /// Generator seed.
    pub seed: u64,
}

/// One row of the convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct QvRow {
    /// Depth `d`.
    pub depth: u32,
    /// Estimate of `E|QV_d - RHS|²`.
    pub mse: Estimate,
    /// Estimate of `E QV_d`.
    pub qv: Estimate,
}

/// Result of the quadratic-variation experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct QvReport {
    /// Rows by increasing depth.
    pub rows: Vec<QvRow>,
    /// Estimate of `E RHS`.
    pub rhs: Estimate,
    /// Estimate of the `m_3` correction term alone.
    pub m3_term: Estimate,
    /// Exact `E RHS = ∫_0^t h_2² Σ_j c_j(s)² ds`.
    pub rhs_exact_mean: Q,
}

impl QvReport {
    /// `E|QV_d - RHS|²` does not increase with `d` by more than one combined
    /// standard error between consecutive depths.
    pub fn monotone(&self) -> bool {
        self.rows.windows(2).all(|w| {
            let tol = w[0].mse.stderr.hypot(w[1].mse.stderr);
            w[1].mse.mean <= w[0].mse.mean + tol
        })
    }

    /// `|mean(QV_d) - mean(RHS)|` and the combined standard error at the finest depth.
    pub fn final_gap(&self) -> Option<(f64, f64)> {
        let last = self.rows.last()?;
        Some(((last.qv.mean - self.rhs.mean).abs(), last.qv.stderr.hypot(self.rhs.stderr)))
    }

    /// Finest-depth gap within `k` combined standard errors.
    pub fn converged(&self, k: f64) -> bool {
        self.final_gap().is_some_and(|(gap, se)| gap <= k * se)
    }
}

/// Sparse increment of `Z` over one cell:
/// `Σ off (w x_j x_k) + Σ diag (w (x_j² - 1))`.
#[derive(Debug, Clone, Default, PartialEq)]
struct CellIncrement {
    off: Vec<(u32, u32, f64)>,
    diag: Vec<(u32, f64)>,
}

impl CellIncrement {
    fn eval(&self, xs: &[f64]) -> f64 {
        let a: f64 = self.off.iter().map(|&(j, k, w)| w * xs[j as usize] * xs[k as usize]).sum();
        let b: f64 = self.diag.iter().map(|&(j, w)| w * (xs[j as usize] * xs[j as usize] - 1.0)).sum();
        a + b
    }
}

fn support(f: &PiecewisePoly) -> Option<(Q, Q)> {
    let b = f.breaks();
    let nz: Vec<usize> = (0..f.pieces().len()).filter(|&i| !f.pieces()[i].is_zero()).collect();
    Some((b[*nz.first()?].clone(), b[*nz.last()? + 1].clone()))
}

/// Exact finest-cell increments `D^i_{jk} / sqrt(nu_j nu_k)` for every pair.
fn cell_increments(
    h1: &PiecewisePoly,
    h2: &PiecewisePoly,
    basis: &Basis,
    t: &Q,
    cells: usize,
) -> Vec<CellIncrement> {
    let n = basis.len();
    let grid: Vec<Q> = (0..=cells).map(|i| t * q(i as i64, cells as i64)).collect();
    let inner: Vec<PiecewisePoly> = (0..n).map(|j| h1.mul(basis.p(j)).antiderivative()).collect();
    let outer: Vec<PiecewisePoly> = (0..n).map(|k| h2.mul(basis.p(k))).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).collect();
    // Per pair: the nonzero finest increments as (cell, value).
    let per_pair: Vec<Vec<(usize, f64)>> = pairs
        .par_iter()
        .map(|&(j, k)| {
            let integrand = outer[k].mul(&inner[j]);
            let Some((lo, hi)) = support(&integrand) else {
                return Vec::new();
            };
            let anti = integrand.antiderivative();
            let scale = basis.inv_sqrt_nu(j) * basis.inv_sqrt_nu(k);
            let mut out = Vec::new();
            let mut prev: Option<Q> = None;
            for i in 0..cells {
                if grid[i + 1] <= lo || grid[i] >= hi {
                    prev = None;
                    continue;
                }
                let a = prev.take().unwrap_or_else(|| anti.eval(&grid[i]));
                let b = anti.eval(&grid[i + 1]);
                let d = &b - &a;
                if !d.is_zero() {
                    out.push((i, to_f64(&d) * scale));
                }
                prev = Some(b);
            }
            out
        })
        .collect();
    let mut incs = vec![CellIncrement::default(); cells];
    for (&(j, k), list) in pairs.iter().zip(&per_pair) {
        for &(i, v) in list {
            let cell = &mut incs[i];
            if j == k {
                cell.diag.push((j as u32, v));
            } else {
                let (a, b) = if j > k { (j, k) } else { (k, j) };
                cell.off.push((a as u32, b as u32, v));
            }
        }
    }
    for cell in &mut incs {
        cell.off.sort_by_key(|&(a, b, _)| (a, b));
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(cell.off.len());
        for &(a, b, v) in &cell.off {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += v,
                _ => merged.push((a, b, v)),
            }
        }
        cell.off = merged;
    }
    incs
}

/// `G_{jk} = ∫_0^t h_2² H_j H_k / sqrt(nu_j nu_k)` with `H_j = ∫_0^· h_1 p_j`.
fn rhs_matrix(h1: &PiecewisePoly, h2: &PiecewisePoly, basis: &Basis, t: &Q) -> (Vec<Vec<f64>>, Q) {
    let n = basis.len();
    let w = h2.mul(h2).cut(&Q::zero(), t);
    let inner: Vec<PiecewisePoly> = (0..n).map(|j| h1.mul(basis.p(j)).antiderivative()).collect();
    let weighted: Vec<PiecewisePoly> = inner.iter().map(|hj| hj.mul(&w)).collect();
    let rows: Vec<(Vec<f64>, Q)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut diag = Q::zero();
            let row = (0..n)
                .map(|k| {
                    let g = weighted[j].mul(&inner[k]).integral();
                    if j == k {
                        diag = &g / basis.nu(j);
                    }
                    to_f64(&g) * basis.inv_sqrt_nu(j) * basis.inv_sqrt_nu(k)
                })
                .collect();
            (row, diag)
        })
        .collect();
    let trace = rows.iter().fold(Q::zero(), |acc, (_, d)| acc + d);
    (rows.into_iter().map(|(r, _)| r).collect(), trace)
}

/// Runs the quadratic-variation experiment.
pub fn quadratic_variation(
    h1: &PiecewisePoly,
    h2: &PiecewisePoly,
    basis: &Basis,
    law: &LawKind,
    tables: &GammaTables,
    cfg: &QvConfig,
) -> Result<QvReport, ChaosError> {
    let mut depths = cfg.depths.clone();
    depths.sort_unstable();
    depths.dedup();
    let dmax = *depths
        .last()
        .ok_or_else(|| ChaosError::InvalidArgument("no partition depths".into()))?;
    if dmax > MAX_DEPTH {
        return Err(ChaosError::InvalidArgument(format!("depth {dmax} exceeds {MAX_DEPTH}")));
    }
    if cfg.t < Q::zero() || cfg.t > Q::from_integer(1.into()) {
        return Err(ChaosError::InvalidArgument(format!("horizon {} outside [0, 1]", cfg.t)));
    }
    let cells = 1usize << dmax;
    let incs = cell_increments(h1, h2, basis, &cfg.t, cells);
    let (g, rhs_exact_mean) = rhs_matrix(h1, h2, basis, &cfg.t);
    let m3 = to_f64(tables.m(3));
    let n = basis.len();
    let nd = depths.len();
    let moments = mc::run(law, cfg.seed, cfg.paths, n, 2 * nd + 2, |xs, out| {
        let fine: Vec<f64> = incs.iter().map(|c| c.eval(xs)).collect();
        let mut quad = 0.0;
        let mut lin = 0.0;
        for (j, row) in g.iter().enumerate() {
            let inner: f64 = row.iter().zip(xs).map(|(a, x)| a * x).sum();
            quad += inner * xs[j];
            lin += row[j] * xs[j];
        }
        let rhs = quad + m3 * lin;
        for (i, &d) in depths.iter().enumerate() {
            let block = 1usize << (dmax - d);
            let qv: f64 = fine.chunks(block).map(|c| c.iter().sum::<f64>().powi(2)).sum();
            out[2 * i] = (qv - rhs).powi(2);
            out[2 * i + 1] = qv;
        }
        out[2 * nd] = rhs;
        out[2 * nd + 1] = m3 * lin;
    })?;
    let rows = depths
        .iter()
        .enumerate()
        .map(|(i, &depth)| QvRow {
            depth,
            mse: moments.estimate(2 * i),
            qv: moments.estimate(2 * i + 1),
        })
        .collect();
    Ok(QvReport {
        rows,
        rhs: moments.estimate(2 * nd),
        m3_term: moments.estimate(2 * nd + 1),
        rhs_exact_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use laws::rational::qi;

    #[test]
    fn zero_horizon_gives_zero() {
        let one = PiecewisePoly::constant(qi(1));
        let basis = Basis::legendre(4).unwrap();
        let law = LawKind::Normal01;
        let tables = GammaTables::for_law(&law).unwrap();
        let cfg = QvConfig { t: Q::zero(), depths: vec![2, 3], paths: 100, seed: 1 };
        let r = quadratic_variation(&one, &one, &basis, &law, &tables, &cfg).unwrap();
        assert!(r.rows.iter().all(|row| row.qv.mean == 0.0 && row.mse.mean == 0.0));
        assert_eq!(r.rhs.mean, 0.0);
    }

    #[test]
    fn finest_increments_sum_to_the_integral() {
        let one = PiecewisePoly::constant(qi(1));
        let basis = Basis::legendre(5).unwrap();
        let incs = cell_increments(&one, &one, &basis, &qi(1), 8);
        let k = crate::kernel::triangle_kernel(&one, &one, &basis);
        let xs = [0.3, -1.2, 0.7, 2.0, -0.4];
        let total: f64 = incs.iter().map(|c| c.eval(&xs)).sum();
        assert!((total - k.integral(&xs)).abs() < 1e-12);
    }
}
