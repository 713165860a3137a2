//! Deterministic, data-parallel Monte Carlo over i.i.d. standardized draws.
//!
//! Paths are split into fixed-size chunks; chunk `i` draws from stream `i` of
//! the seeded generator, and chunk results are merged in chunk order. The
//! output therefore depends only on `(law, seed, paths)`, not on the number of
//! worker threads.

use laws::{LawKind, Sampler};
use rayon::prelude::*;

use crate::ChaosError;

/// Paths per chunk (and per random stream).
pub const CHUNK_PATHS: usize = 256;

/// Mean and standard error of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    /// Sample mean.
    pub mean: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    /// Number of samples.
    pub n: usize,
}

impl Estimate {
    /// True when `|mean - target| <= k * stderr` (with a tiny absolute slack
    /// for degenerate zero-variance estimates).
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr + 1e-12 * (1.0 + target.abs())
    }
}

/// Running mean and centered second moment of several channels, mergeable
/// by the parallel update formula.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    n: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    /// Empty accumulator with `channels` channels.
    pub fn new(channels: usize) -> Self {
        Moments { n: 0, mean: vec![0.0; channels], m2: vec![0.0; channels] }
    }

    /// Adds one observation per channel.
    pub fn push(&mut self, values: &[f64]) {
        self.n += 1;
        let n = self.n as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(&mut self.m2).zip(values) {
            let d = v - *m;
            *m += d / n;
            *s += d * (v - *m);
        }
    }

    /// Merges another accumulator into this one.
    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        for c in 0..self.mean.len() {
            let d = other.mean[c] - self.mean[c];
            self.mean[c] += d * nb / n;
            self.m2[c] += other.m2[c] + d * d * na * nb / n;
        }
        self.n += other.n;
    }

    /// Number of observations.
    pub fn count(&self) -> usize {
        self.n
    }

    /// Estimate for channel `c`.
    pub fn estimate(&self, c: usize) -> Estimate {
        let var = if self.n > 1 { self.m2[c] / (self.n as f64 - 1.0) } else { 0.0 };
        Estimate { mean: self.mean[c], stderr: (var / self.n.max(1) as f64).sqrt(), n: self.n }
    }
}

/// Runs `paths` realizations of `dim` i.i.d. standardized draws of `law`,
/// recording `channels` values per path through `observe`.
pub fn run<F>(
    law: &LawKind,
    seed: u64,
    paths: usize,
    dim: usize,
    channels: usize,
    observe: F,
) -> Result<Moments, ChaosError>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    Sampler::new(law, seed, 0)?;
    let chunks = paths.div_ceil(CHUNK_PATHS);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut sampler = Sampler::new(law, seed, i as u64)
                .unwrap_or_else(|_| unreachable!("sampler validated above"));
            let count = CHUNK_PATHS.min(paths - i * CHUNK_PATHS);
            let mut xs = vec![0.0; dim];
            let mut out = vec![0.0; channels];
            let mut acc = Moments::new(channels);
            for _ in 0..count {
                sampler.fill(&mut xs);
                observe(&xs, &mut out);
                acc.push(&out);
            }
            acc
        })
        .collect();
    let mut total = Moments::new(channels);
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_sequential() {
        let data: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut seq = Moments::new(1);
        for v in &data {
            seq.push(&[*v]);
        }
        let mut a = Moments::new(1);
        let mut b = Moments::new(1);
        for v in &data[..37] {
            a.push(&[*v]);
        }
        for v in &data[37..] {
            b.push(&[*v]);
        }
        a.merge(&b);
        assert!((a.estimate(0).mean - seq.estimate(0).mean).abs() < 1e-14);
        assert!((a.estimate(0).stderr - seq.estimate(0).stderr).abs() < 1e-14);
    }

    #[test]
    fn runs_are_reproducible() {
        let law = LawKind::Normal01;
        let f = |xs: &[f64], out: &mut [f64]| out[0] = xs[0] * xs[1];
        let a = run(&law, 7, 1000, 2, 1, f).unwrap();
        let b = run(&law, 7, 1000, 2, 1, f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count(), 1000);
        assert!(a.estimate(0).within(0.0, 5.0));
    }
}
