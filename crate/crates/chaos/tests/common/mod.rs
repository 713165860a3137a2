//! Random inputs shared by the integration tests.
#![allow(dead_code)]

use chaos::{PiecewisePoly, SymmetricKernel2};
use laws::rational::{q, qi};
use laws::{LawKind, Poly, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational in `[-3, 3]` with denominator at most 4.
pub fn rand_q(r: &mut ChaCha8Rng) -> Q {
    q(r.gen_range(-12..=12), r.gen_range(1..=4))
}

pub fn rand_kernel_q(r: &mut ChaCha8Rng, n: usize) -> SymmetricKernel2<Q> {
    let diag = (0..n).map(|_| rand_q(r)).collect();
    let lower: Vec<Vec<Q>> = (0..n).map(|j| (0..j).map(|_| rand_q(r)).collect()).collect();
    SymmetricKernel2::from_parts(diag, &lower).unwrap()
}

pub fn rand_kernel_f64(r: &mut ChaCha8Rng, n: usize) -> SymmetricKernel2<f64> {
    let diag = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
    let lower: Vec<Vec<f64>> = (0..n).map(|j| (0..j).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
    SymmetricKernel2::from_parts(diag, &lower).unwrap()
}

/// Piecewise polynomial of degree at most 2 with breaks among the quarters.
pub fn rand_piecewise(r: &mut ChaCha8Rng) -> PiecewisePoly {
    let mut breaks = vec![qi(0)];
    for i in 1..4 {
        if r.gen_bool(0.5) {
            breaks.push(q(i, 4));
        }
    }
    breaks.push(qi(1));
    let pieces = (1..breaks.len())
        .map(|_| Poly::new((0..3).map(|_| rand_q(r)).collect()))
        .collect();
    PiecewisePoly::new(breaks, pieces).unwrap()
}

pub fn gaussian() -> LawKind {
    LawKind::Normal01
}

pub fn exponential() -> LawKind {
    LawKind::exponential(qi(1))
}

pub fn realization(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-2.5..2.5)).collect()
}
