//! Symmetric products, contractions and annihilations compared entry by entry
//! with their closed-form series, summed directly over ordered index tuples.

mod common;

use chaos::{GammaTables, SymTensor, SymmetricKernel2};
use laws::rational::qi;
use laws::{LawKind, Q};
use num_traits::Zero;

fn key(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// `f∘f` from the series over `j4 < j3 < j2 < j1`, `j3 < j2 < j1` and `j2 < j1`.
fn square_series(f: &SymmetricKernel2<Q>) -> SymTensor<Q> {
    let n = f.n();
    let a = |j: usize, k: usize| f.entry(j, k).clone();
    let d = |j: usize| f.diag(j).clone();
    let mut out = SymTensor::zero(4);
    for j1 in 0..n {
        out.add_coeff(vec![j1; 4], d(j1) * d(j1));
        for j2 in 0..j1 {
            out.add_coeff(key(vec![j1, j1, j1, j2]), qi(4) * d(j1) * a(j1, j2));
            out.add_coeff(key(vec![j1, j2, j2, j2]), qi(4) * a(j1, j2) * d(j2));
            out.add_coeff(key(vec![j1, j1, j2, j2]), qi(4) * a(j1, j2) * a(j1, j2) + qi(2) * d(j1) * d(j2));
            for j3 in 0..j2 {
                out.add_coeff(
                    key(vec![j1, j1, j2, j3]),
                    qi(8) * a(j1, j2) * a(j1, j3) + qi(4) * d(j1) * a(j2, j3),
                );
                out.add_coeff(
                    key(vec![j1, j2, j2, j3]),
                    qi(8) * a(j1, j2) * a(j2, j3) + qi(4) * d(j2) * a(j1, j3),
                );
                out.add_coeff(
                    key(vec![j1, j2, j3, j3]),
                    qi(8) * a(j1, j3) * a(j2, j3) + qi(4) * a(j1, j2) * d(j3),
                );
                for j4 in 0..j3 {
                    out.add_coeff(
                        key(vec![j1, j2, j3, j4]),
                        qi(8) * (a(j1, j2) * a(j3, j4) + a(j1, j3) * a(j2, j4) + a(j1, j4) * a(j2, j3)),
                    );
                }
            }
        }
    }
    out
}

/// `f ∼₁ f` from its series.
fn contraction_series(f: &SymmetricKernel2<Q>) -> SymTensor<Q> {
    let n = f.n();
    let a = |j: usize, k: usize| f.entry(j, k).clone();
    let d = |j: usize| f.diag(j).clone();
    let mut out = SymTensor::zero(2);
    for j1 in 0..n {
        out.add_coeff(vec![j1, j1], d(j1) * d(j1));
        for j2 in 0..j1 {
            out.add_coeff(vec![j2, j1], qi(2) * (a(j1, j2) * d(j2) + a(j1, j2) * d(j1)));
            out.add_coeff(vec![j1, j1], a(j1, j2) * a(j1, j2));
            out.add_coeff(vec![j2, j2], a(j1, j2) * a(j1, j2));
            for j3 in 0..j2 {
                out.add_coeff(vec![j3, j1], qi(2) * a(j1, j2) * a(j2, j3));
                out.add_coeff(vec![j2, j1], qi(2) * a(j1, j3) * a(j2, j3));
                out.add_coeff(vec![j3, j2], qi(2) * a(j1, j2) * a(j1, j3));
            }
        }
    }
    out
}

/// `a_1^4(f∘f)` from its series.
fn lower_by_one_series(f: &SymmetricKernel2<Q>, t: &GammaTables) -> SymTensor<Q> {
    let n = f.n();
    let a = |j: usize, k: usize| f.entry(j, k).clone();
    let d = |j: usize| f.diag(j).clone();
    let (g21, g32, g43) = (t.gamma(2, 1), t.gamma(3, 2), t.gamma(4, 3));
    let mut out = SymTensor::zero(3);
    for j1 in 0..n {
        out.add_coeff(vec![j1; 3], &g43 * d(j1) * d(j1));
        for j2 in 0..j1 {
            let mixed = qi(4) * a(j1, j2) * a(j1, j2) + qi(2) * d(j1) * d(j2);
            out.add_coeff(key(vec![j1, j1, j2]), qi(4) * &g32 * d(j1) * a(j1, j2) + &g21 * &mixed);
            out.add_coeff(key(vec![j1, j2, j2]), qi(4) * &g32 * a(j1, j2) * d(j2) + &g21 * &mixed);
            for j3 in 0..j2 {
                let eight = a(j1, j2) * a(j1, j3) + a(j1, j2) * a(j2, j3) + a(j1, j3) * a(j2, j3);
                let four = d(j1) * a(j2, j3) + d(j2) * a(j1, j3) + d(j3) * a(j1, j2);
                out.add_coeff(key(vec![j1, j2, j3]), &g21 * (qi(8) * eight + qi(4) * four));
            }
        }
    }
    out
}

/// `a_2^4(f∘f)`, monomial by monomial from the action on each index pattern.
fn lower_by_two_series(f: &SymmetricKernel2<Q>, t: &GammaTables) -> SymTensor<Q> {
    let n = f.n();
    let a = |j: usize, k: usize| f.entry(j, k).clone();
    let d = |j: usize| f.diag(j).clone();
    let m3 = t.gamma(2, 1);
    let (d31, d42) = (t.gamma(3, 1) - qi(3), t.gamma(4, 2) - qi(6));
    let mut out = SymTensor::zero(2);
    for j1 in 0..n {
        out.add_coeff(vec![j1, j1], &d42 * d(j1) * d(j1));
        for j2 in 0..j1 {
            // e_{j1}^3∘e_{j2} and e_{j1}∘e_{j2}^3 contribute (gamma_31 - 3),
            // e_{j1}^2∘e_{j2}^2 contributes m_3².
            let c = &d31 * qi(4) * (d(j1) * a(j1, j2) + a(j1, j2) * d(j2))
                + &m3 * &m3 * (qi(4) * a(j1, j2) * a(j1, j2) + qi(2) * d(j1) * d(j2));
            out.add_coeff(vec![j2, j1], c);
        }
    }
    out
}

/// `a_3^4(f∘f)` from its series.
fn lower_by_three_series(f: &SymmetricKernel2<Q>, t: &GammaTables) -> SymTensor<Q> {
    let n = f.n();
    let a = |j: usize, k: usize| f.entry(j, k).clone();
    let d = |j: usize| f.diag(j).clone();
    let (g30, g41) = (t.gamma(3, 0), t.gamma(4, 1));
    let mut out = SymTensor::zero(1);
    for j1 in 0..n {
        out.add_coeff(vec![j1], &g41 * d(j1) * d(j1));
        for j2 in 0..j1 {
            out.add_coeff(vec![j2], qi(4) * &g30 * d(j1) * a(j1, j2));
            out.add_coeff(vec![j1], qi(4) * &g30 * a(j1, j2) * d(j2));
        }
    }
    out
}

/// `a_1^2(f ∼₁ f)` from its series.
fn contraction_lowered_series(f: &SymmetricKernel2<Q>, t: &GammaTables) -> SymTensor<Q> {
    let n = f.n();
    let m3 = t.m(3).clone();
    let mut out = SymTensor::zero(1);
    for j1 in 0..n {
        out.add_coeff(vec![j1], &m3 * f.diag(j1) * f.diag(j1));
        for j2 in 0..j1 {
            let sq = f.entry(j1, j2) * f.entry(j1, j2);
            out.add_coeff(vec![j1], &m3 * &sq);
            out.add_coeff(vec![j2], &m3 * &sq);
        }
    }
    out
}

fn laws() -> Vec<LawKind> {
    vec![
        LawKind::Normal01,
        LawKind::exponential(qi(1)),
        LawKind::Gamma { a: qi(4), b: qi(3) },
        LawKind::Poisson { a: qi(1) },
    ]
}

fn same(a: &SymTensor<Q>, b: &SymTensor<Q>) {
    let lhs: Vec<_> = a.coeffs().collect();
    let rhs: Vec<_> = b.coeffs().collect();
    assert_eq!(lhs, rhs);
}

#[test]
fn symmetric_square_matches_series() {
    let mut r = common::rng(11);
    for _ in 0..20 {
        let f = common::rand_kernel_q(&mut r, 5);
        let big = SymTensor::from_kernel(&f);
        same(&big.circ(&big), &square_series(&f));
    }
}

#[test]
fn contraction_matrix_product_matches_series() {
    let mut r = common::rng(12);
    for _ in 0..20 {
        let f = common::rand_kernel_q(&mut r, 5);
        same(&SymTensor::from_kernel(&f.contraction1()), &contraction_series(&f));
    }
}

#[test]
fn contraction_of_simple_kernels() {
    let diag = SymmetricKernel2::from_parts(vec![qi(3)], &[vec![]]).unwrap();
    assert_eq!(diag.contraction1().diag(0), &qi(9));
    let off = SymmetricKernel2::from_parts(vec![qi(0), qi(0)], &[vec![], vec![qi(2)]]).unwrap();
    let c = off.contraction1();
    assert_eq!((c.diag(0), c.diag(1), c.entry(0, 1)), (&qi(4), &qi(4), &Q::zero()));
}

#[test]
fn annihilations_of_the_square_match_series() {
    let mut r = common::rng(13);
    for law in laws() {
        let t = GammaTables::for_law(&law).unwrap();
        for _ in 0..5 {
            let f = common::rand_kernel_q(&mut r, 5);
            let big = SymTensor::from_kernel(&f);
            let ff = big.circ(&big);
            same(&ff.annihilate(1, &t).unwrap(), &lower_by_one_series(&f, &t));
            same(&ff.annihilate(2, &t).unwrap(), &lower_by_two_series(&f, &t));
            same(&ff.annihilate(3, &t).unwrap(), &lower_by_three_series(&f, &t));
            let sum_sq = (0..f.n()).fold(Q::zero(), |acc, j| acc + f.diag(j) * f.diag(j));
            let top = ff.annihilate(4, &t).unwrap();
            assert_eq!(top.coeff(&[]), (t.gamma(4, 0) - qi(3)) * sum_sq);
        }
    }
}

#[test]
fn lowered_contraction_matches_series() {
    let mut r = common::rng(14);
    for law in laws() {
        let t = GammaTables::for_law(&law).unwrap();
        let f = common::rand_kernel_q(&mut r, 5);
        let lowered = SymTensor::from_kernel(&f.contraction1()).annihilate(1, &t).unwrap();
        same(&lowered, &contraction_lowered_series(&f, &t));
        let diag_part = SymTensor::from_kernel(&f.pi1().contraction1()).annihilate(1, &t).unwrap();
        for j in 0..f.n() {
            assert_eq!(diag_part.coeff(&[j]), t.m(3) * f.diag(j) * f.diag(j));
        }
    }
}
