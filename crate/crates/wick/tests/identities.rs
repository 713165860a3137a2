//! Cross-oracle agreement, differential equations, derivation, affine covariance
//! and the Gram orthogonality dichotomy.

use laws::rational::{q, qi, Q};
use laws::{LawKind, MomentSequence, Poly};
use num_traits::{One, Zero};
use proptest::prelude::*;
use wick::{
    derive, ode_residual, ode_residual_poly, wick_explicit, wick_gram, wick_gram_matrix,
    wick_recurrence1, wick_recurrence2, Ode,
};

fn catalog() -> Vec<LawKind> {
    vec![
        LawKind::Normal01,
        LawKind::exponential(q(3, 2)),
        LawKind::Gamma { a: q(1, 2), b: q(1, 2) },
        LawKind::GammaCombo { alpha: qi(1), a1: qi(2), b1: qi(1), beta: q(1, 2), a2: q(1, 3), b2: qi(2) },
        LawKind::Poisson { a: qi(1) },
        LawKind::Binomial { n: 3, p: q(1, 2) },
    ]
}

#[test]
fn triple_oracle_agreement() {
    for law in catalog() {
        let m = law.moments(6).unwrap();
        for n in 0..=6 {
            let e = wick_explicit(&m, n).unwrap();
            assert_eq!(e, wick_recurrence1(&m, n).unwrap(), "{law} n={n} rec1");
            assert_eq!(e, wick_recurrence2(&m, n).unwrap(), "{law} n={n} rec2");
            assert!(e.poly().is_monic());
            assert!(e.is_centered(&m) || n == 0, "{law} n={n}");
        }
    }
}

#[test]
fn hermite_three_term_recurrence() {
    let m = LawKind::Normal01.moments(8).unwrap();
    for n in 2..=8 {
        let h = |k| wick_recurrence1(&m, k).unwrap().poly().clone();
        let expect = &(&Poly::x() * &h(n - 1)) - &h(n - 2).scale(&qi(n as i64 - 1));
        assert_eq!(h(n), expect);
    }
}

#[test]
fn both_ode_residuals_vanish() {
    for law in catalog() {
        let m = law.moments(6).unwrap();
        for n in 0..=6 {
            let w = wick_explicit(&m, n).unwrap();
            assert!(ode_residual(&w, &m, Ode::First).unwrap().is_zero(), "{law} n={n}");
            assert!(ode_residual(&w, &m, Ode::Second).unwrap().is_zero(), "{law} n={n}");
        }
    }
}

#[test]
fn non_wick_cubic_has_nonzero_residual() {
    let m = LawKind::Normal01.moments(3).unwrap();
    let cube = Poly::monomial(Q::one(), 3);
    assert!(!ode_residual_poly(&cube, 3, &m, Ode::First).unwrap().is_zero());
    assert!(!ode_residual_poly(&cube, 3, &m, Ode::Second).unwrap().is_zero());
}

#[test]
fn derivation_lowers_degree() {
    let g = LawKind::Normal01.moments(2).unwrap();
    assert_eq!(derive(&wick_explicit(&g, 2).unwrap()).unwrap(), Poly::from_ints(&[0, 2]));
    for law in catalog() {
        let m = law.moments(6).unwrap();
        for n in 1..=6 {
            let d = derive(&wick_explicit(&m, n).unwrap()).unwrap();
            let prev = wick_explicit(&m, n - 1).unwrap().poly().scale(&qi(n as i64));
            assert_eq!(d, prev, "{law} n={n}");
        }
    }
    assert!(Poly::constant(qi(1)).derivative().is_zero());
}

#[test]
fn affine_covariance() {
    // W_n for h = a f + b satisfies W_n^h(a y + b) = a^n W_n^f(y).
    for law in catalog() {
        let m = law.moments(6).unwrap();
        for (a, b) in [(qi(2), qi(-1)), (q(-1, 3), q(5, 2))] {
            let mh = m.affine(&a, &b);
            for n in 0..=6 {
                let wh = wick_explicit(&mh, n).unwrap().poly().compose_affine(&a, &b);
                let wf = wick_explicit(&m, n).unwrap().poly().scale(&num_traits::pow(a.clone(), n));
                assert_eq!(wh, wf, "{law} n={n}");
            }
        }
    }
}

fn off_diagonal_zero(g: &[Vec<Q>]) -> bool {
    g.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, v)| i == j || v.is_zero()))
}

#[test]
fn gram_dichotomy() {
    let g = wick_gram_matrix(&LawKind::Normal01.moments(10).unwrap(), 5).unwrap();
    assert!(off_diagonal_zero(&g));
    for n in 0..=5 {
        let fact: i64 = (1..=n as i64).product();
        assert_eq!(g[n][n], qi(fact));
    }
    for law in [
        LawKind::exponential(qi(1)),
        LawKind::Gamma { a: qi(2), b: qi(3) },
        LawKind::Poisson { a: qi(1) },
    ] {
        let g = wick_gram_matrix(&law.moments(10).unwrap(), 5).unwrap();
        assert!(!off_diagonal_zero(&g), "{law}");
    }
    let n01 = LawKind::Normal01.moments(4).unwrap();
    assert!(wick_gram(&n01, 1, 3).unwrap().is_zero());
    assert!(wick_gram(&n01, 0, 0).unwrap().is_one());
    let e1 = LawKind::exponential(qi(1)).moments(3).unwrap();
    assert!(!wick_gram(&e1, 1, 2).unwrap().is_zero());
}

#[test]
fn gaussian_with_nonstandard_parameters_is_orthogonal() {
    // N(mu, s^2) moments via the affine map of N(0,1).
    let m = LawKind::Normal01.moments(10).unwrap().affine(&q(3, 2), &qi(-2));
    assert!(off_diagonal_zero(&wick_gram_matrix(&m, 5).unwrap()));
}

proptest! {
    #[test]
    fn random_moment_tables_satisfy_all_oracles(
        vals in proptest::collection::vec((-6i64..=6, 1i64..=4), 6)
    ) {
        let mut m = vec![Q::one()];
        m.extend(vals.iter().map(|&(n, d)| q(n, d)));
        let m = MomentSequence::new(m).unwrap();
        for n in 0..=6 {
            let e = wick_explicit(&m, n).unwrap();
            prop_assert_eq!(&e, &wick_recurrence1(&m, n).unwrap());
            prop_assert_eq!(&e, &wick_recurrence2(&m, n).unwrap());
            prop_assert!(ode_residual(&e, &m, Ode::First).unwrap().is_zero());
            prop_assert!(ode_residual(&e, &m, Ode::Second).unwrap().is_zero());
            prop_assert!(n == 0 || e.is_centered(&m));
        }
    }
}
