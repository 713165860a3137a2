//! Printed Wick tables for the Gaussian, exponential, Gamma and Poisson laws.

use laws::rational::{binom, q, qi, Q};
use laws::{touchard, LawKind, Poly};
use num_traits::{One, Zero};
use wick::{laguerre_wick, wick_explicit};

fn w(law: &LawKind, n: usize) -> Poly {
    wick_explicit(&law.moments(n).unwrap(), n).unwrap().poly().clone()
}

#[test]
fn hermite_table() {
    let table: [&[i64]; 6] = [
        &[1],
        &[0, 1],
        &[-1, 0, 1],
        &[0, -3, 0, 1],
        &[3, 0, -6, 0, 1],
        &[0, 15, 0, -10, 0, 1],
    ];
    for (n, c) in table.iter().enumerate() {
        assert_eq!(w(&LawKind::Normal01, n), Poly::from_ints(c), "H_{n}");
    }
}

#[test]
fn exponential_table() {
    for lambda in [qi(1), qi(2), q(3, 2), q(1, 5)] {
        let law = LawKind::exponential(lambda.clone());
        for n in 1..=5 {
            // E_n = x^n - (n/lambda) x^{n-1}
            let mut c = vec![Q::zero(); n + 1];
            c[n] = Q::one();
            c[n - 1] = -qi(n as i64) / &lambda;
            assert_eq!(w(&law, n), Poly::new(c), "E_{n} at {lambda}");
        }
    }
    let law = LawKind::exponential(qi(4));
    assert_eq!(w(&law, 3), Poly::new(vec![qi(0), qi(0), q(-3, 4), qi(1)]));
}

fn falling(a: &Q, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, i| acc * (a - qi(i as i64)))
}

#[test]
fn gamma_table() {
    for (a, b) in [(q(1, 2), q(1, 2)), (qi(2), qi(3)), (q(7, 3), q(2, 5))] {
        let law = LawKind::Gamma { a: a.clone(), b: b.clone() };
        for n in 0..=5 {
            let mut c = vec![Q::zero(); n + 1];
            for k in 0..=n {
                let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
                c[n - k] = Q::from_integer(binom(n, k)) * sign * falling(&a, k)
                    / num_traits::pow(b.clone(), k);
            }
            assert_eq!(w(&law, n), Poly::new(c), "Gamma({a},{b}) n={n}");
        }
    }
}

#[test]
fn gamma_half_half_table() {
    let law = LawKind::Gamma { a: q(1, 2), b: q(1, 2) };
    let table: [&[i64]; 5] = [
        &[-1, 1],
        &[-1, -2, 1],
        &[-3, -3, -3, 1],
        &[-15, -12, -6, -4, 1],
        &[-105, -75, -30, -10, -5, 1],
    ];
    for (i, c) in table.iter().enumerate() {
        let n = i + 1;
        assert_eq!(w(&law, n), Poly::from_ints(c), "n={n}");
        assert_eq!(laguerre_wick(&q(1, 2), &q(1, 2), n), Poly::from_ints(c), "laguerre n={n}");
    }
}

/// Poisson constants: `a_1 = -a`, `a_2 = a^2 - a`, `a_3 = -a^3 + 3a^2 - a`,
/// `a_4 = a^4 - 6a^3 + 7a^2 - a`, `a_5 = -a^5 + 10a^4 - 25a^3 + 15a^2 - a`.
fn poisson_constant(k: usize, a: &Q) -> Q {
    let coeffs: [&[i64]; 6] = [
        &[1],
        &[0, -1],
        &[0, -1, 1],
        &[0, -1, 3, -1],
        &[0, -1, 7, -6, 1],
        &[0, -1, 15, -25, 10, -1],
    ];
    Poly::from_ints(coeffs[k]).eval(a)
}

#[test]
fn poisson_table() {
    for a in [qi(1), qi(3), q(2, 7)] {
        let law = LawKind::Poisson { a: a.clone() };
        for n in 0..=5 {
            let c: Vec<Q> = (0..=n)
                .map(|j| Q::from_integer(binom(n, n - j)) * poisson_constant(n - j, &a))
                .collect();
            assert_eq!(w(&law, n), Poly::new(c), "Poisson({a}) n={n}");
        }
        for k in 0..=5 {
            assert_eq!(touchard(k, &-a.clone()), poisson_constant(k, &a));
        }
    }
}

#[test]
fn gamma_laguerre_bridge() {
    for (a, b) in [(qi(2), qi(3)), (q(1, 2), q(1, 2)), (q(5, 2), q(1, 3))] {
        let law = LawKind::Gamma { a: a.clone(), b: b.clone() };
        for n in 0..=6 {
            assert_eq!(laguerre_wick(&a, &b, n), w(&law, n), "Gamma({a},{b}) n={n}");
        }
    }
    assert_eq!(laguerre_wick(&qi(3), &qi(2), 0), Poly::constant(qi(1)));
}
