//! Matrix criterion against joint factorization, counting conditions, the
//! maximal system and monomial Gram ranks.

use discrete_indep::{
    a_matrix, build_max_system, globally_independent, independent, n_max, necessary_conditions, rank,
    walsh_gram_rank, DiscreteError, DiscreteRV, FiniteSpace,
};
use laws::rational::{q, qi};
use laws::Q;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Classical oracle: `P(b = x, c = y) = P(b = x) P(c = y)` for all value pairs.
fn factorizes(p: &[Q], b: &[Q], c: &[Q]) -> bool {
    let prob = |pred: &dyn Fn(usize) -> bool| -> Q { (0..p.len()).filter(|&i| pred(i)).map(|i| &p[i]).sum() };
    b.iter().all(|x| {
        c.iter().all(|y| {
            prob(&|i| b[i] == *x && c[i] == *y) == prob(&|i| b[i] == *x) * prob(&|i| c[i] == *y)
        })
    })
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    raw.iter().map(|&r| q(r, total)).collect()
}

/// Either a random pair or a product-structured pair that is independent by construction.
fn random_case(rng: &mut ChaCha8Rng) -> (Vec<Q>, Vec<Q>, Vec<Q>) {
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=6);
        let p = random_weights(rng, n);
        let vals = |rng: &mut ChaCha8Rng| (0..n).map(|_| qi(rng.gen_range(-2..=2))).collect::<Vec<_>>();
        let (b, c) = (vals(rng), vals(rng));
        (p, b, c)
    } else {
        let (n1, n2) = [(1, 2), (2, 2), (2, 3), (3, 2), (1, 6), (6, 1)][rng.gen_range(0..6)];
        let u = random_weights(rng, n1);
        let v = random_weights(rng, n2);
        let fb: Vec<Q> = (0..n1).map(|_| qi(rng.gen_range(-3..=3))).collect();
        let fc: Vec<Q> = (0..n2).map(|_| qi(rng.gen_range(-3..=3))).collect();
        let mut p = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        for i in 0..n1 {
            for j in 0..n2 {
                p.push(&u[i] * &v[j]);
                b.push(fb[i].clone());
                c.push(fc[j].clone());
            }
        }
        (p, b, c)
    }
}

#[test]
fn matrix_criterion_matches_factorization_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..1000 {
        let (p, b, c) = random_case(&mut rng);
        let sp = FiniteSpace::new(p.clone()).unwrap();
        let got = independent(&sp, &DiscreteRV::new(b.clone()), &DiscreteRV::new(c.clone())).unwrap();
        assert_eq!(got, factorizes(&p, &b, &c), "p={p:?} b={b:?} c={c:?}");
        if got {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 100 && no > 100, "{yes} independent, {no} dependent");
}

#[test]
fn kernel_is_the_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=7 {
        for _ in 0..5 {
            let sp = FiniteSpace::new(random_weights(&mut rng, n)).unwrap();
            let a = a_matrix(&sp);
            assert!(a.apply(&vec![qi(1); n]).iter().all(Zero::is_zero));
            assert_eq!(a.rank(), n - 1);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(a.rows()[i][j], a.rows()[j][i]);
                }
            }
        }
    }
    let sp = FiniteSpace::new(vec![q(1, 2), q(1, 4), q(1, 4)]).unwrap();
    assert_eq!(a_matrix(&sp).rank(), 2);
}

#[test]
fn degenerate_variables() {
    let sp = FiniteSpace::new(vec![q(1, 6), q(1, 3), q(1, 2)]).unwrap();
    let b = DiscreteRV::from_ints(&[1, 2, 2]);
    assert!(independent(&sp, &b, &DiscreteRV::from_ints(&[5, 5, 5])).unwrap());
    assert!(!independent(&sp, &b, &DiscreteRV::from_ints(&[1, 2, 3])).unwrap());
    let sp4 = FiniteSpace::uniform(4);
    assert!(independent(&sp4, &DiscreteRV::from_ints(&[1, 1, -1, -1]), &DiscreteRV::from_ints(&[1, -1, 1, -1])).unwrap());
    assert_eq!(
        independent(&sp4, &b, &b),
        Err(DiscreteError::LengthMismatch { expected: 4, got: 3 })
    );
}

#[test]
fn maximal_sizes() {
    assert_eq!(n_max(1).unwrap(), 1);
    assert_eq!(n_max(4).unwrap(), 3);
    assert_eq!(n_max(8).unwrap(), 4);
    for n in 1..200usize {
        let oracle = (1..64).filter(|&k| 1usize << (k - 1) <= n).max().unwrap();
        assert_eq!(n_max(n).unwrap(), oracle);
    }
}

#[test]
fn maximal_system_is_independent() {
    let (sp, vars) = build_max_system(2).unwrap();
    assert_eq!(vars[0], DiscreteRV::from_ints(&[1, 1, -1, -1]));
    assert_eq!(vars[1], DiscreteRV::from_ints(&[1, -1, 1, -1]));
    for nv in 1..=6 {
        let (sp, vars) = build_max_system(nv).unwrap();
        assert_eq!(vars.len() + 1, n_max(sp.n()).unwrap());
        assert!(globally_independent(&sp, &vars).unwrap());
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                assert!(independent(&sp, &vars[i], &vars[j]).unwrap());
            }
        }
        // Every sign pattern is realized by exactly one atom.
        let mut seen = std::collections::HashSet::new();
        for i in 0..sp.n() {
            seen.insert(vars.iter().map(|v| v.values()[i].clone()).collect::<Vec<_>>());
        }
        assert_eq!(seen.len(), sp.n());
        let checks = necessary_conditions(&sp, &vars[0], &vars[1..]).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
    assert!(globally_independent(&sp, &[vars[0].clone(), vars[0].clone()]).is_ok_and(|g| !g));
}

#[test]
fn necessary_condition_violations() {
    let sp = FiniteSpace::uniform(4);
    let c = DiscreteRV::from_ints(&[1, 2, 2, 2]);
    let b = DiscreteRV::from_ints(&[1, 1, 2, 2]);
    let checks = necessary_conditions(&sp, &c, std::slice::from_ref(&b)).unwrap();
    let single = checks.iter().find(|c| c.name == "singleton_level").unwrap();
    assert!(!single.passed);
    assert_eq!(single.subject, Some(0));

    let sp6 = FiniteSpace::uniform(6);
    let c = DiscreteRV::from_ints(&[1, 1, 1, 2, 2, 2]);
    let bs = [DiscreteRV::from_ints(&[1, 2, 3, 1, 2, 3])];
    let checks = necessary_conditions(&sp6, &c, &bs).unwrap();
    assert!(checks.iter().find(|c| c.name == "counting").unwrap().passed);
    let bs = [DiscreteRV::from_ints(&[1, 2, 1, 2, 1, 2]), DiscreteRV::from_ints(&[1, 1, 2, 2, 1, 2])];
    let checks = necessary_conditions(&sp6, &c, &bs).unwrap();
    assert!(!checks.iter().find(|c| c.name == "counting").unwrap().passed);

    // A level set of size one in b.
    let b = DiscreteRV::from_ints(&[1, 2, 2, 2, 2, 2]);
    let checks = necessary_conditions(&sp6, &c, &[b]).unwrap();
    assert!(!checks.iter().find(|c| c.name == "level_size").unwrap().passed);

    // Three values exceed min(N_j, n - N_j) = 2 for c with level sizes 2 and 4.
    let c = DiscreteRV::from_ints(&[1, 1, 2, 2, 2, 2]);
    let b = DiscreteRV::from_ints(&[1, 1, 2, 2, 3, 3]);
    let checks = necessary_conditions(&sp6, &c, &[b]).unwrap();
    assert!(!checks.iter().find(|c| c.name == "level_count").unwrap().passed);
}

/// Rank by plain rational Gaussian elimination.
fn rank_oracle(mut m: Vec<Vec<Q>>) -> usize {
    let mut r = 0;
    let cols = m.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in 0..cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

#[test]
fn fraction_free_rank_matches_rational_elimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let base: Vec<Vec<Q>> = (0..rows)
            .map(|_| (0..cols).map(|_| q(rng.gen_range(-3..=3), rng.gen_range(1..=4))).collect())
            .collect();
        // Duplicate a combination of rows to force deficiency now and then.
        let mut m = base.clone();
        if rows >= 2 && rng.gen_bool(0.5) {
            let combo: Vec<Q> = (0..cols).map(|j| &base[0][j] * qi(2) - &base[1][j]).collect();
            m.push(combo);
        }
        assert_eq!(rank(&m), rank_oracle(m.clone()));
    }
}

#[test]
fn walsh_gram_ranks() {
    let sym = [qi(-1), qi(1)];
    let half = [q(1, 2), q(1, 2)];
    assert_eq!(walsh_gram_rank(&sym, &half, 3).unwrap(), 8);
    let vals = [qi(-1), qi(3), qi(-2)];
    let third = [q(1, 3), q(1, 3), q(1, 3)];
    let m3: Q = vals.iter().map(|v| v * v * v / qi(3)).sum();
    assert_eq!(m3, qi(6));
    assert_eq!(walsh_gram_rank(&vals, &third, 1).unwrap(), 3);
    assert_eq!(walsh_gram_rank(&vals, &third, 2).unwrap(), 9);
    assert_eq!(walsh_gram_rank(&vals, &third, 3).unwrap(), 27);
    let skew = [q(1, 6), q(1, 2), q(1, 3)];
    for n in 1..=4 {
        assert_eq!(walsh_gram_rank(&[qi(0), q(1, 2), qi(5)], &skew, n).unwrap(), 3usize.pow(n as u32));
        assert_eq!(walsh_gram_rank(&[qi(2), qi(-7)], &[q(1, 5), q(4, 5)], n).unwrap(), 1 << n);
    }
    assert!(matches!(walsh_gram_rank(&vals, &third, 8), Err(DiscreteError::SizeLimit { .. })));
}
