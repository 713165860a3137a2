//! Coefficients, triangle kernels, second-moment identities and weighted
//! isometries, all checked exactly over rationals.

mod common;

use chaos::kernel::{operator_bounds, phi11_poly, phi2_poly, phi2_operator_norm_sq};
use chaos::{
    coeffs_of, coeffs_of_fn, equivalence_constants, isometry_residual, norm_identity, triangle_kernel, Basis,
    BasisKind, GammaTables, NormVariant, PiecewisePoly, SymmetricKernel2,
};
use laws::rational::{q, qi, to_f64};
use laws::{LawKind, Poly, Q};
use num_traits::Zero;

fn one() -> PiecewisePoly {
    PiecewisePoly::constant(qi(1))
}

#[test]
fn constant_has_a_single_coefficient() {
    let c = coeffs_of(&one(), None, &Basis::legendre(6).unwrap());
    assert_eq!(c.raw().unwrap()[0], qi(1));
    assert!(c.raw().unwrap()[1..].iter().all(Zero::is_zero));
}

#[test]
fn half_indicator_coefficients() {
    let c = coeffs_of(&one(), Some(&q(1, 2)), &Basis::legendre(3).unwrap());
    assert_eq!(c.coeff_sq(0).unwrap(), q(1, 4));
    assert_eq!(c.coeff_sq(1).unwrap(), q(3, 16));
    assert!((c.coeffs()[1] + 3f64.sqrt() / 4.0).abs() < 1e-15);
}

#[test]
fn parseval_for_the_identity_function() {
    let x = PiecewisePoly::poly(Poly::x());
    for n in [2, 4, 8] {
        let c = coeffs_of(&x, None, &Basis::legendre(n).unwrap());
        assert_eq!(c.norm_sq_exact().unwrap(), q(1, 3));
    }
    let mut prev = Q::zero();
    for n in [1, 2, 4, 8, 16, 32] {
        let c = coeffs_of(&x, None, &Basis::new(BasisKind::Haar, n).unwrap());
        let s = c.norm_sq_exact().unwrap();
        assert!(s >= prev && s <= q(1, 3));
        prev = s;
    }
    // Haar tail after levels 0..4: Σ_{l>=5} 2^l · 2^{-3l}/16 = 2^{-10}/12 · 4/3... exact gap.
    assert_eq!(q(1, 3) - prev, q(1, 12 * 1024));
}

#[test]
fn quadrature_fallback_matches_exact_coefficients() {
    let mut r = common::rng(31);
    let h = common::rand_piecewise(&mut r);
    for kind in [BasisKind::Legendre, BasisKind::Haar] {
        let b = Basis::new(kind, 6).unwrap();
        let exact = coeffs_of(&h, Some(&q(3, 4)), &b);
        let approx = coeffs_of_fn(&|x| h.eval_f64(x), Some(0.75), &b, 1e-13).unwrap();
        for (a, e) in approx.coeffs().iter().zip(exact.coeffs()) {
            assert!((a - e).abs() < 1e-10, "{kind}: {a} vs {e}");
        }
    }
}

#[test]
fn triangle_of_constants() {
    let k = triangle_kernel(&one(), &one(), &Basis::legendre(8).unwrap());
    assert_eq!(k.raw()[0][0], q(1, 2));
    let mut prev = Q::zero();
    for n in [1, 2, 4, 8] {
        let s = triangle_kernel(&one(), &one(), &Basis::legendre(n).unwrap()).norm_sq();
        assert!(s > prev && s < q(1, 2));
        prev = s;
    }
    assert!(to_f64(&(q(1, 2) - prev)) < 0.02);
}

#[test]
fn triangle_and_its_mirror_tile_the_square() {
    let mut r = common::rng(32);
    let b = Basis::legendre(5).unwrap();
    for _ in 0..5 {
        let (h, g) = (common::rand_piecewise(&mut r), common::rand_piecewise(&mut r));
        let hg = triangle_kernel(&h, &g, &b);
        let gh = triangle_kernel(&g, &h, &b);
        let (ch, cg) = (coeffs_of(&h, None, &b), coeffs_of(&g, None, &b));
        for j in 0..5 {
            for k in 0..5 {
                assert_eq!(&hg.raw()[j][k] + &gh.raw()[k][j], &ch.raw().unwrap()[j] * &cg.raw().unwrap()[k]);
            }
        }
    }
}

#[test]
fn off_diagonal_and_diagonal_parts_are_orthogonal() {
    let mut r = common::rng(33);
    for law in [common::gaussian(), common::exponential()] {
        let t = GammaTables::for_law(&law).unwrap();
        for _ in 0..5 {
            let f: Vec<Vec<Q>> = (0..4).map(|_| (0..4).map(|_| common::rand_q(&mut r)).collect()).collect();
            let g: Vec<Vec<Q>> = (0..4).map(|_| (0..4).map(|_| common::rand_q(&mut r)).collect()).collect();
            let p11 = phi11_poly(&f);
            let lower: Q = (0..4).flat_map(|j| (0..j).map(move |k| (j, k))).map(|(j, k)| &f[j][k] * &f[j][k]).sum();
            assert_eq!(p11.mul(&p11).expect(t.moments()).unwrap(), lower);
            assert!(p11.mul(&phi2_poly(&g)).expect(t.moments()).unwrap().is_zero());
            let p2 = phi2_poly(&f);
            let diag: Q = (0..4).map(|j| &f[j][j] * &f[j][j]).sum();
            assert_eq!(p2.mul(&p2).expect(t.moments()).unwrap(), diag * (t.m(4) - qi(1)));
        }
    }
}

#[test]
fn unit_off_diagonal_has_unit_norm() {
    let t = GammaTables::for_law(&common::exponential()).unwrap();
    let f = vec![vec![qi(0), qi(0)], vec![qi(1), qi(0)]];
    let p = phi11_poly(&f);
    assert_eq!(p.mul(&p).expect(t.moments()).unwrap(), qi(1));
    assert!(phi2_poly(&f).is_zero());
}

#[test]
fn norm_identity_for_constants_under_exponential_law() {
    let t = GammaTables::for_law(&common::exponential()).unwrap();
    let k = triangle_kernel(&one(), &one(), &Basis::legendre(8).unwrap());
    let id = norm_identity(&k, &t).unwrap();
    assert!(id.holds(), "{id:?}");
    assert!(!id.fourth_cumulant_term.is_zero());
}

#[test]
fn norm_identity_for_random_piecewise_functions() {
    let mut r = common::rng(34);
    let b = Basis::legendre(8).unwrap();
    for law in [common::gaussian(), common::exponential(), LawKind::Gamma { a: qi(4), b: qi(3) }] {
        let t = GammaTables::for_law(&law).unwrap();
        for _ in 0..20 {
            let (h, g) = (common::rand_piecewise(&mut r), common::rand_piecewise(&mut r));
            let id = norm_identity(&triangle_kernel(&h, &g, &b), &t).unwrap();
            assert!(id.holds(), "{law:?}");
            if law == LawKind::Normal01 {
                assert!(id.fourth_cumulant_term.is_zero());
            }
        }
    }
}

#[test]
fn weighted_norms_are_isometries() {
    let mut r = common::rng(35);
    for law in [common::gaussian(), common::exponential(), LawKind::Poisson { a: qi(1) }] {
        let t = GammaTables::for_law(&law).unwrap();
        for _ in 0..10 {
            let f = common::rand_kernel_q(&mut r, 6);
            for v in [NormVariant::A, NormVariant::B, NormVariant::C] {
                assert!(isometry_residual(&f, v, &t).unwrap().is_zero(), "{law:?} {v:?}");
            }
        }
    }
}

#[test]
fn elementary_kernels_under_the_gaussian_law() {
    let t = GammaTables::for_law(&common::gaussian()).unwrap();
    let diag = SymmetricKernel2::from_parts(vec![qi(1)], &[vec![]]).unwrap();
    assert_eq!(diag.norm_c_sq(&t), qi(2));
    let off = SymmetricKernel2::from_parts(vec![qi(0), qi(0)], &[vec![], vec![q(1, 2)]]).unwrap();
    let j = off.j2_poly();
    assert_eq!(j.mul(&j).expect(t.moments()).unwrap(), off.norm_c_sq(&t));
    assert_eq!(off.norm_c_sq(&t), qi(1));
}

#[test]
fn sandwich_holds_on_a_kernel_sweep() {
    let mut r = common::rng(36);
    for law in [common::gaussian(), common::exponential(), LawKind::Binomial { n: 4, p: q(1, 2) }] {
        let t = GammaTables::for_law(&law).unwrap();
        let (a, b) = equivalence_constants(&t);
        for _ in 0..1000 {
            let f = common::rand_kernel_q(&mut r, 6);
            let j = f.j2_poly();
            let e = j.mul(&j).expect(t.moments()).unwrap();
            let norm = f.norm_sq();
            assert!(&a * &norm <= e && e <= &b * &norm, "{law:?}");
        }
    }
}

#[test]
fn quadratic_operator_bounds() {
    let mut r = common::rng(37);
    for law in [common::gaussian(), common::exponential()] {
        let t = GammaTables::for_law(&law).unwrap();
        for _ in 0..20 {
            let f: Vec<Vec<Q>> = (0..4).map(|_| (0..4).map(|_| common::rand_q(&mut r)).collect()).collect();
            let [e2, bound2, e11, norm] = operator_bounds(&f, &t).unwrap();
            assert!(e2 <= bound2 && e11 <= norm);
        }
        // The supremum of E|φ^(2)(f)|²/‖f‖² is attained on a single diagonal entry.
        let unit = vec![vec![qi(1)]];
        let [e2, _, _, norm] = operator_bounds(&unit, &t).unwrap();
        assert_eq!(e2 / norm, phi2_operator_norm_sq(&t));
    }
}
