//! Second-order kernels: the triangle kernel of the stochastic integral, the
//! quadratic maps `φ^(1,1)`, `φ^(2)` and `J_2`, and the exact norm identities
//! they satisfy at fixed truncation.

use laws::rational::{q, to_f64};
use laws::Q;
use num_traits::{One, Zero};

use crate::basis::{Basis, ChaosVector};
use crate::func::PiecewisePoly;
use crate::multipoly::MultiPoly;
use crate::scalar::Scalar;
use crate::tables::GammaTables;
use crate::ChaosError;

/// Dense square matrix, row index = first tensor argument.
pub type Matrix<T> = Vec<Vec<T>>;

/// `φ^(1,1)(f) = Σ_{j>k} f_{jk} x_j x_k` for a general kernel matrix.
pub fn phi11(f: &Matrix<f64>, xs: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (j, row) in f.iter().enumerate() {
        let inner: f64 = row[..j].iter().zip(xs).map(|(a, x)| a * x).sum();
        acc += inner * xs[j];
    }
    acc
}

/// `φ^(2)(f) = Σ_j f_{jj} (x_j² - 1)`.
pub fn phi2(f: &Matrix<f64>, xs: &[f64]) -> f64 {
    f.iter().enumerate().map(|(j, row)| row[j] * (xs[j] * xs[j] - 1.0)).sum()
}

/// `φ^(1,1)(f)` as a polynomial in the `X_j`.
pub fn phi11_poly<T: Scalar>(f: &Matrix<T>) -> MultiPoly<T> {
    let mut out = MultiPoly::zero();
    for (j, row) in f.iter().enumerate() {
        for (k, v) in row.iter().enumerate().take(j) {
            out.add_term(vec![(k, 1), (j, 1)], v.clone());
        }
    }
    out
}

/// `φ^(2)(f)` as a polynomial in the `X_j`.
pub fn phi2_poly<T: Scalar>(f: &Matrix<T>) -> MultiPoly<T> {
    let mut out = MultiPoly::zero();
    for (j, row) in f.iter().enumerate() {
        out.add_term(vec![(j, 2)], row[j].clone());
        out.add_term(Vec::new(), -row[j].clone());
    }
    out
}

/// Transpose of a square matrix.
pub fn transpose<T: Clone>(m: &Matrix<T>) -> Matrix<T> {
    (0..m.len()).map(|k| m.iter().map(|row| row[k].clone()).collect()).collect()
}

/// Entry-wise sum of two square matrices.
pub fn mat_add<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() + y.clone()).collect())
        .collect()
}

/// Outer product `h g^T` of two coefficient vectors.
pub fn outer(h: &ChaosVector, g: &ChaosVector) -> Matrix<f64> {
    h.coeffs().iter().map(|a| g.coeffs().iter().map(|b| a * b).collect()).collect()
}

/// `|Φ(h)Φ(g) - φ^(2)(h⊗g) - φ^(1,1)(h⊗g + g⊗h) - Σ_{k<N} c^h_k c^g_k|`.
pub fn product_identity_residual(h: &ChaosVector, g: &ChaosVector, xs: &[f64]) -> f64 {
    let hg = outer(h, g);
    let sym = mat_add(&hg, &transpose(&hg));
    let lhs = crate::basis::phi(h, xs) * crate::basis::phi(g, xs);
    let rhs = phi2(&hg, xs) + phi11(&sym, xs) + h.dot(g);
    (lhs - rhs).abs()
}

/// A symmetric kernel `f ∈ H∘H` through its entries `a_{jk} = a_{kj}`; the
/// diagonal entries are the `a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricKernel2<T: Scalar> {
    a: Matrix<T>,
}

impl<T: Scalar> SymmetricKernel2<T> {
    /// Symmetrization `(M + M^T) / 2` of a square matrix.
    pub fn symmetrize(m: &Matrix<T>) -> Result<Self, ChaosError> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(ChaosError::Dimension { expected: n, got: m.iter().map(Vec::len).max().unwrap_or(0) });
        }
        let half = T::from_q(&q(1, 2));
        let a = (0..n)
            .map(|j| (0..n).map(|k| (m[j][k].clone() + m[k][j].clone()) * half.clone()).collect())
            .collect();
        Ok(SymmetricKernel2 { a })
    }

    /// Kernel from its diagonal `a_j` and strictly lower entries `lower[j][k] = a_{jk}`, `k < j`.
    pub fn from_parts(diag: Vec<T>, lower: &[Vec<T>]) -> Result<Self, ChaosError> {
        let n = diag.len();
        let mut a = vec![vec![T::zero(); n]; n];
        for (j, d) in diag.into_iter().enumerate() {
            a[j][j] = d;
        }
        for (j, row) in lower.iter().enumerate() {
            if row.len() != j {
                return Err(ChaosError::Dimension { expected: j, got: row.len() });
            }
            for (k, v) in row.iter().enumerate() {
                a[j][k] = v.clone();
                a[k][j] = v.clone();
            }
        }
        Ok(SymmetricKernel2 { a })
    }

    /// Truncation `N`.
    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Entry `a_{jk}`.
    pub fn entry(&self, j: usize, k: usize) -> &T {
        &self.a[j][k]
    }

    /// Diagonal entry `a_j`.
    pub fn diag(&self, j: usize) -> &T {
        &self.a[j][j]
    }

    /// Full symmetric matrix.
    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    /// `Σ_{j,k} a_{jk}²`, the `H⊗H` norm squared.
    pub fn norm_sq(&self) -> T {
        let mut acc = T::zero();
        for row in &self.a {
            for v in row {
                acc += v.clone() * v.clone();
            }
        }
        acc
    }

    fn offdiag_sq(&self) -> T {
        let mut acc = T::zero();
        for (j, row) in self.a.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if j != k {
                    acc += v.clone() * v.clone();
                }
            }
        }
        acc
    }

    fn diag_sq(&self) -> T {
        let mut acc = T::zero();
        for j in 0..self.n() {
            acc += self.a[j][j].clone() * self.a[j][j].clone();
        }
        acc
    }

    /// `‖f‖_A²`: the `L²` norm of `Φ^{∘2}(f)` written on the orthogonal
    /// products `P_1(X_j)P_1(X_k)` and `P_2(X_j)`.
    pub fn norm_a_sq(&self, t: &GammaTables) -> T {
        T::from_q(&q(2, 1)) * self.offdiag_sq() + T::from_q(t.p_norm_sq(2)) * self.diag_sq()
    }

    /// `‖f‖_B² = Σ_{j≠k} a_{jk}² + E(X²-1)² Σ_j a_j²`.
    pub fn norm_b_sq(&self, t: &GammaTables) -> T {
        self.offdiag_sq() + T::from_q(&(t.m(4) - Q::one())) * self.diag_sq()
    }

    /// `‖f‖_C² = 2 Σ_{j≠k} a_{jk}² + E(X²-1)² Σ_j a_j²`.
    pub fn norm_c_sq(&self, t: &GammaTables) -> T {
        T::from_q(&q(2, 1)) * self.offdiag_sq() + T::from_q(&(t.m(4) - Q::one())) * self.diag_sq()
    }

    /// Weighted norm squared for `variant`.
    pub fn weighted_norm_sq(&self, variant: NormVariant, t: &GammaTables) -> T {
        match variant {
            NormVariant::A => self.norm_a_sq(t),
            NormVariant::B => self.norm_b_sq(t),
            NormVariant::C => self.norm_c_sq(t),
        }
    }

    /// `J_2(f) = 2 Σ_{j>k} a_{jk} x_j x_k + Σ_j a_j (x_j² - 1)` on a realization.
    pub fn j2(&self, xs: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (j, row) in self.a.iter().enumerate() {
            let inner: f64 = row[..j].iter().zip(xs).map(|(a, x)| a.to_f64() * x).sum();
            acc += 2.0 * inner * xs[j] + row[j].to_f64() * (xs[j] * xs[j] - 1.0);
        }
        acc
    }

    /// `J_2(f)` as a polynomial.
    pub fn j2_poly(&self) -> MultiPoly<T> {
        let two = T::from_q(&q(2, 1));
        let mut out = MultiPoly::zero();
        for (j, row) in self.a.iter().enumerate() {
            for (k, v) in row.iter().enumerate().take(j) {
                out.add_term(vec![(k, 1), (j, 1)], two.clone() * v.clone());
            }
            out.add_term(vec![(j, 2)], row[j].clone());
            out.add_term(Vec::new(), -row[j].clone());
        }
        out
    }

    /// `Φ^{∘2}(f) = 2 Σ_{j>k} a_{jk} P_1(X_j)P_1(X_k) + Σ_j a_j P_2(X_j)` as a polynomial.
    pub fn phi_circ2_poly(&self, t: &GammaTables) -> MultiPoly<T> {
        let two = T::from_q(&q(2, 1));
        let mut out = MultiPoly::zero();
        for (j, row) in self.a.iter().enumerate() {
            for (k, v) in row.iter().enumerate().take(j) {
                out.add_term(vec![(k, 1), (j, 1)], two.clone() * v.clone());
            }
            out = out.add(&MultiPoly::univariate(t.p(2), j).scale(&row[j]));
        }
        out
    }

    /// The strictly lower part plus diagonal, as a general matrix.
    pub fn lower_matrix(&self) -> Matrix<T> {
        let n = self.n();
        (0..n)
            .map(|j| (0..n).map(|k| if k <= j { self.a[j][k].clone() } else { T::zero() }).collect())
            .collect()
    }

    /// Contraction `f ∼₁ f`: the matrix square `(Σ_k a_{jk} a_{kl})_{jl}`.
    pub fn contraction1(&self) -> SymmetricKernel2<T> {
        let n = self.n();
        let mut out = vec![vec![T::zero(); n]; n];
        for (j, row) in out.iter_mut().enumerate() {
            for (l, slot) in row.iter_mut().enumerate() {
                let mut acc = T::zero();
                for k in 0..n {
                    acc += self.a[j][k].clone() * self.a[k][l].clone();
                }
                *slot = acc;
            }
        }
        SymmetricKernel2 { a: out }
    }

    /// Orthogonal projection `π_1` onto the diagonal span `{e_j∘e_j}`.
    pub fn pi1(&self) -> SymmetricKernel2<T> {
        let n = self.n();
        let a = (0..n)
            .map(|j| (0..n).map(|k| if j == k { self.a[j][j].clone() } else { T::zero() }).collect())
            .collect();
        SymmetricKernel2 { a }
    }

    /// Entry-wise conversion to `f64`.
    pub fn to_f64(&self) -> SymmetricKernel2<f64> {
        SymmetricKernel2 { a: self.a.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect() }
    }
}

/// The three weighted norms on `H∘H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormVariant {
    /// Makes `Φ^{∘2}` an isometry.
    A,
    /// Makes `φ^(1,1)` and `φ^(2)` isometries on their domains.
    B,
    /// Makes `J_2` an isometry on symmetric kernels.
    C,
}

/// `|E[image(f)²] - ‖f‖_variant²|`, exact.
///
/// The image is `Φ^{∘2}(f)` for A, `φ^(1,1)(L) + φ^(2)(L)` for B where `L` keeps the
/// entries `j >= k` (the domain on which `φ^(1,1)` is injective), and `J_2(f)` for C.
pub fn isometry_residual(
    f: &SymmetricKernel2<Q>,
    variant: NormVariant,
    t: &GammaTables,
) -> Result<Q, ChaosError> {
    let (image, norm) = match variant {
        NormVariant::A => (f.phi_circ2_poly(t), f.norm_a_sq(t)),
        NormVariant::B => {
            let low = f.lower_matrix();
            let image = phi11_poly(&low).add(&phi2_poly(&low));
            let mut norm = Q::zero();
            for (j, row) in low.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    norm += if j == k { v * v * (t.m(4) - Q::one()) } else { v * v };
                }
            }
            (image, norm)
        }
        NormVariant::C => (f.j2_poly(), f.norm_c_sq(t)),
    };
    let e = image.mul(&image).expect(t.moments())?;
    Ok(if e >= norm { e - norm } else { norm - e })
}

/// Equivalence constants `a = min(E(X²-1)², 2)`, `b = max(E(X²-1)², 2)`.
pub fn equivalence_constants(t: &GammaTables) -> (Q, Q) {
    let v = t.m(4) - Q::one();
    let two = q(2, 1);
    if v < two {
        (v, two)
    } else {
        (two, v)
    }
}

/// Raw and normalized coefficients of the triangle kernel `h⊗g·1_C` on
/// `C = {0 <= x < y <= 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleKernel {
    raw: Matrix<Q>,
    nu: Vec<Q>,
    t: Matrix<f64>,
}

impl TriangleKernel {
    /// Kernel from exact raw entries `<h⊗g·1_C, p_j⊗p_k>` and the `nu_j`.
    pub fn from_raw(raw: Matrix<Q>, nu: Vec<Q>) -> Self {
        let s: Vec<f64> = nu.iter().map(|v| 1.0 / to_f64(v).sqrt()).collect();
        let t = raw
            .iter()
            .enumerate()
            .map(|(j, row)| row.iter().enumerate().map(|(k, r)| to_f64(r) * s[j] * s[k]).collect())
            .collect();
        TriangleKernel { raw, nu, t }
    }

    /// Truncation `N`.
    pub fn n(&self) -> usize {
        self.raw.len()
    }

    /// Exact raw entries `R_{jk}`.
    pub fn raw(&self) -> &Matrix<Q> {
        &self.raw
    }

    /// Basis scales `nu_j`.
    pub fn nu(&self) -> &[Q] {
        &self.nu
    }

    /// Normalized entries `T_{jk} = <h⊗g·1_C, e_j⊗e_k>`.
    pub fn matrix(&self) -> &Matrix<f64> {
        &self.t
    }

    /// Exact `T_{jk} T_{lm}` products are rational; this returns `T_{jk}²`.
    pub fn entry_sq(&self, j: usize, k: usize) -> Q {
        &self.raw[j][k] * &self.raw[j][k] / (&self.nu[j] * &self.nu[k])
    }

    /// Exact `Σ_{j,k} T_{jk}²`.
    pub fn norm_sq(&self) -> Q {
        let n = self.n();
        let mut acc = Q::zero();
        for j in 0..n {
            for k in 0..n {
                acc += self.entry_sq(j, k);
            }
        }
        acc
    }

    /// Exact `tr T = Σ_j T_{jj}`.
    pub fn trace(&self) -> Q {
        (0..self.n()).fold(Q::zero(), |acc, j| acc + &self.raw[j][j] / &self.nu[j])
    }

    /// Exact `tr(T²) = Σ_{j,k} T_{jk} T_{kj}`, i.e. `<f, f̃>` at truncation.
    pub fn trace_sq(&self) -> Q {
        let n = self.n();
        let mut acc = Q::zero();
        for j in 0..n {
            for k in 0..n {
                acc += &self.raw[j][k] * &self.raw[k][j] / (&self.nu[j] * &self.nu[k]);
            }
        }
        acc
    }

    /// Symmetrized kernel `S = (T + T^T)/2`, so that `I(h, g) = J_2(S)`.
    pub fn symmetric(&self) -> SymmetricKernel2<f64> {
        SymmetricKernel2::symmetrize(&self.t).unwrap_or_else(|_| unreachable!("square by construction"))
    }

    /// `I(h, g) = φ^(1,1)(T + T^T) + φ^(2)(T)` on a realization.
    pub fn integral(&self, xs: &[f64]) -> f64 {
        let sym = mat_add(&self.t, &transpose(&self.t));
        phi11(&sym, xs) + phi2(&self.t, xs)
    }

    /// `I(h, g)` as an exact polynomial in `U_j = X_j / sqrt(nu_j)`.
    pub fn integral_poly_scaled(&self) -> MultiPoly<Q> {
        let mut out = MultiPoly::zero();
        for j in 0..self.n() {
            for k in 0..j {
                out.add_term(vec![(k, 1), (j, 1)], &self.raw[j][k] + &self.raw[k][j]);
            }
            out.add_term(vec![(j, 2)], self.raw[j][j].clone());
            out.add_term(Vec::new(), -(&self.raw[j][j] / &self.nu[j]));
        }
        out
    }
}

/// Exact triangle kernel of `(h, g)` on `basis`:
/// `R_{jk} = ∫ g(y) p_k(y) [∫_0^y h(x) p_j(x) dx] dy`.
pub fn triangle_kernel(h: &PiecewisePoly, g: &PiecewisePoly, basis: &Basis) -> TriangleKernel {
    let n = basis.len();
    let inner: Vec<PiecewisePoly> = (0..n).map(|j| h.mul(basis.p(j)).antiderivative()).collect();
    let outer: Vec<PiecewisePoly> = (0..n).map(|k| g.mul(basis.p(k))).collect();
    let raw = inner
        .iter()
        .map(|hj| outer.iter().map(|gk| gk.mul(hj).integral()).collect())
        .collect();
    TriangleKernel::from_raw(raw, basis.nus().to_vec())
}

/// Both sides of the second-moment identity of the stochastic integral at
/// truncation `N`, all exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormIdentity {
    /// `E|I(h,g)|²` from the symbolic expectation engine.
    pub lhs: Q,
    /// `‖h⊗g·1_C‖²_N`.
    pub kernel_norm_sq: Q,
    /// `Σ_j T_{jj}² (E X⁴ - 3)`.
    pub fourth_cumulant_term: Q,
    /// `<f, f̃>_N = tr_N(T²)`, which vanishes as `N → ∞`.
    pub transpose_term: Q,
}

impl NormIdentity {
    /// The identity's right-hand side in the limit form (without `<f, f̃>_N`).
    pub fn rhs_limit_form(&self) -> Q {
        &self.kernel_norm_sq + &self.fourth_cumulant_term
    }

    /// Right-hand side at truncation `N`.
    pub fn rhs(&self) -> Q {
        self.rhs_limit_form() + &self.transpose_term
    }

    /// Exact equality at truncation.
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs()
    }
}

/// Evaluates both sides of `E|I|² = ‖f‖² + Σ f_jj² (m_4 - 3) + <f, f̃>` exactly.
pub fn norm_identity(k: &TriangleKernel, t: &GammaTables) -> Result<NormIdentity, ChaosError> {
    let i = k.integral_poly_scaled();
    let lhs = i.mul(&i).expect_scaled(t.moments(), k.nu())?;
    let m4m3 = t.m(4) - q(3, 1);
    let diag_sq = (0..k.n()).fold(Q::zero(), |acc, j| acc + k.entry_sq(j, j));
    Ok(NormIdentity {
        lhs,
        kernel_norm_sq: k.norm_sq(),
        fourth_cumulant_term: diag_sq * m4m3,
        transpose_term: k.trace_sq(),
    })
}

/// Exact Itô bracket at truncation: `Σ_{k<N} c^h_k c^g_k` (the diagonal-set
/// kernel vanishes for the diffuse reference measure).
pub fn ito_bracket(h: &ChaosVector, g: &ChaosVector) -> f64 {
    h.dot(g)
}

/// `Φ(h)Φ(g) - I(h,g) - I(g,h) - [Φ(h),Φ(g)]` on a realization.
pub fn ito_residual(
    h: &ChaosVector,
    g: &ChaosVector,
    k_hg: &TriangleKernel,
    k_gh: &TriangleKernel,
    xs: &[f64],
) -> f64 {
    crate::basis::phi(h, xs) * crate::basis::phi(g, xs)
        - k_hg.integral(xs)
        - k_gh.integral(xs)
        - ito_bracket(h, g)
}

/// One row of the Riemann-sum diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannRow {
    /// Number of uniform partition cells.
    pub cells: usize,
    /// Exact `E|S_n - I_N - tr_N T|²`.
    pub l2_error: Q,
    /// Exact constant part `Σ_k <h 1_{]0,t_k]}, g 1_{]t_k,t_{k+1}]}>_N`.
    pub constant: Q,
}

/// Riemann sums `S_n = Σ_k Φ(h 1_{]0,t_k]}) Φ(g 1_{]t_k,t_{k+1}]})` on uniform
/// partitions of `[0,1]` with `cells` intervals, compared with the integral.
///
/// At fixed `N` the truncated inner products do not vanish, so `S_n` converges
/// to `I_N + tr_N T`; the error is measured against that limit.
pub fn riemann_diagnostic(
    h: &PiecewisePoly,
    g: &PiecewisePoly,
    basis: &Basis,
    cells: &[usize],
    t: &GammaTables,
) -> Vec<RiemannRow> {
    let k = triangle_kernel(h, g, basis);
    let n = basis.len();
    let nu = basis.nus();
    let trace = k.trace();
    let m4m1 = t.m(4) - Q::one();
    cells
        .iter()
        .map(|&m| {
            let mut sum = vec![vec![Q::zero(); n]; n];
            let mut constant = Q::zero();
            for i in 1..m {
                let ti = q(i as i64, m as i64);
                let tn = q(i as i64 + 1, m as i64);
                let a = crate::basis::coeffs_of(h, Some(&ti), basis);
                let b = crate::basis::coeffs_of(&g.cut(&ti, &tn), None, basis);
                let (ra, rb) = (a.raw().unwrap_or_default(), b.raw().unwrap_or_default());
                for j in 0..n {
                    constant += &ra[j] * &rb[j] / &nu[j];
                    for l in 0..n {
                        sum[j][l] += &ra[j] * &rb[l];
                    }
                }
            }
            let mut err = Q::zero();
            for j in 0..n {
                for l in 0..j {
                    let d = &sum[j][l] - &k.raw()[j][l] + &sum[l][j] - &k.raw()[l][j];
                    err += &d * &d / (&nu[j] * &nu[l]);
                }
                let d = &sum[j][j] - &k.raw()[j][j];
                err += &d * &d / (&nu[j] * &nu[j]) * &m4m1;
            }
            let off = &constant - &trace;
            err += &off * &off;
            RiemannRow { cells: m, l2_error: err, constant }
        })
        .collect()
}

/// `(E|φ^(2)(f)|², (K_4 + 2K_2 + 1)‖f‖², E|φ^(1,1)(f)|², ‖f‖²)` for a general
/// exact kernel; `K_p` are the absolute moments of the reduced law.
pub fn operator_bounds(f: &Matrix<Q>, t: &GammaTables) -> Result<[Q; 4], ChaosError> {
    let p2 = phi2_poly(f);
    let p11 = phi11_poly(f);
    let e2 = p2.mul(&p2).expect(t.moments())?;
    let e11 = p11.mul(&p11).expect(t.moments())?;
    let norm: Q = f.iter().flatten().fold(Q::zero(), |acc, v| acc + v * v);
    let k = t.m(4) + q(2, 1) * t.m(2) + Q::one();
    Ok([e2, k * &norm, e11, norm])
}

/// Measured `‖φ^(2)‖²`: the supremum of `E|φ^(2)(f)|² / ‖f‖²`, attained on
/// diagonal kernels, equals `E(X²-1)² = m_4 - 1`.
pub fn phi2_operator_norm_sq(t: &GammaTables) -> Q {
    t.m(4) - Q::one()
}
