//! Orthonormal bases of `L²([0,1])` with exact unnormalized representatives,
//! chaos coefficient vectors and the linear chaos map `Φ`.
//!
//! Every basis function is stored as `e_j = p_j / sqrt(nu_j)` where `p_j` is
//! piecewise-polynomial with rational coefficients and `nu_j = ∫ p_j²` is
//! rational. Integrals against `p_j` are therefore exact; the square root only
//! enters when a float value is requested.

use laws::rational::{q, qi, to_f64};
use laws::{Poly, Q};
use num_traits::{One, Zero};

use crate::func::{linear, quadrature, PiecewisePoly};
use crate::ChaosError;

/// Family of orthonormal functions used as `(e_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Shifted Legendre polynomials `sqrt(2j-1) P_{j-1}(2x-1)`; `e_1 = 1`.
    Legendre,
    /// Haar system in dyadic order: `e_1 = 1`, then level `l` wavelets
    /// `2^{l/2}(1_{left} - 1_{right})` on the dyadic intervals of length `2^{-l}`.
    Haar,
}

impl BasisKind {
    /// Parses `legendre` or `haar`.
    pub fn parse(s: &str) -> Result<Self, ChaosError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "legendre" => Ok(BasisKind::Legendre),
            "haar" => Ok(BasisKind::Haar),
            other => Err(ChaosError::InvalidArgument(format!("unknown basis: {other}"))),
        }
    }
}

impl std::fmt::Display for BasisKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BasisKind::Legendre => "legendre",
            BasisKind::Haar => "haar",
        })
    }
}

/// The first `N` basis functions, 0-indexed (`index 0` is `e_1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    kind: BasisKind,
    p: Vec<PiecewisePoly>,
    nu: Vec<Q>,
    inv_sqrt_nu: Vec<f64>,
}

fn legendre_shifted(n: usize) -> Vec<Poly> {
    // Bonnet: (k+1) P_{k+1} = (2k+1) u P_k - k P_{k-1}, with u = 2x - 1.
    let u = linear(qi(-1), qi(2));
    let mut out = vec![Poly::constant(Q::one())];
    if n > 1 {
        out.push(u.clone());
    }
    for k in 1..n.saturating_sub(1) {
        let a = (&u * &out[k]).scale(&qi(2 * k as i64 + 1));
        let b = out[k - 1].scale(&qi(k as i64));
        out.push((&a - &b).scale(&q(1, k as i64 + 1)));
    }
    out.truncate(n);
    out
}

fn haar_function(j: usize) -> (PiecewisePoly, Q) {
    if j == 0 {
        return (PiecewisePoly::constant(Q::one()), Q::one());
    }
    let level = usize::BITS - 1 - j.leading_zeros();
    let m = j - (1 << level);
    let width = Q::new(1.into(), (1u64 << level).into());
    let lo = &width * qi(m as i64);
    let mid = &lo + &width / qi(2);
    let hi = &lo + &width;
    let up = PiecewisePoly::indicator(&lo, &mid);
    let down = PiecewisePoly::indicator(&mid, &hi).scale(&qi(-1));
    (up.add(&down), width)
}

impl Basis {
    /// The first `n` functions of the family.
    pub fn new(kind: BasisKind, n: usize) -> Result<Self, ChaosError> {
        if n == 0 {
            return Err(ChaosError::InvalidArgument("truncation must be at least 1".into()));
        }
        let (p, nu): (Vec<PiecewisePoly>, Vec<Q>) = match kind {
            BasisKind::Legendre => legendre_shifted(n)
                .into_iter()
                .enumerate()
                .map(|(j, p)| (PiecewisePoly::poly(p), q(1, 2 * j as i64 + 1)))
                .unzip(),
            BasisKind::Haar => (0..n).map(haar_function).unzip(),
        };
        let inv_sqrt_nu = nu.iter().map(|v| 1.0 / to_f64(v).sqrt()).collect();
        Ok(Basis { kind, p, nu, inv_sqrt_nu })
    }

    /// Default basis: shifted Legendre.
    pub fn legendre(n: usize) -> Result<Self, ChaosError> {
        Self::new(BasisKind::Legendre, n)
    }

    /// Family of the basis.
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Truncation `N`.
    pub fn len(&self) -> usize {
        self.p.len()
    }

    /// Always false: a basis has at least one function.
    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Unnormalized representative `p_j`.
    pub fn p(&self, j: usize) -> &PiecewisePoly {
        &self.p[j]
    }

    /// `nu_j = ∫ p_j²`.
    pub fn nu(&self, j: usize) -> &Q {
        &self.nu[j]
    }

    /// All `nu_j`.
    pub fn nus(&self) -> &[Q] {
        &self.nu
    }

    /// `1 / sqrt(nu_j)`.
    pub fn inv_sqrt_nu(&self, j: usize) -> f64 {
        self.inv_sqrt_nu[j]
    }

    /// Value of `e_j(x)`.
    pub fn eval(&self, j: usize, x: f64) -> f64 {
        self.p[j].eval_f64(x) * self.inv_sqrt_nu[j]
    }

    /// Exact Gram matrix of the `p_j`; diagonal with entries `nu_j`.
    pub fn gram(&self) -> Vec<Vec<Q>> {
        self.p
            .iter()
            .map(|a| self.p.iter().map(|b| a.mul(b).integral()).collect())
            .collect()
    }
}

/// Chaos coefficients `c_j = <h, e_j>` of a function, `j < N`.
///
/// Stored exactly as `raw_j = <h, p_j>` so that `c_j = raw_j / sqrt(nu_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosVector {
    raw: Vec<Q>,
    nu: Vec<Q>,
    c: Vec<f64>,
}

impl ChaosVector {
    /// Vector from exact raw coefficients and the matching `nu_j`.
    pub fn from_raw(raw: Vec<Q>, nu: Vec<Q>) -> Self {
        let c = raw.iter().zip(&nu).map(|(r, v)| to_f64(r) / to_f64(v).sqrt()).collect();
        ChaosVector { raw, nu, c }
    }

    /// Vector in an orthonormal coordinate system with exact coefficients.
    pub fn from_exact(c: Vec<Q>) -> Self {
        let nu = vec![Q::one(); c.len()];
        Self::from_raw(c, nu)
    }

    /// Vector with float coefficients only; `raw` holds no information.
    pub fn from_f64(c: Vec<f64>) -> Self {
        ChaosVector { raw: Vec::new(), nu: Vec::new(), c }
    }

    /// Truncation `N`.
    pub fn len(&self) -> usize {
        self.c.len()
    }

    /// True for an empty vector.
    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Float coefficients `c_j`.
    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    /// Exact `<h, p_j>`, when known.
    pub fn raw(&self) -> Option<&[Q]> {
        (!self.raw.is_empty()).then_some(self.raw.as_slice())
    }

    /// Exact `c_j²`, when known.
    pub fn coeff_sq(&self, j: usize) -> Option<Q> {
        self.raw().map(|r| &r[j] * &r[j] / &self.nu[j])
    }

    /// Exact `Σ c_j²`, when known.
    pub fn norm_sq_exact(&self) -> Option<Q> {
        self.raw()?;
        Some((0..self.len()).fold(Q::zero(), |acc, j| acc + self.coeff_sq(j).unwrap_or_default()))
    }

    /// `Σ c_j²` in floating point.
    pub fn norm_sq(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum()
    }

    /// Truncated inner product `Σ_{j<N} c_j d_j`.
    pub fn dot(&self, other: &ChaosVector) -> f64 {
        self.c.iter().zip(&other.c).map(|(a, b)| a * b).sum()
    }
}

/// Exact coefficients of `h · 1_{]0, t]}` (or of `h` when `t_cut` is `None`).
pub fn coeffs_of(h: &PiecewisePoly, t_cut: Option<&Q>, basis: &Basis) -> ChaosVector {
    let f = match t_cut {
        Some(t) => h.cut(&Q::zero(), t),
        None => h.clone(),
    };
    let raw = (0..basis.len()).map(|j| f.mul(basis.p(j)).integral()).collect();
    ChaosVector::from_raw(raw, basis.nus().to_vec())
}

/// Coefficients of a black-box integrand by adaptive quadrature on each
/// smooth piece of the basis.
pub fn coeffs_of_fn(
    h: &dyn Fn(f64) -> f64,
    t_cut: Option<f64>,
    basis: &Basis,
    tol: f64,
) -> Result<ChaosVector, ChaosError> {
    let t = t_cut.unwrap_or(1.0).clamp(0.0, 1.0);
    let c = (0..basis.len())
        .map(|j| {
            let p = basis.p(j);
            let mut acc = 0.0;
            for w in p.breaks().windows(2) {
                let (lo, hi) = (to_f64(&w[0]), to_f64(&w[1]).min(t));
                if lo < hi {
                    acc += quadrature(&|x| h(x) * p.eval_f64(x), lo, hi, tol)?;
                }
            }
            Ok(acc * basis.inv_sqrt_nu(j))
        })
        .collect::<Result<Vec<f64>, ChaosError>>()?;
    Ok(ChaosVector::from_f64(c))
}

/// `Φ(h) = Σ_j c_j x_j` on a realization.
pub fn phi(c: &ChaosVector, xs: &[f64]) -> f64 {
    c.coeffs().iter().zip(xs).map(|(a, x)| a * x).sum()
}
