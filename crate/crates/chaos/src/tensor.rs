//! Symmetric tensors of order at most four on the basis `(e_j)`, the operators
//! `Φ^{∘n}` and `a_k^n`, and the order decomposition of `J_2(f)²`.
//!
//! A tensor is stored as `Σ_M c_M ∘_{j∈M} e_j` over sorted index multisets `M`,
//! with `Φ^{∘n}` mapping the monomial `∘ e_{j_i}^{∘α_i}` to `Π P_{α_i}(X_{j_i})`.
//! In this convention a kernel `f` has `c_{(j,j)} = a_j` and
//! `c_{(j,k)} = 2 a_{jk}` for `j < k`.

use std::collections::BTreeMap;

use laws::rational::q;
use laws::Q;

use crate::kernel::SymmetricKernel2;
use crate::multipoly::MultiPoly;
use crate::scalar::Scalar;
use crate::tables::{bounded_compositions, GammaTables, MAX_ORDER};
use crate::ChaosError;

/// `Σ_M c_M ∘_{j∈M} e_j` with every `M` of size `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor<T: Scalar> {
    order: usize,
    c: BTreeMap<Vec<usize>, T>,
}

/// `(j, α)` runs of a sorted multiset.
pub fn runs(key: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &j in key {
        match out.last_mut() {
            Some((last, a)) if *last == j => *a += 1,
            _ => out.push((j, 1)),
        }
    }
    out
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out
}

impl<T: Scalar> SymTensor<T> {
    /// The zero tensor of a given order.
    pub fn zero(order: usize) -> Self {
        SymTensor { order, c: BTreeMap::new() }
    }

    /// Order-0 tensor holding a constant.
    pub fn scalar(v: T) -> Self {
        let mut t = Self::zero(0);
        t.add_coeff(Vec::new(), v);
        t
    }

    /// Order-1 tensor `Σ c_j e_j`.
    pub fn from_vector(c: &[T]) -> Self {
        let mut t = Self::zero(1);
        for (j, v) in c.iter().enumerate() {
            t.add_coeff(vec![j], v.clone());
        }
        t
    }

    /// Order-2 tensor of a symmetric kernel.
    pub fn from_kernel(f: &SymmetricKernel2<T>) -> Self {
        let two = T::from_q(&q(2, 1));
        let mut t = Self::zero(2);
        for j in 0..f.n() {
            t.add_coeff(vec![j, j], f.diag(j).clone());
            for k in (j + 1)..f.n() {
                t.add_coeff(vec![j, k], two.clone() * f.entry(j, k).clone());
            }
        }
        t
    }

    /// Adds `v` to the coefficient of the (sorted) multiset `key`.
    pub fn add_coeff(&mut self, key: Vec<usize>, v: T) {
        assert_eq!(key.len(), self.order, "multiset size must equal the order");
        if v.is_zero() {
            return;
        }
        let slot = self.c.entry(key).or_insert_with(T::zero);
        *slot += v;
    }

    /// Order `n`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `key` (zero when absent).
    pub fn coeff(&self, key: &[usize]) -> T {
        self.c.get(key).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero coefficients.
    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<usize>, &T)> {
        self.c.iter().filter(|(_, v)| !v.is_zero())
    }

    /// Sum of two tensors of the same order.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "orders must match");
        let mut out = self.clone();
        for (k, v) in &other.c {
            out.add_coeff(k.clone(), v.clone());
        }
        out
    }

    /// Product by a scalar.
    pub fn scale(&self, s: &T) -> Self {
        SymTensor {
            order: self.order,
            c: self.c.iter().map(|(k, v)| (k.clone(), v.clone() * s.clone())).collect(),
        }
    }

    /// Symmetric product `F ∘ G`, summed over ordered pairs of monomials.
    pub fn circ(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.order + other.order);
        for (ka, va) in &self.c {
            for (kb, vb) in &other.c {
                out.add_coeff(merge_sorted(ka, kb), va.clone() * vb.clone());
            }
        }
        out
    }

    /// Annihilation `a_k^n`: each `∘ e_{j_i}^{∘α_i}` goes to
    /// `Σ_{Σk_i=k, k_i<=α_i} Π_{k_i≠0}(γ_{α_i,α_i-k_i} - Γ_{α_i,α_i-k_i}) ∘ e_{j_i}^{∘(α_i-k_i)}`.
    pub fn annihilate(&self, k: usize, t: &GammaTables) -> Result<Self, ChaosError> {
        if k > self.order {
            return Err(ChaosError::InvalidArgument(format!(
                "cannot lower order {} by {k}",
                self.order
            )));
        }
        let mut out = Self::zero(self.order - k);
        for (key, v) in &self.c {
            let rs = runs(key);
            let alphas: Vec<usize> = rs.iter().map(|r| r.1).collect();
            for ks in bounded_compositions(&alphas, k) {
                let mut w = v.clone();
                let mut new_key = Vec::with_capacity(self.order - k);
                for ((j, a), ki) in rs.iter().zip(&ks) {
                    if *ki > 0 {
                        w = w * T::from_q(&t.delta(*a, a - ki));
                    }
                    new_key.extend(std::iter::repeat_n(*j, a - ki));
                }
                out.add_coeff(new_key, w);
            }
        }
        Ok(out)
    }

    /// Keeps only the multisets with a single distinct index.
    pub fn pi1(&self) -> Self {
        SymTensor {
            order: self.order,
            c: self
                .c
                .iter()
                .filter(|(k, _)| k.first() == k.last())
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// `Φ^{∘n}` on a realization, given `P_0..P_4` evaluated at each `x_j`.
    pub fn phi_eval(&self, pvals: &[[f64; MAX_ORDER + 1]]) -> f64 {
        self.c
            .iter()
            .map(|(key, v)| {
                runs(key).iter().fold(v.to_f64(), |acc, &(j, a)| acc * pvals[j][a])
            })
            .sum()
    }

    /// `Φ^{∘n}` as an exact polynomial in the `X_j`.
    pub fn phi_poly(&self, t: &GammaTables) -> MultiPoly<T> {
        let mut out = MultiPoly::zero();
        for (key, v) in &self.c {
            let mut term = MultiPoly::constant(v.clone());
            for (j, a) in runs(key) {
                term = term.mul(&MultiPoly::univariate(t.p(a), j));
            }
            out = out.add(&term);
        }
        out
    }

    /// `‖F‖_A² = Σ_M c_M² Π E P_{α_i}²`, which equals `E[Φ^{∘n}(F)²]`.
    pub fn a_norm_sq(&self, t: &GammaTables) -> T {
        let mut acc = T::zero();
        for (key, v) in &self.c {
            let w = runs(key)
                .iter()
                .fold(T::from_q(&Q::from_integer(1.into())), |acc, &(_, a)| acc * T::from_q(t.p_norm_sq(a)));
            acc += v.clone() * v.clone() * w;
        }
        acc
    }
}

/// Components of `J_2(f)²` by polynomial order `0..=4`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderComponents<T: Scalar> {
    /// `components[i]` is the order-`i` tensor.
    pub components: [SymTensor<T>; 5],
}

/// Builds the five tensors
/// `2‖f‖² + a_4^4(f∘f)`,
/// `a_3^4(f∘f) + 4a_1^2(f∼₁f) - 6a_1^2((π_1 f)∼₁(π_1 f))`,
/// `4 f∼₁f + a_2^4(f∘f)`, `a_1^4(f∘f)` and `f∘f`.
pub fn order_components<T: Scalar>(
    f: &SymmetricKernel2<T>,
    t: &GammaTables,
) -> Result<OrderComponents<T>, ChaosError> {
    let big = SymTensor::from_kernel(f);
    let ff = big.circ(&big);
    let con = SymTensor::from_kernel(&f.contraction1());
    let con_diag = SymTensor::from_kernel(&f.pi1().contraction1());
    let n = |v: i64| T::from_q(&q(v, 1));
    let c0 = SymTensor::scalar(n(2) * f.norm_sq()).add(&ff.annihilate(4, t)?);
    let c1 = ff
        .annihilate(3, t)?
        .add(&con.annihilate(1, t)?.scale(&n(4)))
        .add(&con_diag.annihilate(1, t)?.scale(&n(-6)));
    let c2 = con.scale(&n(4)).add(&ff.annihilate(2, t)?);
    let c3 = ff.annihilate(1, t)?;
    Ok(OrderComponents { components: [c0, c1, c2, c3, ff] })
}

/// Evaluation of the order decomposition on one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderDecomposition {
    /// Values of the order `0..=4` components.
    pub values: [f64; 5],
    /// `J_2(f)²` evaluated directly.
    pub square: f64,
    /// `|Σ values - square|`.
    pub residual: f64,
    /// Magnitude scale `1 + Σ|values| + square` for relative tolerances.
    pub scale: f64,
}

impl OrderComponents<f64> {
    /// Evaluates the components of `J_2(f)²` on `xs`, where `self` was built from `f`.
    pub fn evaluate(
        &self,
        f: &SymmetricKernel2<f64>,
        t: &GammaTables,
        xs: &[f64],
    ) -> Result<OrderDecomposition, ChaosError> {
        if xs.len() < f.n() {
            return Err(ChaosError::Dimension { expected: f.n(), got: xs.len() });
        }
        let pvals: Vec<[f64; MAX_ORDER + 1]> = xs.iter().map(|&x| t.eval_p(x)).collect();
        let mut values = [0.0; 5];
        for (v, c) in values.iter_mut().zip(&self.components) {
            *v = c.phi_eval(&pvals);
        }
        let j = f.j2(xs);
        let square = j * j;
        let total: f64 = values.iter().sum();
        let scale = 1.0 + values.iter().map(|v| v.abs()).sum::<f64>() + square;
        Ok(OrderDecomposition { values, square, residual: (total - square).abs(), scale })
    }
}

/// Evaluates `J_2(f)²` and its five order components on `xs`.
pub fn order_decomposition(
    f: &SymmetricKernel2<f64>,
    t: &GammaTables,
    xs: &[f64],
) -> Result<OrderDecomposition, ChaosError> {
    if xs.len() < f.n() {
        return Err(ChaosError::Dimension { expected: f.n(), got: xs.len() });
    }
    order_components(f, t)?.evaluate(f, t, xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use laws::rational::qi;
    use laws::LawKind;

    #[test]
    fn runs_group_repeats() {
        assert_eq!(runs(&[1, 1, 3, 4, 4, 4]), vec![(1, 2), (3, 1), (4, 3)]);
    }

    #[test]
    fn single_diagonal_decomposition_is_exact() {
        let t = GammaTables::for_law(&LawKind::exponential(qi(1))).unwrap();
        let f = SymmetricKernel2::from_parts(vec![qi(1)], &[vec![]]).unwrap();
        let comps = order_components(&f, &t).unwrap();
        let total = comps
            .components
            .iter()
            .fold(MultiPoly::zero(), |acc, c| acc.add(&c.phi_poly(&t)));
        let j = f.j2_poly();
        assert_eq!(total, j.mul(&j));
    }
}
