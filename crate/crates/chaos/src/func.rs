//! Piecewise-polynomial functions on `[0, 1]` with exact rational coefficients,
//! plus a Gauss-Legendre fallback for black-box integrands.

use laws::rational::{qi, to_f64};
use laws::{Poly, Q};
use num_traits::{One, Signed, Zero};

use crate::ChaosError;

/// A function on `[0, 1]` equal to `pieces[i]` on `]breaks[i], breaks[i+1]]`.
///
/// Pieces are ordinary polynomials in the global variable `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    breaks: Vec<Q>,
    pieces: Vec<Poly>,
}

fn merge_breaks(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = a.iter().chain(b.iter()).cloned().collect();
    out.sort();
    out.dedup();
    out
}

impl PiecewisePoly {
    /// Builds a function from strictly increasing breaks `0 = b_0 < ... < b_m = 1`
    /// and one polynomial per interval.
    pub fn new(breaks: Vec<Q>, pieces: Vec<Poly>) -> Result<Self, ChaosError> {
        if breaks.len() < 2 || pieces.len() + 1 != breaks.len() {
            return Err(ChaosError::InvalidFunction(
                "need m + 1 breaks for m pieces, m >= 1".into(),
            ));
        }
        if !breaks[0].is_zero() || !breaks[breaks.len() - 1].is_one() {
            return Err(ChaosError::InvalidFunction("breaks must start at 0 and end at 1".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ChaosError::InvalidFunction("breaks must be strictly increasing".into()));
        }
        Ok(PiecewisePoly { breaks, pieces })
    }

    /// A single polynomial on the whole interval.
    pub fn poly(p: Poly) -> Self {
        PiecewisePoly { breaks: vec![Q::zero(), Q::one()], pieces: vec![p] }
    }

    /// The constant function `c`.
    pub fn constant(c: Q) -> Self {
        Self::poly(Poly::constant(c))
    }

    /// Indicator of `]lo, hi]`, clamped to `[0, 1]`.
    pub fn indicator(lo: &Q, hi: &Q) -> Self {
        Self::constant(Q::one()).cut(lo, hi)
    }

    /// Break points.
    pub fn breaks(&self) -> &[Q] {
        &self.breaks
    }

    /// Polynomial pieces.
    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    /// Same function on a finer partition containing `extra`.
    fn refine(&self, extra: &[Q]) -> PiecewisePoly {
        let inside: Vec<Q> = extra
            .iter()
            .filter(|b| !b.is_negative() && **b <= Q::one())
            .cloned()
            .collect();
        let breaks = merge_breaks(&self.breaks, &inside);
        let pieces = breaks
            .windows(2)
            .map(|w| self.pieces[self.piece_index(&w[1])].clone())
            .collect();
        PiecewisePoly { breaks, pieces }
    }

    /// Index of the piece whose interval `]b_i, b_{i+1}]` contains `x`; `x = 0`
    /// maps to the first piece.
    fn piece_index(&self, x: &Q) -> usize {
        let i = self.breaks.partition_point(|b| b < x);
        i.saturating_sub(1).min(self.pieces.len() - 1)
    }

    /// Value at `x`.
    pub fn eval(&self, x: &Q) -> Q {
        self.pieces[self.piece_index(x)].eval(x)
    }

    /// Value at `x` in floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let i = self.breaks.partition_point(|b| to_f64(b) < x);
        let i = i.saturating_sub(1).min(self.pieces.len() - 1);
        self.pieces[i].eval_f64(x)
    }

    fn zip_with(&self, other: &PiecewisePoly, op: impl Fn(&Poly, &Poly) -> Poly) -> PiecewisePoly {
        let breaks = merge_breaks(&self.breaks, &other.breaks);
        let a = self.refine(&breaks);
        let b = other.refine(&breaks);
        let pieces = a.pieces.iter().zip(&b.pieces).map(|(p, q)| op(p, q)).collect();
        PiecewisePoly { breaks, pieces }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(other, |p, q| p + q)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(other, |p, q| {
            if p.is_zero() || q.is_zero() {
                Poly::zero()
            } else {
                p * q
            }
        })
    }

    /// Multiplies every piece by `s`.
    pub fn scale(&self, s: &Q) -> PiecewisePoly {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Product with the indicator of `]lo, hi]`.
    pub fn cut(&self, lo: &Q, hi: &Q) -> PiecewisePoly {
        let r = self.refine(&[lo.clone(), hi.clone()]);
        let pieces = r
            .breaks
            .windows(2)
            .zip(r.pieces)
            .map(|(w, p)| if &w[0] >= lo && &w[1] <= hi { p } else { Poly::zero() })
            .collect();
        PiecewisePoly { breaks: r.breaks, pieces }
    }

    /// `∫_a^b` of the function, for `0 <= a <= b <= 1`.
    pub fn integrate(&self, a: &Q, b: &Q) -> Q {
        let mut total = Q::zero();
        for (w, p) in self.breaks.windows(2).zip(&self.pieces) {
            let lo = if &w[0] > a { &w[0] } else { a };
            let hi = if &w[1] < b { &w[1] } else { b };
            if lo >= hi || p.is_zero() {
                continue;
            }
            let anti = p.antiderivative();
            total += anti.eval(hi) - anti.eval(lo);
        }
        total
    }

    /// `∫_0^1` of the function.
    pub fn integral(&self) -> Q {
        self.integrate(&Q::zero(), &Q::one())
    }

    /// Squared `L²` norm.
    pub fn norm_sq(&self) -> Q {
        self.mul(self).integral()
    }

    /// The continuous primitive `y ↦ ∫_0^y f`.
    pub fn antiderivative(&self) -> PiecewisePoly {
        let mut acc = Q::zero();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (w, p) in self.breaks.windows(2).zip(&self.pieces) {
            if p.is_zero() {
                pieces.push(Poly::constant(acc.clone()));
                continue;
            }
            let a = p.antiderivative();
            let shift = &acc - a.eval(&w[0]);
            acc += a.eval(&w[1]) - a.eval(&w[0]);
            pieces.push(&a + &Poly::constant(shift));
        }
        PiecewisePoly { breaks: self.breaks.clone(), pieces }
    }

    /// True when every piece vanishes.
    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Poly::is_zero)
    }
}

/// Nodes and weights of the 5-point Gauss-Legendre rule on `[-1, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_889),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

fn composite_gl(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let h = (hi - lo) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = lo + (i as f64 + 0.5) * h;
            GL5.iter().map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `∫_lo^hi f` by composite Gauss-Legendre with panel doubling until two
/// successive estimates agree within `tol`.
pub fn quadrature(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64, ChaosError> {
    let mut panels = 1;
    let mut prev = composite_gl(f, lo, hi, panels);
    while panels < 1 << 16 {
        panels *= 2;
        let next = composite_gl(f, lo, hi, panels);
        if (next - prev).abs() <= tol * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    let last = composite_gl(f, lo, hi, panels * 2);
    Err(ChaosError::Quadrature { residual: (last - prev).abs() })
}

/// The linear polynomial `a + b x`.
pub fn linear(a: Q, b: Q) -> Poly {
    Poly::new(vec![a, b])
}

/// The identity function `x` on `[0, 1]`.
pub fn identity() -> PiecewisePoly {
    PiecewisePoly::poly(linear(Q::zero(), qi(1)))
}
