//! Exact rank by fraction-free (Bareiss) elimination.

use laws::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Rank of a rational matrix. Rows are first scaled to integers; elimination
/// then stays in the integers, every division being exact.
pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use laws::rational::{q, qi};

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&[vec![qi(1), qi(2)], vec![qi(2), qi(4)]]), 1);
        assert_eq!(rank(&[vec![q(1, 2), qi(0)], vec![qi(0), q(1, 3)]]), 2);
        assert_eq!(rank(&[vec![qi(0), qi(0)], vec![qi(0), qi(0)]]), 0);
        assert_eq!(
            rank(&[vec![qi(0), qi(1), qi(2)], vec![qi(0), qi(2), qi(4)], vec![qi(1), qi(0), qi(1)]]),
            2
        );
    }
}
