//! Closed-form determinant values for tree distance matrices, computed as
//! exact polynomials.
//!
//! Terms with a `[2α_i][2α_j]` denominator are stored multiplied through
//! by `∏ [2α_k]`, so everything stays inside `Z[q]`.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::poly::{qbracket, qpower, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosedFormError {
    #[error("need at least {min} vertices, got {n}")]
    TooFewVertices { n: usize, min: usize },
    #[error("need at least {min} weights, got {found}")]
    TooFewWeights { found: usize, min: usize },
    #[error("edge weights must be positive")]
    ZeroWeight,
}

/// Edge weights `α_1, …, α_{n-1}` of a tree. Semantically a multiset; the
/// order only fixes how the pair terms are laid out.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightMultiset(Vec<u64>);

impl WeightMultiset {
    pub fn new(weights: Vec<u64>) -> Result<Self, ClosedFormError> {
        if weights.is_empty() {
            return Err(ClosedFormError::TooFewWeights { found: 0, min: 1 });
        }
        if weights.contains(&0) {
            return Err(ClosedFormError::ZeroWeight);
        }
        Ok(WeightMultiset(weights))
    }

    pub fn unit(edges: usize) -> Result<Self, ClosedFormError> {
        Self::new(vec![1; edges])
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Number of tree vertices, one more than the number of weights.
    pub fn order(&self) -> usize {
        self.0.len() + 1
    }

    fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    fn product(&self) -> BigInt {
        self.0.iter().map(|&w| BigInt::from(w)).product()
    }
}

fn sign(exp: usize) -> BigInt {
    if exp.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `-(n-1)(-2)^{n-2}`, the determinant of a unit-weight distance matrix.
pub fn graham_pollak(n: usize) -> Result<BigInt, ClosedFormError> {
    if n < 2 {
        return Err(ClosedFormError::TooFewVertices { n, min: 2 });
    }
    let power = sign(n - 2) * (BigInt::one() << (n - 2));
    Ok(-BigInt::from(n - 1) * power)
}

/// `(-1)^{n-1} 2^{n-2} (∏α)(2x + Σα)` as a polynomial in `x`.
pub fn bkn_det_xj(w: &WeightMultiset) -> Poly {
    let n = w.order();
    let scale = sign(n - 1) * (BigInt::one() << (n - 2)) * w.product();
    Poly::from_coeffs(vec![BigInt::from(w.sum()), BigInt::from(2)]).scale(&scale)
}

/// `(-1)^{n-1} 2^{n-2} (∏α)(Σα)`, the determinant of `D(T)`.
pub fn bkn_det(w: &WeightMultiset) -> BigInt {
    let n = w.order();
    sign(n - 1) * (BigInt::one() << (n - 2)) * w.product() * BigInt::from(w.sum())
}

/// `∏ (1 - q^{2α_i})`, the determinant of `D*_q(T)`.
pub fn dq_star_closed(w: &WeightMultiset) -> Poly {
    w.as_slice()
        .iter()
        .map(|&a| Poly::one() - qpower(2 * a))
        .product()
}

/// Index pairs `(i, j)` (0-based into the weights) of the pair terms for
/// `m >= 3` weights: the first two, the last two, and every `(i, i+2)`.
pub fn pair_layout(m: usize) -> Vec<(usize, usize)> {
    let mut pairs = vec![(0, 1), (m - 2, m - 1)];
    pairs.extend((0..m - 2).map(|i| (i, i + 2)));
    pairs
}

/// `∏[2α_k] · F(α)`, i.e. the sum over the pair terms of
/// `[α_i][α_j][α_i+α_j] ∏_{k ∉ {i,j}} [2α_k]`. Needs at least three weights.
pub fn f_cleared(w: &WeightMultiset) -> Result<Poly, ClosedFormError> {
    let a = w.as_slice();
    let m = a.len();
    if m < 3 {
        return Err(ClosedFormError::TooFewWeights { found: m, min: 3 });
    }
    let doubled: Vec<Poly> = a.iter().map(|&x| qbracket(2 * x)).collect();
    let total = pair_layout(m)
        .into_iter()
        .map(|(i, j)| {
            let head = qbracket(a[i]) * qbracket(a[j]) * qbracket(a[i] + a[j]);
            (0..m)
                .filter(|&k| k != i && k != j)
                .fold(head, |acc, k| acc * &doubled[k])
        })
        .sum();
    Ok(total)
}

/// Determinant of `D_q(T)`: `-[α_1]^2` for one edge, `2[α_1][α_2][α_1+α_2]`
/// for two, and `(-1)^{n-1}` times [`f_cleared`] from three edges on.
pub fn dq_closed(w: &WeightMultiset) -> Poly {
    let a = w.as_slice();
    match a.len() {
        1 => -qbracket(a[0]).pow(2),
        2 => (qbracket(a[0]) * qbracket(a[1]) * qbracket(a[0] + a[1])).scale(&BigInt::from(2)),
        _ => {
            let f = f_cleared(w).expect("three or more weights");
            f.scale(&sign(w.order() - 1))
        }
    }
}

/// `[w_first][w_last] ∏ [2 w_rest_i]`: the determinant of `D_q(T)` with the
/// first row and last column (or vice versa) deleted, when `v_1` and `v_n`
/// are pendant.
pub fn corner_minor_closed(w_first: u64, w_last: u64, w_rest: &[u64]) -> Poly {
    w_rest
        .iter()
        .fold(qbracket(w_first) * qbracket(w_last), |acc, &a| {
            acc * qbracket(2 * a)
        })
}

/// `(1 - q^2)^{n-1}`.
pub fn dq_star_simple(n: usize) -> Result<Poly, ClosedFormError> {
    if n < 2 {
        return Err(ClosedFormError::TooFewVertices { n, min: 2 });
    }
    Ok(Poly::from_i64s(&[1, 0, -1]).pow((n - 1) as u32))
}

/// `(-1)^{n-1} (n-1) (1+q)^{n-2}`.
pub fn dq_simple(n: usize) -> Result<Poly, ClosedFormError> {
    if n < 2 {
        return Err(ClosedFormError::TooFewVertices { n, min: 2 });
    }
    let scale = sign(n - 1) * BigInt::from(n - 1);
    Ok(Poly::from_i64s(&[1, 1]).pow((n - 2) as u32).scale(&scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    fn w(v: &[u64]) -> WeightMultiset {
        WeightMultiset::new(v.to_vec()).unwrap()
    }

    fn all_orders(v: &[u64]) -> Vec<Vec<u64>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let head = rest.remove(i);
            for mut tail in all_orders(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    #[test]
    fn graham_pollak_values() {
        assert_eq!(graham_pollak(2).unwrap(), BigInt::from(-1));
        assert_eq!(graham_pollak(4).unwrap(), BigInt::from(-12));
        assert_eq!(graham_pollak(5).unwrap(), BigInt::from(32));
        assert!(graham_pollak(1).is_err());
    }

    #[test]
    fn bkn_values() {
        assert_eq!(bkn_det_xj(&w(&[1])), p(&[-1, -2]));
        assert_eq!(bkn_det_xj(&w(&[1, 1, 1])), p(&[-12, -8]));
        assert_eq!(bkn_det(&w(&[1, 2])), BigInt::from(12));
        assert_eq!(bkn_det(&w(&[3])), BigInt::from(-9));
        for n in 2..10 {
            let unit = WeightMultiset::unit(n - 1).unwrap();
            assert_eq!(bkn_det(&unit), graham_pollak(n).unwrap());
            assert_eq!(bkn_det_xj(&unit).coeff(0), bkn_det(&unit));
        }
    }

    #[test]
    fn dq_star_values() {
        assert_eq!(dq_star_closed(&w(&[1, 1])), p(&[1, 0, -2, 0, 1]));
        assert_eq!(dq_star_closed(&w(&[2])), p(&[1, 0, 0, 0, -1]));
        assert_eq!(
            dq_star_closed(&w(&[1, 3, 2])),
            dq_star_closed(&w(&[2, 1, 3]))
        );
        assert_eq!(dq_star_simple(2).unwrap(), p(&[1, 0, -1]));
    }

    #[test]
    fn dq_values() {
        assert_eq!(dq_closed(&w(&[1, 2])), p(&[2, 4, 4, 2]));
        assert_eq!(dq_closed(&w(&[1, 1, 1])), p(&[-3, -6, -3]));
        assert_eq!(dq_closed(&w(&[4])), -qbracket(4).pow(2));
        assert_eq!(dq_simple(3).unwrap(), p(&[2, 2]));
        for n in 2..10 {
            let unit = WeightMultiset::unit(n - 1).unwrap();
            assert_eq!(dq_closed(&unit), dq_simple(n).unwrap());
            assert_eq!(
                dq_simple(n).unwrap().eval_int(&BigInt::one()),
                graham_pollak(n).unwrap()
            );
            assert_eq!(dq_star_closed(&unit), dq_star_simple(n).unwrap());
        }
    }

    #[test]
    fn f_cleared_unit_weights() {
        // each of the three terms is [1][1][2][2] = (1+q)^2
        assert_eq!(
            f_cleared(&w(&[1, 1, 1])).unwrap(),
            p(&[1, 1]).pow(2).scale(&3.into())
        );
        assert!(f_cleared(&w(&[1, 1])).is_err());
    }

    #[test]
    fn dq_closed_is_signed_f_cleared() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let len = rng.gen_range(3..=8);
            let ws = w(&(0..len).map(|_| rng.gen_range(1..=5)).collect::<Vec<_>>());
            let s = if ws.order().is_multiple_of(2) { -1 } else { 1 };
            assert_eq!(dq_closed(&ws), f_cleared(&ws).unwrap().scale(&s.into()));
        }
    }

    #[test]
    fn q_one_specialisation_recovers_bkn() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let len = rng.gen_range(1..=8);
            let ws = w(&(0..len).map(|_| rng.gen_range(1..=6)).collect::<Vec<_>>());
            assert_eq!(dq_closed(&ws).eval_int(&BigInt::one()), bkn_det(&ws));
        }
    }

    #[test]
    fn f_cleared_is_symmetric_exhaustively() {
        for base in [
            vec![1, 2, 3],
            vec![1, 2, 3, 4],
            vec![2, 2, 5, 1],
            vec![3, 1, 1],
        ] {
            let reference = f_cleared(&w(&base)).unwrap();
            for order in all_orders(&base) {
                assert_eq!(f_cleared(&w(&order)).unwrap(), reference, "{order:?}");
            }
        }
    }

    #[test]
    fn f_cleared_is_symmetric_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let len = rng.gen_range(5..=7);
            let mut ws: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
            let reference = f_cleared(&w(&ws)).unwrap();
            for _ in 0..5 {
                for i in (1..ws.len()).rev() {
                    ws.swap(i, rng.gen_range(0..=i));
                }
                assert_eq!(f_cleared(&w(&ws)).unwrap(), reference);
            }
        }
    }

    #[test]
    fn corner_minor_unit_path() {
        assert_eq!(corner_minor_closed(1, 1, &[1]), p(&[1, 1]));
    }

    #[test]
    fn weight_validation() {
        assert!(WeightMultiset::new(vec![]).is_err());
        assert_eq!(
            WeightMultiset::new(vec![1, 0]),
            Err(ClosedFormError::ZeroWeight)
        );
    }
}
