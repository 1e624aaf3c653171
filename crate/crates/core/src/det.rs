//! Exact determinants over `Z[q]`.
//!
//! [`det_bareiss`] is the production path. [`det_cofactor`] is a small
//! Laplace-expansion oracle, and [`dodgson`] evaluates by condensation.

use thiserror::Error;

use crate::matrix::{MatrixError, PolyMatrix};
use crate::poly::{Poly, PolyError};

/// Largest order accepted by the cofactor oracle.
pub const MAX_COFACTOR_ORDER: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetError {
    #[error("inexact division during elimination (implementation bug): {0}")]
    Inexact(#[from] PolyError),
    #[error("cofactor expansion is limited to order {max}, got {order}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("Dodgson's identity needs order at least 3, got {0}")]
    OrderTooSmall(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Fraction-free (Bareiss) elimination. Each step divides exactly by the
/// previous pivot; a zero pivot is replaced by the first later column with
/// a nonzero entry in the pivot row.
pub fn det_bareiss(m: &PolyMatrix) -> Result<Poly, DetError> {
    let n = m.order();
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&c| !a[(k, c)].is_zero()) {
                Some(c) => {
                    a.swap_columns(k, c);
                    negate = !negate;
                }
                // the remaining block has a zero row
                None => return Ok(Poly::zero()),
            }
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let cross = &a[(i, k)] * &a[(k, j)];
                let num = &a[(i, j)] * &pivot - cross;
                a[(i, j)] = num.exact_div(&prev)?;
            }
            a[(i, k)] = Poly::zero();
        }
        prev = pivot;
    }
    let det = a[(n - 1, n - 1)].clone();
    Ok(if negate { -det } else { det })
}

/// Laplace expansion along the first row. Factorial cost, so capped at
/// [`MAX_COFACTOR_ORDER`].
pub fn det_cofactor(m: &PolyMatrix) -> Result<Poly, DetError> {
    let n = m.order();
    if n > MAX_COFACTOR_ORDER {
        return Err(DetError::OrderTooLarge {
            order: n,
            max: MAX_COFACTOR_ORDER,
        });
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(laplace(m, 0, &cols))
}

fn laplace(m: &PolyMatrix, row: usize, cols: &[usize]) -> Poly {
    match cols.len() {
        0 => Poly::one(),
        1 => m[(row, cols[0])].clone(),
        _ => {
            let mut total = Poly::zero();
            for (pos, &c) in cols.iter().enumerate() {
                let entry = &m[(row, c)];
                if entry.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = entry * laplace(m, row + 1, &rest);
                if pos % 2 == 0 {
                    total += &term;
                } else {
                    total -= &term;
                }
            }
            total
        }
    }
}

/// Result of Dodgson condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condensation {
    Determinant(Poly),
    /// An interior entry needed as a divisor was zero. `step` is the order
    /// of the matrix whose entry vanished.
    Inapplicable {
        step: usize,
    },
}

impl Condensation {
    pub fn value(&self) -> Option<&Poly> {
        match self {
            Condensation::Determinant(p) => Some(p),
            Condensation::Inapplicable { .. } => None,
        }
    }
}

/// Determinant by iterated condensation: each pass replaces an order-k
/// matrix by the order-(k-1) matrix of its connected 2×2 minors, divided
/// entrywise by the interior of the matrix from two passes earlier.
pub fn dodgson(m: &PolyMatrix) -> Result<Condensation, DetError> {
    let n = m.order();
    if n == 0 {
        return Ok(Condensation::Determinant(Poly::one()));
    }
    // the pass before the input is an all-ones matrix of order n + 1
    let mut older = PolyMatrix::from_fn(n + 1, |_, _| Poly::one());
    let mut current = m.clone();
    while current.order() > 1 {
        let k = current.order();
        for i in 1..older.order() - 1 {
            for j in 1..older.order() - 1 {
                if older[(i, j)].is_zero() {
                    return Ok(Condensation::Inapplicable {
                        step: older.order(),
                    });
                }
            }
        }
        let mut next = PolyMatrix::zeros(k - 1);
        for i in 0..k - 1 {
            for j in 0..k - 1 {
                let minor = &current[(i, j)] * &current[(i + 1, j + 1)]
                    - &current[(i, j + 1)] * &current[(i + 1, j)];
                next[(i, j)] = minor.exact_div(&older[(i + 1, j + 1)])?;
            }
        }
        older = std::mem::replace(&mut current, next);
    }
    Ok(Condensation::Determinant(current[(0, 0)].clone()))
}

/// Both sides of `det(A) det(A^{1n}_{1n}) = det(A^1_1) det(A^n_n) -
/// det(A^n_1) det(A^1_n)`, each determinant by Bareiss.
pub fn dodgson_identity_sides(m: &PolyMatrix) -> Result<(Poly, Poly), DetError> {
    let n = m.order();
    if n < 3 {
        return Err(DetError::OrderTooSmall(n));
    }
    let last = n - 1;
    let det = |rows: &[usize], cols: &[usize]| -> Result<Poly, DetError> {
        det_bareiss(&m.minor(rows, cols)?)
    };
    let lhs = det(&[], &[])? * det(&[0, last], &[0, last])?;
    let rhs = det(&[0], &[0])? * det(&[last], &[last])? - det(&[0], &[last])? * det(&[last], &[0])?;
    Ok((lhs, rhs))
}

pub fn check_dodgson_identity(m: &PolyMatrix) -> Result<bool, DetError> {
    let (lhs, rhs) = dodgson_identity_sides(m)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{build_d, build_dq, build_dq_star};
    use crate::tree::WeightedTree;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(rows: &[&[i64]]) -> PolyMatrix {
        PolyMatrix::from_int_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    fn unit_path(n: usize) -> WeightedTree {
        WeightedTree::path(n, &vec![1; n - 1]).unwrap()
    }

    fn random_int_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> PolyMatrix {
        PolyMatrix::from_fn(n, |_, _| Poly::constant(rng.gen_range(-bound..=bound)))
    }

    fn random_poly_matrix(rng: &mut ChaCha8Rng, n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(n, |_, _| {
            let len = rng.gen_range(0..4);
            Poly::from_i64s(&(0..len).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
        })
    }

    #[test]
    fn bareiss_examples() {
        assert_eq!(det_bareiss(&PolyMatrix::identity(2)).unwrap(), Poly::one());
        assert_eq!(det_bareiss(&build_d(&unit_path(4))).unwrap(), p(&[-12]));
        assert_eq!(det_bareiss(&build_dq(&unit_path(3))).unwrap(), p(&[2, 2]));
        assert_eq!(det_bareiss(&PolyMatrix::zeros(0)).unwrap(), Poly::one());
    }

    #[test]
    fn bareiss_pivoting_and_singular_cases() {
        assert_eq!(det_bareiss(&ints(&[&[0, 1], &[1, 0]])).unwrap(), p(&[-1]));
        assert_eq!(
            det_bareiss(&ints(&[&[0, 0], &[1, 2]])).unwrap(),
            Poly::zero()
        );
        assert_eq!(
            det_bareiss(&ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])).unwrap(),
            Poly::zero()
        );
        assert_eq!(
            det_bareiss(&ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])).unwrap(),
            p(&[-1])
        );
    }

    #[test]
    fn cofactor_examples() {
        assert_eq!(
            det_cofactor(&PolyMatrix::from_fn(1, |_, _| p(&[4, 5]))).unwrap(),
            p(&[4, 5])
        );
        let edge = WeightedTree::path(2, &[2]).unwrap();
        assert_eq!(
            det_cofactor(&build_dq_star(&edge)).unwrap(),
            p(&[1, 0, 0, 0, -1])
        );
        assert!(matches!(
            det_cofactor(&PolyMatrix::identity(7)),
            Err(DetError::OrderTooLarge { order: 7, .. })
        ));
    }

    #[test]
    fn dodgson_examples() {
        let m = PolyMatrix::from_rows(vec![vec![p(&[1, 1]), p(&[2])], vec![p(&[0, 3]), p(&[5])]])
            .unwrap();
        assert_eq!(
            dodgson(&m).unwrap(),
            Condensation::Determinant(p(&[5, 5]) - p(&[0, 6]))
        );
        // the zero diagonal of D_q(P_4) lies in the interior
        assert!(matches!(
            dodgson(&build_dq(&unit_path(4))).unwrap(),
            Condensation::Inapplicable { .. }
        ));
        let d3 = build_d(&unit_path(3));
        match dodgson(&d3).unwrap() {
            Condensation::Determinant(v) => assert_eq!(v, det_bareiss(&d3).unwrap()),
            Condensation::Inapplicable { .. } => {}
        }
        // D*_q has a unit diagonal, so condensation goes through
        let star = build_dq_star(&unit_path(4));
        assert_eq!(
            dodgson(&star).unwrap(),
            Condensation::Determinant(p(&[1, 0, -1]).pow(3))
        );
    }

    #[test]
    fn dodgson_identity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(check_dodgson_identity(&random_int_matrix(&mut rng, 3, 9)).unwrap());
        let t = WeightedTree::random(5, 4, 17).unwrap();
        assert!(check_dodgson_identity(&build_dq(&t)).unwrap());
        let ones = PolyMatrix::from_fn(3, |_, _| Poly::one());
        let (lhs, rhs) = dodgson_identity_sides(&ones).unwrap();
        assert!(lhs.is_zero() && rhs.is_zero());
        assert!(matches!(
            check_dodgson_identity(&PolyMatrix::identity(2)),
            Err(DetError::OrderTooSmall(2))
        ));
    }

    #[test]
    fn bareiss_matches_cofactor_on_random_integer_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xbae1);
        for _ in 0..500 {
            let n = rng.gen_range(1..=5);
            let m = random_int_matrix(&mut rng, n, 9);
            assert_eq!(det_bareiss(&m).unwrap(), det_cofactor(&m).unwrap(), "{m:?}");
        }
    }

    #[test]
    fn bareiss_matches_cofactor_on_tree_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7ee);
        for _ in 0..100 {
            let n = rng.gen_range(2..=5);
            let t = WeightedTree::random_with(n, 4, &mut rng).unwrap();
            for m in [build_d(&t), build_dq(&t), build_dq_star(&t)] {
                assert_eq!(det_bareiss(&m).unwrap(), det_cofactor(&m).unwrap());
            }
        }
    }

    #[test]
    fn bareiss_matches_cofactor_on_sparse_polynomial_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let m = random_poly_matrix(&mut rng, n);
            assert_eq!(det_bareiss(&m).unwrap(), det_cofactor(&m).unwrap());
        }
    }

    #[test]
    fn dodgson_agrees_with_bareiss_when_applicable() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut applied = 0;
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let m = random_int_matrix(&mut rng, n, 9);
            if let Condensation::Determinant(v) = dodgson(&m).unwrap() {
                assert_eq!(v, det_bareiss(&m).unwrap());
                applied += 1;
            }
        }
        assert!(applied > 200);
    }

    #[test]
    fn dodgson_identity_on_random_integer_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(88);
        for _ in 0..300 {
            let n = rng.gen_range(3..=6);
            assert!(check_dodgson_identity(&random_int_matrix(&mut rng, n, 9)).unwrap());
        }
    }

    #[test]
    fn transpose_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let m = random_poly_matrix(&mut rng, n);
            assert_eq!(
                det_bareiss(&m).unwrap(),
                det_bareiss(&m.transpose()).unwrap()
            );
        }
        for _ in 0..50 {
            let n = rng.gen_range(3..=8);
            let d = build_dq(&WeightedTree::random_with(n, 4, &mut rng).unwrap());
            let last = n - 1;
            assert_eq!(
                det_bareiss(&d.minor(&[0], &[last]).unwrap()).unwrap(),
                det_bareiss(&d.minor(&[last], &[0]).unwrap()).unwrap()
            );
        }
    }

    fn arb_tree_and_perm() -> impl Strategy<Value = (WeightedTree, Vec<usize>)> {
        (2usize..=7, 1u64..=4, any::<u64>()).prop_flat_map(|(n, w, seed)| {
            let t = WeightedTree::random(n, w, seed).unwrap();
            (Just(t), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn relabeling_preserves_determinants((t, perm) in arb_tree_and_perm()) {
            let mapping: Vec<usize> = perm.iter().map(|&p| p + 1).collect();
            let relabeled = t.relabel(&mapping).unwrap();
            for build in [build_dq, build_dq_star] {
                let m = build(&t);
                prop_assert_eq!(build(&relabeled), m.permute_symmetric(&perm));
                prop_assert_eq!(det_bareiss(&build(&relabeled)).unwrap(), det_bareiss(&m).unwrap());
            }
        }
    }
}
