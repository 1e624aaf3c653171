//! Wiener polynomial `W(T, q) = Σ_{i<j} q^{d(v_i, v_j)}` and Wiener index.

use num_bigint::BigInt;

use crate::poly::{qpower, Poly};
use crate::tree::WeightedTree;

pub fn wiener_poly(t: &WeightedTree) -> Poly {
    let d = t.distances();
    let n = t.order();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| qpower(d.at(i, j)))
        .sum()
}

/// `W'(T, 1)`, the sum of all pairwise distances.
pub fn wiener_index(t: &WeightedTree) -> BigInt {
    wiener_poly(t).derivative_at_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_dq_star;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_path(n: usize) -> WeightedTree {
        WeightedTree::path(n, &vec![1; n - 1]).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(wiener_poly(&unit_path(4)), Poly::from_i64s(&[0, 3, 2, 1]));
        assert_eq!(wiener_index(&unit_path(4)), BigInt::from(10));
        let star = WeightedTree::star(4, &[1, 1, 1]).unwrap();
        assert_eq!(wiener_poly(&star), Poly::from_i64s(&[0, 3, 3]));
        assert_eq!(wiener_index(&star), BigInt::from(9));
        assert_eq!(
            wiener_poly(&WeightedTree::path(2, &[5]).unwrap()),
            qpower(5)
        );
    }

    #[test]
    fn unit_paths() {
        for n in 1..=12usize {
            let brute: usize = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| j - i)).sum();
            assert_eq!(wiener_index(&unit_path(n)), BigInt::from(brute));
            assert_eq!(brute, (n + 1) * n * n.saturating_sub(1) / 6);
        }
    }

    #[test]
    fn random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let n = rng.gen_range(2..=10);
            let t = WeightedTree::random_with(n, 5, &mut rng).unwrap();
            let w = wiener_poly(&t);
            assert_eq!(wiener_index(&t), BigInt::from(t.distances().pair_sum()));
            assert_eq!(w.eval_int(&BigInt::one()), BigInt::from(n * (n - 1) / 2));
            let m = build_dq_star(&t);
            let upper: Poly = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)].clone())
                .sum();
            assert_eq!(upper, w);
        }
    }
}
