//! Square matrices over `Z[q]` and the distance-matrix constructions.
//!
//! Indices are 0-based: row `i` belongs to vertex `v_{i+1}`.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{qbracket, qpower, Poly};
use crate::tree::WeightedTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("deleting {rows} rows and {cols} columns does not leave a square matrix")]
    Unbalanced { rows: usize, cols: usize },
    #[error("index {index} out of range for order {order}")]
    OutOfRange { index: usize, order: usize },
    #[error("index {0} deleted twice")]
    Repeated(usize),
    #[error("expected a square table, row {row} has {len} entries for order {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(n: usize) -> Self {
        PolyMatrix {
            n,
            entries: vec![Poly::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Poly::one() } else { Poly::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::NotSquare {
                    row,
                    len: r.len(),
                    order: n,
                });
            }
            entries.extend(r);
        }
        Ok(PolyMatrix { n, entries })
    }

    /// Integer matrix embedded as constant polynomials.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&c| Poly::constant(c)).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.n).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Poly]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.n {
            self.entries.swap(i * self.n + a, i * self.n + b);
        }
    }

    /// `P M P^T` where the permutation sends index `i` to `perm[i]`, i.e. the
    /// result has `out[perm[i]][perm[j]] = self[i][j]`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(perm[i], perm[j])] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Submatrix with the given rows and columns removed (`A^{rows}_{cols}`).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Self, MatrixError> {
        if rows.len() != cols.len() {
            return Err(MatrixError::Unbalanced {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        let keep_rows = self.kept(rows)?;
        let keep_cols = self.kept(cols)?;
        let m = keep_rows.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in &keep_rows {
            for &j in &keep_cols {
                entries.push(self[(i, j)].clone());
            }
        }
        Ok(PolyMatrix { n: m, entries })
    }

    fn kept(&self, deleted: &[usize]) -> Result<Vec<usize>, MatrixError> {
        let mut mask = vec![false; self.n];
        for &d in deleted {
            if d >= self.n {
                return Err(MatrixError::OutOfRange {
                    index: d,
                    order: self.n,
                });
            }
            if std::mem::replace(&mut mask[d], true) {
                return Err(MatrixError::Repeated(d));
            }
        }
        Ok((0..self.n).filter(|&i| !mask[i]).collect())
    }

    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(Poly::to_string).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for PolyMatrix {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.entries[i * self.n + j]
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_text_rows()).finish()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_text_rows() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// JSON: an n×n array of polynomial strings.
impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_text_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(deserializer)?;
        let parsed = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| s.parse::<Poly>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(de::Error::custom)?;
        PolyMatrix::from_rows(parsed).map_err(de::Error::custom)
    }
}

fn from_distances(t: &WeightedTree, entry: impl Fn(u64) -> Poly) -> PolyMatrix {
    let d = t.distances();
    PolyMatrix::from_fn(t.order(), |i, j| entry(d.at(i, j)))
}

/// `D(T)`: constant polynomials holding the tree distances.
pub fn build_d(t: &WeightedTree) -> PolyMatrix {
    from_distances(t, Poly::constant)
}

/// `D_q(T)`: entry `[d(v_i, v_j)]`.
pub fn build_dq(t: &WeightedTree) -> PolyMatrix {
    from_distances(t, qbracket)
}

/// `D*_q(T)`: entry `q^{d(v_i, v_j)}`, so the diagonal is 1.
pub fn build_dq_star(t: &WeightedTree) -> PolyMatrix {
    from_distances(t, qpower)
}

/// `D(T) + xJ` with the indeterminate standing for `x`.
pub fn build_d_plus_xj(t: &WeightedTree) -> PolyMatrix {
    from_distances(t, |d| Poly::from_coeffs(vec![d.into(), 1.into()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Degree;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> PolyMatrix {
        PolyMatrix::from_int_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    fn unit_path(n: usize) -> WeightedTree {
        WeightedTree::path(n, &vec![1; n - 1]).unwrap()
    }

    #[test]
    fn distance_matrix_examples() {
        let edge = WeightedTree::path(2, &[1]).unwrap();
        assert_eq!(build_d(&edge), ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(
            build_d(&unit_path(3)),
            ints(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]])
        );
    }

    #[test]
    fn q_distance_examples() {
        let expected = PolyMatrix::from_rows(vec![
            vec![p(&[]), p(&[1]), p(&[1, 1])],
            vec![p(&[1]), p(&[]), p(&[1])],
            vec![p(&[1, 1]), p(&[1]), p(&[])],
        ])
        .unwrap();
        assert_eq!(build_dq(&unit_path(3)), expected);

        let star = WeightedTree::star(4, &[2, 3, 5]).unwrap();
        assert_eq!(build_dq(&star)[(0, 1)], qbracket(5));
        assert_eq!(build_dq(&star)[(1, 2)], qbracket(8));
    }

    #[test]
    fn q_star_examples() {
        let edge = WeightedTree::path(2, &[3]).unwrap();
        let expected =
            PolyMatrix::from_rows(vec![vec![p(&[1]), qpower(3)], vec![qpower(3), p(&[1])]])
                .unwrap();
        assert_eq!(build_dq_star(&edge), expected);
        let expected = PolyMatrix::from_rows(vec![
            vec![p(&[1]), qpower(1), qpower(2)],
            vec![qpower(1), p(&[1]), qpower(1)],
            vec![qpower(2), qpower(1), p(&[1])],
        ])
        .unwrap();
        assert_eq!(build_dq_star(&unit_path(3)), expected);
    }

    #[test]
    fn d_plus_xj_examples() {
        let edge = WeightedTree::path(2, &[1]).unwrap();
        let m = build_d_plus_xj(&edge);
        assert_eq!(m[(0, 0)], p(&[0, 1]));
        assert_eq!(m[(0, 1)], p(&[1, 1]));
        let t = WeightedTree::random(6, 4, 1).unwrap();
        let m = build_d_plus_xj(&t);
        assert_eq!(m.map(|e| Poly::constant(e.coeff(0))), build_d(&t));
        assert!(m.rows().flatten().all(|e| e.degree() <= Degree::Finite(1)));
    }

    #[test]
    fn minor_examples() {
        let m = build_dq(&unit_path(3));
        assert_eq!(m.minor(&[], &[]).unwrap(), m);
        assert_eq!(m.minor(&[0], &[0]).unwrap(), build_dq(&unit_path(2)));
        let mid = m.minor(&[0, 2], &[0, 2]).unwrap();
        assert_eq!(mid.order(), 1);
        assert_eq!(mid[(0, 0)], Poly::zero());
        let a = ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(a.minor(&[2], &[0]).unwrap(), ints(&[&[2, 3], &[5, 6]]));
    }

    #[test]
    fn minor_errors() {
        let m = PolyMatrix::identity(3);
        assert!(matches!(
            m.minor(&[0], &[]),
            Err(MatrixError::Unbalanced { .. })
        ));
        assert!(matches!(
            m.minor(&[3], &[0]),
            Err(MatrixError::OutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            m.minor(&[1, 1], &[0, 2]),
            Err(MatrixError::Repeated(1))
        ));
        assert!(matches!(
            PolyMatrix::from_int_rows(&[vec![1, 2], vec![3]]),
            Err(MatrixError::NotSquare { .. })
        ));
    }

    #[test]
    fn json_is_a_table_of_polynomial_strings() {
        let m = build_dq(&unit_path(3));
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"[["0","1","1 + q"],["1","0","1"],["1 + q","1","0"]]"#
        );
        assert_eq!(serde_json::from_str::<PolyMatrix>(&json).unwrap(), m);
        assert!(serde_json::from_str::<PolyMatrix>(r#"[["1","2"]]"#).is_err());
    }

    fn arb_tree() -> impl Strategy<Value = WeightedTree> {
        (2usize..=9, 1u64..=4, any::<u64>())
            .prop_map(|(n, w, seed)| WeightedTree::random(n, w, seed).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn constructions_have_expected_shape(t in arb_tree()) {
            let n = t.order();
            let (d, dq, dqs) = (build_d(&t), build_dq(&t), build_dq_star(&t));
            prop_assert!(d.is_symmetric() && dq.is_symmetric() && dqs.is_symmetric());
            for i in 0..n {
                prop_assert!(d[(i, i)].is_zero());
                prop_assert!(dq[(i, i)].is_zero());
                prop_assert_eq!(&dqs[(i, i)], &Poly::one());
            }
            prop_assert_eq!(dq.map(|e| Poly::constant(e.eval_int(&BigInt::from(1)))), d);
        }

        #[test]
        fn deleting_a_pendant_matches_the_smaller_tree(t in arb_tree()) {
            for v in t.pendants() {
                if t.order() < 2 {
                    continue;
                }
                let smaller = t.remove_pendant(v).unwrap();
                let k = v - 1;
                prop_assert_eq!(build_d(&t).minor(&[k], &[k]).unwrap(), build_d(&smaller));
                prop_assert_eq!(build_dq(&t).minor(&[k], &[k]).unwrap(), build_dq(&smaller));
                prop_assert_eq!(
                    build_dq_star(&t).minor(&[k], &[k]).unwrap(),
                    build_dq_star(&smaller)
                );
            }
        }

        #[test]
        fn minors_compose(t in arb_tree(), a in 0usize..9, b in 0usize..9, c in 0usize..9, d in 0usize..9) {
            let m = build_dq(&t);
            let n = m.order();
            prop_assume!(n >= 2);
            let (r1, c1) = (a % n, b % n);
            let (r2, c2) = (c % (n - 1), d % (n - 1));
            // map second-step indices back to original positions
            let orig = |first: usize, second: usize| if second >= first { second + 1 } else { second };
            let stepwise = m.minor(&[r1], &[c1]).unwrap().minor(&[r2], &[c2]).unwrap();
            let direct = m.minor(&[r1, orig(r1, r2)], &[c1, orig(c1, c2)]).unwrap();
            prop_assert_eq!(stepwise, direct);
        }
    }
}
