//! Brute-force permutation statistics on a tree metric.
//!
//! For a permutation σ of the vertices, its tree length is
//! `|σ_T| = Σ_i d(v_i, v_σ(i))`. The signed tables collected here are
//!
//! * `N_k = Σ_{|σ_T| = k} sgn σ`, and
//! * `M_k = Σ_σ sgn σ · φ_{σ,k}`, where `φ_{σ,k}` counts the solutions of
//!   `x_1 + … + x_n = k` with `0 <= x_i < d(v_i, v_σ(i))`.
//!
//! Their generating functions are `det D*_q(T)` and `det D_q(T)`; the
//! oracles below never build a matrix, so the comparison is independent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::det::{det_bareiss, DetError};
use crate::matrix::{build_dq, build_dq_star};
use crate::poly::{qbracket, Poly};
use crate::tree::{DistanceTable, WeightedTree};

/// Largest order for exhaustive permutation enumeration.
pub const MAX_PERMUTATION_ORDER: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation enumeration is limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("permutation of size {perm} used with a distance table of order {table}")]
    SizeMismatch { perm: usize, table: usize },
    #[error("{0:?} is not a permutation of 1..=n")]
    NotAPermutation(Vec<usize>),
    #[error(transparent)]
    Det(#[from] DetError),
}

/// A permutation of `0..n`, stored as images: `images[i] = σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 1-based images, as in `σ(i)` for `i = 1..=n`.
    pub fn from_one_based(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return Err(PermError::NotAPermutation(images.to_vec()));
            }
        }
        Ok(Permutation {
            images: images.iter().map(|&x| x - 1).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// 0-based images.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(i, &s)| i == s)
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut cycles = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        cycles
    }

    /// `(-1)^{n - #cycles}`.
    pub fn sign(&self) -> i32 {
        if (self.len() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Tree length `Σ_i d(v_i, v_σ(i))`.
    pub fn length_on(&self, d: &DistanceTable) -> Result<u64, PermError> {
        self.check_size(d)?;
        Ok(self
            .images
            .iter()
            .enumerate()
            .map(|(i, &s)| d.at(i, s))
            .sum())
    }

    fn check_size(&self, d: &DistanceTable) -> Result<(), PermError> {
        if self.len() != d.order() {
            return Err(PermError::SizeMismatch {
                perm: self.len(),
                table: d.order(),
            });
        }
        Ok(())
    }

    fn bounds(&self, d: &DistanceTable) -> Vec<u64> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, &s)| d.at(i, s))
            .collect()
    }
}

/// Visits every permutation of `0..n` in lexicographic order together with
/// its sign. The sign is updated incrementally: each successor differs by
/// one swap followed by a suffix reversal.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], i32)) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut sign = 1;
    loop {
        visit(&p, sign);
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return;
        };
        let j = (i + 1..n)
            .rev()
            .find(|&j| p[j] > p[i])
            .expect("successor exists");
        p.swap(i, j);
        let suffix = n - i - 1;
        p[i + 1..].reverse();
        if (1 + suffix / 2) % 2 == 1 {
            sign = -sign;
        }
    }
}

/// Same as [`for_each_permutation`], restricted to permutations whose first
/// image is `first`. Used to split the enumeration across threads.
fn for_each_with_first(n: usize, first: usize, mut visit: impl FnMut(&[usize], i32)) {
    let rest: Vec<usize> = (0..n).filter(|&x| x != first).collect();
    // moving `first` to the front of the identity takes `first` transpositions
    let base_sign = if first.is_multiple_of(2) { 1 } else { -1 };
    let mut buf = vec![first; n];
    for_each_permutation(n - 1, |tail, s| {
        for (slot, &t) in buf[1..].iter_mut().zip(tail) {
            *slot = rest[t];
        }
        visit(&buf, base_sign * s);
    });
}

/// Runs `visit` over all of S_n in parallel blocks (by σ(1)) and merges the
/// per-block accumulators with `merge`.
fn fold_permutations<A, F, M>(n: usize, init: impl Fn() -> A + Sync, visit: F, merge: M) -> A
where
    A: Send,
    F: Fn(&mut A, &[usize], i32) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    if n == 0 {
        let mut acc = init();
        visit(&mut acc, &[], 1);
        return acc;
    }
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            for_each_with_first(n, first, |p, s| visit(&mut acc, p, s));
            acc
        })
        .reduce(&init, &merge)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableKind {
    N,
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Oracle,
    Determinant,
    Closed,
}

/// Signed coefficient table indexed by `k`. Zero coefficients are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermStats {
    pub kind: TableKind,
    pub n: usize,
    pub coeffs: BTreeMap<u64, BigInt>,
    pub source: Source,
}

impl PermStats {
    fn from_poly(kind: TableKind, n: usize, p: &Poly, source: Source) -> Self {
        let coeffs = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64, c.clone()))
            .collect();
        PermStats {
            kind,
            n,
            coeffs,
            source,
        }
    }

    /// Generating function `Σ_k c_k q^k`.
    pub fn to_poly(&self) -> Poly {
        let len = self
            .coeffs
            .keys()
            .next_back()
            .map_or(0, |&k| k as usize + 1);
        let mut out = vec![BigInt::zero(); len];
        for (&k, c) in &self.coeffs {
            out[k as usize] = c.clone();
        }
        Poly::from_coeffs(out)
    }

    pub fn get(&self, k: u64) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Highest `k` with a nonzero coefficient.
    pub fn max_k(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Tables agree when their nonzero coefficients agree; kind, order and
    /// source are not compared.
    pub fn same_coefficients(&self, other: &PermStats) -> bool {
        self.coeffs == other.coeffs
    }

    /// CSV rows `k,value` for `k = 0..=k_max`.
    pub fn to_csv(&self, k_max: u64) -> String {
        let mut out = String::from("k,value\n");
        for k in 0..=k_max {
            out.push_str(&format!("{k},{}\n", self.get(k)));
        }
        out
    }
}

impl Serialize for PermStats {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            kind: TableKind,
            n: usize,
            coeffs: BTreeMap<String, JsonInt>,
            source: Source,
        }
        Wire {
            kind: self.kind,
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.to_string(), JsonInt(v.clone())))
                .collect(),
            source: self.source,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PermStats {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct Wire {
            kind: TableKind,
            n: usize,
            coeffs: BTreeMap<String, JsonInt>,
            source: Source,
        }
        let wire = Wire::deserialize(deserializer)?;
        let coeffs = wire
            .coeffs
            .into_iter()
            .map(|(k, v)| k.parse::<u64>().map(|k| (k, v.0)).map_err(D::Error::custom))
            .collect::<Result<_, _>>()?;
        Ok(PermStats {
            kind: wire.kind,
            n: wire.n,
            coeffs,
            source: wire.source,
        })
    }
}

/// Integer that serializes as a JSON number when it fits in 128 bits and as
/// a decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        if let Some(v) = self.0.to_i64() {
            serializer.serialize_i64(v)
        } else if let Some(v) = self.0.to_i128() {
            serializer.serialize_i128(v)
        } else {
            serializer.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Small(i64),
            Wide(i128),
            Text(String),
        }
        Ok(JsonInt(match Raw::deserialize(deserializer)? {
            Raw::Small(v) => BigInt::from(v),
            Raw::Wide(v) => BigInt::from(v),
            Raw::Text(s) => s.parse().map_err(D::Error::custom)?,
        }))
    }
}

fn check_order(n: usize) -> Result<(), PermError> {
    if n > MAX_PERMUTATION_ORDER {
        return Err(PermError::TooLarge {
            n,
            max: MAX_PERMUTATION_ORDER,
        });
    }
    Ok(())
}

fn merge_maps(mut a: BTreeMap<u64, BigInt>, b: BTreeMap<u64, BigInt>) -> BTreeMap<u64, BigInt> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Signed histogram of tree lengths over all of S_n.
pub fn n_table_oracle(t: &WeightedTree) -> Result<PermStats, PermError> {
    let n = t.order();
    check_order(n)?;
    let d = t.distances();
    let hist = fold_permutations(
        n,
        BTreeMap::<u64, i64>::new,
        |acc, p, s| {
            let len: u64 = p.iter().enumerate().map(|(i, &x)| d.at(i, x)).sum();
            *acc.entry(len).or_default() += s as i64;
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    );
    Ok(PermStats {
        kind: TableKind::N,
        n,
        coeffs: hist
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|(k, v)| (k, BigInt::from(v)))
            .collect(),
        source: Source::Oracle,
    })
}

/// `0` for odd `k`, otherwise `(-1)^{k/2} C(n-1, k/2)`.
pub fn n_closed(n: usize, k: u64) -> BigInt {
    if k % 2 == 1 {
        return BigInt::zero();
    }
    let half = k / 2;
    if n == 0 || half > (n - 1) as u64 {
        return BigInt::zero();
    }
    let c = binomial(BigInt::from(n - 1), BigInt::from(half));
    if half.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// `(-1)^{n-1} (n-1) C(n-2, k)`.
pub fn m_closed(n: usize, k: u64) -> BigInt {
    if n < 2 || k > (n - 2) as u64 {
        return BigInt::zero();
    }
    let c = BigInt::from(n - 1) * binomial(BigInt::from(n - 2), BigInt::from(k));
    if (n - 1).is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// Closed-form table for a simple tree on `n` vertices.
pub fn closed_table(kind: TableKind, n: usize) -> PermStats {
    let coeffs = match kind {
        TableKind::N => (0..=2 * n.saturating_sub(1) as u64)
            .map(|k| (k, n_closed(n, k)))
            .collect::<Vec<_>>(),
        TableKind::M => (0..=n.saturating_sub(2) as u64)
            .map(|k| (k, m_closed(n, k)))
            .collect(),
    };
    PermStats {
        kind,
        n,
        coeffs: coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        source: Source::Closed,
    }
}

/// Counts of bounded compositions `x_1 + … + x_n = k`, `0 <= x_i < bounds[i]`,
/// for every `k`, by dynamic programming over positions.
fn bounded_composition_counts(bounds: &[u64]) -> Vec<BigInt> {
    if bounds.contains(&0) {
        return Vec::new();
    }
    let mut counts = vec![BigInt::one()];
    for &b in bounds {
        let b = b as usize;
        let mut next = vec![BigInt::zero(); counts.len() + b - 1];
        // sliding window sum over the last b entries
        let mut window = BigInt::zero();
        for (k, slot) in next.iter_mut().enumerate() {
            if k < counts.len() {
                window += &counts[k];
            }
            if k >= b {
                window -= &counts[k - b];
            }
            *slot = window.clone();
        }
        counts = next;
    }
    counts
}

/// `φ_{σ,k}`: zero whenever some bound `d(v_i, v_σ(i))` is zero, which
/// covers every σ with a fixed point.
pub fn phi_count_direct(p: &Permutation, d: &DistanceTable, k: u64) -> Result<BigInt, PermError> {
    p.check_size(d)?;
    let counts = bounded_composition_counts(&p.bounds(d));
    Ok(counts.get(k as usize).cloned().unwrap_or_default())
}

/// `∏_i [d(v_i, v_σ(i))]`, whose k-th coefficient is `φ_{σ,k}`.
pub fn phi_count_poly(p: &Permutation, d: &DistanceTable) -> Result<Poly, PermError> {
    p.check_size(d)?;
    Ok(p.bounds(d).into_iter().map(qbracket).product())
}

/// `M_k = Σ_σ sgn σ · φ_{σ,k}` with φ counted by [`phi_count_direct`]'s
/// dynamic program, over all of S_n.
pub fn m_table_oracle(t: &WeightedTree) -> Result<PermStats, PermError> {
    let n = t.order();
    check_order(n)?;
    let d = t.distances();
    let table = fold_permutations(
        n,
        BTreeMap::<u64, BigInt>::new,
        |acc, p, s| {
            if p.iter().enumerate().any(|(i, &x)| i == x) {
                return;
            }
            let bounds: Vec<u64> = p.iter().enumerate().map(|(i, &x)| d.at(i, x)).collect();
            for (k, c) in bounded_composition_counts(&bounds).into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let slot = acc.entry(k as u64).or_default();
                if s > 0 {
                    *slot += c;
                } else {
                    *slot -= c;
                }
            }
        },
        merge_maps,
    );
    Ok(PermStats {
        kind: TableKind::M,
        n,
        coeffs: table.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        source: Source::Oracle,
    })
}

/// N-table read off `det D*_q(T)`.
pub fn n_table_from_det(t: &WeightedTree) -> Result<PermStats, PermError> {
    let det = det_bareiss(&build_dq_star(t))?;
    Ok(PermStats::from_poly(
        TableKind::N,
        t.order(),
        &det,
        Source::Determinant,
    ))
}

/// M-table read off `det D_q(T)`.
pub fn m_table_from_det(t: &WeightedTree) -> Result<PermStats, PermError> {
    let det = det_bareiss(&build_dq(t))?;
    Ok(PermStats::from_poly(
        TableKind::M,
        t.order(),
        &det,
        Source::Determinant,
    ))
}

/// Comparison of both generating functions with the matching determinants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratingFunctionReport {
    pub n_generating: Poly,
    pub det_dq_star: Poly,
    pub m_generating: Poly,
    pub det_dq: Poly,
    /// Exponents where `Σ N_k q^k` and `det D*_q(T)` differ.
    pub n_mismatches: Vec<u64>,
    /// Exponents where `Σ M_k q^k` and `det D_q(T)` differ.
    pub m_mismatches: Vec<u64>,
}

impl GeneratingFunctionReport {
    pub fn agrees(&self) -> bool {
        self.n_mismatches.is_empty() && self.m_mismatches.is_empty()
    }
}

fn mismatches(a: &Poly, b: &Poly) -> Vec<u64> {
    let len = a.coeffs().len().max(b.coeffs().len());
    (0..len)
        .filter(|&k| a.coeff(k) != b.coeff(k))
        .map(|k| k as u64)
        .collect()
}

/// Builds both oracle tables and compares them with `det D*_q(T)` and
/// `det D_q(T)` coefficient by coefficient.
pub fn generating_function_check(t: &WeightedTree) -> Result<GeneratingFunctionReport, PermError> {
    let n_gen = n_table_oracle(t)?.to_poly();
    let m_gen = m_table_oracle(t)?.to_poly();
    let det_star = det_bareiss(&build_dq_star(t))?;
    let det_q = det_bareiss(&build_dq(t))?;
    Ok(GeneratingFunctionReport {
        n_mismatches: mismatches(&n_gen, &det_star),
        m_mismatches: mismatches(&m_gen, &det_q),
        n_generating: n_gen,
        det_dq_star: det_star,
        m_generating: m_gen,
        det_dq: det_q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_trees;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_one_based(images).unwrap()
    }

    fn unit_path(n: usize) -> WeightedTree {
        WeightedTree::path(n, &vec![1; n - 1]).unwrap()
    }

    fn table(pairs: &[(u64, i64)]) -> BTreeMap<u64, BigInt> {
        pairs.iter().map(|&(k, v)| (k, BigInt::from(v))).collect()
    }

    #[test]
    fn sign_examples() {
        assert_eq!(Permutation::identity(4).sign(), 1);
        assert_eq!(perm(&[2, 1, 3]).sign(), -1);
        assert_eq!(perm(&[2, 3, 1]).sign(), 1);
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn lexicographic_enumeration_tracks_sign() {
        for n in 0..=6 {
            let mut seen = Vec::new();
            for_each_permutation(n, |p, s| {
                let as_perm = Permutation { images: p.to_vec() };
                assert_eq!(as_perm.sign(), s, "{p:?}");
                seen.push(p.to_vec());
            });
            let count = (1..=n).product::<usize>();
            assert_eq!(seen.len(), count);
            assert!(seen.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn split_enumeration_covers_each_block() {
        for first in 0..5 {
            let mut count = 0;
            for_each_with_first(5, first, |p, s| {
                assert_eq!(p[0], first);
                assert_eq!(Permutation { images: p.to_vec() }.sign(), s);
                count += 1;
            });
            assert_eq!(count, 24);
        }
    }

    #[test]
    fn length_examples() {
        let d = unit_path(3).distances();
        assert_eq!(Permutation::identity(3).length_on(&d).unwrap(), 0);
        assert_eq!(perm(&[2, 1, 3]).length_on(&d).unwrap(), 2);
        assert_eq!(perm(&[2, 3, 1]).length_on(&d).unwrap(), 4);
        assert!(matches!(
            Permutation::identity(2).length_on(&d),
            Err(PermError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn n_table_examples() {
        let p3 = n_table_oracle(&unit_path(3)).unwrap();
        assert_eq!(p3.coeffs, table(&[(0, 1), (2, -2), (4, 1)]));
        let star = WeightedTree::star(4, &[1, 1, 1]).unwrap();
        assert_eq!(
            n_table_oracle(&star).unwrap().coeffs,
            n_table_oracle(&unit_path(4)).unwrap().coeffs
        );
        let t = WeightedTree::random(6, 3, 1).unwrap();
        let total: BigInt = n_table_oracle(&t).unwrap().coeffs.values().sum();
        assert!(total.is_zero());
        assert!(matches!(
            n_table_oracle(&unit_path(10)),
            Err(PermError::TooLarge { n: 10, .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(n_closed(3, 2), BigInt::from(-2));
        assert_eq!(n_closed(5, 3), BigInt::zero());
        assert_eq!(n_closed(4, 6), BigInt::from(-1));
        assert_eq!(n_closed(4, 8), BigInt::zero());
        assert_eq!(m_closed(3, 1), BigInt::from(2));
        assert_eq!(m_closed(4, 1), BigInt::from(-6));
        assert_eq!(m_closed(2, 0), BigInt::from(-1));
        assert_eq!(m_closed(4, 3), BigInt::zero());
    }

    #[test]
    fn phi_examples() {
        let d = unit_path(3).distances();
        let fixed = perm(&[1, 3, 2]);
        for k in 0..5 {
            assert_eq!(phi_count_direct(&fixed, &d, k).unwrap(), BigInt::zero());
        }
        assert!(phi_count_poly(&fixed, &d).unwrap().is_zero());
        let cycle = perm(&[2, 3, 1]);
        assert_eq!(phi_count_direct(&cycle, &d, 0).unwrap(), BigInt::one());
        assert_eq!(phi_count_direct(&cycle, &d, 1).unwrap(), BigInt::one());
        assert_eq!(phi_count_direct(&cycle, &d, 2).unwrap(), BigInt::zero());
        assert_eq!(
            phi_count_poly(&cycle, &d).unwrap(),
            Poly::from_i64s(&[1, 1])
        );
    }

    /// Straight enumeration of every vector `x` with `0 <= x_i < bound_i`.
    fn brute_phi(bounds: &[u64], k: u64) -> u64 {
        fn go(bounds: &[u64], left: u64) -> u64 {
            match bounds.split_first() {
                None => u64::from(left == 0),
                Some((&b, rest)) => (0..b.min(left + 1)).map(|x| go(rest, left - x)).sum(),
            }
        }
        go(bounds, k)
    }

    #[test]
    fn phi_oracles_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xf1);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(2..=6);
            let t = WeightedTree::random_with(n, 3, &mut rng).unwrap();
            let d = t.distances();
            let mut images: Vec<usize> = (1..=n).collect();
            for i in (1..n).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            let p = perm(&images);
            if p.has_fixed_point() {
                continue;
            }
            let poly = phi_count_poly(&p, &d).unwrap();
            let bounds = p.bounds(&d);
            let top: u64 = bounds.iter().map(|b| b - 1).sum();
            for k in 0..=top + 1 {
                let direct = phi_count_direct(&p, &d, k).unwrap();
                assert_eq!(poly.coeff(k as usize), direct);
                assert_eq!(direct, BigInt::from(brute_phi(&bounds, k)));
            }
            checked += 1;
        }
    }

    #[test]
    fn m_table_examples() {
        let p3 = m_table_oracle(&unit_path(3)).unwrap();
        assert_eq!(p3.coeffs, table(&[(0, 2), (1, 2)]));
        for t in enumerate_trees(4, 1).unwrap() {
            assert_eq!(
                m_table_oracle(&t).unwrap().coeffs,
                table(&[(0, -3), (1, -6), (2, -3)])
            );
        }
        let t = WeightedTree::random(5, 3, 9).unwrap();
        assert_eq!(
            m_table_oracle(&t).unwrap().coeffs,
            m_table_from_det(&t).unwrap().coeffs
        );
    }

    #[test]
    fn generating_functions_small_cases() {
        let r = generating_function_check(&unit_path(3)).unwrap();
        assert!(r.agrees());
        assert_eq!(r.n_generating, Poly::from_i64s(&[1, 0, -2, 0, 1]));
        assert_eq!(r.m_generating, Poly::from_i64s(&[2, 2]));

        let r = generating_function_check(&WeightedTree::random(5, 3, 77).unwrap()).unwrap();
        assert!(r.agrees(), "{r:?}");

        for a in 1..=4 {
            let r = generating_function_check(&WeightedTree::path(2, &[a]).unwrap()).unwrap();
            assert!(r.agrees());
            assert_eq!(r.n_generating, Poly::one() - crate::poly::qpower(2 * a));
            assert_eq!(r.m_generating, -qbracket(a).pow(2));
        }
    }

    #[test]
    fn closed_tables_for_simple_trees() {
        for n in 2..=6 {
            for t in enumerate_trees(n, 1).unwrap() {
                let nt = n_table_oracle(&t).unwrap();
                assert!(nt.same_coefficients(&closed_table(TableKind::N, n)));
                assert!(nt.coeffs.keys().all(|k| k % 2 == 0));
                let mt = m_table_oracle(&t).unwrap();
                assert!(mt.same_coefficients(&closed_table(TableKind::M, n)));
            }
        }
    }

    #[test]
    fn stats_serialisation() {
        let s = n_table_oracle(&unit_path(3)).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"kind": "N", "n": 3, "coeffs": {"0": 1, "2": -2, "4": 1}, "source": "oracle"})
        );
        let back: PermStats = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.to_csv(4), "k,value\n0,1\n1,0\n2,-2\n3,0\n4,1\n");
    }
}
