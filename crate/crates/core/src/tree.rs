//! Weighted trees on labeled vertices `1..=n`, their generators, and exact
//! all-pairs distances.
//!
//! Vertex labels are positional: matrices built from a tree put vertex `v_i`
//! on row and column `i - 1`, so relabeling a tree permutes its matrices.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest order accepted by [`enumerate_trees`].
pub const MAX_ENUMERATION_ORDER: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("a tree on {n} vertices needs {expected} edges, got {found}")]
    WrongEdgeCount {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex label {label} is outside 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u},{v}) has nonpositive weight {weight}")]
    NonPositiveWeight { u: usize, v: usize, weight: i64 },
    #[error("edge ({u},{v}) appears more than once")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge ({u},{v}) closes a cycle")]
    Cycle { u: usize, v: usize },
    #[error("vertex {0} is not connected to vertex 1")]
    Disconnected(usize),
    #[error("Prüfer sequence for {n} vertices must have length {expected}, got {found}")]
    PruferLength {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} edge weights, got {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("order {n} is outside the supported range {min}..={max}")]
    UnsupportedOrder { n: usize, min: usize, max: usize },
    #[error("vertex {0} is not a pendant vertex")]
    NotPendant(usize),
    #[error("malformed tree file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
}

impl Edge {
    fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// A validated tree with positive integer edge weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedTree {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedTree {
    /// Validates an edge list `(u, v, weight)` with 1-based labels.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let raw: Vec<_> = edges.into_iter().collect();
        if raw.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount {
                n,
                expected: n - 1,
                found: raw.len(),
            });
        }
        let mut seen = HashSet::with_capacity(raw.len());
        let mut checked = Vec::with_capacity(raw.len());
        for (u, v, weight) in raw {
            for label in [u, v] {
                if label == 0 || label > n {
                    return Err(TreeError::LabelOutOfRange { label, n });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
            if weight < 1 {
                return Err(TreeError::NonPositiveWeight { u, v, weight });
            }
            let edge = Edge {
                u,
                v,
                weight: weight as u64,
            };
            if !seen.insert(edge.key()) {
                return Err(TreeError::DuplicateEdge { u, v });
            }
            checked.push(edge);
        }

        let mut components = DisjointSets::new(n);
        for e in &checked {
            if !components.union(e.u - 1, e.v - 1) {
                return Err(TreeError::Cycle { u: e.u, v: e.v });
            }
        }
        // n - 1 acyclic edges always connect; kept as a guard for the invariant
        if let Some(v) = (1..n).find(|&v| components.find(v) != components.find(0)) {
            return Err(TreeError::Disconnected(v + 1));
        }
        Ok(WeightedTree { n, edges: checked })
    }

    /// Decodes a Prüfer sequence. Edge `i` in decode order receives
    /// `weights[i]`.
    pub fn from_prufer(seq: &[usize], n: usize, weights: &[u64]) -> Result<Self, TreeError> {
        if n < 2 {
            return Err(TreeError::UnsupportedOrder {
                n,
                min: 2,
                max: usize::MAX,
            });
        }
        if seq.len() != n - 2 {
            return Err(TreeError::PruferLength {
                n,
                expected: n - 2,
                found: seq.len(),
            });
        }
        check_weight_count(weights, n - 1)?;
        if let Some(&label) = seq.iter().find(|&&s| s == 0 || s > n) {
            return Err(TreeError::LabelOutOfRange { label, n });
        }

        let mut degree = vec![1usize; n + 1];
        for &s in seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        // linear-time decode: `ptr` walks the smallest unvisited leaf
        let mut ptr = (1..=n).find(|&v| degree[v] == 1).unwrap_or(n);
        let mut leaf = ptr;
        for &parent in seq {
            edges.push((leaf, parent));
            degree[parent] -= 1;
            if degree[parent] == 1 && parent < ptr {
                leaf = parent;
            } else {
                ptr += 1;
                while degree[ptr] != 1 {
                    ptr += 1;
                }
                leaf = ptr;
            }
        }
        edges.push((leaf, n));

        let edges = edges
            .into_iter()
            .zip(weights)
            .map(|((u, v), &w)| Edge { u, v, weight: w })
            .collect();
        Ok(WeightedTree { n, edges })
    }

    /// Uniformly random labeled tree (via a uniform Prüfer sequence) with
    /// independent uniform weights in `1..=max_weight`.
    pub fn random(n: usize, max_weight: u64, seed: u64) -> Result<Self, TreeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(n, max_weight, &mut rng)
    }

    pub fn random_with<R: Rng + ?Sized>(
        n: usize,
        max_weight: u64,
        rng: &mut R,
    ) -> Result<Self, TreeError> {
        if n < 2 {
            return Err(TreeError::UnsupportedOrder {
                n,
                min: 2,
                max: usize::MAX,
            });
        }
        if max_weight < 1 {
            return Err(TreeError::NonPositiveWeight {
                u: 0,
                v: 0,
                weight: 0,
            });
        }
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
        let weights: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(1..=max_weight)).collect();
        Self::from_prufer(&seq, n, &weights)
    }

    /// The path `v1 - v2 - ... - vn`, edge `i` joining `v_i` and `v_{i+1}`.
    pub fn path(n: usize, weights: &[u64]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        check_weight_count(weights, n - 1)?;
        let edges = (1..n)
            .zip(weights)
            .map(|(i, &w)| Edge {
                u: i,
                v: i + 1,
                weight: w,
            })
            .collect();
        Ok(WeightedTree { n, edges })
    }

    /// The star with center `v_n` and pendant `v_i` on an edge of weight
    /// `weights[i - 1]`.
    pub fn star(n: usize, weights: &[u64]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        check_weight_count(weights, n - 1)?;
        let edges = (1..n)
            .zip(weights)
            .map(|(i, &w)| Edge {
                u: i,
                v: n,
                weight: w,
            })
            .collect();
        Ok(WeightedTree { n, edges })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge weights in edge-list order.
    pub fn weights(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1)
    }

    /// Adjacency lists indexed by 0-based vertex, holding `(neighbor, weight)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u - 1].push((e.v - 1, e.weight));
            adj[e.v - 1].push((e.u - 1, e.weight));
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    pub fn is_pendant(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    /// Pendant vertices in increasing label order.
    pub fn pendants(&self) -> Vec<usize> {
        (1..=self.n).filter(|&v| self.is_pendant(v)).collect()
    }

    /// The unique edge at a pendant vertex.
    pub fn pendant_edge(&self, v: usize) -> Result<Edge, TreeError> {
        let mut incident = self.edges.iter().filter(|e| e.u == v || e.v == v);
        match (incident.next(), incident.next()) {
            (Some(e), None) => Ok(*e),
            _ => Err(TreeError::NotPendant(v)),
        }
    }

    /// Renames vertex `v` to `mapping[v - 1]`. `mapping` must be a
    /// permutation of `1..=n`.
    pub fn relabel(&self, mapping: &[usize]) -> Result<Self, TreeError> {
        if mapping.len() != self.n {
            return Err(TreeError::Format(format!(
                "relabeling needs {} labels, got {}",
                self.n,
                mapping.len()
            )));
        }
        Self::from_edges(
            self.n,
            self.edges
                .iter()
                .map(|e| (mapping[e.u - 1], mapping[e.v - 1], e.weight as i64)),
        )
    }

    /// Relabels so that `v_1` and `v_n` are pendant vertices. The first two
    /// pendants (by label) move to positions 1 and n; the remaining vertices
    /// keep their relative order. Requires `n >= 2`.
    pub fn with_pendant_ends(&self) -> Result<Self, TreeError> {
        let pendants = self.pendants();
        if pendants.len() < 2 {
            return Err(TreeError::UnsupportedOrder {
                n: self.n,
                min: 2,
                max: usize::MAX,
            });
        }
        let (a, b) = (pendants[0], pendants[1]);
        let mut mapping = vec![0; self.n];
        mapping[a - 1] = 1;
        mapping[b - 1] = self.n;
        let mut next = 2;
        for v in 1..=self.n {
            if v != a && v != b {
                mapping[v - 1] = next;
                next += 1;
            }
        }
        self.relabel(&mapping)
    }

    /// Deletes a pendant vertex; higher labels shift down by one so the
    /// remaining vertices keep their relative order.
    pub fn remove_pendant(&self, v: usize) -> Result<Self, TreeError> {
        let edge = self.pendant_edge(v)?;
        let shift = |x: usize| if x > v { x - 1 } else { x };
        Self::from_edges(
            self.n - 1,
            self.edges
                .iter()
                .filter(|e| **e != edge)
                .map(|e| (shift(e.u), shift(e.v), e.weight as i64)),
        )
    }

    /// Exact distances by one breadth-first traversal per source vertex.
    pub fn distances(&self) -> DistanceTable {
        let adj = self.adjacency();
        let n = self.n;
        let mut dist = vec![0u64; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for source in 0..n {
            let row = &mut dist[source * n..(source + 1) * n];
            let mut visited = vec![false; n];
            visited[source] = true;
            queue.push_back(source);
            while let Some(x) = queue.pop_front() {
                for &(y, w) in &adj[x] {
                    if !visited[y] {
                        visited[y] = true;
                        row[y] = row[x] + w;
                        queue.push_back(y);
                    }
                }
            }
        }
        DistanceTable { n, dist }
    }

    /// Text form: `n` on the first line, then one `u v w` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.weight));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, TreeError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n = lines
            .next()
            .ok_or_else(|| TreeError::Format("missing vertex count".into()))?
            .parse::<usize>()
            .map_err(|e| TreeError::Format(format!("vertex count: {e}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(TreeError::Format(format!("expected `u v w`, got {line:?}")));
            }
            let parse = |s: &str| {
                s.parse::<i64>()
                    .map_err(|e| TreeError::Format(format!("{s:?}: {e}")))
            };
            let (u, v, w) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
            if u < 0 || v < 0 {
                return Err(TreeError::Format(format!("negative label in {line:?}")));
            }
            edges.push((u as usize, v as usize, w));
        }
        Self::from_edges(n, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeJson::from(self)).expect("tree serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        let parsed: TreeJson =
            serde_json::from_str(text).map_err(|e| TreeError::Format(e.to_string()))?;
        Self::try_from(parsed)
    }
}

impl fmt::Display for WeightedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} edges=[", self.n)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{},{})", e.u, e.v, e.weight)?;
        }
        f.write_str("]")
    }
}

impl FromStr for WeightedTree {
    type Err = TreeError;

    /// Accepts either the JSON form or the text form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim_start().starts_with('{') {
            Self::from_json(s)
        } else {
            Self::from_text(s)
        }
    }
}

/// JSON shape `{"n": int, "edges": [[u, v, w], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TreeJson {
    pub n: usize,
    pub edges: Vec<(usize, usize, i64)>,
}

impl From<&WeightedTree> for TreeJson {
    fn from(t: &WeightedTree) -> Self {
        TreeJson {
            n: t.n,
            edges: t
                .edges
                .iter()
                .map(|e| (e.u, e.v, e.weight as i64))
                .collect(),
        }
    }
}

impl TryFrom<TreeJson> for WeightedTree {
    type Error = TreeError;
    fn try_from(j: TreeJson) -> Result<Self, TreeError> {
        WeightedTree::from_edges(j.n, j.edges)
    }
}

impl Serialize for WeightedTree {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TreeJson::from(self).serialize(serializer)
    }
}

fn check_weight_count(weights: &[u64], expected: usize) -> Result<(), TreeError> {
    if weights.len() != expected {
        return Err(TreeError::WeightCount {
            expected,
            found: weights.len(),
        });
    }
    if weights.contains(&0) {
        return Err(TreeError::NonPositiveWeight {
            u: 0,
            v: 0,
            weight: 0,
        });
    }
    Ok(())
}

/// Pairwise distances of a tree; `get` takes 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u64>,
}

impl DistanceTable {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Distance between `v_i` and `v_j`.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.dist[(i - 1) * self.n + (j - 1)]
    }

    /// Distance by 0-based indices.
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.dist[(i - 1) * self.n..i * self.n]
    }

    /// Sum over unordered pairs.
    pub fn pair_sum(&self) -> u64 {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.at(i, j))
            .sum()
    }
}

/// All `n^(n-2)` labeled trees on `n` vertices with every weight equal to
/// `weight`, in lexicographic order of Prüfer sequences.
pub fn enumerate_trees(
    n: usize,
    weight: u64,
) -> Result<impl Iterator<Item = WeightedTree>, TreeError> {
    if !(2..=MAX_ENUMERATION_ORDER).contains(&n) {
        return Err(TreeError::UnsupportedOrder {
            n,
            min: 2,
            max: MAX_ENUMERATION_ORDER,
        });
    }
    if weight < 1 {
        return Err(TreeError::NonPositiveWeight {
            u: 0,
            v: 0,
            weight: 0,
        });
    }
    let weights = vec![weight; n - 1];
    Ok(PruferSequences::new(n).map(move |seq| {
        WeightedTree::from_prufer(&seq, n, &weights).expect("enumerated sequences are valid")
    }))
}

/// Odometer over `{1..=n}^(n-2)`.
struct PruferSequences {
    n: usize,
    current: Option<Vec<usize>>,
}

impl PruferSequences {
    fn new(n: usize) -> Self {
        PruferSequences {
            n,
            current: Some(vec![1; n - 2]),
        }
    }
}

impl Iterator for PruferSequences {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for pos in (0..next.len()).rev() {
            if next[pos] < self.n {
                next[pos] += 1;
                self.current = Some(next);
                return Some(out);
            }
            next[pos] = 1;
        }
        Some(out)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
