//! Exact q-distance matrices of weighted trees.
//!
//! Builds `D(T)`, `D_q(T)`, `D*_q(T)` and `D(T) + xJ` over `Z[q]`, takes
//! their determinants exactly, and checks them against closed forms and
//! against brute-force signed permutation statistics.

pub mod closed;
pub mod det;
pub mod matrix;
pub mod perm;
pub mod poly;
pub mod tree;
pub mod verify;
pub mod wiener;

pub use closed::WeightMultiset;
pub use det::{det_bareiss, det_cofactor, dodgson, Condensation};
pub use matrix::{build_d, build_d_plus_xj, build_dq, build_dq_star, PolyMatrix};
pub use perm::{PermStats, Permutation};
pub use poly::{qbracket, qpower, Poly};
pub use tree::{enumerate_trees, DistanceTable, WeightedTree};
