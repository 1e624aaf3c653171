//! The identity suite run per tree, and sweep aggregation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed::{
    bkn_det, bkn_det_xj, corner_minor_closed, dq_closed, dq_simple, dq_star_closed, dq_star_simple,
    graham_pollak, WeightMultiset,
};
use crate::det::{check_dodgson_identity, det_bareiss, det_cofactor, DetError, MAX_COFACTOR_ORDER};
use crate::matrix::{build_d, build_d_plus_xj, build_dq, build_dq_star};
use crate::perm::generating_function_check;
use crate::poly::{qbracket, qpower, Poly};
use crate::tree::WeightedTree;

/// Largest order for which the generating-function check runs.
pub const MAX_GENERATING_FUNCTION_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn compare<T: PartialEq + std::fmt::Display>(name: &'static str, got: &T, want: &T) -> Self {
        let passed = got == want;
        Check {
            name,
            passed,
            detail: (!passed).then(|| format!("got {got}, expected {want}")),
        }
    }

    fn error(name: &'static str, e: impl std::fmt::Display) -> Self {
        Check {
            name,
            passed: false,
            detail: Some(e.to_string()),
        }
    }
}

/// The four determinants of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Determinants {
    pub d: Poly,
    pub d_plus_xj: Poly,
    pub dq: Poly,
    pub dq_star: Poly,
}

impl Determinants {
    pub fn of(t: &WeightedTree) -> Result<Self, DetError> {
        Ok(Determinants {
            d: det_bareiss(&build_d(t))?,
            d_plus_xj: det_bareiss(&build_d_plus_xj(t))?,
            dq: det_bareiss(&build_dq(t))?,
            dq_star: det_bareiss(&build_dq_star(t))?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeReport {
    pub tree: WeightedTree,
    pub determinants: Option<Determinants>,
    pub checks: Vec<Check>,
}

impl TreeReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Compare each tree's permutation tables with its determinants.
    pub generating_functions: bool,
    /// Recompute small determinants by cofactor expansion.
    pub cofactor_oracle: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            generating_functions: true,
            cofactor_oracle: true,
        }
    }
}

/// Runs every identity that applies to `t`.
pub fn verify_tree(t: &WeightedTree, opts: SuiteOptions) -> TreeReport {
    let mut checks = Vec::new();
    let n = t.order();
    if n < 2 {
        return TreeReport {
            tree: t.clone(),
            determinants: None,
            checks,
        };
    }
    let weights = WeightMultiset::new(t.weights()).expect("validated trees have positive weights");

    let dets = match Determinants::of(t) {
        Ok(d) => d,
        Err(e) => {
            checks.push(Check::error("determinants", e));
            return TreeReport {
                tree: t.clone(),
                determinants: None,
                checks,
            };
        }
    };

    checks.push(Check::compare(
        "det D = bkn",
        &dets.d,
        &Poly::from(bkn_det(&weights)),
    ));
    checks.push(Check::compare(
        "det (D + xJ) = bkn_xj",
        &dets.d_plus_xj,
        &bkn_det_xj(&weights),
    ));
    checks.push(Check::compare(
        "det D*_q = product",
        &dets.dq_star,
        &dq_star_closed(&weights),
    ));
    checks.push(Check::compare(
        "det D_q = pair formula",
        &dets.dq,
        &dq_closed(&weights),
    ));
    if t.is_simple() {
        let gp = graham_pollak(n).expect("n >= 2");
        checks.push(Check::compare("graham-pollak", &dets.d, &Poly::from(gp)));
        checks.push(Check::compare(
            "simple D_q",
            &dets.dq,
            &dq_simple(n).expect("n >= 2"),
        ));
        checks.push(Check::compare(
            "simple D*_q",
            &dets.dq_star,
            &dq_star_simple(n).expect("n >= 2"),
        ));
    }

    if opts.cofactor_oracle && n <= MAX_COFACTOR_ORDER {
        checks.push(match det_cofactor(&build_dq(t)) {
            Ok(v) => Check::compare("bareiss = cofactor", &dets.dq, &v),
            Err(e) => Check::error("bareiss = cofactor", e),
        });
    }

    checks.push(pendant_column_check(t));

    if n >= 3 {
        checks.push(match check_dodgson_identity(&build_dq(t)) {
            Ok(ok) => Check {
                name: "dodgson identity",
                passed: ok,
                detail: (!ok).then(|| "sides differ".to_string()),
            },
            Err(e) => Check::error("dodgson identity", e),
        });
        checks.push(corner_minor_check(t));
    }
    if n >= 4 {
        checks.push(recurrence_check(t));
    }

    if opts.generating_functions && n <= MAX_GENERATING_FUNCTION_ORDER {
        checks.push(match generating_function_check(t) {
            Ok(r) => Check {
                name: "generating functions",
                passed: r.agrees(),
                detail: (!r.agrees()).then(|| {
                    format!(
                        "N differs at {:?}, M differs at {:?}",
                        r.n_mismatches, r.m_mismatches
                    )
                }),
            },
            Err(e) => Check::error("generating functions", e),
        });
    }

    TreeReport {
        tree: t.clone(),
        determinants: Some(dets),
        checks,
    }
}

/// For every pendant `v` with neighbor `s` on an edge of weight α, column
/// `d_v - q^α d_s` of `D*_q(T)` is `(1 - q^{2α}) e_v`.
pub fn pendant_column_check(t: &WeightedTree) -> Check {
    const NAME: &str = "pendant column elimination";
    let m = build_dq_star(t);
    for v in t.pendants() {
        let e = match t.pendant_edge(v) {
            Ok(e) => e,
            Err(err) => return Check::error(NAME, err),
        };
        let s = if e.u == v { e.v } else { e.u };
        let shift = qpower(e.weight);
        let col_v = m.column(v - 1);
        let col_s = m.column(s - 1);
        for (i, (a, b)) in col_v.iter().zip(&col_s).enumerate() {
            let got = a - &(&shift * b);
            let want = if i == v - 1 {
                Poly::one() - qpower(2 * e.weight)
            } else {
                Poly::zero()
            };
            if got != want {
                return Check {
                    name: NAME,
                    passed: false,
                    detail: Some(format!(
                        "vertex {v}, row {}: got {got}, expected {want}",
                        i + 1
                    )),
                };
            }
        }
    }
    Check {
        name: NAME,
        passed: true,
        detail: None,
    }
}

/// The pendant-edge weights and the remaining weights of a tree whose
/// vertices 1 and n are pendant.
fn pendant_end_weights(t: &WeightedTree) -> Option<(u64, u64, Vec<u64>)> {
    let n = t.order();
    let first = t.pendant_edge(1).ok()?;
    let last = t.pendant_edge(n).ok()?;
    let rest = t
        .edges()
        .iter()
        .filter(|e| **e != first && **e != last)
        .map(|e| e.weight)
        .collect();
    Some((first.weight, last.weight, rest))
}

fn with_pendant_ends(t: &WeightedTree) -> Option<WeightedTree> {
    if t.is_pendant(1) && t.is_pendant(t.order()) {
        Some(t.clone())
    } else {
        t.with_pendant_ends().ok()
    }
}

/// `det D_q(T)` with row n and column 1 removed equals
/// `[β_1][β_{n-1}] ∏ [2β_i]` when `v_1`, `v_n` are pendant (relabeling
/// first if needed).
pub fn corner_minor_check(t: &WeightedTree) -> Check {
    const NAME: &str = "corner minor";
    let Some(t) = with_pendant_ends(t) else {
        return Check::error(NAME, "tree has fewer than two pendant vertices");
    };
    let (b_first, b_last, rest) = pendant_end_weights(&t).expect("ends are pendant");
    let n = t.order();
    let d = build_dq(&t);
    let want = corner_minor_closed(b_first, b_last, &rest);
    let minors = [
        d.minor(&[n - 1], &[0]).map_err(DetError::from),
        d.minor(&[0], &[n - 1]).map_err(DetError::from),
    ];
    for m in minors {
        match m.and_then(|m| det_bareiss(&m)) {
            Ok(got) if got == want => {}
            Ok(got) => return Check::compare(NAME, &got, &want),
            Err(e) => return Check::error(NAME, e),
        }
    }
    Check {
        name: NAME,
        passed: true,
        detail: None,
    }
}

/// `det D + [2β_1] det D^1_1 + [2β_{n-1}] det D^n_n
///  + [2β_1][2β_{n-1}] det D^{1n}_{1n} = 0` for pendant `v_1`, `v_n`.
pub fn recurrence_check(t: &WeightedTree) -> Check {
    const NAME: &str = "pendant recurrence";
    let Some(t) = with_pendant_ends(t) else {
        return Check::error(NAME, "tree has fewer than two pendant vertices");
    };
    match recurrence_value(&t) {
        Ok(v) => Check::compare(NAME, &v, &Poly::zero()),
        Err(e) => Check::error(NAME, e),
    }
}

/// Left-hand side of the pendant recurrence; zero when it holds.
pub fn recurrence_value(t: &WeightedTree) -> Result<Poly, DetError> {
    let n = t.order();
    let (b_first, b_last, _) = pendant_end_weights(t).ok_or(DetError::OrderTooSmall(n))?;
    let d = build_dq(t);
    let last = n - 1;
    let det = |idx: &[usize]| -> Result<Poly, DetError> { det_bareiss(&d.minor(idx, idx)?) };
    let (c1, cn) = (qbracket(2 * b_first), qbracket(2 * b_last));
    Ok(det(&[])? + &c1 * det(&[0])? + &cn * det(&[last])? + &c1 * &cn * det(&[0, last])?)
}

/// Aggregated result of a sweep over many trees.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub trees: usize,
    pub checks: usize,
    pub failures: usize,
    /// Weight multisets (sorted) whose trees disagreed on some determinant.
    pub structure_mismatches: Vec<Vec<u64>>,
    pub failed: Vec<FailedCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailedCheck {
    pub tree: WeightedTree,
    pub check: &'static str,
    pub detail: Option<String>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Verifies every tree in parallel, then checks that trees sharing a weight
/// multiset share all four determinants.
pub fn sweep(trees: Vec<WeightedTree>, opts: SuiteOptions) -> SweepSummary {
    let reports: Vec<TreeReport> = trees.par_iter().map(|t| verify_tree(t, opts)).collect();

    let mut by_weights: BTreeMap<Vec<u64>, Vec<&Determinants>> = BTreeMap::new();
    for r in &reports {
        if let Some(d) = &r.determinants {
            let mut key = r.tree.weights();
            key.sort_unstable();
            by_weights.entry(key).or_default().push(d);
        }
    }
    let structure_mismatches: Vec<Vec<u64>> = by_weights
        .into_iter()
        .filter(|(_, ds)| ds.windows(2).any(|w| w[0] != w[1]))
        .map(|(k, _)| k)
        .collect();

    let checks = reports.iter().map(|r| r.checks.len()).sum::<usize>() + 1;
    let mut failed: Vec<FailedCheck> = reports
        .iter()
        .flat_map(|r| {
            r.failures().map(|c| FailedCheck {
                tree: r.tree.clone(),
                check: c.name,
                detail: c.detail.clone(),
            })
        })
        .collect();
    failed.sort_by(|a, b| {
        a.tree
            .to_text()
            .cmp(&b.tree.to_text())
            .then(a.check.cmp(b.check))
    });
    let failures = failed.len() + usize::from(!structure_mismatches.is_empty());
    SweepSummary {
        trees: reports.len(),
        checks,
        failures,
        structure_mismatches,
        failed,
    }
}

/// Determinant of `D(T)` as an integer; the polynomial is constant.
pub fn distance_det(t: &WeightedTree) -> Result<BigInt, DetError> {
    Ok(det_bareiss(&build_d(t))?.coeff(0))
}
