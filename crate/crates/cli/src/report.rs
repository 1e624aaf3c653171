//! Rendering of each subcommand in plain, JSON and CSV form.

use std::fmt::Write as _;

use serde_json::{json, Value};

use qdist::closed::{bkn_det, bkn_det_xj, dq_closed, dq_star_closed, WeightMultiset};
use qdist::perm::{
    closed_table, m_table_from_det, m_table_oracle, n_table_from_det, n_table_oracle, TableKind,
    MAX_PERMUTATION_ORDER,
};
use qdist::verify::{sweep, verify_tree, Check, Determinants, SuiteOptions};
use qdist::wiener::{wiener_index, wiener_poly};
use qdist::{PermStats, Poly, WeightedTree};

use crate::source::SourceError;
use crate::{Output, Rendered};

const NOT_SIMPLE: &str = "n/a (weighted)";

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn tree_value(t: &WeightedTree) -> Value {
    serde_json::to_value(t).expect("trees always serialize")
}

fn check_line(c: &Check) -> String {
    match (&c.detail, c.passed) {
        (_, true) => format!("[PASS] {}", c.name),
        (Some(d), false) => format!("[FAIL] {}: {d}", c.name),
        (None, false) => format!("[FAIL] {}", c.name),
    }
}

/// Determinant and closed form of each matrix, as text. `D + xJ` is shown
/// in the variable `x`.
fn determinant_rows(t: &WeightedTree, dets: &Determinants) -> Vec<(&'static str, String, String)> {
    let closed = WeightMultiset::new(t.weights()).ok();
    let show =
        |p: Option<Poly>, var: &str| p.map_or_else(|| "n/a".to_string(), |p| p.display_with(var));
    vec![
        (
            "D",
            dets.d.to_string(),
            show(closed.as_ref().map(|w| Poly::from(bkn_det(w))), "q"),
        ),
        (
            "D + xJ",
            dets.d_plus_xj.display_with("x"),
            show(closed.as_ref().map(bkn_det_xj), "x"),
        ),
        (
            "D_q",
            dets.dq.to_string(),
            show(closed.as_ref().map(dq_closed), "q"),
        ),
        (
            "D*_q",
            dets.dq_star.to_string(),
            show(closed.as_ref().map(dq_star_closed), "q"),
        ),
    ]
}

pub fn det(t: &WeightedTree, output: Output) -> Result<Rendered, SourceError> {
    let report = verify_tree(t, SuiteOptions::default());
    let dets = match &report.determinants {
        Some(d) => d.clone(),
        None => Determinants::of(t).map_err(|e| SourceError::Input(e.to_string()))?,
    };
    let rows = determinant_rows(t, &dets);
    let passed = report.passed();
    let text = match output {
        Output::Plain => {
            let mut s = format!("tree: {t}\n");
            for (name, det, closed) in &rows {
                let _ = writeln!(s, "det {name} = {det}");
                let _ = writeln!(s, "closed {name} = {closed}");
            }
            for c in &report.checks {
                let _ = writeln!(s, "{}", check_line(c));
            }
            let failed = report.failures().count();
            let _ = writeln!(
                s,
                "checks: {} passed, {failed} failed",
                report.checks.len() - failed
            );
            s
        }
        Output::Json => {
            let entries = |closed: bool| {
                let keys = ["d", "d_plus_xj", "dq", "dq_star"];
                keys.iter()
                    .zip(&rows)
                    .map(|(k, r)| {
                        let v = if closed { &r.2 } else { &r.1 };
                        (k.to_string(), Value::String(v.clone()))
                    })
                    .collect::<serde_json::Map<_, _>>()
            };
            json_text(&json!({
                "tree": tree_value(t),
                "determinants": entries(false),
                "closed": entries(true),
                "checks": report.checks,
                "passed": passed,
            }))
        }
        Output::Csv => {
            let mut s = String::from("matrix,determinant,closed\n");
            for (name, det, closed) in &rows {
                let _ = writeln!(s, "{name},{det},{closed}");
            }
            s
        }
    };
    Ok(Rendered { text, passed })
}

pub fn verify(trees: Vec<WeightedTree>, permutations: bool, output: Output) -> Rendered {
    let opts = SuiteOptions {
        generating_functions: permutations,
        ..SuiteOptions::default()
    };
    let summary = sweep(trees, opts);
    let passed = summary.passed();
    let text = match output {
        Output::Plain => {
            let mut s = format!(
                "trees: {}\nchecks: {}\nfailures: {}\n",
                summary.trees, summary.checks, summary.failures
            );
            for f in &summary.failed {
                let detail = f
                    .detail
                    .as_deref()
                    .map(|d| format!(": {d}"))
                    .unwrap_or_default();
                let _ = writeln!(s, "[FAIL] {} {}{detail}", f.tree, f.check);
            }
            for w in &summary.structure_mismatches {
                let _ = writeln!(s, "[FAIL] determinants differ for weights {w:?}");
            }
            let _ = writeln!(s, "{}", if passed { "PASS" } else { "FAIL" });
            s
        }
        Output::Json => json_text(&json!({
            "trees": summary.trees,
            "checks": summary.checks,
            "failures": summary.failures,
            "structure_mismatches": summary.structure_mismatches,
            "failed": summary.failed,
            "passed": passed,
        })),
        Output::Csv => format!(
            "trees,checks,failures\n{},{},{}\n",
            summary.trees, summary.checks, summary.failures
        ),
    };
    Rendered { text, passed }
}

struct Column {
    name: &'static str,
    table: Option<PermStats>,
}

impl Column {
    fn cell(&self, k: u64) -> String {
        self.table
            .as_ref()
            .map_or_else(|| NOT_SIMPLE.to_string(), |t| t.get(k).to_string())
    }

    fn value(&self) -> Value {
        self.table.as_ref().map_or_else(
            || Value::String(NOT_SIMPLE.into()),
            |t| serde_json::to_value(t).expect("tables always serialize"),
        )
    }
}

pub fn perm_table(
    t: &WeightedTree,
    k_max: Option<u64>,
    output: Output,
) -> Result<Rendered, SourceError> {
    let n = t.order();
    if n > MAX_PERMUTATION_ORDER {
        return Err(SourceError::Usage(format!(
            "permutation tables are limited to n <= {MAX_PERMUTATION_ORDER}, got {n}"
        )));
    }
    let fail = |e: qdist::perm::PermError| SourceError::Input(e.to_string());
    let simple = t.is_simple();
    let columns = [
        Column {
            name: "n_oracle",
            table: Some(n_table_oracle(t).map_err(fail)?),
        },
        Column {
            name: "n_det",
            table: Some(n_table_from_det(t).map_err(fail)?),
        },
        Column {
            name: "n_closed",
            table: simple.then(|| closed_table(TableKind::N, n)),
        },
        Column {
            name: "m_oracle",
            table: Some(m_table_oracle(t).map_err(fail)?),
        },
        Column {
            name: "m_det",
            table: Some(m_table_from_det(t).map_err(fail)?),
        },
        Column {
            name: "m_closed",
            table: simple.then(|| closed_table(TableKind::M, n)),
        },
    ];
    let agree = |group: &[Column]| {
        let present: Vec<&PermStats> = group.iter().filter_map(|c| c.table.as_ref()).collect();
        present.windows(2).all(|w| w[0].same_coefficients(w[1]))
    };
    let (n_agree, m_agree) = (agree(&columns[..3]), agree(&columns[3..]));
    let passed = n_agree && m_agree;
    let k_max = k_max.unwrap_or_else(|| {
        columns
            .iter()
            .filter_map(|c| c.table.as_ref().and_then(PermStats::max_k))
            .max()
            .unwrap_or(0)
    });
    let yes_no = |b: bool| if b { "yes" } else { "no" };

    let text = match output {
        Output::Plain => {
            let mut rows = vec![std::iter::once("k".to_string())
                .chain(columns.iter().map(|c| c.name.to_string()))
                .collect::<Vec<_>>()];
            for k in 0..=k_max {
                rows.push(
                    std::iter::once(k.to_string())
                        .chain(columns.iter().map(|c| c.cell(k)))
                        .collect(),
                );
            }
            let widths: Vec<usize> = (0..rows[0].len())
                .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0))
                .collect();
            let mut s = format!("tree: {t}\n");
            for r in &rows {
                let line: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:>w$}"))
                    .collect();
                let _ = writeln!(s, "{}", line.join("  ").trim_end());
            }
            let _ = writeln!(s, "N sources agree: {}", yes_no(n_agree));
            let _ = writeln!(s, "M sources agree: {}", yes_no(m_agree));
            s
        }
        Output::Json => {
            let tables: serde_json::Map<String, Value> = columns
                .iter()
                .map(|c| (c.name.to_string(), c.value()))
                .collect();
            json_text(&json!({
                "tree": tree_value(t),
                "k_max": k_max,
                "tables": tables,
                "agree": { "n": n_agree, "m": m_agree },
                "passed": passed,
            }))
        }
        Output::Csv => {
            let header: Vec<&str> = columns.iter().map(|c| c.name).collect();
            let mut s = format!("k,{}\n", header.join(","));
            for k in 0..=k_max {
                let cells: Vec<String> = columns.iter().map(|c| c.cell(k)).collect();
                let _ = writeln!(s, "{k},{}", cells.join(","));
            }
            s
        }
    };
    Ok(Rendered { text, passed })
}

pub fn wiener(t: &WeightedTree, output: Output) -> Rendered {
    let (poly, index) = (wiener_poly(t), wiener_index(t));
    let text = match output {
        Output::Plain => format!("tree: {t}\nwiener polynomial: {poly}\nwiener index: {index}\n"),
        Output::Json => json_text(&json!({
            "tree": tree_value(t),
            "wiener_polynomial": poly.to_string(),
            "wiener_index": qdist::perm::JsonInt(index),
        })),
        Output::Csv => format!("polynomial,index\n{poly},{index}\n"),
    };
    Rendered { text, passed: true }
}

fn edges_csv(index: Option<usize>, t: &WeightedTree, out: &mut String) {
    for e in t.edges() {
        match index {
            Some(i) => writeln!(out, "{i},{},{},{}", e.u, e.v, e.weight),
            None => writeln!(out, "{},{},{}", e.u, e.v, e.weight),
        }
        .expect("writing to a String cannot fail");
    }
}

pub fn gen_tree(t: &WeightedTree, output: Output) -> Rendered {
    let text = match output {
        Output::Plain => t.to_text(),
        Output::Json => format!("{}\n", t.to_json()),
        Output::Csv => {
            let mut s = String::from("u,v,weight\n");
            edges_csv(None, t, &mut s);
            s
        }
    };
    Rendered { text, passed: true }
}

pub fn enumerate(trees: &[WeightedTree], output: Output) -> Rendered {
    let text = match output {
        Output::Plain => trees.iter().map(|t| format!("{t}\n")).collect(),
        Output::Json => json_text(&Value::Array(trees.iter().map(tree_value).collect())),
        Output::Csv => {
            let mut s = String::from("tree,u,v,weight\n");
            for (i, t) in trees.iter().enumerate() {
                edges_csv(Some(i), t, &mut s);
            }
            s
        }
    };
    Rendered { text, passed: true }
}
