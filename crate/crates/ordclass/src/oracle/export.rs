//! DOT and JSON exports, and the content-addressed relation cache.
//!
//! Cache files are JSON named `<key>.json`, where the key is the SHA-256 of
//! the grid content and the subset cap. A file stores the reach table; it is
//! accepted only if its point list matches the grid exactly.

use super::fixpoint::{leq1_fixpoint, Leq1Relation};
use super::grid::Grid;
use super::{OracleError, OracleResult};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "ORDCLASS_CACHE_DIR";

/// DOT digraph of the covering relation of `<₁`. Witness points are drawn
/// dashed.
pub fn to_dot(rel: &Leq1Relation) -> String {
    let g = rel.grid();
    let mut out = String::from("digraph leq1 {\n  rankdir=BT;\n  node [shape=box];\n");
    let nodes: Vec<usize> = (0..g.len()).filter(|&i| rel.reach_table()[i] > i || in_edge(rel, i)).collect();
    for &i in &nodes {
        let style = if g.is_test(i) { "" } else { ", style=dashed" };
        let _ = writeln!(out, "  n{i} [label=\"{}\"{style}];", g.point(i));
    }
    for a in 0..g.len() {
        for b in a + 1..=rel.reach_table()[a] {
            let covered = (a + 1..b).any(|c| rel.holds(a, c) && rel.holds(c, b));
            if !covered {
                let _ = writeln!(out, "  n{a} -> n{b};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn in_edge(rel: &Leq1Relation, i: usize) -> bool {
    (0..i).any(|a| rel.holds(a, i))
}

#[derive(Serialize, Deserialize)]
struct RelationDoc {
    key: String,
    subset_cap: usize,
    rounds: usize,
    points: Vec<String>,
    test: Vec<bool>,
    reach: Vec<usize>,
}

#[derive(Serialize)]
struct MatrixDoc<'a> {
    subset_cap: usize,
    rounds: usize,
    grid_hash: String,
    points: Vec<String>,
    test: &'a [bool],
    matrix: Vec<Vec<u8>>,
}

/// JSON dump of the full relation matrix.
pub fn to_json(rel: &Leq1Relation) -> String {
    let g = rel.grid();
    let n = g.len();
    let test: Vec<bool> = (0..n).map(|i| g.is_test(i)).collect();
    let doc = MatrixDoc {
        subset_cap: rel.subset_cap(),
        rounds: rel.rounds(),
        grid_hash: g.content_hash(),
        points: g.points().iter().map(|p| p.to_string()).collect(),
        test: &test,
        matrix: (0..n).map(|a| (0..n).map(|b| rel.holds(a, b) as u8).collect()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("matrix documents always serialize")
}

/// Cache key of a grid and subset cap.
pub fn cache_key(grid: &Grid, subset_cap: usize) -> String {
    let mut h = Sha256::new();
    h.update(grid.content_hash().as_bytes());
    h.update(format!("|cap={subset_cap}").as_bytes());
    format!("{:x}", h.finalize())
}

/// Load the relation from `dir` if a matching entry exists; otherwise
/// compute it and store it there.
pub fn load_or_compute(grid: Grid, subset_cap: usize, dir: Option<&Path>) -> OracleResult<Leq1Relation> {
    let Some(dir) = dir else {
        return leq1_fixpoint(grid, subset_cap);
    };
    let key = cache_key(&grid, subset_cap);
    let path = dir.join(format!("{key}.json"));
    let points: Vec<String> = grid.points().iter().map(|p| p.to_string()).collect();
    if let Ok(text) = fs::read_to_string(&path) {
        let doc: RelationDoc =
            serde_json::from_str(&text).map_err(|e| OracleError::Cache(e.to_string()))?;
        if doc.key == key && doc.points == points && doc.subset_cap == subset_cap {
            return Leq1Relation::from_reach(grid, subset_cap, doc.reach);
        }
    }
    let rel = leq1_fixpoint(grid, subset_cap)?;
    let doc = RelationDoc {
        key,
        subset_cap,
        rounds: rel.rounds(),
        points,
        test: (0..rel.grid().len()).map(|i| rel.grid().is_test(i)).collect(),
        reach: rel.reach_table().to_vec(),
    };
    fs::create_dir_all(dir).map_err(|e| OracleError::Cache(e.to_string()))?;
    let text = serde_json::to_string(&doc).expect("relation documents always serialize");
    fs::write(&path, text).map_err(|e| OracleError::Cache(e.to_string()))?;
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::super::grid::{build_grid, GridOps};
    use super::*;
    use crate::term::{parse_ord, AtomTable, OrdTerm};

    fn p(s: &str) -> OrdTerm {
        parse_ord(s, &AtomTable::default()).unwrap()
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("ordclass-cache-test-{}", std::process::id()));
        let grid = || build_grid(&p("eps(1)"), &[p("eps(0)")], GridOps::default(), 400).unwrap();
        let a = load_or_compute(grid(), 3, Some(&dir)).unwrap();
        let b = load_or_compute(grid(), 3, Some(&dir)).unwrap();
        assert_eq!(a.reach_table(), b.reach_table());
        assert_eq!(to_json(&a), to_json(&b));
        let dot = to_dot(&a);
        assert!(dot.contains("label=\"eps(0)\""));
        let _ = fs::remove_dir_all(dir);
    }
}
