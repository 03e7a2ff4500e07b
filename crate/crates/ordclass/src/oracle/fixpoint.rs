//! The grid-relative `≤₁` relation.
//!
//! `α ≤₁ β` holds on the grid when every set `B` of at most `subset_cap`
//! grid points below `β`, whose part below `α` lies in the window of `α`,
//! admits an order embedding into the grid below `α` that fixes `B ∩ α`
//! and preserves the sum relation `a + b = c` and the relation itself in
//! both directions.
//!
//! The relation at `(α, β)` only depends on the relation among points below
//! `β`, so columns are settled in increasing order of `β` in a single pass.
//! Within a column, `B` only needs to range over sets that contain the grid
//! predecessor of `β`; every other set was already tested one column
//! earlier, which also makes the result connected.

use super::grid::Grid;
use super::{OracleError, OracleResult};
use crate::term::OrdTerm;
use rayon::prelude::*;
use serde::Serialize;

/// Default bound on `|B|`.
pub const DEFAULT_SUBSET_CAP: usize = 4;

/// The computed relation, stored as the reach of each point: `a ≤₁ b` iff
/// `a ≤ b ≤ reach[a]`.
#[derive(Debug, Clone)]
pub struct Leq1Relation {
    grid: Grid,
    subset_cap: usize,
    reach: Vec<usize>,
}

/// A class member together with the chain that certifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassWitness {
    pub point: OrdTerm,
    /// `a_j <₁ a_{j-1} <₁ … <₁ a_1 <₁ a_1·2`, starting at the member.
    pub chain: Vec<OrdTerm>,
}

/// A triple violating an order law of the relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub points: Vec<OrdTerm>,
}

impl Leq1Relation {
    /// Assemble a relation from stored reach values.
    pub fn from_reach(grid: Grid, subset_cap: usize, reach: Vec<usize>) -> OracleResult<Self> {
        if reach.len() != grid.len() || reach.iter().enumerate().any(|(i, &r)| r < i || r >= grid.len()) {
            return Err(OracleError::Cache("reach table does not fit the grid".into()));
        }
        Ok(Leq1Relation { grid, subset_cap, reach })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn subset_cap(&self) -> usize {
        self.subset_cap
    }

    pub fn reach_table(&self) -> &[usize] {
        &self.reach
    }

    /// Number of passes over the columns.
    pub fn rounds(&self) -> usize {
        1
    }

    /// `a ≤₁ b` by grid index.
    pub fn holds(&self, a: usize, b: usize) -> bool {
        a <= b && b <= self.reach[a]
    }

    /// `a ≤₁ b` for grid terms.
    pub fn leq1(&self, a: &OrdTerm, b: &OrdTerm) -> OracleResult<bool> {
        Ok(self.holds(self.grid.require(a)?, self.grid.require(b)?))
    }

    /// Index of `m̂`: the largest point reached, taken over the test layer
    /// for test points and over the whole grid otherwise.
    pub fn m_hat_index(&self, i: usize) -> usize {
        if !self.grid.is_test(i) {
            return self.reach[i];
        }
        (i..=self.reach[i]).rev().find(|&j| self.grid.is_test(j)).unwrap_or(i)
    }

    /// `m̂(t) = max{β : t ≤₁ β}`.
    pub fn m_hat(&self, t: &OrdTerm) -> OracleResult<OrdTerm> {
        Ok(self.grid.point(self.m_hat_index(self.grid.require(t)?)).clone())
    }

    /// Test points with a chain `a_j <₁ … <₁ a_1 <₁ a_1·2` of test points.
    pub fn class_detect(&self, j: usize) -> Vec<ClassWitness> {
        if j == 0 {
            return self
                .grid
                .test_indices()
                .into_iter()
                .map(|i| ClassWitness { point: self.grid.point(i).clone(), chain: vec![] })
                .collect();
        }
        let tests = self.grid.test_indices();
        let mut level: Vec<(usize, Vec<usize>)> = tests
            .iter()
            .filter_map(|&a| {
                let d = self.grid.sum(a, a)?;
                (d > a && self.holds(a, d)).then(|| (a, vec![a, d]))
            })
            .collect();
        for _ in 1..j {
            let mut next = Vec::new();
            for &a in &tests {
                if let Some((_, chain)) = level.iter().find(|(b, _)| *b > a && self.holds(a, *b)) {
                    let mut c = vec![a];
                    c.extend(chain);
                    next.push((a, c));
                }
            }
            level = next;
        }
        level
            .into_iter()
            .map(|(a, chain)| ClassWitness {
                point: self.grid.point(a).clone(),
                chain: chain.into_iter().map(|i| self.grid.point(i).clone()).collect(),
            })
            .collect()
    }

    /// Check `a ≤₁ b ≤₁ c ⟹ a ≤₁ c` over the whole grid.
    pub fn check_transitive(&self) -> Result<(), LawViolation> {
        let n = self.grid.len();
        for a in 0..n {
            for b in a..=self.reach[a] {
                for c in b..=self.reach[b] {
                    if !self.holds(a, c) {
                        return Err(self.violation("transitivity", &[a, b, c]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Check `a ≤₁ c ∧ a ≤ b ≤ c ⟹ a ≤₁ b` over the whole grid.
    pub fn check_connected(&self) -> Result<(), LawViolation> {
        for a in 0..self.grid.len() {
            for b in a..=self.reach[a] {
                if !self.holds(a, b) {
                    return Err(self.violation("connectedness", &[a, b, self.reach[a]]));
                }
            }
        }
        Ok(())
    }

    /// Recheck the boundary of every reach interval with the direct
    /// definition, quantifying over all sets `B` below `β`.
    pub fn verify_boundaries(&self) -> Result<(), LawViolation> {
        let n = self.grid.len();
        let rel = |a: usize, b: usize| self.holds(a, b);
        let bad: Option<Vec<usize>> = (0..n).into_par_iter().find_map_any(|a| {
            let r = self.reach[a];
            if r > a && !direct_check(&self.grid, self.subset_cap, &rel, a, r) {
                return Some(vec![a, r]);
            }
            if r + 1 < n && direct_check(&self.grid, self.subset_cap, &rel, a, r + 1) {
                return Some(vec![a, r + 1]);
            }
            None
        });
        match bad {
            Some(v) => Err(self.violation("boundary", &v)),
            None => Ok(()),
        }
    }

    fn violation(&self, law: &'static str, ix: &[usize]) -> LawViolation {
        LawViolation { law, points: ix.iter().map(|&i| self.grid.point(i).clone()).collect() }
    }
}

/// Compute the relation on `grid`.
pub fn leq1_fixpoint(grid: Grid, subset_cap: usize) -> OracleResult<Leq1Relation> {
    if subset_cap < 2 {
        return Err(OracleError::SubsetCap(subset_cap));
    }
    let n = grid.len();
    let mut reach: Vec<usize> = (0..n).collect();
    for b in 1..n {
        let live: Vec<usize> = (0..b).filter(|&a| reach[a] == b - 1).collect();
        let snapshot = &reach;
        let rel = |x: usize, y: usize| x <= y && y <= snapshot[x];
        let grown: Vec<usize> = live
            .into_par_iter()
            .filter(|&a| column_check(&grid, subset_cap, &rel, a, b))
            .collect();
        for a in grown {
            reach[a] = b;
        }
    }
    Ok(Leq1Relation { grid, subset_cap, reach })
}

/// All sets containing `b - 1` admit an embedding below `a`.
fn column_check(grid: &Grid, cap: usize, rel: &(dyn Fn(usize, usize) -> bool + Sync), a: usize, b: usize) -> bool {
    let upper: Vec<usize> = (a..b - 1).collect();
    let window = grid.window(a);
    let mut jobs = Vec::new();
    for msize in 1..=cap {
        for rest in combinations(&upper, msize - 1) {
            let mut m = rest;
            m.push(b - 1);
            jobs.push(m);
        }
    }
    jobs.par_iter().all(|m| all_params_embed(grid, cap, rel, &window, a, m))
}

/// All sets below `b` admit an embedding below `a`.
fn direct_check(grid: &Grid, cap: usize, rel: &(dyn Fn(usize, usize) -> bool + Sync), a: usize, b: usize) -> bool {
    let upper: Vec<usize> = (a..b).collect();
    let window = grid.window(a);
    (1..=cap).all(|msize| {
        combinations(&upper, msize)
            .iter()
            .all(|m| all_params_embed(grid, cap, rel, &window, a, m))
    })
}

fn all_params_embed(
    grid: &Grid,
    cap: usize,
    rel: &(dyn Fn(usize, usize) -> bool + Sync),
    window: &[usize],
    a: usize,
    m: &[usize],
) -> bool {
    (0..=cap - m.len()).all(|fsize| {
        combinations(window, fsize).iter().all(|f| embeds(grid, rel, a, f, m))
    })
}

fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            go(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(pool, k, 0, &mut cur, &mut out);
    out
}

/// Search for `φ` on `m` into `(max f, a)`, fixing `f`.
fn embeds(grid: &Grid, rel: &(dyn Fn(usize, usize) -> bool + Sync), a: usize, f: &[usize], m: &[usize]) -> bool {
    let lo = f.last().map_or(0, |&x| x + 1);
    let mut src: Vec<usize> = f.to_vec();
    src.extend_from_slice(m);
    let mut img: Vec<usize> = f.to_vec();
    img.resize(src.len(), 0);
    assign(grid, rel, &src, &mut img, f.len(), src.len() - 1, lo, a)
}

/// Assign images from the top element of `m` downward.
#[allow(clippy::too_many_arguments)]
fn assign(
    grid: &Grid,
    rel: &(dyn Fn(usize, usize) -> bool + Sync),
    src: &[usize],
    img: &mut [usize],
    nfixed: usize,
    pos: usize,
    lo: usize,
    hi: usize,
) -> bool {
    for y in (lo..hi).rev() {
        img[pos] = y;
        if consistent(grid, rel, src, img, nfixed, pos) {
            if pos == nfixed {
                return true;
            }
            if assign(grid, rel, src, img, nfixed, pos - 1, lo, y) {
                return true;
            }
        }
    }
    false
}

/// Check every relation instance that involves position `pos` and only
/// assigned positions (fixed ones and those above `pos`).
fn consistent(
    grid: &Grid,
    rel: &(dyn Fn(usize, usize) -> bool + Sync),
    src: &[usize],
    img: &[usize],
    nfixed: usize,
    pos: usize,
) -> bool {
    let assigned: Vec<usize> = (0..nfixed).chain(pos..src.len()).collect();
    for &i in &assigned {
        let (lo, hi) = if i < pos { (i, pos) } else { (pos, i) };
        if rel(src[lo], src[hi]) != rel(img[lo], img[hi]) {
            return false;
        }
    }
    for &i in &assigned {
        for &j in &assigned {
            for &k in &assigned {
                if i != pos && j != pos && k != pos {
                    continue;
                }
                let s = grid.sum(src[i], src[j]) == Some(src[k]);
                let t = grid.sum(img[i], img[j]) == Some(img[k]);
                if s != t {
                    return false;
                }
            }
        }
    }
    true
}
