//! Finite grids of concrete ordinals.
//!
//! A grid has two layers. The test layer is the closure of the seeds under a
//! restricted set of operations and carries every reported fact. The witness
//! layer adds points just below each limit epsilon of the test layer so that
//! embeddings have room to land below it.

use super::{OracleError, OracleResult};
use crate::term::{add, compare, omega_pow, sort_terms, Monomial, OrdTerm};
use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

/// Closure operations used by [`build_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridOps {
    /// Height of the ω-towers built over `0` and over every epsilon seed.
    pub tower_height: u32,
    /// Number of tower steps taken over the largest test point below a limit.
    pub witness_depth: u32,
    /// Apply `+1` to every point instead of to limits only. Below any limit
    /// bound this never closes and ends in a cap error.
    pub succ_all: bool,
}

impl Default for GridOps {
    fn default() -> Self {
        GridOps { tower_height: 9, witness_depth: 2, succ_all: false }
    }
}

/// Default maximum number of grid points.
pub const DEFAULT_GRID_CAP: usize = 400;

/// A finite, strictly increasing list of concrete ordinals.
#[derive(Debug, Clone)]
pub struct Grid {
    points: Vec<OrdTerm>,
    test: Vec<bool>,
    bound: OrdTerm,
    ops: GridOps,
    index: HashMap<OrdTerm, usize>,
    sums: Vec<Vec<Option<u32>>>,
}

impl Grid {
    pub fn points(&self) -> &[OrdTerm] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bound(&self) -> &OrdTerm {
        &self.bound
    }

    pub fn ops(&self) -> GridOps {
        self.ops
    }

    pub fn point(&self, i: usize) -> &OrdTerm {
        &self.points[i]
    }

    /// Whether point `i` belongs to the test layer.
    pub fn is_test(&self, i: usize) -> bool {
        self.test[i]
    }

    /// Indices of the test layer.
    pub fn test_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.test[i]).collect()
    }

    /// Index of a term, if it is a grid point.
    pub fn index_of(&self, t: &OrdTerm) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Index of a term or a `NotInGrid` error.
    pub fn require(&self, t: &OrdTerm) -> OracleResult<usize> {
        self.index_of(t).ok_or_else(|| OracleError::NotInGrid(t.to_string()))
    }

    /// Index of `a + b` when it lies in the grid.
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sums[a][b].map(|c| c as usize)
    }

    /// Points that may be fixed when embedding below point `a`: the test
    /// points below it together with the additive parts of `a` in the grid.
    pub fn window(&self, a: usize) -> Vec<usize> {
        let mut w: Vec<usize> = (0..a).filter(|&i| self.test[i]).collect();
        for p in additive_parts(&self.points[a]) {
            if let Some(i) = self.index_of(&p) {
                if i < a && !self.test[i] {
                    w.push(i);
                }
            }
        }
        w.sort_unstable();
        w
    }

    /// Content hash of the grid, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        for (p, t) in self.points.iter().zip(&self.test) {
            h.update(p.to_string().as_bytes());
            h.update(if *t { b"|t\n" } else { b"|w\n" });
        }
        h.update(self.bound.to_string().as_bytes());
        format!("{:x}", h.finalize())
    }
}

/// `x·2` for principal `x`.
fn double(x: &OrdTerm) -> OrdTerm {
    let m = x.leading().expect("nonzero");
    OrdTerm::from_monomials(vec![Monomial { exp: m.exp, coeff: BigUint::from(2u32) }])
}

/// `ω_0(b) = b + 1`, `ω_{k+1}(b) = ω^{ω_k(b)}`.
pub fn tower_over(b: &OrdTerm, k: u32) -> OrdTerm {
    let mut t = b.succ();
    for _ in 0..k {
        t = omega_pow(&t);
    }
    t
}

/// Partial sums and principal summands of the normal form of `x`.
pub fn additive_parts(x: &OrdTerm) -> Vec<OrdTerm> {
    let mut out = Vec::new();
    let mut acc: Vec<Monomial> = Vec::new();
    for m in x.monomials() {
        let unit = omega_pow(&m.exp);
        out.push(unit);
        let mut c = BigUint::one();
        while c <= m.coeff {
            let mut ms = acc.clone();
            ms.push(Monomial { exp: m.exp.clone(), coeff: c.clone() });
            out.push(OrdTerm::from_monomials(ms));
            c += 1u32;
        }
        acc.push(m);
    }
    out
}

fn below(x: &OrdTerm, bound: &OrdTerm) -> OracleResult<bool> {
    Ok(compare(x, bound)? == Ordering::Less)
}

/// Build the grid below `bound` from `seeds` and `{0, 1, ω}`.
pub fn build_grid(
    bound: &OrdTerm,
    seeds: &[OrdTerm],
    ops: GridOps,
    cap: usize,
) -> OracleResult<Grid> {
    if !bound.is_concrete() {
        return Err(OracleError::NotConcrete(bound.to_string()));
    }
    if let Some(s) = seeds.iter().find(|s| !s.is_concrete()) {
        return Err(OracleError::NotConcrete(s.to_string()));
    }
    let mut seen: HashSet<OrdTerm> = HashSet::new();
    let mut work: Vec<OrdTerm> = Vec::new();
    let push = |x: OrdTerm, seen: &mut HashSet<OrdTerm>, work: &mut Vec<OrdTerm>| {
        if below(&x, bound)? && seen.insert(x.clone()) {
            work.push(x);
            if seen.len() > cap {
                return Err(OracleError::CapExceeded { cap });
            }
        }
        Ok::<(), OracleError>(())
    };
    let mut bases = vec![OrdTerm::zero()];
    bases.extend(seeds.iter().filter(|s| s.as_leaf().is_some()).cloned());
    for x in [OrdTerm::zero(), OrdTerm::one(), OrdTerm::omega()].into_iter().chain(seeds.iter().cloned()) {
        push(x, &mut seen, &mut work)?;
    }
    for b in &bases {
        if !below(b, bound)? {
            continue;
        }
        for k in 0..=ops.tower_height {
            push(tower_over(b, k), &mut seen, &mut work)?;
        }
    }
    while let Some(x) = work.pop() {
        let c = x.classify();
        if c.is_zero || c.is_limit || ops.succ_all {
            push(x.succ(), &mut seen, &mut work)?;
        }
        if c.is_principal {
            push(double(&x), &mut seen, &mut work)?;
        }
        for p in additive_parts(&x) {
            push(p, &mut seen, &mut work)?;
        }
    }
    let mut test: Vec<OrdTerm> = seen.iter().cloned().collect();
    sort_terms(&mut test).map_err(OracleError::from)?;

    let mut witness: Vec<OrdTerm> = Vec::new();
    for (i, a) in test.iter().enumerate() {
        if i == 0 || !a.classify().is_limit {
            continue;
        }
        let q = &test[i - 1];
        let shifts: Vec<&OrdTerm> = test[1..i]
            .iter()
            .filter(|s| add(a, s).map(|x| seen.contains(&x)).unwrap_or(false))
            .collect();
        for j in 1..=ops.witness_depth {
            let z = tower_over(q, j);
            if !below(&z, a)? {
                break;
            }
            for s in &shifts {
                let zs = add(&z, s)?;
                if below(&zs, a)? && !seen.contains(&zs) {
                    witness.push(zs);
                }
            }
            if !seen.contains(&z) {
                witness.push(z);
            }
        }
    }
    let mut all: Vec<OrdTerm> = test.iter().cloned().chain(witness.iter().cloned()).collect();
    all.dedup();
    sort_terms(&mut all).map_err(OracleError::from)?;
    all.dedup();
    if all.len() > cap {
        return Err(OracleError::CapExceeded { cap });
    }
    let index: HashMap<OrdTerm, usize> =
        all.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let n = all.len();
    let mut sums = vec![vec![None; n]; n];
    for a in 0..n {
        for b in 0..n {
            let c = add(&all[a], &all[b])?;
            sums[a][b] = index.get(&c).map(|&c| c as u32);
        }
    }
    let test_flags = all.iter().map(|p| seen.contains(p)).collect();
    Ok(Grid { points: all, test: test_flags, bound: bound.clone(), ops, index, sums })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_ord, AtomTable};

    fn p(s: &str) -> OrdTerm {
        parse_ord(s, &AtomTable::default()).unwrap()
    }

    #[test]
    fn small_grid_contents() {
        let g = build_grid(&p("eps(1)*3"), &[p("eps(0)")], GridOps::default(), 400).unwrap();
        for s in ["0", "1", "w", "eps(0)", "eps(0)+1", "eps(0)*2", "eps(0)*2+1", "w^(eps(0)+1)"] {
            let i = g.index_of(&p(s)).unwrap_or_else(|| panic!("{s} missing"));
            assert!(g.is_test(i));
        }
        assert!(g.points().windows(2).all(|w| compare(&w[0], &w[1]).unwrap() == Ordering::Less));
    }

    #[test]
    fn bounded_and_capped() {
        let g = build_grid(&p("w^w"), &[p("w")], GridOps::default(), 400).unwrap();
        assert!(g.points().iter().all(|x| compare(x, &p("w^w")).unwrap() == Ordering::Less));
        let full = GridOps { succ_all: true, ..GridOps::default() };
        assert!(matches!(
            build_grid(&p("w"), &[], full, 400),
            Err(OracleError::CapExceeded { cap: 400 })
        ));
        let g = build_grid(&p("w"), &[], GridOps::default(), 400).unwrap();
        assert_eq!(g.points(), &[p("0"), p("1"), p("2")]);
    }

    #[test]
    fn witnesses_only_below_epsilons() {
        let g = build_grid(&p("eps(3)"), &[p("eps(0)"), p("eps(1)"), p("eps(2)")], GridOps::default(), 400)
            .unwrap();
        let witnesses: Vec<usize> = (0..g.len()).filter(|&i| !g.is_test(i)).collect();
        assert_eq!(witnesses.len(), 12);
        for w in witnesses {
            let next_test = (w + 1..g.len()).find(|&j| g.is_test(j)).unwrap();
            assert!(g.point(next_test).classify().is_epsilon);
        }
    }

    #[test]
    fn parts() {
        let parts: Vec<String> = additive_parts(&p("eps(0)*2+1")).iter().map(|t| t.to_string()).collect();
        assert_eq!(parts, ["eps(0)", "eps(0)", "eps(0)*2", "1", "eps(0)*2+1"]);
    }
}
