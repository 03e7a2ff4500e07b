//! Shared helpers for the integration tests.

#![allow(dead_code)]

use ordclass::subst::SubstMap;
use ordclass::term::{add, mul, omega_pow, parse_ord, AtomTable, EpsLeaf, OrdTerm};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn p(s: &str) -> OrdTerm {
    parse_ord(s, &AtomTable::default()).unwrap()
}

/// A random term over `leaves` whose generation tree has depth at most
/// `depth`.
pub fn random_term(rng: &mut StdRng, leaves: &[EpsLeaf], depth: u32) -> OrdTerm {
    let pick = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..6) };
    match pick {
        0 => OrdTerm::nat(rng.gen_range(0..4)),
        1 => leaves.choose(rng).map_or_else(OrdTerm::omega, EpsLeaf::to_term),
        2 => omega_pow(&random_term(rng, leaves, depth - 1)),
        3 | 4 => add(&random_term(rng, leaves, depth - 1), &random_term(rng, leaves, depth - 1)).unwrap(),
        _ => {
            let d = depth.min(2) - 1;
            mul(&random_term(rng, leaves, d), &random_term(rng, leaves, d)).unwrap()
        }
    }
}

/// Distinct sorted naturals from `0..range`.
pub fn distinct(rng: &mut StdRng, k: usize, range: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (0..range).collect();
    v.shuffle(rng);
    v.truncate(k);
    v.sort_unstable();
    v
}

/// A strictly increasing finite map between concrete epsilons with `k`
/// pairs, together with its domain.
pub fn random_map(rng: &mut StdRng, k: usize) -> (SubstMap, Vec<EpsLeaf>) {
    let dom: Vec<EpsLeaf> = distinct(rng, k, 12).into_iter().map(EpsLeaf::eps).collect();
    let img: Vec<EpsLeaf> = distinct(rng, k, 12).into_iter().map(EpsLeaf::eps).collect();
    let pairs = dom.iter().cloned().zip(img).collect();
    (SubstMap::from_pairs(pairs).unwrap(), dom)
}

/// `{ε_lo, …, ε_hi}`.
pub fn eps_range(lo: u64, hi: u64) -> Vec<EpsLeaf> {
    (lo..=hi).map(EpsLeaf::eps).collect()
}
