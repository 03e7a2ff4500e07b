//! Canonical points `x_k(i, e)` and the sequences `γ_k(i, e)`.

use super::context::{ClassContext, MSource};
use super::{SkeletonError, SkeletonResult};
use crate::oracle::{tower_over, Leq1Relation};
use crate::subst::SubstMap;
use crate::term::{omega_tower, EpsLeaf, OrdTerm};
use serde::Serialize;

/// A canonical point with its sequence value and descending chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalPoint {
    /// `x_k(i, e)`.
    pub x: OrdTerm,
    /// `γ_k(i, e) = m(x_k(i, e))`.
    pub gamma: OrdTerm,
    /// `o_1 > o_2 > … > o_i = e`.
    pub chain: Vec<EpsLeaf>,
}

/// Templates `m̂(ω_k(ε_0))` for `k = 1..=kmax`, read off a grid relation.
pub fn gamma1_templates(rel: &Leq1Relation, kmax: u32) -> SkeletonResult<Vec<OrdTerm>> {
    (1..=kmax)
        .map(|k| Ok(rel.m_hat(&tower_over(&OrdTerm::eps(0), k))?))
        .collect()
}

/// `γ_k(1, e)`: the template for `k` with `ε_0` replaced by `e`.
pub fn gamma1(ctx: &ClassContext, e: &EpsLeaf, k: u32) -> SkeletonResult<OrdTerm> {
    let f = SubstMap::from_pairs(vec![(EpsLeaf::eps(0), e.clone())])?;
    Ok(f.apply(ctx.gamma1_template(k)?)?)
}

/// Build `x_k(i, e)` and `γ_k(i, e)` and record the `m` values that the
/// construction fixes: `m(o_j) = γ` for `j < i`, `m(ω_k(o_1)) = γ` and
/// `m(γ) = γ`.
pub fn canonical_point(ctx: &mut ClassContext, i: u32, e: &EpsLeaf, k: u32) -> SkeletonResult<CanonicalPoint> {
    if i == 0 || k == 0 {
        return Err(SkeletonError::Range(format!("canonical point needs i, k >= 1, got i = {i}, k = {k}")));
    }
    if e.level() < i {
        return Err(SkeletonError::Level(format!("{e} is not in Class({i})")));
    }
    let mut down = vec![e.clone()];
    for j in (2..=i).rev() {
        let next = down.last().unwrap().canon(j, k)?;
        down.push(next);
    }
    let o1 = down.last().unwrap().clone();
    let gamma = gamma1(ctx, &o1, k)?;
    let x = if i == 1 { omega_tower(e, k) } else { down[1].to_term() };
    ctx.set_m(omega_tower(&o1, k), gamma.clone(), MSource::Canonical)?;
    ctx.set_m(gamma.clone(), gamma.clone(), MSource::Canonical)?;
    for o in &down[1..] {
        ctx.set_m(o.to_term(), gamma.clone(), MSource::Canonical)?;
    }
    down.reverse();
    Ok(CanonicalPoint { x, gamma, chain: down })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_ord;

    fn ctx_with_towers() -> ClassContext {
        let mut ctx = ClassContext::new();
        let e0 = EpsLeaf::eps(0);
        ctx.set_gamma1_templates((1..=4).map(|k| omega_tower(&e0, k)).collect()).unwrap();
        ctx
    }

    #[test]
    fn level_one() {
        let mut ctx = ctx_with_towers();
        let cp = canonical_point(&mut ctx, 1, &EpsLeaf::eps(0), 2).unwrap();
        assert_eq!(cp.x, parse_ord("w^(w^(eps(0)+1))", ctx.atoms()).unwrap());
        assert_eq!(cp.chain, vec![EpsLeaf::eps(0)]);
    }

    #[test]
    fn level_three_chain() {
        let mut ctx = ctx_with_towers();
        let a = ctx.declare("A", 3).unwrap();
        let cp = canonical_point(&mut ctx, 3, &a, 1).unwrap();
        let names: Vec<String> = cp.chain.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["x(2,1,x(3,1,A@3))", "x(3,1,A@3)", "A@3"]);
        assert_eq!(cp.x.to_string(), "x(3,1,A@3)");
        assert_eq!(cp.gamma.to_string(), "w^(x(2,1,x(3,1,A@3))+1)");
        assert!(canonical_point(&mut ctx, 4, &a, 1).is_err());
    }
}
