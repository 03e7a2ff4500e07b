//! The operators `η(k, α, t)` and `l(i, α, t)`.

use super::context::ClassContext;
use super::{SkeletonError, SkeletonResult};
use crate::oracle::Leq1Relation;
use crate::term::{compare, omega_pow, EpsLeaf, OrdTerm};
use std::cmp::Ordering;

/// Source of `m` values.
#[derive(Clone, Copy)]
pub enum Mode<'a> {
    /// Recorded values of the class context.
    Structural,
    /// `m̂` of a grid relation; all arguments must be grid points.
    Oracle(&'a Leq1Relation),
}

/// `α(+^{k-1})(+^{k-2})…(+^1)·2`, which is `α·2` for `k = 1`.
pub fn chain_threshold(alpha: &EpsLeaf, k: u32) -> SkeletonResult<OrdTerm> {
    let mut x = alpha.clone();
    for j in (1..k).rev() {
        x = x.succ(j)?;
    }
    Ok(x.to_term().times_nat(2)?)
}

/// `π t`: the leading additive principal summand of `t`.
pub fn pi_term(t: &OrdTerm) -> OrdTerm {
    match t.leading() {
        None => OrdTerm::zero(),
        Some(m) => omega_pow(&m.exp),
    }
}

fn check_interval(k: u32, alpha: &EpsLeaf, t: &OrdTerm) -> SkeletonResult<()> {
    if alpha.level() < k || k == 0 {
        return Err(SkeletonError::Level(format!("{alpha} is not in Class({k})")));
    }
    let top = alpha.succ(k)?.to_term();
    if compare(t, &alpha.to_term())? == Ordering::Less || compare(t, &top)? != Ordering::Less {
        return Err(SkeletonError::Range(format!("{t} is not in [{alpha}, {top})")));
    }
    Ok(())
}

/// Points of `(α, t]` paired with their `m` values.
fn m_profile(ctx: &ClassContext, alpha: &EpsLeaf, t: &OrdTerm, mode: Mode) -> SkeletonResult<Vec<(OrdTerm, OrdTerm)>> {
    let a = alpha.to_term();
    match mode {
        Mode::Structural => {
            let mut out = vec![(t.clone(), ctx.m_of(t)?)];
            for e in ctx.m_entries() {
                if e.point != *t
                    && compare(&e.point, &a)? == Ordering::Greater
                    && compare(&e.point, t)? == Ordering::Less
                {
                    out.push((e.point.clone(), e.value.clone()));
                }
            }
            Ok(out)
        }
        Mode::Oracle(rel) => {
            if !a.is_concrete() || !t.is_concrete() {
                return Err(SkeletonError::Mixed(format!("{alpha}, {t}")));
            }
            let g = rel.grid();
            let (ia, it) = (g.require(&a)?, g.require(t)?);
            Ok((ia + 1..=it)
                .filter(|&i| g.is_test(i))
                .map(|i| (g.point(i).clone(), g.point(rel.m_hat_index(i)).clone()))
                .collect())
        }
    }
}

fn max_of(profile: &[(OrdTerm, OrdTerm)]) -> SkeletonResult<OrdTerm> {
    let mut best = profile[0].1.clone();
    for (_, v) in &profile[1..] {
        if compare(v, &best)? == Ordering::Greater {
            best = v.clone();
        }
    }
    Ok(best)
}

/// `η(k, α, t)`.
pub fn eta_compute(ctx: &ClassContext, k: u32, alpha: &EpsLeaf, t: &OrdTerm, mode: Mode) -> SkeletonResult<OrdTerm> {
    check_interval(k, alpha, t)?;
    let th = chain_threshold(alpha, k)?;
    if compare(t, &th)? != Ordering::Greater {
        return Ok(th);
    }
    max_of(&m_profile(ctx, alpha, t, mode)?)
}

/// `l(i, α, t)`.
pub fn l_compute(ctx: &ClassContext, i: u32, alpha: &EpsLeaf, t: &OrdTerm, mode: Mode) -> SkeletonResult<OrdTerm> {
    check_interval(i, alpha, t)?;
    let th = chain_threshold(alpha, i)?;
    if compare(t, &th)? != Ordering::Greater {
        return Ok(th);
    }
    let profile = m_profile(ctx, alpha, t, mode)?;
    let eta = max_of(&profile)?;
    let mut best: Option<OrdTerm> = None;
    for (r, v) in &profile {
        if *v == eta {
            best = match best {
                Some(b) if compare(&b, r)? == Ordering::Less => Some(b),
                _ => Some(r.clone()),
            };
        }
    }
    Ok(best.expect("the maximum is attained"))
}

/// The set `P = {r ∈ (α, t] : m̂(r) ≥ t}` on a grid.
pub fn p_set(rel: &Leq1Relation, alpha: &OrdTerm, t: &OrdTerm) -> SkeletonResult<Vec<OrdTerm>> {
    let g = rel.grid();
    let (ia, it) = (g.require(alpha)?, g.require(t)?);
    Ok((ia + 1..=it)
        .filter(|&i| g.is_test(i) && rel.m_hat_index(i) >= it)
        .map(|i| g.point(i).clone())
        .collect())
}
