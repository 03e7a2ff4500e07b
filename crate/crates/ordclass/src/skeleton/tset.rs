//! T-sets, the f/S sets and the g-maps.

use super::context::ClassContext;
use super::{SkeletonError, SkeletonResult};
use crate::subst::{Identity, Rebase, SubstMap};
use crate::term::{cmp_leaf, compare, lambda_leaf, lambda_locate, sort_leaves_desc, EpsLeaf, OrdTerm};
use std::cmp::Ordering;

/// Default bound on the number of O-rounds.
pub const DEFAULT_O_CAP: usize = 16;

/// `g(n, α, c)`: identity below `min(α, c)`, `α ↦ c`, and for `n ≥ 2` the
/// leaves of `(α, α(+^n))` built over `α` rebuilt over `c`.
pub fn g_map(n: u32, alpha: &EpsLeaf, c: &EpsLeaf) -> SkeletonResult<SubstMap> {
    if n == 0 || alpha.level() < n || c.level() < n {
        return Err(SkeletonError::Level(format!("g({n}, {alpha}, {c}) needs both leaves in Class({n})")));
    }
    let low = if cmp_leaf(alpha, c)? == Ordering::Less { alpha } else { c };
    let rebase = (n >= 2).then(|| Rebase { from: alpha.clone(), to: c.clone(), n });
    Ok(SubstMap::new(vec![(alpha.clone(), c.clone())], Identity::Below(low.to_term()), rebase)?)
}

fn in_open(e: &EpsLeaf, lo: &EpsLeaf, hi: &EpsLeaf) -> SkeletonResult<bool> {
    Ok(cmp_leaf(e, lo)? == Ordering::Greater && cmp_leaf(e, hi)? == Ordering::Less)
}

fn insert(set: &mut Vec<EpsLeaf>, e: EpsLeaf) {
    if !set.contains(&e) {
        set.push(e);
    }
}

/// `T(n, α, t)` in decreasing order.
pub fn t_set(ctx: &ClassContext, n: u32, alpha: &EpsLeaf, t: &OrdTerm) -> SkeletonResult<Vec<EpsLeaf>> {
    t_set_capped(ctx, n, alpha, t, DEFAULT_O_CAP)
}

/// `T(n, α, t)` with an explicit bound on O-rounds.
pub fn t_set_capped(ctx: &ClassContext, n: u32, alpha: &EpsLeaf, t: &OrdTerm, cap: usize) -> SkeletonResult<Vec<EpsLeaf>> {
    if n == 0 || alpha.level() < n {
        return Err(SkeletonError::Level(format!("{alpha} is not in Class({n})")));
    }
    let top = alpha.succ(n)?;
    if compare(t, &top.to_term())? != Ordering::Less {
        return Err(SkeletonError::Range(format!("{t} is not below {top}")));
    }
    let mut out = Vec::new();
    for e in t.ep_set()? {
        for x in t_leaf(ctx, n, alpha, &top, &e, cap)? {
            insert(&mut out, x);
        }
    }
    Ok(sort_leaves_desc(out)?)
}

fn t_leaf(ctx: &ClassContext, n: u32, alpha: &EpsLeaf, top: &EpsLeaf, e: &EpsLeaf, cap: usize) -> SkeletonResult<Vec<EpsLeaf>> {
    if cmp_leaf(e, alpha)? != Ordering::Greater {
        return Ok(vec![e.clone()]);
    }
    let me = ctx.m_of(&e.to_term())?;
    let mut chain = vec![lambda_locate(1, &me)?.ok_or_else(|| neg_inf(1, &me.to_string()))?];
    for j in 2..=n {
        let prev = chain.last().unwrap();
        let next = lambda_leaf(j, prev)?.ok_or_else(|| neg_inf(j, &prev.to_string()))?;
        chain.push(next);
    }
    let mut w: Vec<EpsLeaf> = Vec::new();
    for x in chain {
        if in_open(&x, alpha, top)? && x.level() < n {
            insert(&mut w, x);
        }
    }
    let mut total: Vec<EpsLeaf> = Vec::new();
    let mut trace: Vec<String> = Vec::new();
    let mut prev: Option<Vec<EpsLeaf>> = None;
    for _ in 0..cap {
        let mut o: Vec<EpsLeaf> = Vec::new();
        for d in &w {
            let k = d.level();
            let parent = lambda_leaf(k + 1, d)?.ok_or_else(|| neg_inf(k + 1, &d.to_string()))?;
            let (_, f) = f_and_s(ctx, k + 1, &parent, d)?;
            for x in f {
                insert(&mut o, x);
            }
            for x in ctx.m_of(&d.to_term())?.ep_set()? {
                insert(&mut o, x);
            }
            insert(&mut o, parent);
        }
        let o = sort_leaves_desc(o)?;
        trace.push(render(&o));
        for x in &o {
            insert(&mut total, x.clone());
        }
        if prev.as_ref() == Some(&o) {
            return Ok(total);
        }
        w = Vec::new();
        for x in &o {
            if in_open(x, alpha, top)? && x.level() < n {
                w.push(x.clone());
            }
        }
        prev = Some(o);
    }
    Err(SkeletonError::IterationCap { cap, trace })
}

fn neg_inf(j: u32, x: &str) -> SkeletonError {
    SkeletonError::Range(format!("λ({j}, {x}) is -∞"))
}

fn render(v: &[EpsLeaf]) -> String {
    let items: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// `(S(n, α)(δ), f(n, α)(δ))`, both in decreasing order. `S` ranges over
/// the leaves with a recorded `m` value.
pub fn f_and_s(ctx: &ClassContext, n: u32, alpha: &EpsLeaf, delta: &EpsLeaf) -> SkeletonResult<(Vec<EpsLeaf>, Vec<EpsLeaf>)> {
    if n <= 1 {
        return Ok((vec![], vec![]));
    }
    let top = alpha.succ(n)?;
    if !in_open(delta, alpha, &top)? || delta.level() < n - 1 {
        return Err(SkeletonError::Range(format!("{delta} is not in ({alpha}, {top}) ∩ Class({})", n - 1)));
    }
    let m_delta = ctx.m_of(&delta.to_term())?;
    let mut s = Vec::new();
    for e in ctx.annotated_leaves() {
        if e.level() < n - 1 || !in_open(&e, alpha, delta)? {
            continue;
        }
        let moved = g_map(n - 1, &e, delta)?.apply(&ctx.m_of(&e.to_term())?)?;
        if compare(&moved, &m_delta)? != Ordering::Less {
            s.push(e);
        }
    }
    let s = sort_leaves_desc(s)?;
    let f = match s.first() {
        None => vec![delta.clone()],
        Some(sup) => {
            let (_, mut f) = f_and_s(ctx, n, alpha, sup)?;
            f.insert(0, delta.clone());
            f
        }
    };
    Ok((s, f))
}

#[cfg(test)]
mod tests {
    use super::super::canon::canonical_point;
    use super::*;
    use crate::term::{omega_tower, parse_ord, AtomTable};

    #[test]
    fn level_one_is_ep() {
        let ctx = ClassContext::new();
        let p = |s: &str| parse_ord(s, &AtomTable::default()).unwrap();
        let t = t_set(&ctx, 1, &EpsLeaf::eps(0), &p("eps(0)*2+w")).unwrap();
        assert_eq!(t, vec![EpsLeaf::eps(0)]);
        let t = t_set(&ctx, 1, &EpsLeaf::eps(3), &p("w^(eps(2)*2)+eps(0)*3+7")).unwrap();
        assert_eq!(t, vec![EpsLeaf::eps(2), EpsLeaf::eps(0)]);
    }

    #[test]
    fn gmap_level_one() {
        let g = g_map(1, &EpsLeaf::eps(5), &EpsLeaf::eps(2)).unwrap();
        assert_eq!(g.map_leaf(&EpsLeaf::eps(5)).unwrap(), Some(EpsLeaf::eps(2)));
        assert_eq!(g.map_leaf(&EpsLeaf::eps(1)).unwrap(), Some(EpsLeaf::eps(1)));
        assert_eq!(g.map_leaf(&EpsLeaf::eps(3)).unwrap(), None);
    }

    #[test]
    fn canonical_t_sets() {
        let mut ctx = ClassContext::new();
        let e0 = EpsLeaf::eps(0);
        ctx.set_gamma1_templates((1..=3).map(|k| omega_tower(&e0, k)).collect()).unwrap();
        let a = ctx.declare("A", 3).unwrap();
        for i in 2..=3 {
            let cp = canonical_point(&mut ctx, i, &a, 2).unwrap();
            let t = t_set(&ctx, i, &a, &cp.gamma).unwrap();
            assert_eq!(t, cp.chain);
            assert_eq!(t_set(&ctx, i, &a, &cp.gamma.succ()).unwrap(), t);
        }
        let cp = canonical_point(&mut ctx, 2, &a, 1).unwrap();
        let (s, f) = f_and_s(&ctx, 2, &a, &cp.chain[0]).unwrap();
        assert!(s.is_empty());
        assert_eq!(f, vec![cp.chain[0].clone()]);
    }
}
