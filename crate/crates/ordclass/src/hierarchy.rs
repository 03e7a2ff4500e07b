//! Executable fragments of the generalized hierarchy: the `G` predicate,
//! the successor step of the `A` recursion, the sets `S(i, α, r, t)` and the
//! transport `R` of `[r, r(+^{n-1}))` onto `M(r, κ)`.
//!
//! Every set here is a finite sample. `Lim` over a finite sample is empty;
//! results of a `Lim` step are flagged as sample-relative and list the
//! members whose true status the sample cannot decide.

use crate::oracle::{Leq1Relation, OracleError};
use crate::skeleton::{chain_threshold, eta_compute, g_map, l_compute, t_set, ClassContext, Mode, SkeletonError};
use crate::subst::SubstError;
use crate::term::{cmp_leaf, compare, EpsLeaf, OrdTerm, TermError};
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use thiserror::Error;

/// Errors raised by hierarchy computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("≤₁ query not evaluable: {0}")]
    NotEvaluable(String),
    #[error("level violation: {0}")]
    Level(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub type HierarchyResult<T> = Result<T, HierarchyError>;

/// Where `≤₁` facts come from.
#[derive(Clone, Copy)]
pub enum Regime<'a> {
    /// A grid relation; arguments must be concrete.
    Grid(&'a Leq1Relation),
    /// The `m` annotations of a class context.
    Symbolic,
}

impl<'a> Regime<'a> {
    fn mode(self) -> Mode<'a> {
        match self {
            Regime::Grid(rel) => Mode::Oracle(rel),
            Regime::Symbolic => Mode::Structural,
        }
    }
}

/// Source of a decided `≤₁` query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Grid,
    Annotation,
}

/// A decided query `β ≤₁ target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leq1Query {
    pub beta: EpsLeaf,
    pub target: OrdTerm,
    pub holds: bool,
    pub provenance: Provenance,
}

/// One candidate of a `G` table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GRow {
    pub beta: EpsLeaf,
    /// `T(n-1, α, t) ∩ α ⊂ β ≤ α`.
    pub contained: bool,
    pub query: Option<Leq1Query>,
    /// `None` when the `≤₁` query could not be decided.
    pub member: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Kind of a [`HierarchySet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetKind {
    G,
    ASuccessorTrace,
    M,
    S,
}

/// A finite computed sample of one of the hierarchy sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchySet {
    pub kind: SetKind,
    pub n: u32,
    pub base: EpsLeaf,
    pub t: OrdTerm,
    pub members: Vec<EpsLeaf>,
    /// Sample points whose membership the sample cannot decide.
    pub undetermined: Vec<EpsLeaf>,
    /// Set when a `Lim` over the finite sample was taken.
    pub sample_relative: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<GRow>,
}

impl HierarchySet {
    /// Membership of `β`: `None` when undetermined or not sampled.
    pub fn status(&self, beta: &EpsLeaf) -> Option<bool> {
        if self.undetermined.contains(beta) {
            return None;
        }
        if self.members.contains(beta) {
            return Some(true);
        }
        if self.rows.is_empty() || self.rows.iter().any(|r| &r.beta == beta) {
            return Some(false);
        }
        None
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("hierarchy sets always serialize")
    }
}

fn check_levels(n: u32, alpha: &EpsLeaf) -> HierarchyResult<()> {
    if n < 2 {
        return Err(HierarchyError::Level(format!("the hierarchy sets need n >= 2, got {n}")));
    }
    if alpha.level() < n - 1 {
        return Err(HierarchyError::Level(format!("{alpha} is not in Class({})", n - 1)));
    }
    Ok(())
}

fn le(a: &OrdTerm, b: &OrdTerm) -> HierarchyResult<bool> {
    Ok(compare(a, b)? != Ordering::Greater)
}

/// Decide `β ≤₁ x`. On a grid, a target outside the grid is decided
/// negatively when a grid point above `m̂(β)` lies at or below it, since the
/// computed relation is connected.
pub fn leq1_query(regime: Regime, ctx: &ClassContext, beta: &EpsLeaf, x: &OrdTerm) -> HierarchyResult<Leq1Query> {
    let b = beta.to_term();
    let done = |holds, provenance| Leq1Query { beta: beta.clone(), target: x.clone(), holds, provenance };
    match regime {
        Regime::Grid(rel) => {
            let g = rel.grid();
            let ib = g.require(&b)?;
            if let Some(ix) = g.index_of(x) {
                return Ok(done(rel.holds(ib, ix), Provenance::Grid));
            }
            if compare(x, &b)? == Ordering::Less {
                return Ok(done(false, Provenance::Grid));
            }
            let r = rel.reach_table()[ib];
            if r + 1 < g.len() && le(g.point(r + 1), x)? {
                return Ok(done(false, Provenance::Grid));
            }
            Err(HierarchyError::NotEvaluable(format!("{beta} ≤₁ {x}: target not in the grid")))
        }
        Regime::Symbolic => {
            if compare(x, &b)? == Ordering::Less {
                return Ok(done(false, Provenance::Annotation));
            }
            if let Some(lo) = ctx.m_lower_of(&b)? {
                if le(x, &lo)? {
                    return Ok(done(true, Provenance::Annotation));
                }
            }
            if let Some(m) = ctx.m_known(&b) {
                return Ok(done(le(x, &m)?, Provenance::Annotation));
            }
            Err(HierarchyError::NotEvaluable(format!("{beta} ≤₁ {x}: no annotation for m({beta})")))
        }
    }
}

/// `T(n-1, α, t) ∩ α ⊂ β ≤ α`.
fn contained(ctx: &ClassContext, n: u32, alpha: &EpsLeaf, t: &OrdTerm, beta: &EpsLeaf) -> HierarchyResult<bool> {
    if cmp_leaf(beta, alpha)? == Ordering::Greater {
        return Ok(false);
    }
    for e in t_set(ctx, n - 1, alpha, t)? {
        if cmp_leaf(&e, alpha)? == Ordering::Less && cmp_leaf(&e, beta)? != Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `β ∈ G^{n-1}(t)` for `t ∈ [α, α(+^{n-1}))`: the T-containment together
/// with `β ≤₁ η(n-1, α, t)[g(n-1, α, β)] + 1`.
pub fn g_membership(
    regime: Regime,
    ctx: &ClassContext,
    n: u32,
    alpha: &EpsLeaf,
    t: &OrdTerm,
    beta: &EpsLeaf,
) -> HierarchyResult<GRow> {
    check_levels(n, alpha)?;
    if beta.level() < n - 1 {
        return Err(HierarchyError::Level(format!("{beta} is not in Class({})", n - 1)));
    }
    let eta = eta_compute(ctx, n - 1, alpha, t, regime.mode())?;
    if !contained(ctx, n, alpha, t, beta)? {
        return Ok(GRow { beta: beta.clone(), contained: false, query: None, member: Some(false), note: None });
    }
    let x = g_map(n - 1, alpha, beta)?.apply(&eta)?.succ();
    match leq1_query(regime, ctx, beta, &x) {
        Ok(q) => Ok(GRow { beta: beta.clone(), contained: true, member: Some(q.holds), query: Some(q), note: None }),
        Err(HierarchyError::NotEvaluable(why)) => {
            Ok(GRow { beta: beta.clone(), contained: true, query: None, member: None, note: Some(why) })
        }
        Err(e) => Err(e),
    }
}

/// Candidates `β ∈ Class(n-1)` with `β ≤ α`: epsilon grid points, or the
/// declared atoms and annotated leaves of the context. Ascending order.
pub fn g_candidates(regime: Regime, ctx: &ClassContext, n: u32, alpha: &EpsLeaf) -> HierarchyResult<Vec<EpsLeaf>> {
    let mut out: Vec<EpsLeaf> = match regime {
        Regime::Grid(rel) => rel
            .grid()
            .test_indices()
            .into_iter()
            .filter_map(|i| rel.grid().point(i).as_leaf().cloned())
            .collect(),
        Regime::Symbolic => {
            let mut v = ctx.atoms().leaves();
            v.extend(ctx.annotated_leaves());
            v.push(alpha.clone());
            v
        }
    };
    let mut keep = Vec::new();
    for e in out.drain(..) {
        if e.level() >= n - 1 && cmp_leaf(&e, alpha)? != Ordering::Greater && !keep.contains(&e) {
            keep.push(e);
        }
    }
    let mut sorted = crate::term::sort_leaves_desc(keep)?;
    sorted.reverse();
    Ok(sorted)
}

/// The sample of `G^{n-1}(t)` over `candidates`, evaluated in parallel.
pub fn g_table(
    regime: Regime,
    ctx: &ClassContext,
    n: u32,
    alpha: &EpsLeaf,
    t: &OrdTerm,
    candidates: &[EpsLeaf],
) -> HierarchyResult<HierarchySet> {
    let rows: Vec<GRow> = candidates
        .par_iter()
        .map(|b| g_membership(regime, ctx, n, alpha, t, b))
        .collect::<HierarchyResult<_>>()?;
    Ok(HierarchySet {
        kind: SetKind::G,
        n,
        base: alpha.clone(),
        t: t.clone(),
        members: rows.iter().filter(|r| r.member == Some(true)).map(|r| r.beta.clone()).collect(),
        undetermined: rows.iter().filter(|r| r.member.is_none()).map(|r| r.beta.clone()).collect(),
        sample_relative: false,
        rows,
    })
}

/// Whether `β ∈ Lim Class(k)`, when the leaf structure decides it: `ε_γ`
/// is a limit of epsilons iff `γ` is a limit, `Class(k+1) ⊆ Lim Class(k)`,
/// and `a(+^k)` is a successor point of `Class(k)`.
pub fn lim_class_member(beta: &EpsLeaf, k: u32) -> Option<bool> {
    let lv = beta.level();
    if lv < k {
        return Some(false);
    }
    if lv > k {
        return Some(true);
    }
    match beta {
        EpsLeaf::Eps(g) if k == 1 => Some(g.classify().is_limit),
        EpsLeaf::Succ(_, j) if *j == k => Some(false),
        _ => None,
    }
}

/// `A^{n-1}(l+1)` from the sample `prev` of `A^{n-1}(l)`: `prev` itself
/// when `l < η(n-1, α, l)`, otherwise the sample-relative `Lim` of `prev`.
/// A finite sample has no limit points, so the `Lim` branch has no members;
/// sampled points that may still be true limits are listed as undetermined.
pub fn a_successor_step(
    regime: Regime,
    ctx: &ClassContext,
    n: u32,
    alpha: &EpsLeaf,
    l: &OrdTerm,
    prev: &HierarchySet,
) -> HierarchyResult<HierarchySet> {
    check_levels(n, alpha)?;
    let eta = eta_compute(ctx, n - 1, alpha, l, regime.mode())?;
    let mut next = HierarchySet {
        kind: SetKind::ASuccessorTrace,
        n,
        base: alpha.clone(),
        t: l.succ(),
        members: prev.members.clone(),
        undetermined: prev.undetermined.clone(),
        sample_relative: prev.sample_relative,
        rows: vec![],
    };
    if compare(l, &eta)? == Ordering::Less {
        return Ok(next);
    }
    next.sample_relative = true;
    for b in std::mem::take(&mut next.members) {
        if lim_class_member(&b, n - 1) != Some(false) && !next.undetermined.contains(&b) {
            next.undetermined.push(b);
        }
    }
    if !prev.rows.is_empty() {
        next.rows = prev
            .rows
            .iter()
            .map(|r| GRow { member: next.status(&r.beta), query: None, note: None, ..r.clone() })
            .collect();
    }
    Ok(next)
}

/// One comparison of `G^{n-1}(l+1)` with the `A` successor step applied to
/// the sample of `G^{n-1}(l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaInstance {
    pub alpha: EpsLeaf,
    pub l: OrdTerm,
    pub beta: EpsLeaf,
    /// `l = η(n-1, α, l)`: the `Lim` branch was taken.
    pub l_is_eta: bool,
    pub g_side: bool,
    pub a_side: bool,
}

impl GaInstance {
    pub fn agrees(&self) -> bool {
        self.g_side == self.a_side
    }
}

/// Compare both sides for every `l` of `ls` and every candidate where both
/// are decided. Returns the instances and the number of skipped pairs.
pub fn ga_instances(
    regime: Regime,
    ctx: &ClassContext,
    n: u32,
    alpha: &EpsLeaf,
    ls: &[OrdTerm],
    candidates: &[EpsLeaf],
) -> HierarchyResult<(Vec<GaInstance>, usize)> {
    let mut out = Vec::new();
    let mut skipped = 0;
    for l in ls {
        let prev = g_table(regime, ctx, n, alpha, l, candidates)?;
        let step = a_successor_step(regime, ctx, n, alpha, l, &prev)?;
        let l_is_eta = compare(l, &eta_compute(ctx, n - 1, alpha, l, regime.mode())?)? != Ordering::Less;
        let next = g_table(regime, ctx, n, alpha, &l.succ(), candidates)?;
        for b in candidates {
            match (next.status(b), step.status(b)) {
                (Some(g_side), Some(a_side)) => out.push(GaInstance {
                    alpha: alpha.clone(),
                    l: l.clone(),
                    beta: b.clone(),
                    l_is_eta,
                    g_side,
                    a_side,
                }),
                _ => skipped += 1,
            }
        }
    }
    Ok((out, skipped))
}

/// One candidate of the degenerate-interval law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerateRow {
    pub beta: EpsLeaf,
    /// `β ∈ G^{n-1}(t)`.
    pub g_side: Option<bool>,
    /// `β ∈ Lim Class(n-1) ∩ (max(T ∩ α), α + 1)`.
    pub lim_side: Option<bool>,
}

/// For `t ≤ α(+^{n-2})…(+^1)·2`, pair `G` membership with membership in
/// `Lim Class(n-1)` above `max(T(n-1, α, t) ∩ α)`.
pub fn degenerate_law(
    regime: Regime,
    ctx: &ClassContext,
    n: u32,
    alpha: &EpsLeaf,
    t: &OrdTerm,
    candidates: &[EpsLeaf],
) -> HierarchyResult<Vec<DegenerateRow>> {
    check_levels(n, alpha)?;
    let th = chain_threshold(alpha, n - 1)?;
    if compare(t, &th)? == Ordering::Greater {
        return Err(HierarchyError::Range(format!("{t} lies above {th}")));
    }
    let mut out = Vec::new();
    for b in candidates {
        let row = g_membership(regime, ctx, n, alpha, t, b)?;
        let above = contained(ctx, n, alpha, t, b)?;
        let lim_side = if above { lim_class_member(b, n - 1) } else { Some(false) };
        out.push(DegenerateRow { beta: b.clone(), g_side: row.member, lim_side });
    }
    Ok(out)
}

/// `S(i, α, r, t)` over a sample, with the domain form used when
/// `r ∈ Class(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SInterval {
    pub i: u32,
    pub alpha: EpsLeaf,
    pub r: EpsLeaf,
    pub t: OrdTerm,
    /// `l(i, α, t)`.
    pub upper: OrdTerm,
    /// `{q ∈ (α, l) : T(i, α, q) ∩ α ⊂ r}`.
    pub members: Vec<OrdTerm>,
    /// `{q ∈ (α, l) : Ep(q) ⊆ Dom g(i, α, r)}`, present when `r ∈ Class(i)`.
    pub domain_form: Option<Vec<OrdTerm>>,
}

/// Compute `S(i, α, r, t)` over the sample points lying in `(α, l(i, α, t))`.
pub fn s_interval(
    regime: Regime,
    ctx: &ClassContext,
    i: u32,
    alpha: &EpsLeaf,
    r: &EpsLeaf,
    t: &OrdTerm,
    sample: &[OrdTerm],
) -> HierarchyResult<SInterval> {
    let upper = l_compute(ctx, i, alpha, t, regime.mode())?;
    let a = alpha.to_term();
    let g = if r.level() >= i { Some(g_map(i, alpha, r)?) } else { None };
    let mut members = Vec::new();
    let mut domain_form = g.as_ref().map(|_| Vec::new());
    for q in sample {
        if compare(q, &a)? != Ordering::Greater || compare(q, &upper)? != Ordering::Less {
            continue;
        }
        let mut inside = true;
        for e in t_set(ctx, i, alpha, q)? {
            if cmp_leaf(&e, alpha)? == Ordering::Less && cmp_leaf(&e, r)? != Ordering::Less {
                inside = false;
            }
        }
        if inside {
            members.push(q.clone());
        }
        if let (Some(g), Some(d)) = (&g, domain_form.as_mut()) {
            let mut all = true;
            for e in q.ep_set()? {
                all &= g.contains(&e)?;
            }
            if all {
                d.push(q.clone());
            }
        }
    }
    Ok(SInterval { i, alpha: alpha.clone(), r: r.clone(), t: t.clone(), upper, members, domain_form })
}

/// One sampled point under `R` and back under `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportRow {
    pub t: OrdTerm,
    pub image: OrdTerm,
    pub back: OrdTerm,
}

/// The transport `R(t) = t[g(n-1, r, κ)]` of `[r, r(+^{n-1}))` onto
/// `M^{n-1}(r, κ)` and its inverse `H(s) = s[g(n-1, κ, r)]` on a sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transport {
    pub n: u32,
    pub r: EpsLeaf,
    pub kappa: EpsLeaf,
    pub rows: Vec<TransportRow>,
    /// `H(R(t)) = t` on every sampled `t`.
    pub roundtrip: bool,
    /// `R` is strictly increasing on the sample.
    pub increasing: bool,
    /// `R(r) = κ`.
    pub base_to_kappa: bool,
}

/// Build [`Transport`] for the sampled points of `[r, r(+^{n-1}))`.
pub fn m_transport(n: u32, r: &EpsLeaf, kappa: &EpsLeaf, sample: &[OrdTerm]) -> HierarchyResult<Transport> {
    check_levels(n, r)?;
    check_levels(n, kappa)?;
    if cmp_leaf(r, kappa)? != Ordering::Less {
        return Err(HierarchyError::Range(format!("{r} is not below {kappa}")));
    }
    let top = r.succ(n - 1)?.to_term();
    let rt = r.to_term();
    let fwd = g_map(n - 1, r, kappa)?;
    let bwd = g_map(n - 1, kappa, r)?;
    let mut pts: Vec<OrdTerm> = Vec::new();
    for t in sample {
        if compare(t, &rt)? != Ordering::Less && compare(t, &top)? == Ordering::Less && !pts.contains(t) {
            pts.push(t.clone());
        }
    }
    crate::term::sort_terms(&mut pts)?;
    let mut rows = Vec::new();
    for t in pts {
        let image = fwd.apply(&t)?;
        let back = bwd.apply(&image)?;
        rows.push(TransportRow { t, image, back });
    }
    let roundtrip = rows.iter().all(|x| x.back == x.t);
    let mut increasing = true;
    for w in rows.windows(2) {
        increasing &= compare(&w[0].image, &w[1].image)? == Ordering::Less;
    }
    let base_to_kappa = fwd.apply(&rt)? == kappa.to_term();
    Ok(Transport { n, r: r.clone(), kappa: kappa.clone(), rows, roundtrip, increasing, base_to_kappa })
}

/// Test points of a grid in `[lo, hi)`.
pub fn grid_sample(rel: &Leq1Relation, lo: &OrdTerm, hi: &OrdTerm) -> HierarchyResult<Vec<OrdTerm>> {
    let mut out = Vec::new();
    for i in rel.grid().test_indices() {
        let p = rel.grid().point(i);
        if compare(p, lo)? != Ordering::Less && compare(p, hi)? == Ordering::Less {
            out.push(p.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_grid, leq1_fixpoint, GridOps};
    use crate::skeleton::chain_down;
    use crate::term::parse_ord;

    fn p(ctx: &ClassContext, s: &str) -> OrdTerm {
        parse_ord(s, ctx.atoms()).unwrap()
    }

    fn small_rel() -> Leq1Relation {
        let ctx = ClassContext::new();
        let g = build_grid(&p(&ctx, "eps(2)"), &[p(&ctx, "eps(0)"), p(&ctx, "eps(1)")], GridOps::default(), 400)
            .unwrap();
        leq1_fixpoint(g, 4).unwrap()
    }

    #[test]
    fn level_two_atom_is_in_every_g() {
        let mut ctx = ClassContext::new();
        let a = ctx.declare("A", 2).unwrap();
        chain_down(&mut ctx, &a).unwrap();
        for s in ["A@2", "A@2+1", "A@2*2", "A@2*2+5", "w^(A@2+1)+1", "w^(A@2+1)*3+A@2"] {
            let row = g_membership(Regime::Symbolic, &ctx, 2, &a, &p(&ctx, s), &a).unwrap();
            assert_eq!(row.member, Some(true), "{s}");
            assert_eq!(row.query.unwrap().provenance, Provenance::Annotation);
        }
    }

    #[test]
    fn level_three_atom_is_in_every_g() {
        let mut ctx = ClassContext::new();
        let b = ctx.declare("B", 3).unwrap();
        chain_down(&mut ctx, &b).unwrap();
        for s in ["B@3", "B@3(+1)", "B@3(+1)*2", "B@3(+1)*2+1", "B@3(+1)(+1)"] {
            let row = g_membership(Regime::Symbolic, &ctx, 3, &b, &p(&ctx, s), &b).unwrap();
            assert_eq!(row.member, Some(true), "{s}");
        }
    }

    #[test]
    fn containment_failure_short_circuits() {
        let mut ctx = ClassContext::new();
        let a = ctx.declare("A", 2).unwrap();
        chain_down(&mut ctx, &a).unwrap();
        let t = p(&ctx, "A@2*2+eps(4)");
        let row = g_membership(Regime::Symbolic, &ctx, 2, &a, &t, &EpsLeaf::eps(3)).unwrap();
        assert!(!row.contained);
        assert_eq!(row.member, Some(false));
        assert!(row.query.is_none());
    }

    #[test]
    fn unannotated_queries_are_reported() {
        let mut ctx = ClassContext::new();
        let a = ctx.declare("A", 2).unwrap();
        chain_down(&mut ctx, &a).unwrap();
        let row = g_membership(Regime::Symbolic, &ctx, 2, &a, &p(&ctx, "A@2"), &EpsLeaf::eps(7)).unwrap();
        assert_eq!(row.member, Some(false));
        let lim = EpsLeaf::eps_of(OrdTerm::omega()).unwrap();
        let row = g_membership(Regime::Symbolic, &ctx, 2, &a, &p(&ctx, "A@2"), &lim).unwrap();
        assert_eq!(row.member, None);
        assert!(row.note.is_some());
    }

    #[test]
    fn lim_step_on_samples() {
        let mut ctx = ClassContext::new();
        let a = ctx.declare("A", 2).unwrap();
        chain_down(&mut ctx, &a).unwrap();
        let single = |b: EpsLeaf| HierarchySet {
            kind: SetKind::G,
            n: 2,
            base: a.clone(),
            t: a.to_term(),
            members: vec![b],
            undetermined: vec![],
            sample_relative: false,
            rows: vec![],
        };
        let l = p(&ctx, "A@2+1");
        let kept = a_successor_step(Regime::Symbolic, &ctx, 2, &a, &l, &single(a.clone())).unwrap();
        assert_eq!(kept.members, vec![a.clone()]);
        assert!(!kept.sample_relative);
        let l = p(&ctx, "A@2*2");
        let lim = a_successor_step(Regime::Symbolic, &ctx, 2, &a, &l, &single(EpsLeaf::eps(3))).unwrap();
        assert!(lim.members.is_empty() && lim.undetermined.is_empty() && lim.sample_relative);
        let lim = a_successor_step(Regime::Symbolic, &ctx, 2, &a, &l, &single(a.clone())).unwrap();
        assert!(lim.members.is_empty());
        assert_eq!(lim.undetermined, vec![a.clone()]);
    }

    #[test]
    fn lim_membership_rules() {
        let w = OrdTerm::omega();
        assert_eq!(lim_class_member(&EpsLeaf::eps(0), 1), Some(false));
        assert_eq!(lim_class_member(&EpsLeaf::eps_of(w).unwrap(), 1), Some(true));
        let mut ctx = ClassContext::new();
        let a = ctx.declare("A", 2).unwrap();
        assert_eq!(lim_class_member(&a, 1), Some(true));
        assert_eq!(lim_class_member(&a, 2), None);
        assert_eq!(lim_class_member(&a.succ(1).unwrap(), 1), Some(false));
    }

    #[test]
    fn grid_instances_agree() {
        let rel = small_rel();
        let ctx = ClassContext::new();
        let a = EpsLeaf::eps(1);
        let cands = g_candidates(Regime::Grid(&rel), &ctx, 2, &a).unwrap();
        assert_eq!(cands, vec![EpsLeaf::eps(0), EpsLeaf::eps(1)]);
        let ls: Vec<OrdTerm> = grid_sample(&rel, &a.to_term(), &p(&ctx, "eps(2)"))
            .unwrap()
            .into_iter()
            .filter(|t| rel.grid().index_of(&t.succ()).is_some())
            .collect();
        let (inst, _) = ga_instances(Regime::Grid(&rel), &ctx, 2, &a, &ls, &cands).unwrap();
        assert!(inst.len() >= 10);
        assert!(inst.iter().all(GaInstance::agrees));
        assert!(inst.iter().any(|x| x.l_is_eta));
        for row in degenerate_law(Regime::Grid(&rel), &ctx, 2, &a, &p(&ctx, "eps(1)*2"), &cands).unwrap() {
            assert_eq!(row.g_side, row.lim_side);
        }
    }

    #[test]
    fn s_interval_forms_agree() {
        let rel = small_rel();
        let ctx = ClassContext::new();
        let a = EpsLeaf::eps(1);
        let sample = grid_sample(&rel, &a.to_term(), &p(&ctx, "eps(2)")).unwrap();
        let mut nonempty = 0;
        for t in &sample {
            for r in [EpsLeaf::eps(0), EpsLeaf::eps(1)] {
                let s = s_interval(Regime::Grid(&rel), &ctx, 1, &a, &r, t, &sample).unwrap();
                assert_eq!(Some(&s.members), s.domain_form.as_ref());
                for q in &s.members {
                    assert_eq!(compare(q, &s.upper).unwrap(), Ordering::Less);
                }
                nonempty += usize::from(!s.members.is_empty());
            }
        }
        assert!(nonempty > 0);
    }

    #[test]
    fn transport_round_trip() {
        let ctx = ClassContext::new();
        let sample: Vec<OrdTerm> =
            ["eps(1)", "eps(1)+1", "eps(1)*2", "w^(eps(1)+1)", "w^(eps(1)+1)+eps(0)*3", "eps(2)"]
                .iter()
                .map(|s| p(&ctx, s))
                .collect();
        let tr = m_transport(2, &EpsLeaf::eps(1), &EpsLeaf::eps(4), &sample).unwrap();
        assert_eq!(tr.rows.len(), 5);
        assert!(tr.roundtrip && tr.increasing && tr.base_to_kappa);
        assert_eq!(tr.rows[4].image, p(&ctx, "w^(eps(4)+1)+eps(0)*3"));
    }
}
