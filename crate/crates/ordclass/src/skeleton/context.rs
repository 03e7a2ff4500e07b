//! Class contexts: declared atoms and the table of known `m` values.

use super::{SkeletonError, SkeletonResult};
use crate::term::{compare, AtomDecl, AtomTable, EpsLeaf, OrdTerm};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Where a recorded `m` value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MSource {
    /// `m(α_j) = α_1·2` along a successor chain.
    Chain,
    /// Values fixed by the construction of canonical points.
    Canonical,
    /// Transported from a grid oracle run.
    Oracle,
    /// Supplied by a context file.
    Declared,
}

/// One recorded `m` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MEntry {
    pub point: OrdTerm,
    pub value: OrdTerm,
    pub source: MSource,
}

/// Declared atoms, recorded `m` values and lower bounds for them.
#[derive(Debug, Clone, Default)]
pub struct ClassContext {
    atoms: AtomTable,
    m_exact: Vec<MEntry>,
    m_lower: Vec<MEntry>,
    gamma1: Vec<OrdTerm>,
}

#[derive(Serialize, Deserialize)]
struct ContextDoc {
    atoms: Vec<AtomDecl>,
    #[serde(default)]
    m: Vec<MDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    gamma1: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MDoc {
    point: String,
    value: String,
    #[serde(default = "declared")]
    source: MSource,
}

fn declared() -> MSource {
    MSource::Declared
}

impl ClassContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    /// Declare an atom above all previous ones.
    pub fn declare(&mut self, name: &str, level: u32) -> SkeletonResult<EpsLeaf> {
        Ok(self.atoms.declare(name, level)?)
    }

    /// Largest class level in play.
    pub fn n_max(&self) -> u32 {
        self.atoms.decls().iter().map(|a| a.level).max().unwrap_or(1)
    }

    /// Record an exact `m` value; it must satisfy `m(x) ≥ x` and agree with
    /// any earlier record.
    pub fn set_m(&mut self, point: OrdTerm, value: OrdTerm, source: MSource) -> SkeletonResult<()> {
        if compare(&value, &point)? == Ordering::Less {
            return Err(SkeletonError::Range(format!("m({point}) = {value} lies below {point}")));
        }
        if let Some(e) = self.m_exact.iter().find(|e| e.point == point) {
            if e.value != value {
                return Err(SkeletonError::Range(format!(
                    "conflicting values {} and {value} for m({point})",
                    e.value
                )));
            }
            return Ok(());
        }
        self.m_exact.push(MEntry { point, value, source });
        Ok(())
    }

    /// Record a lower bound `m(x) ≥ value`.
    pub fn set_m_lower(&mut self, point: OrdTerm, value: OrdTerm, source: MSource) {
        if !self.m_lower.iter().any(|e| e.point == point && e.value == value) {
            self.m_lower.push(MEntry { point, value, source });
        }
    }

    /// The recorded exact entry for `x`.
    pub fn m_entry(&self, x: &OrdTerm) -> Option<&MEntry> {
        self.m_exact.iter().find(|e| &e.point == x)
    }

    /// `m(x)` when known: a recorded value; `x` itself when `x` is neither
    /// zero nor an additive principal; `x·2` for an epsilon that is not a
    /// limit of epsilons.
    pub fn m_known(&self, x: &OrdTerm) -> Option<OrdTerm> {
        if let Some(e) = self.m_entry(x) {
            return Some(e.value.clone());
        }
        let c = x.classify();
        if !c.is_zero && !c.is_principal {
            return Some(x.clone());
        }
        match x.as_leaf() {
            Some(e) if successor_epsilon(e) => x.times_nat(2).ok(),
            _ => None,
        }
    }

    /// [`Self::m_known`] or a `MissingM` error.
    pub fn m_of(&self, x: &OrdTerm) -> SkeletonResult<OrdTerm> {
        self.m_known(x).ok_or_else(|| SkeletonError::MissingM(x.to_string()))
    }

    /// Largest recorded lower bound for `m(x)`, including an exact value.
    pub fn m_lower_of(&self, x: &OrdTerm) -> SkeletonResult<Option<OrdTerm>> {
        let mut best: Option<OrdTerm> = self.m_known(x);
        for e in self.m_lower.iter().filter(|e| &e.point == x) {
            best = match best {
                Some(b) if compare(&b, &e.value)? != Ordering::Less => Some(b),
                _ => Some(e.value.clone()),
            };
        }
        Ok(best)
    }

    /// All recorded exact entries in insertion order.
    pub fn m_entries(&self) -> &[MEntry] {
        &self.m_exact
    }

    /// Leaves with a recorded `m` value.
    pub fn annotated_leaves(&self) -> Vec<EpsLeaf> {
        self.m_exact.iter().filter_map(|e| e.point.as_leaf().cloned()).collect()
    }

    /// Install the value `m(ω_k(ε_0))` for `k = 1, 2, …` as a template in
    /// `ε_0`; it is transported to other bases by substitution.
    pub fn set_gamma1_templates(&mut self, templates: Vec<OrdTerm>) -> SkeletonResult<()> {
        let e0 = EpsLeaf::eps(0);
        for t in &templates {
            if t.ep_set()?.iter().any(|e| e != &e0) {
                return Err(SkeletonError::Range(format!("template {t} uses leaves other than eps(0)")));
            }
        }
        self.gamma1 = templates;
        Ok(())
    }

    /// The template for `γ_k(1, ·)`.
    pub fn gamma1_template(&self, k: u32) -> SkeletonResult<&OrdTerm> {
        self.gamma1
            .get((k as usize).wrapping_sub(1))
            .ok_or_else(|| SkeletonError::MissingM(format!("w_{k}(eps(0))")))
    }

    pub fn gamma1_len(&self) -> usize {
        self.gamma1.len()
    }

    /// Serialize atoms, exact `m` values and templates.
    pub fn to_json(&self) -> String {
        let doc = ContextDoc {
            atoms: self.atoms.decls().to_vec(),
            m: self
                .m_exact
                .iter()
                .map(|e| MDoc { point: e.point.to_string(), value: e.value.to_string(), source: e.source })
                .collect(),
            gamma1: self.gamma1.iter().map(|t| t.to_string()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("context documents always serialize")
    }

    /// Parse a context file: `{"atoms": [{"name": "A", "level": 3}], "m": [...]}`.
    pub fn from_json(text: &str) -> SkeletonResult<Self> {
        let doc: ContextDoc = serde_json::from_str(text).map_err(|e| SkeletonError::Format(e.to_string()))?;
        let mut ctx = ClassContext::new();
        for a in &doc.atoms {
            ctx.declare(&a.name, a.level)?;
        }
        for m in &doc.m {
            let p = crate::term::parse_ord(&m.point, &ctx.atoms)?;
            let v = crate::term::parse_ord(&m.value, &ctx.atoms)?;
            ctx.set_m(p, v, m.source)?;
        }
        let g: Vec<OrdTerm> = doc
            .gamma1
            .iter()
            .map(|s| crate::term::parse_ord(s, &ctx.atoms))
            .collect::<Result<_, _>>()?;
        ctx.set_gamma1_templates(g)?;
        Ok(ctx)
    }
}

/// `ε_0`, `ε_{γ+1}` and `a(+^1)`: epsilons that are not limits of epsilons.
fn successor_epsilon(e: &EpsLeaf) -> bool {
    match e {
        EpsLeaf::Eps(g) => !g.classify().is_limit,
        EpsLeaf::Succ(_, 1) => true,
        _ => false,
    }
}

/// `a(+^k)`.
pub fn class_succ(a: &EpsLeaf, k: u32) -> SkeletonResult<EpsLeaf> {
    Ok(a.succ(k)?)
}

/// Largest `j` with `x ∈ Class(j)` readable from the leaf structure.
pub fn class_level(x: &OrdTerm) -> u32 {
    x.as_leaf().map_or(0, |e| e.level())
}

/// `[α_n, α_{n-1}, …, α_1]` with `α_{j} = α_{j+1}(+^j)`; records
/// `m(α_j) = α_1·2` for `j < n` and the bound `m(α_n) ≥ α_1·2`.
pub fn chain_down(ctx: &mut ClassContext, a: &EpsLeaf) -> SkeletonResult<Vec<EpsLeaf>> {
    let n = a.level();
    let mut chain = vec![a.clone()];
    for j in (1..n).rev() {
        let next = chain.last().unwrap().succ(j)?;
        chain.push(next);
    }
    let top = chain.last().unwrap().to_term().times_nat(2)?;
    for x in &chain[1..] {
        ctx.set_m(x.to_term(), top.clone(), MSource::Chain)?;
    }
    ctx.set_m_lower(a.to_term(), top, MSource::Chain);
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_ord;

    #[test]
    fn chain_examples() {
        let mut ctx = ClassContext::new();
        let a = ctx.declare("A", 3).unwrap();
        let chain = chain_down(&mut ctx, &a).unwrap();
        let names: Vec<String> = chain.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["A@3", "A@3(+2)", "A@3(+2)(+1)"]);
        let p = |s: &str| parse_ord(s, ctx.atoms()).unwrap();
        assert_eq!(ctx.m_of(&p("A@3(+2)")).unwrap(), p("A@3(+2)(+1)*2"));
        assert_eq!(class_level(&p("A@3(+2)")), 2);
        assert_eq!(chain_down(&mut ClassContext::new(), &EpsLeaf::eps(0)).unwrap(), vec![EpsLeaf::eps(0)]);
    }

    #[test]
    fn succ_and_levels() {
        assert_eq!(class_succ(&EpsLeaf::eps(0), 1).unwrap(), EpsLeaf::eps(1));
        assert!(class_succ(&EpsLeaf::eps(0), 2).is_err());
        assert_eq!(class_level(&OrdTerm::eps(0)), 1);
        assert_eq!(class_level(&parse_ord("w^w", &AtomTable::default()).unwrap()), 0);
    }

    #[test]
    fn context_round_trip() {
        let mut ctx = ClassContext::new();
        let a = ctx.declare("A", 2).unwrap();
        chain_down(&mut ctx, &a).unwrap();
        let back = ClassContext::from_json(&ctx.to_json()).unwrap();
        assert_eq!(back.to_json(), ctx.to_json());
        assert_eq!(ctx.m_of(&OrdTerm::eps(0)).unwrap(), OrdTerm::eps(0).times_nat(2).unwrap());
        let limit = EpsLeaf::eps_of(OrdTerm::omega()).unwrap().to_term();
        assert!(ctx.m_of(&limit).is_err());
    }
}
