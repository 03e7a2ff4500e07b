//! Simultaneous substitution `x[f]` of epsilon leaves.
//!
//! A [`SubstMap`] is a strictly increasing partial map on epsilon leaves given
//! by finite overrides, an optional identity region below a threshold, and an
//! optional rebase rule that rebuilds every leaf constructed over one anchor
//! (and lying below `anchor(+^n)`) over another anchor.

use crate::term::{
    cmp_leaf, compare, parse_leaf, parse_ord, AtomTable, EpsLeaf, Monomial, OrdTerm, TermError,
};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

/// Errors raised by map construction and application.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("map is not strictly increasing: {0}")]
    NonMonotone(String),
    #[error("leaf `{0}` appears twice in the domain")]
    DuplicateDomain(String),
    #[error("leaf `{0}` is outside the domain of the map")]
    OutsideDomain(String),
    #[error("maps have different domains: {0}")]
    DomainMismatch(String),
    #[error("image `{0}` escapes the domain of the outer map")]
    ImageEscapes(String),
    #[error("composite is not representable: {0}")]
    NotRepresentable(String),
    #[error("bad map file: {0}")]
    Format(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

pub type SubstResult<T> = Result<T, SubstError>;

/// Rebuild leaves constructed over `from` (below `from(+^n)`) over `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rebase {
    pub from: EpsLeaf,
    pub to: EpsLeaf,
    pub n: u32,
}

/// A strictly increasing partial map on epsilon leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstMap {
    overrides: Vec<(EpsLeaf, EpsLeaf)>,
    identity: Identity,
    rebase: Option<Rebase>,
}

/// The identity part of a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identity {
    /// No leaf is fixed by rule.
    None,
    /// Every leaf is fixed.
    All,
    /// Leaves strictly below the threshold are fixed.
    Below(OrdTerm),
}

/// Pointwise comparison of two maps on their common support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapOrder {
    Eq,
    Lt,
    Gt,
    Incomparable,
}

impl MapOrder {
    /// `f ≤ g` pointwise.
    pub fn is_le(self) -> bool {
        matches!(self, MapOrder::Eq | MapOrder::Lt)
    }

    /// `f ≥ g` pointwise.
    pub fn is_ge(self) -> bool {
        matches!(self, MapOrder::Eq | MapOrder::Gt)
    }
}

impl SubstMap {
    /// The identity on all leaves.
    pub fn identity() -> SubstMap {
        SubstMap { overrides: vec![], identity: Identity::All, rebase: None }
    }

    /// A map given by finite overrides only.
    pub fn from_pairs(pairs: Vec<(EpsLeaf, EpsLeaf)>) -> SubstResult<SubstMap> {
        SubstMap::new(pairs, Identity::None, None)
    }

    /// Validate and build a map.
    pub fn new(
        mut overrides: Vec<(EpsLeaf, EpsLeaf)>,
        identity: Identity,
        rebase: Option<Rebase>,
    ) -> SubstResult<SubstMap> {
        let mut err = None;
        overrides.sort_by(|a, b| {
            cmp_leaf(&a.0, &b.0).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = err {
            return Err(e.into());
        }
        for w in overrides.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(SubstError::DuplicateDomain(w[0].0.to_string()));
            }
            if cmp_leaf(&w[0].1, &w[1].1)? != Ordering::Less {
                return Err(SubstError::NonMonotone(format!(
                    "{} < {} but {} >= {}",
                    w[0].0, w[1].0, w[0].1, w[1].1
                )));
            }
        }
        if let Identity::Below(th) = &identity {
            for (a, b) in &overrides {
                let a_fixed = compare(&a.to_term(), th)? == Ordering::Less;
                if a_fixed && a != b {
                    return Err(SubstError::NonMonotone(format!(
                        "{a} lies in the identity region below {th} but maps to {b}"
                    )));
                }
                if !a_fixed && compare(&b.to_term(), th)? == Ordering::Less {
                    return Err(SubstError::NonMonotone(format!(
                        "{a} maps to {b}, below fixed leaves under {th}"
                    )));
                }
            }
        }
        if let Some(r) = &rebase {
            if r.from.level() < r.n || r.to.level() < r.n {
                return Err(TermError::Level(format!(
                    "rebase {} -> {} at level {}",
                    r.from, r.to, r.n
                ))
                .into());
            }
            if !overrides.iter().any(|(a, b)| a == &r.from && b == &r.to) {
                return Err(SubstError::NonMonotone(format!(
                    "rebase {} -> {} without the matching override",
                    r.from, r.to
                )));
            }
        }
        Ok(SubstMap { overrides, identity, rebase })
    }

    pub fn overrides(&self) -> &[(EpsLeaf, EpsLeaf)] {
        &self.overrides
    }

    pub fn identity_part(&self) -> &Identity {
        &self.identity
    }

    pub fn rebase_rule(&self) -> Option<&Rebase> {
        self.rebase.as_ref()
    }

    /// The image of a leaf, or `None` outside the domain.
    pub fn map_leaf(&self, e: &EpsLeaf) -> SubstResult<Option<EpsLeaf>> {
        if let Some((_, b)) = self.overrides.iter().find(|(a, _)| a == e) {
            return Ok(Some(b.clone()));
        }
        if let Some(r) = &self.rebase {
            if e != &r.from && e.is_built_over(&r.from) {
                let top = EpsLeaf::Succ(Box::new(r.from.clone()), r.n);
                if cmp_leaf(e, &top)? == Ordering::Less {
                    return Ok(e.rebase(&r.from, &r.to));
                }
            }
        }
        Ok(match &self.identity {
            Identity::All => Some(e.clone()),
            Identity::Below(th) if compare(&e.to_term(), th)? == Ordering::Less => Some(e.clone()),
            _ => None,
        })
    }

    /// True when `e` lies in the domain.
    pub fn contains(&self, e: &EpsLeaf) -> SubstResult<bool> {
        Ok(self.map_leaf(e)?.is_some())
    }

    /// `x[f]`.
    pub fn apply(&self, x: &OrdTerm) -> SubstResult<OrdTerm> {
        match x {
            OrdTerm::Zero | OrdTerm::Nat(_) => Ok(x.clone()),
            OrdTerm::Leaf(e) => self
                .map_leaf(e)?
                .map(OrdTerm::from)
                .ok_or_else(|| SubstError::OutsideDomain(e.to_string())),
            OrdTerm::Cnf(ms) => {
                let mut out = Vec::with_capacity(ms.len());
                for m in ms {
                    out.push(Monomial { exp: self.apply(&m.exp)?, coeff: m.coeff.clone() });
                }
                Ok(OrdTerm::from_monomials(out))
            }
        }
    }

    /// `f⁻¹`, with domain the image of `f`.
    pub fn invert(&self) -> SubstMap {
        let overrides = self.overrides.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        let rebase = self
            .rebase
            .as_ref()
            .map(|r| Rebase { from: r.to.clone(), to: r.from.clone(), n: r.n });
        SubstMap::new(overrides, self.identity.clone(), rebase)
            .expect("the inverse of a strictly increasing map is strictly increasing")
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &SubstMap) -> SubstResult<SubstMap> {
        let mut overrides = Vec::new();
        for (a, b) in &inner.overrides {
            let c = self.map_leaf(b)?.ok_or_else(|| SubstError::ImageEscapes(b.to_string()))?;
            overrides.push((a.clone(), c));
        }
        for (c, d) in &self.overrides {
            let fixed_by_inner = !inner.overrides.iter().any(|(a, _)| a == c)
                && inner.map_leaf(c)?.as_ref() == Some(c);
            if fixed_by_inner {
                overrides.push((c.clone(), d.clone()));
            }
        }
        let identity = match (&self.identity, &inner.identity) {
            (Identity::All, x) | (x, Identity::All) => x.clone(),
            (Identity::Below(a), Identity::Below(b)) => {
                Identity::Below(if compare(a, b)? == Ordering::Less { a.clone() } else { b.clone() })
            }
            _ => Identity::None,
        };
        let rebase = match (&self.rebase, &inner.rebase) {
            (Some(f), Some(g)) if f.from == g.to && f.n == g.n => {
                Some(Rebase { from: g.from.clone(), to: f.to.clone(), n: g.n })
            }
            (_, Some(g)) => {
                let top = EpsLeaf::Succ(Box::new(g.to.clone()), g.n).to_term();
                if !fixes_below(&self.identity, &top)? {
                    return Err(SubstError::NotRepresentable(format!(
                        "leaves rebuilt over {} leave the identity region of the outer map",
                        g.to
                    )));
                }
                Some(g.clone())
            }
            (Some(f), None) => {
                let top = EpsLeaf::Succ(Box::new(f.from.clone()), f.n).to_term();
                fixes_below(&inner.identity, &top)?.then(|| f.clone())
            }
            (None, None) => None,
        };
        overrides.retain(|(a, b)| {
            rebase.as_ref().is_none_or(|r| !(a == &r.from && b != &r.to))
        });
        SubstMap::new(overrides, identity, rebase)
    }

    /// Pointwise comparison on the union of the explicit supports.
    pub fn compare_with(&self, other: &SubstMap) -> SubstResult<MapOrder> {
        if self.identity != other.identity {
            return Err(SubstError::DomainMismatch("different identity regions".into()));
        }
        match (&self.rebase, &other.rebase) {
            (None, None) => {}
            (Some(a), Some(b)) if a.from == b.from && a.n == b.n => {}
            _ => return Err(SubstError::DomainMismatch("different rebase rules".into())),
        }
        let mut support: Vec<&EpsLeaf> = self.overrides.iter().map(|(a, _)| a).collect();
        support.extend(other.overrides.iter().map(|(a, _)| a));
        let (mut lt, mut gt) = (false, false);
        for e in support {
            let x = self.map_leaf(e)?.ok_or_else(|| SubstError::DomainMismatch(e.to_string()))?;
            let y = other.map_leaf(e)?.ok_or_else(|| SubstError::DomainMismatch(e.to_string()))?;
            match cmp_leaf(&x, &y)? {
                Ordering::Less => lt = true,
                Ordering::Greater => gt = true,
                Ordering::Equal => {}
            }
        }
        Ok(match (lt, gt) {
            (false, false) => MapOrder::Eq,
            (true, false) => MapOrder::Lt,
            (false, true) => MapOrder::Gt,
            (true, true) => MapOrder::Incomparable,
        })
    }

    /// Serialize to the JSON map format.
    pub fn to_json(&self) -> String {
        let (rule, threshold) = match &self.identity {
            Identity::None => ("none", None),
            Identity::All => ("identity-below", None),
            Identity::Below(t) => ("identity-below", Some(t.to_string())),
        };
        let doc = MapDoc {
            overrides: self.overrides.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            rule: rule.to_string(),
            threshold,
            rebase: self.rebase.as_ref().map(|r| RebaseDoc {
                from: r.from.to_string(),
                to: r.to.to_string(),
                n: r.n,
            }),
        };
        serde_json::to_string(&doc).expect("map documents always serialize")
    }

    /// Parse the JSON map format.
    pub fn from_json(text: &str, atoms: &AtomTable) -> SubstResult<SubstMap> {
        let doc: MapDoc =
            serde_json::from_str(text).map_err(|e| SubstError::Format(e.to_string()))?;
        let mut overrides = Vec::new();
        for [a, b] in &doc.overrides {
            overrides.push((parse_leaf(a, atoms)?, parse_leaf(b, atoms)?));
        }
        let identity = match (doc.rule.as_str(), &doc.threshold) {
            ("none", _) => Identity::None,
            ("identity-below", None) => Identity::All,
            ("identity-below", Some(t)) => Identity::Below(parse_ord(t, atoms)?),
            (r, _) => return Err(SubstError::Format(format!("unknown rule `{r}`"))),
        };
        let rebase = match &doc.rebase {
            None => None,
            Some(r) => Some(Rebase {
                from: parse_leaf(&r.from, atoms)?,
                to: parse_leaf(&r.to, atoms)?,
                n: r.n,
            }),
        };
        SubstMap::new(overrides, identity, rebase)
    }
}

fn fixes_below(identity: &Identity, top: &OrdTerm) -> SubstResult<bool> {
    Ok(match identity {
        Identity::All => true,
        Identity::None => false,
        Identity::Below(th) => compare(top, th)? != Ordering::Greater,
    })
}

#[derive(Serialize, Deserialize)]
struct MapDoc {
    overrides: Vec<[String; 2]>,
    rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    threshold: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rebase: Option<RebaseDoc>,
}

#[derive(Serialize, Deserialize)]
struct RebaseDoc {
    from: String,
    to: String,
    n: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> OrdTerm {
        parse_ord(s, &AtomTable::default()).unwrap()
    }

    fn e(n: u64) -> EpsLeaf {
        EpsLeaf::eps(n)
    }

    #[test]
    fn make_map_validation() {
        assert!(SubstMap::from_pairs(vec![(e(0), e(1))]).is_ok());
        assert!(matches!(
            SubstMap::from_pairs(vec![(e(0), e(2)), (e(1), e(1))]),
            Err(SubstError::NonMonotone(_))
        ));
        assert!(SubstMap::from_pairs(vec![(e(0), e(0))]).is_ok());
        assert!(matches!(
            SubstMap::from_pairs(vec![(e(0), e(1)), (e(0), e(2))]),
            Err(SubstError::DuplicateDomain(_))
        ));
    }

    #[test]
    fn apply_examples() {
        let f = SubstMap::from_pairs(vec![(e(0), e(5))]).unwrap();
        assert_eq!(f.apply(&p("42")).unwrap(), p("42"));
        assert_eq!(f.apply(&p("eps(0)*2+w")).unwrap(), p("eps(5)*2+w"));
        let g = SubstMap::from_pairs(vec![(e(0), e(1)), (e(1), e(2))]).unwrap();
        assert_eq!(g.apply(&p("w^(eps(1)+eps(0))")).unwrap(), p("w^(eps(2)+eps(1))"));
        assert!(matches!(f.apply(&p("eps(3)")), Err(SubstError::OutsideDomain(_))));
    }

    #[test]
    fn invert_and_compose() {
        let f = SubstMap::from_pairs(vec![(e(0), e(3))]).unwrap();
        assert_eq!(f.invert(), SubstMap::from_pairs(vec![(e(3), e(0))]).unwrap());
        assert_eq!(SubstMap::identity().invert(), SubstMap::identity());
        assert_eq!(SubstMap::identity().compose(&f).unwrap(), f);
        let outer = SubstMap::from_pairs(vec![(e(1), e(2))]).unwrap();
        let inner = SubstMap::from_pairs(vec![(e(0), e(1))]).unwrap();
        let c = outer.compose(&inner).unwrap();
        assert_eq!(c.apply(&p("eps(0)*3+1")).unwrap(), p("eps(2)*3+1"));
    }

    #[test]
    fn identity_region_and_rebase() {
        let mut atoms = AtomTable::default();
        let a = atoms.declare("A", 3).unwrap();
        let c = atoms.declare("C", 3).unwrap();
        let g = SubstMap::new(
            vec![(a.clone(), c.clone())],
            Identity::Below(a.to_term()),
            Some(Rebase { from: a.clone(), to: c.clone(), n: 3 }),
        )
        .unwrap();
        let t = parse_ord("w^(A@3(+2)(+1)+1)+eps(4)", &atoms).unwrap();
        assert_eq!(g.apply(&t).unwrap(), parse_ord("w^(C@3(+2)(+1)+1)+eps(4)", &atoms).unwrap());
        let top = parse_ord("A@3(+3)", &atoms).unwrap();
        assert!(g.apply(&top).is_err());
        let back = g.invert();
        assert_eq!(back.apply(&g.apply(&t).unwrap()).unwrap(), t);
        let json = g.to_json();
        assert_eq!(SubstMap::from_json(&json, &atoms).unwrap(), g);
    }

    #[test]
    fn pointwise_order() {
        let f = SubstMap::from_pairs(vec![(e(0), e(1)), (e(2), e(3))]).unwrap();
        let g = SubstMap::from_pairs(vec![(e(0), e(2)), (e(2), e(3))]).unwrap();
        assert_eq!(f.compare_with(&f).unwrap(), MapOrder::Eq);
        assert_eq!(f.compare_with(&g).unwrap(), MapOrder::Lt);
        assert_eq!(g.compare_with(&f).unwrap(), MapOrder::Gt);
    }
}
