//! Ordinal terms in Cantor Normal Form over epsilon-number leaves.
//!
//! A term is `0`, a natural number, a nonempty decreasing sum of monomials
//! `ω^e · c`, or a single epsilon leaf. Epsilon leaves are concrete `ε_γ`,
//! declared class atoms, successor-functional applications `a(+^k)` and
//! canonical points `x_k(j, e)`. The representation is canonical: two terms
//! are structurally equal exactly when they denote the same ordinal under the
//! generic-spacing reading of symbolic leaves.

mod arith;
mod order;
mod parse;
mod print;

pub use arith::{add, mul, omega_pow, omega_tower};
pub use order::{cmp_leaf, compare, lambda_leaf, lambda_locate, max_term, min_term};
pub use parse::{parse_leaf, parse_ord, AtomDecl, AtomTable};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use thiserror::Error;

/// Errors raised by term construction, parsing and comparison.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    /// Malformed input text.
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    /// Atom name not present in the atom table.
    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),
    /// Atom referenced with a level different from its declaration.
    #[error("atom `{name}` is declared with level {declared}, referenced with level {used}")]
    AtomLevel { name: String, declared: u32, used: u32 },
    /// `a(+^k)` or a canonical point built over a leaf of too low a level.
    #[error("level violation: {0}")]
    Level(String),
    /// Two symbolic leaves whose order is not fixed by the spacing rules.
    #[error("incomparable leaves `{0}` and `{1}`")]
    Incomparable(String, String),
    /// A class-interval question the spacing rules cannot answer.
    #[error("undecidable: {0}")]
    Undecidable(String),
    /// Operation defined only on terms without symbolic leaves.
    #[error("term `{0}` is not concrete")]
    NotConcrete(String),
    /// Numeric field out of range.
    #[error("value out of range: {0}")]
    Range(String),
}

pub type TermResult<T> = Result<T, TermError>;

/// A declared class atom: a symbolic element of `Class(level)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub name: String,
    pub level: u32,
    pub rank: u32,
}

/// An epsilon-number leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EpsLeaf {
    /// `ε_index`; the index is a term without symbolic leaves.
    Eps(Box<OrdTerm>),
    /// A declared atom.
    Atom(Atom),
    /// `base(+^k)`: least element of `Class(k)` above `base`.
    Succ(Box<EpsLeaf>, u32),
    /// `x_k(i + 1, base)`, an element of `Class(i) \ Class(i + 1)`.
    Canon { i: u32, base: Box<EpsLeaf>, k: u32 },
}

/// One summand `ω^exp · coeff` of a Cantor Normal Form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exp: OrdTerm,
    pub coeff: BigUint,
}

/// An ordinal term in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrdTerm {
    Zero,
    /// A positive natural number.
    Nat(BigUint),
    /// At least two monomials, or one monomial that is neither finite nor an
    /// epsilon leaf. Exponents strictly decrease; coefficients are positive.
    Cnf(Vec<Monomial>),
    Leaf(Box<EpsLeaf>),
}

/// Classification flags of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Classification {
    pub is_zero: bool,
    pub is_successor: bool,
    pub is_limit: bool,
    pub is_principal: bool,
    pub is_epsilon: bool,
}

impl EpsLeaf {
    /// `ε_n` for a natural number `n`.
    pub fn eps(n: u64) -> EpsLeaf {
        EpsLeaf::Eps(Box::new(OrdTerm::nat(n)))
    }

    /// `ε_index`, rejecting indices that contain symbolic leaves.
    pub fn eps_of(index: OrdTerm) -> TermResult<EpsLeaf> {
        if !index.is_concrete() {
            return Err(TermError::NotConcrete(index.to_string()));
        }
        Ok(EpsLeaf::Eps(Box::new(index)))
    }

    /// The class level: 1 for concrete epsilons, the declared level for atoms,
    /// `k` for `a(+^k)` and `i` for `x_k(i + 1, e)`.
    pub fn level(&self) -> u32 {
        match self {
            EpsLeaf::Eps(_) => 1,
            EpsLeaf::Atom(a) => a.level,
            EpsLeaf::Succ(_, k) => *k,
            EpsLeaf::Canon { i, .. } => *i,
        }
    }

    /// True for `ε_γ` leaves.
    pub fn is_concrete(&self) -> bool {
        matches!(self, EpsLeaf::Eps(_))
    }

    /// `self(+^k)`. For a concrete `ε_γ` and `k = 1` this is `ε_{γ+1}`.
    pub fn succ(&self, k: u32) -> TermResult<EpsLeaf> {
        if k == 0 || self.level() < k {
            return Err(TermError::Level(format!(
                "{}(+{}) needs level >= {}, found {}",
                self,
                k,
                k.max(1),
                self.level()
            )));
        }
        match self {
            EpsLeaf::Eps(ix) => Ok(EpsLeaf::Eps(Box::new(add(ix, &OrdTerm::one())?))),
            _ => Ok(EpsLeaf::Succ(Box::new(self.clone()), k)),
        }
    }

    /// The canonical point `x_k(j, self)` for `j >= 2`, an element of level `j - 1`.
    pub fn canon(&self, j: u32, k: u32) -> TermResult<EpsLeaf> {
        if j < 2 || k == 0 {
            return Err(TermError::Range(format!("x({j},{k},..) needs j >= 2 and k >= 1")));
        }
        if self.level() < j {
            return Err(TermError::Level(format!(
                "x({j},{k},{self}) needs level >= {j}, found {}",
                self.level()
            )));
        }
        Ok(EpsLeaf::Canon { i: j - 1, base: Box::new(self.clone()), k })
    }

    /// Construction weight used to order recursive comparisons.
    pub(crate) fn weight(&self) -> u32 {
        match self {
            EpsLeaf::Eps(_) | EpsLeaf::Atom(_) => 0,
            EpsLeaf::Succ(b, _) => b.weight() + 1,
            EpsLeaf::Canon { base, .. } => base.weight() + 2,
        }
    }

    /// The root of the construction: a concrete epsilon or an atom.
    pub fn root(&self) -> &EpsLeaf {
        match self {
            EpsLeaf::Succ(b, _) => b.root(),
            EpsLeaf::Canon { base, .. } => base.root(),
            _ => self,
        }
    }

    /// Replace the root `from` by `to` throughout the construction, when the
    /// construction starts at `from`.
    pub fn rebase(&self, from: &EpsLeaf, to: &EpsLeaf) -> Option<EpsLeaf> {
        if self == from {
            return Some(to.clone());
        }
        match self {
            EpsLeaf::Succ(b, k) => Some(EpsLeaf::Succ(Box::new(b.rebase(from, to)?), *k)),
            EpsLeaf::Canon { i, base, k } => Some(EpsLeaf::Canon {
                i: *i,
                base: Box::new(base.rebase(from, to)?),
                k: *k,
            }),
            _ => None,
        }
    }

    /// True when the construction of `self` passes through `anchor`.
    pub fn is_built_over(&self, anchor: &EpsLeaf) -> bool {
        if self == anchor {
            return true;
        }
        match self {
            EpsLeaf::Succ(b, _) => b.is_built_over(anchor),
            EpsLeaf::Canon { base, .. } => base.is_built_over(anchor),
            _ => false,
        }
    }

    pub fn to_term(&self) -> OrdTerm {
        OrdTerm::Leaf(Box::new(self.clone()))
    }
}

impl OrdTerm {
    pub fn zero() -> OrdTerm {
        OrdTerm::Zero
    }

    pub fn one() -> OrdTerm {
        OrdTerm::nat(1)
    }

    pub fn nat(n: u64) -> OrdTerm {
        OrdTerm::from_big(BigUint::from(n))
    }

    pub fn from_big(n: BigUint) -> OrdTerm {
        if n.is_zero() {
            OrdTerm::Zero
        } else {
            OrdTerm::Nat(n)
        }
    }

    /// `ω`.
    pub fn omega() -> OrdTerm {
        OrdTerm::Cnf(vec![Monomial { exp: OrdTerm::one(), coeff: BigUint::one() }])
    }

    /// `ε_n`.
    pub fn eps(n: u64) -> OrdTerm {
        EpsLeaf::eps(n).to_term()
    }

    /// Build a normal-form term from monomials that are already strictly
    /// decreasing with positive coefficients.
    pub fn from_monomials(mut ms: Vec<Monomial>) -> OrdTerm {
        match ms.len() {
            0 => OrdTerm::Zero,
            1 => {
                let m = ms.pop().unwrap();
                match (&m.exp, m.coeff.is_one()) {
                    (OrdTerm::Zero, _) => OrdTerm::Nat(m.coeff),
                    (OrdTerm::Leaf(_), true) => m.exp,
                    _ => OrdTerm::Cnf(vec![m]),
                }
            }
            _ => OrdTerm::Cnf(ms),
        }
    }

    /// The monomial list of the term (`ε = ω^ε`).
    pub fn monomials(&self) -> Vec<Monomial> {
        match self {
            OrdTerm::Zero => vec![],
            OrdTerm::Nat(n) => vec![Monomial { exp: OrdTerm::Zero, coeff: n.clone() }],
            OrdTerm::Cnf(ms) => ms.clone(),
            OrdTerm::Leaf(_) => vec![Monomial { exp: self.clone(), coeff: BigUint::one() }],
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, OrdTerm::Zero)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, OrdTerm::Zero | OrdTerm::Nat(_))
    }

    pub fn as_leaf(&self) -> Option<&EpsLeaf> {
        match self {
            OrdTerm::Leaf(e) => Some(e),
            _ => None,
        }
    }

    /// The natural number value of a finite term.
    pub fn as_nat(&self) -> Option<BigUint> {
        match self {
            OrdTerm::Zero => Some(BigUint::zero()),
            OrdTerm::Nat(n) => Some(n.clone()),
            _ => None,
        }
    }

    /// True when no symbolic leaf occurs anywhere in the term.
    pub fn is_concrete(&self) -> bool {
        match self {
            OrdTerm::Zero | OrdTerm::Nat(_) => true,
            OrdTerm::Cnf(ms) => ms.iter().all(|m| m.exp.is_concrete()),
            OrdTerm::Leaf(e) => match e.as_ref() {
                EpsLeaf::Eps(ix) => ix.is_concrete(),
                _ => false,
            },
        }
    }

    /// The leading monomial, if any.
    pub fn leading(&self) -> Option<Monomial> {
        self.monomials().into_iter().next()
    }

    /// `π t`: the leading additive-principal summand `ω^e` of `t` (0 for 0).
    pub fn principal_part(&self) -> OrdTerm {
        match self.leading() {
            None => OrdTerm::Zero,
            Some(m) => omega_pow(&m.exp),
        }
    }

    /// Predecessor of a successor ordinal.
    pub fn predecessor(&self) -> Option<OrdTerm> {
        let mut ms = self.monomials();
        let last = ms.last_mut()?;
        if !last.exp.is_zero() {
            return None;
        }
        if last.coeff.is_one() {
            ms.pop();
        } else {
            last.coeff -= 1u32;
        }
        Some(OrdTerm::from_monomials(ms))
    }

    /// Kind flags of the term.
    pub fn classify(&self) -> Classification {
        let ms = self.monomials();
        let is_zero = ms.is_empty();
        let is_successor = ms.last().map(|m| m.exp.is_zero()).unwrap_or(false);
        let is_principal = ms.len() == 1 && ms[0].coeff.is_one();
        Classification {
            is_zero,
            is_successor,
            is_limit: !is_zero && !is_successor,
            is_principal,
            is_epsilon: matches!(self, OrdTerm::Leaf(_)),
        }
    }

    /// Every epsilon leaf occurring in the term, recursively through
    /// exponents, in decreasing order without repetition.
    pub fn ep_set(&self) -> TermResult<Vec<EpsLeaf>> {
        let mut acc: Vec<EpsLeaf> = Vec::new();
        self.collect_leaves(&mut acc);
        sort_leaves_desc(acc)
    }

    fn collect_leaves(&self, acc: &mut Vec<EpsLeaf>) {
        match self {
            OrdTerm::Zero | OrdTerm::Nat(_) => {}
            OrdTerm::Leaf(e) => {
                if !acc.contains(e) {
                    acc.push((**e).clone());
                }
            }
            OrdTerm::Cnf(ms) => ms.iter().for_each(|m| m.exp.collect_leaves(acc)),
        }
    }

    /// Nesting depth of exponents.
    pub fn depth(&self) -> usize {
        match self {
            OrdTerm::Zero | OrdTerm::Nat(_) | OrdTerm::Leaf(_) => 0,
            OrdTerm::Cnf(ms) => 1 + ms.iter().map(|m| m.exp.depth()).max().unwrap_or(0),
        }
    }

    /// `self · n` for a natural number `n`.
    pub fn times_nat(&self, n: u64) -> TermResult<OrdTerm> {
        mul(self, &OrdTerm::nat(n))
    }

    /// `self + 1`.
    pub fn succ(&self) -> OrdTerm {
        add(self, &OrdTerm::one()).expect("adding a natural number never compares leaves")
    }
}

impl From<EpsLeaf> for OrdTerm {
    fn from(e: EpsLeaf) -> Self {
        e.to_term()
    }
}

/// Sort leaves decreasingly and drop duplicates.
pub fn sort_leaves_desc(mut v: Vec<EpsLeaf>) -> TermResult<Vec<EpsLeaf>> {
    let mut err = None;
    v.sort_by(|a, b| match cmp_leaf(b, a) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    v.dedup();
    Ok(v)
}

/// Sort terms increasingly.
pub fn sort_terms(v: &mut [OrdTerm]) -> TermResult<()> {
    let mut err = None;
    v.sort_by(|a, b| {
        compare(a, b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_flags() {
        let t = parse_ord("w^w*2", &AtomTable::default()).unwrap();
        assert!(!t.classify().is_principal);
        let e3 = OrdTerm::eps(3);
        let c = e3.classify();
        assert!(c.is_principal && c.is_epsilon);
        let p = parse_ord("w^(eps(0)+1)", &AtomTable::default()).unwrap();
        let c = p.classify();
        assert!(c.is_principal && !c.is_epsilon);
        assert!(OrdTerm::Zero.classify().is_zero);
        assert!(OrdTerm::nat(4).classify().is_successor);
        assert!(OrdTerm::omega().classify().is_limit);
    }

    #[test]
    fn ep_set_examples() {
        let atoms = AtomTable::default();
        let t = parse_ord("w^(eps(1)*2) + eps(0)*3 + 7", &atoms).unwrap();
        assert_eq!(t.ep_set().unwrap(), vec![EpsLeaf::eps(1), EpsLeaf::eps(0)]);
        let t = parse_ord("w^w + 5", &atoms).unwrap();
        assert!(t.ep_set().unwrap().is_empty());
        assert_eq!(OrdTerm::eps(0).ep_set().unwrap(), vec![EpsLeaf::eps(0)]);
    }

    #[test]
    fn succ_levels() {
        assert_eq!(EpsLeaf::eps(0).succ(1).unwrap(), EpsLeaf::eps(1));
        assert!(EpsLeaf::eps(0).succ(2).is_err());
        let mut atoms = AtomTable::default();
        let a = atoms.declare("A", 3).unwrap();
        let a2 = a.succ(2).unwrap();
        assert_eq!(a2.level(), 2);
        assert!(a2.succ(3).is_err());
    }

    #[test]
    fn principal_part_and_predecessor() {
        let atoms = AtomTable::default();
        let t = parse_ord("w^w*2+w+3", &atoms).unwrap();
        assert_eq!(t.principal_part(), parse_ord("w^w", &atoms).unwrap());
        assert_eq!(t.predecessor().unwrap(), parse_ord("w^w*2+w+2", &atoms).unwrap());
        assert_eq!(OrdTerm::omega().predecessor(), None);
    }
}
