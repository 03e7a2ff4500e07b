//! Canonical printer; its output re-parses to the same term.

use super::{EpsLeaf, Monomial, OrdTerm};
use num_traits::One;
use serde::{Serialize, Serializer};
use std::fmt;

impl Serialize for OrdTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for EpsLeaf {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdTerm::Zero => write!(f, "0"),
            OrdTerm::Nat(n) => write!(f, "{n}"),
            OrdTerm::Leaf(e) => write!(f, "{e}"),
            OrdTerm::Cnf(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write_monomial(f, m)?;
                }
                Ok(())
            }
        }
    }
}

fn is_atomic(t: &OrdTerm) -> bool {
    matches!(t, OrdTerm::Nat(_) | OrdTerm::Leaf(_)) || *t == OrdTerm::omega()
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    match &m.exp {
        OrdTerm::Zero => return write!(f, "{}", m.coeff),
        OrdTerm::Nat(n) if n.is_one() => write!(f, "w")?,
        OrdTerm::Leaf(e) => write!(f, "{e}")?,
        e if is_atomic(e) => write!(f, "w^{e}")?,
        e => write!(f, "w^({e})")?,
    }
    if !m.coeff.is_one() {
        write!(f, "*{}", m.coeff)?;
    }
    Ok(())
}

impl fmt::Display for EpsLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsLeaf::Eps(ix) => write!(f, "eps({ix})"),
            EpsLeaf::Atom(a) => write!(f, "{}@{}", a.name, a.level),
            EpsLeaf::Succ(b, k) => write!(f, "{b}(+{k})"),
            EpsLeaf::Canon { i, base, k } => write!(f, "x({},{k},{base})", i + 1),
        }
    }
}
