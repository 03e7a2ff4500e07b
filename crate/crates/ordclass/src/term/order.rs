//! Ordinal comparison and interval location.
//!
//! Concrete terms are compared lexicographically on their Cantor Normal
//! Forms. Symbolic leaves are ordered by the generic-spacing rules: atoms sit
//! above every concrete epsilon, atoms compare by rank, `a(+^k)` is the least
//! level-`k` leaf above `a`, and a canonical point `x_k(i+1, e)` lies strictly
//! inside `(e(+^i), e(+^{i+1}))`. Each rule recurses on strictly lighter
//! constructions, so comparison terminates.

use super::{EpsLeaf, OrdTerm, TermError, TermResult};
use std::cmp::Ordering;

/// Compare two ordinal terms.
pub fn compare(a: &OrdTerm, b: &OrdTerm) -> TermResult<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    if let (OrdTerm::Leaf(x), OrdTerm::Leaf(y)) = (a, b) {
        return cmp_leaf(x, y);
    }
    if let (Some(x), Some(y)) = (a.as_nat(), b.as_nat()) {
        return Ok(x.cmp(&y));
    }
    let ma = a.monomials();
    let mb = b.monomials();
    for (x, y) in ma.iter().zip(mb.iter()) {
        let o = compare(&x.exp, &y.exp)?;
        if o != Ordering::Equal {
            return Ok(o);
        }
        let o = x.coeff.cmp(&y.coeff);
        if o != Ordering::Equal {
            return Ok(o);
        }
    }
    Ok(ma.len().cmp(&mb.len()))
}

/// The larger of two terms.
pub fn max_term(a: &OrdTerm, b: &OrdTerm) -> TermResult<OrdTerm> {
    Ok(if compare(a, b)? == Ordering::Less { b.clone() } else { a.clone() })
}

/// The smaller of two terms.
pub fn min_term(a: &OrdTerm, b: &OrdTerm) -> TermResult<OrdTerm> {
    Ok(if compare(a, b)? == Ordering::Greater { b.clone() } else { a.clone() })
}

/// Compare two epsilon leaves.
pub fn cmp_leaf(a: &EpsLeaf, b: &EpsLeaf) -> TermResult<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    match (a, b) {
        (EpsLeaf::Eps(x), EpsLeaf::Eps(y)) => return compare(x, y),
        (EpsLeaf::Eps(_), _) => return Ok(Ordering::Less),
        (_, EpsLeaf::Eps(_)) => return Ok(Ordering::Greater),
        (EpsLeaf::Atom(x), EpsLeaf::Atom(y)) => {
            if x.rank == y.rank {
                return Err(TermError::Incomparable(a.to_string(), b.to_string()));
            }
            return Ok(x.rank.cmp(&y.rank));
        }
        _ => {}
    }
    if a.weight() >= b.weight() {
        cmp_heavy(a, b)
    } else {
        cmp_heavy(b, a).map(Ordering::reverse)
    }
}

/// Compare a composite leaf `x` against any leaf `m` that is not heavier.
fn cmp_heavy(x: &EpsLeaf, m: &EpsLeaf) -> TermResult<Ordering> {
    match x {
        EpsLeaf::Succ(base, k) => cmp_succ(x, base, *k, m),
        EpsLeaf::Canon { i, base, k } => cmp_canon(x, *i, base, *k, m),
        _ => Err(TermError::Incomparable(x.to_string(), m.to_string())),
    }
}

/// `base(+^k)` against `m`.
fn cmp_succ(x: &EpsLeaf, base: &EpsLeaf, k: u32, m: &EpsLeaf) -> TermResult<Ordering> {
    if cmp_leaf(base, m)? != Ordering::Less {
        return Ok(Ordering::Greater);
    }
    // base < m
    if m.level() >= k {
        return Ok(Ordering::Less);
    }
    match lam(k, m)? {
        None => Err(TermError::Incomparable(x.to_string(), m.to_string())),
        Some(delta) => match cmp_leaf(base, &delta)? {
            Ordering::Less => Ok(Ordering::Less),
            _ => Ok(Ordering::Greater),
        },
    }
}

/// `x_k(i+1, base)` against `m`.
fn cmp_canon(x: &EpsLeaf, i: u32, base: &EpsLeaf, k: u32, m: &EpsLeaf) -> TermResult<Ordering> {
    let lo = EpsLeaf::Succ(Box::new(base.clone()), i);
    if cmp_leaf(m, &lo)? != Ordering::Greater {
        return Ok(Ordering::Greater);
    }
    let hi = EpsLeaf::Succ(Box::new(base.clone()), i + 1);
    if cmp_leaf(m, &hi)? != Ordering::Less {
        return Ok(Ordering::Less);
    }
    // lo < m < hi
    if m.level() >= i {
        return match m {
            EpsLeaf::Canon { i: mi, base: mb, k: mk } if *mi == i && mb.as_ref() == base => {
                Ok(k.cmp(mk))
            }
            EpsLeaf::Succ(mb, mk) => cmp_succ(m, mb, *mk, x).map(Ordering::reverse),
            _ => Err(TermError::Incomparable(x.to_string(), m.to_string())),
        };
    }
    match lam(i, m)? {
        None => Err(TermError::Incomparable(x.to_string(), m.to_string())),
        Some(delta) => match cmp_leaf(&delta, x)? {
            Ordering::Less => Ok(Ordering::Greater),
            _ => Ok(Ordering::Less),
        },
    }
}

/// `λ(k, m)` for a leaf: the level-`k` leaf `δ` with `m ∈ [δ, δ(+^k))`;
/// `None` stands for `-∞`.
pub(crate) fn lam(k: u32, m: &EpsLeaf) -> TermResult<Option<EpsLeaf>> {
    if m.level() >= k {
        return Ok(Some(m.clone()));
    }
    match m {
        EpsLeaf::Eps(_) => Ok(None),
        EpsLeaf::Atom(_) => Err(TermError::Undecidable(format!(
            "location of {m} relative to Class({k})"
        ))),
        EpsLeaf::Succ(z, _) | EpsLeaf::Canon { base: z, .. } => {
            if z.level() >= k {
                Ok(Some((**z).clone()))
            } else {
                lam(k, z)
            }
        }
    }
}

/// `λ(j, e)` for a leaf.
pub fn lambda_leaf(j: u32, e: &EpsLeaf) -> TermResult<Option<EpsLeaf>> {
    lam(j, e)
}

/// `λ(j, t)`: the level-`j` leaf `δ` with `t ∈ [δ, δ(+^j))`, or `None` (`-∞`).
pub fn lambda_locate(j: u32, t: &OrdTerm) -> TermResult<Option<EpsLeaf>> {
    match largest_leaf_below(t) {
        None => Ok(None),
        Some(e) => lam(j.max(1), &e),
    }
}

/// The largest epsilon leaf `≤ t`.
pub(crate) fn largest_leaf_below(t: &OrdTerm) -> Option<EpsLeaf> {
    match t {
        OrdTerm::Zero | OrdTerm::Nat(_) => None,
        OrdTerm::Leaf(e) => Some((**e).clone()),
        OrdTerm::Cnf(ms) => largest_leaf_below(&ms[0].exp),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_ord, AtomTable};
    use super::*;

    fn ctx() -> AtomTable {
        let mut t = AtomTable::default();
        t.declare("A", 3).unwrap();
        t.declare("B", 3).unwrap();
        t.declare("C", 2).unwrap();
        t
    }

    fn cmp(s: &str, u: &str) -> Ordering {
        let t = ctx();
        compare(&parse_ord(s, &t).unwrap(), &parse_ord(u, &t).unwrap()).unwrap()
    }

    #[test]
    fn concrete_orders() {
        assert_eq!(cmp("w*5", "w^w"), Ordering::Less);
        assert_eq!(cmp("eps(0)", "w^(eps(0))"), Ordering::Equal);
        assert_eq!(cmp("eps(0)*2", "eps(0)+w"), Ordering::Greater);
        assert_eq!(cmp("w^(eps(0)+1)", "eps(1)"), Ordering::Less);
        assert_eq!(cmp("eps(w)", "eps(5)"), Ordering::Greater);
    }

    #[test]
    fn succ_chain_orders() {
        assert_eq!(cmp("A@3(+1)", "A@3(+2)"), Ordering::Less);
        assert_eq!(cmp("A@3", "A@3(+1)"), Ordering::Less);
        assert_eq!(cmp("A@3(+2)(+1)", "A@3(+2)"), Ordering::Greater);
        assert_eq!(cmp("A@3(+2)(+1)", "A@3(+3)"), Ordering::Less);
        assert_eq!(cmp("A@3(+3)", "B@3"), Ordering::Less);
        assert_eq!(cmp("A@3(+2)", "B@3"), Ordering::Less);
        assert_eq!(cmp("eps(100)", "A@3"), Ordering::Less);
    }

    #[test]
    fn canon_orders() {
        assert_eq!(cmp("x(2,1,A@3)", "A@3(+1)"), Ordering::Greater);
        assert_eq!(cmp("x(2,1,A@3)", "A@3(+2)"), Ordering::Less);
        assert_eq!(cmp("x(2,1,A@3)", "x(2,2,A@3)"), Ordering::Less);
        assert_eq!(cmp("x(2,1,A@3)", "A@3(+1)(+1)"), Ordering::Greater);
        assert_eq!(cmp("x(2,1,A@3)(+1)", "x(2,2,A@3)"), Ordering::Less);
        assert_eq!(cmp("x(3,1,A@3)", "A@3(+2)"), Ordering::Greater);
        assert_eq!(cmp("x(2,1,x(3,1,A@3))", "x(3,1,A@3)"), Ordering::Greater);
        assert_eq!(cmp("x(2,1,x(3,1,A@3))", "x(3,1,A@3)(+2)"), Ordering::Less);
    }

    #[test]
    fn undecidable_location_is_reported() {
        let t = ctx();
        let a = parse_ord("A@3(+1)", &t).unwrap();
        let c = parse_ord("C@2", &t).unwrap();
        // A(+1) < C is fixed by A < C and level(C) >= 1
        assert_eq!(compare(&a, &c).unwrap(), Ordering::Less);
        let c1 = parse_ord("C@2(+1)", &t).unwrap();
        assert!(compare(&a, &c1).is_ok());
    }

    #[test]
    fn lambda_examples() {
        let t = ctx();
        let p = |s: &str| parse_ord(s, &t).unwrap();
        assert_eq!(lambda_locate(1, &p("eps(0)*2")).unwrap(), Some(EpsLeaf::eps(0)));
        assert_eq!(lambda_locate(1, &p("w")).unwrap(), None);
        assert_eq!(
            lambda_locate(2, &p("C@2(+1)")).unwrap(),
            Some(p("C@2").as_leaf().unwrap().clone())
        );
        assert_eq!(
            lambda_locate(2, &p("w^(A@3(+2)(+1)+1)")).unwrap(),
            Some(p("A@3(+2)").as_leaf().unwrap().clone())
        );
        assert_eq!(lambda_locate(2, &p("eps(3)")).unwrap(), None);
        assert!(lambda_locate(4, &p("A@3")).is_err());
    }
}
