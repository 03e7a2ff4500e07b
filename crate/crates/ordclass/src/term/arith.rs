//! Cantor Normal Form arithmetic.

use super::{compare, EpsLeaf, Monomial, OrdTerm, TermResult};
use num_bigint::BigUint;
use num_traits::One;
use std::cmp::Ordering;

/// Ordinal sum `a + b`.
pub fn add(a: &OrdTerm, b: &OrdTerm) -> TermResult<OrdTerm> {
    if b.is_zero() {
        return Ok(a.clone());
    }
    if a.is_zero() {
        return Ok(b.clone());
    }
    if let (Some(x), Some(y)) = (a.as_nat(), b.as_nat()) {
        return Ok(OrdTerm::from_big(x + y));
    }
    let mb = b.monomials();
    let lead = &mb[0];
    let mut out: Vec<Monomial> = Vec::new();
    for m in a.monomials() {
        match compare(&m.exp, &lead.exp)? {
            Ordering::Greater => out.push(m),
            Ordering::Equal => {
                out.push(Monomial { exp: m.exp, coeff: m.coeff + &lead.coeff });
                out.extend(mb[1..].iter().cloned());
                return Ok(OrdTerm::from_monomials(out));
            }
            Ordering::Less => break,
        }
    }
    out.extend(mb);
    Ok(OrdTerm::from_monomials(out))
}

/// Ordinal product `a · b`.
pub fn mul(a: &OrdTerm, b: &OrdTerm) -> TermResult<OrdTerm> {
    if a.is_zero() || b.is_zero() {
        return Ok(OrdTerm::Zero);
    }
    if let (Some(x), Some(y)) = (a.as_nat(), b.as_nat()) {
        return Ok(OrdTerm::from_big(x * y));
    }
    let ma = a.monomials();
    let (a1, c1) = (&ma[0].exp, &ma[0].coeff);
    let mut out = Vec::new();
    for m in b.monomials() {
        if m.exp.is_zero() {
            out.push(Monomial { exp: a1.clone(), coeff: c1 * &m.coeff });
            out.extend(ma[1..].iter().cloned());
        } else {
            out.push(Monomial { exp: add(a1, &m.exp)?, coeff: m.coeff });
        }
    }
    Ok(OrdTerm::from_monomials(out))
}

/// `ω^a`.
pub fn omega_pow(a: &OrdTerm) -> OrdTerm {
    match a {
        OrdTerm::Leaf(_) => a.clone(),
        _ => OrdTerm::from_monomials(vec![Monomial { exp: a.clone(), coeff: BigUint::one() }]),
    }
}

/// `ω_k(e)`: `ω_0(e) = e + 1`, `ω_{k+1}(e) = ω^{ω_k(e)}`.
pub fn omega_tower(e: &EpsLeaf, k: u32) -> OrdTerm {
    let mut t = e.to_term().succ();
    for _ in 0..k {
        t = omega_pow(&t);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::super::{parse_ord, AtomTable};
    use super::*;

    fn p(s: &str) -> OrdTerm {
        parse_ord(s, &AtomTable::default()).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(&p("1"), &p("w")).unwrap(), p("w"));
        assert_eq!(add(&p("w*2+3"), &p("w+1")).unwrap(), p("w*3+1"));
        assert_eq!(add(&p("eps(0)+w"), &p("eps(0)")).unwrap(), p("eps(0)*2"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(mul(&p("w+1"), &p("2")).unwrap(), p("w*2+1"));
        assert_eq!(mul(&p("eps(0)"), &p("w")).unwrap(), p("w^(eps(0)+1)"));
        assert_eq!(mul(&p("2"), &p("w")).unwrap(), p("w"));
        assert_eq!(mul(&p("w^2+w"), &p("w+3")).unwrap(), p("w^3+w^2*3+w"));
    }

    #[test]
    fn omega_pow_and_towers() {
        assert_eq!(omega_pow(&p("eps(0)+1")), p("w^(eps(0)+1)"));
        assert_eq!(omega_pow(&p("eps(2)")), p("eps(2)"));
        assert_eq!(omega_pow(&OrdTerm::Zero), p("1"));
        let e = EpsLeaf::eps(0);
        assert_eq!(omega_tower(&e, 0), p("eps(0)+1"));
        assert_eq!(omega_tower(&e, 1), p("w^(eps(0)+1)"));
        assert_eq!(omega_tower(&e, 2), p("w^(w^(eps(0)+1))"));
    }
}
