//! Expression parser.
//!
//! ```text
//! sum     := product ('+' product)*
//! product := power ('*' power)*
//! power   := postfix ('^' power)?
//! postfix := primary ('(+' NUM ')')*
//! primary := NUM | 'w' | '(' sum ')' | 'eps(' sum ')'
//!          | 'x(' NUM ',' NUM ',' sum ')' | IDENT '@' NUM
//! ```

use super::{add, mul, omega_pow, omega_tower, Atom, EpsLeaf, OrdTerm, TermError, TermResult};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Declared class atoms, ranked by declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomTable {
    atoms: Vec<AtomDecl>,
}

/// One atom declaration as it appears in context files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomDecl {
    pub name: String,
    pub level: u32,
}

impl AtomTable {
    /// Declare a new atom above all previously declared ones.
    pub fn declare(&mut self, name: &str, level: u32) -> TermResult<EpsLeaf> {
        if level == 0 {
            return Err(TermError::Range(format!("atom `{name}` needs level >= 1")));
        }
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(TermError::Syntax { pos: 0, msg: format!("bad atom name `{name}`") });
        }
        if self.get(name).is_some() {
            return Err(TermError::Range(format!("atom `{name}` already declared")));
        }
        self.atoms.push(AtomDecl { name: name.to_string(), level });
        Ok(self.get(name).unwrap())
    }

    /// The leaf of a declared atom.
    pub fn get(&self, name: &str) -> Option<EpsLeaf> {
        self.atoms.iter().enumerate().find(|(_, a)| a.name == name).map(|(r, a)| {
            EpsLeaf::Atom(Atom { name: a.name.clone(), level: a.level, rank: r as u32 })
        })
    }

    /// All atoms in rank order.
    pub fn leaves(&self) -> Vec<EpsLeaf> {
        self.atoms.iter().filter_map(|a| self.get(&a.name)).collect()
    }

    pub fn decls(&self) -> &[AtomDecl] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Parse an ordinal expression into normal form.
pub fn parse_ord(text: &str, atoms: &AtomTable) -> TermResult<OrdTerm> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, atoms };
    let t = p.sum()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(t)
}

/// Parse an expression that must denote an epsilon leaf.
pub fn parse_leaf(text: &str, atoms: &AtomTable) -> TermResult<EpsLeaf> {
    let t = parse_ord(text, atoms)?;
    t.as_leaf().cloned().ok_or_else(|| TermError::Syntax {
        pos: 0,
        msg: format!("`{text}` is not an epsilon leaf"),
    })
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    atoms: &'a AtomTable,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> TermError {
        TermError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> TermResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn number(&mut self) -> TermResult<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn small(&mut self) -> TermResult<u32> {
        let at = self.pos;
        let n = self.number()?;
        u32::try_from(&n).map_err(|_| TermError::Syntax { pos: at, msg: "number too large".into() })
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
        {
            self.pos += 1;
        }
        (start != self.pos).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn sum(&mut self) -> TermResult<OrdTerm> {
        let mut t = self.product()?;
        while self.eat(b'+') {
            let r = self.product()?;
            t = add(&t, &r)?;
        }
        Ok(t)
    }

    fn product(&mut self) -> TermResult<OrdTerm> {
        let mut t = self.power()?;
        while self.eat(b'*') {
            let r = self.power()?;
            t = mul(&t, &r)?;
        }
        Ok(t)
    }

    fn power(&mut self) -> TermResult<OrdTerm> {
        let at = self.pos;
        let base = self.postfix()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let exp = self.power()?;
        if base == OrdTerm::omega() {
            return Ok(omega_pow(&exp));
        }
        match (base.as_nat(), exp.as_nat()) {
            (Some(b), Some(e)) => {
                let e = u32::try_from(&e)
                    .map_err(|_| TermError::Syntax { pos: at, msg: "exponent too large".into() })?;
                Ok(OrdTerm::from_big(b.pow(e)))
            }
            _ => Err(TermError::Syntax { pos: at, msg: "only `w` may be raised to a transfinite power".into() }),
        }
    }

    fn postfix(&mut self) -> TermResult<OrdTerm> {
        let mut t = self.primary()?;
        loop {
            self.skip_ws();
            if !self.s[self.pos..].starts_with(b"(+") {
                return Ok(t);
            }
            let at = self.pos;
            self.pos += 2;
            let k = self.small()?;
            self.expect(b')')?;
            let leaf = t.as_leaf().ok_or(TermError::Syntax {
                pos: at,
                msg: "(+k) applies only to epsilon leaves".into(),
            })?;
            t = leaf.succ(k)?.to_term();
        }
    }

    fn primary(&mut self) -> TermResult<OrdTerm> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(c) if c.is_ascii_digit() => Ok(OrdTerm::from_big(self.number()?)),
            Some(b'(') => {
                self.pos += 1;
                let t = self.sum()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.ident().unwrap();
                if self.eat(b'@') {
                    let level = self.small()?;
                    let leaf = self
                        .atoms
                        .get(&name)
                        .ok_or_else(|| TermError::UndeclaredAtom(name.clone()))?;
                    if leaf.level() != level {
                        return Err(TermError::AtomLevel {
                            name,
                            declared: leaf.level(),
                            used: level,
                        });
                    }
                    return Ok(leaf.to_term());
                }
                match name.as_str() {
                    "w" => Ok(OrdTerm::omega()),
                    "eps" => {
                        self.expect(b'(')?;
                        let ix = self.sum()?;
                        self.expect(b')')?;
                        Ok(EpsLeaf::eps_of(ix)?.to_term())
                    }
                    "x" => {
                        self.expect(b'(')?;
                        let j = self.small()?;
                        self.expect(b',')?;
                        let k = self.small()?;
                        self.expect(b',')?;
                        let at_e = self.pos;
                        let e = self.sum()?;
                        self.expect(b')')?;
                        let e = e.as_leaf().cloned().ok_or(TermError::Syntax {
                            pos: at_e,
                            msg: "x(j,k,e) needs an epsilon leaf e".into(),
                        })?;
                        match j {
                            0 => Err(TermError::Syntax { pos: at, msg: "x(j,..) needs j >= 1".into() }),
                            1 => Ok(omega_tower(&e, k)),
                            _ => Ok(e.canon(j, k)?.to_term()),
                        }
                    }
                    _ => Err(TermError::Syntax {
                        pos: at,
                        msg: format!("unknown identifier `{name}` (atoms are written NAME@LEVEL)"),
                    }),
                }
            }
            Some(c) => Err(self.err(&format!("unexpected `{}`", c as char))),
        }
    }
}
