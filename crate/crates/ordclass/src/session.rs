//! Command interpreter behind the `ordclass` binary.
//!
//! One command per line; blank lines and lines starting with `#` are
//! skipped. Terms are single whitespace-free tokens in the parser syntax.
//!
//! ```text
//! declare NAME LEVEL         eval T                  lambda J T
//! tset N ALPHA T             gmap N ALPHA C          canon I E K [GRID]
//! eta K ALPHA T [GRID]       ell I ALPHA T [GRID]
//! grid NAME BOUND [SEED…]    leq1 GRID A B           mhat GRID T
//! classdetect GRID J         export GRID FILE
//! gset N ALPHA T [GRID]      astep N ALPHA L [GRID]
//! ```

use crate::hierarchy::{a_successor_step, g_candidates, g_table, HierarchySet, Regime};
use crate::oracle::{build_grid, load_or_compute, to_dot, to_json, GridOps, Leq1Relation, DEFAULT_GRID_CAP, DEFAULT_SUBSET_CAP};
use crate::skeleton::{
    canonical_point, chain_down, eta_compute, g_map, gamma1_templates, l_compute, t_set, ClassContext, Mode,
};
use crate::term::{lambda_locate, parse_leaf, parse_ord, EpsLeaf, OrdTerm, TermError};
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::PathBuf;
use thiserror::Error;

/// Output format of command results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Dot,
}

/// Errors of the interpreter. Parse errors exit with 2, all others with 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<SessionError> },
}

impl SessionError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            SessionError::Parse(_) => 2,
            SessionError::Domain(_) => 1,
            SessionError::AtLine { source, .. } => source.exit_code(),
        }
    }
}

pub type SessionResult<T> = Result<T, SessionError>;

fn domain<E: std::fmt::Display>(e: E) -> SessionError {
    SessionError::Domain(e.to_string())
}

fn term_error(e: TermError) -> SessionError {
    match e {
        TermError::Syntax { .. } | TermError::UndeclaredAtom(_) | TermError::AtomLevel { .. } => {
            SessionError::Parse(e.to_string())
        }
        _ => SessionError::Domain(e.to_string()),
    }
}

/// Interpreter settings.
#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub format: Format,
    pub subset_cap: usize,
    pub grid_cap: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig { format: Format::Text, subset_cap: DEFAULT_SUBSET_CAP, grid_cap: DEFAULT_GRID_CAP, cache_dir: None }
    }
}

/// A class context together with named grid relations.
pub struct Session {
    ctx: ClassContext,
    grids: BTreeMap<String, Leq1Relation>,
    config: SessionConfig,
}

fn render_leaves(v: &[EpsLeaf]) -> String {
    let items: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn render_terms(v: &[OrdTerm]) -> String {
    let items: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports always serialize")
}

impl Session {
    pub fn new(ctx: ClassContext, config: SessionConfig) -> Self {
        Session { ctx, grids: BTreeMap::new(), config }
    }

    pub fn context(&self) -> &ClassContext {
        &self.ctx
    }

    pub fn relation(&self, name: &str) -> Option<&Leq1Relation> {
        self.grids.get(name)
    }

    /// Run every line of a script and join the outputs. Stops at the first
    /// error, reporting its line number.
    pub fn run_script(&mut self, text: &str) -> SessionResult<String> {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            match self.run_command(line) {
                Ok(Some(s)) => out.push(s),
                Ok(None) => {}
                Err(e) => return Err(SessionError::AtLine { line: i + 1, source: Box::new(e) }),
            }
        }
        Ok(out.join("\n"))
    }

    /// Run one command; `None` for blank and comment lines.
    pub fn run_command(&mut self, line: &str) -> SessionResult<Option<String>> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(None);
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let (verb, args) = (words[0], &words[1..]);
        let out = match verb {
            "declare" => self.declare(args)?,
            "eval" => self.eval(args)?,
            "tset" => self.tset(args)?,
            "gmap" => self.gmap(args)?,
            "eta" | "ell" => self.eta_or_ell(verb, args)?,
            "lambda" => self.lambda(args)?,
            "canon" => self.canon(args)?,
            "grid" => self.grid(args)?,
            "leq1" => self.leq1(args)?,
            "mhat" => self.mhat(args)?,
            "classdetect" => self.classdetect(args)?,
            "gset" | "astep" => self.hierarchy(verb, args)?,
            "export" => self.export(args)?,
            _ => return Err(SessionError::Parse(format!("unknown verb `{verb}`"))),
        };
        Ok(Some(out))
    }

    fn json(&self) -> bool {
        self.config.format == Format::Json
    }

    fn arity(verb: &str, args: &[&str], min: usize, max: usize) -> SessionResult<()> {
        if args.len() < min || args.len() > max {
            let want = if min == max { min.to_string() } else { format!("{min} to {max}") };
            return Err(SessionError::Parse(format!("`{verb}` takes {want} arguments, got {}", args.len())));
        }
        Ok(())
    }

    fn term(&self, s: &str) -> SessionResult<OrdTerm> {
        parse_ord(s, self.ctx.atoms()).map_err(term_error)
    }

    fn leaf(&self, s: &str) -> SessionResult<EpsLeaf> {
        parse_leaf(s, self.ctx.atoms()).map_err(term_error)
    }

    fn num(s: &str) -> SessionResult<u32> {
        s.parse().map_err(|_| SessionError::Parse(format!("expected a natural number, got `{s}`")))
    }

    fn rel(&self, name: &str) -> SessionResult<&Leq1Relation> {
        self.grids.get(name).ok_or_else(|| SessionError::Domain(format!("no grid named `{name}`")))
    }

    fn mode<'a>(&'a self, grid: Option<&&str>) -> SessionResult<Mode<'a>> {
        Ok(match grid {
            Some(g) => Mode::Oracle(self.rel(g)?),
            None => Mode::Structural,
        })
    }

    fn declare(&mut self, args: &[&str]) -> SessionResult<String> {
        Self::arity("declare", args, 2, 2)?;
        let level = Self::num(args[1])?;
        let leaf = self.ctx.declare(args[0], level).map_err(domain)?;
        let chain = chain_down(&mut self.ctx, &leaf).map_err(domain)?;
        Ok(if self.json() {
            pretty(&json!({"declared": leaf, "level": level, "chain": chain}))
        } else {
            leaf.to_string()
        })
    }

    fn eval(&self, args: &[&str]) -> SessionResult<String> {
        Self::arity("eval", args, 1, 1)?;
        let t = self.term(args[0])?;
        Ok(if self.json() { pretty(&json!({"term": t, "class": t.classify()})) } else { t.to_string() })
    }

    fn tset(&self, args: &[&str]) -> SessionResult<String> {
        Self::arity("tset", args, 3, 3)?;
        let n = Self::num(args[0])?;
        let (a, t) = (self.leaf(args[1])?, self.term(args[2])?);
        let set = t_set(&self.ctx, n, &a, &t).map_err(domain)?;
        Ok(if self.json() {
            pretty(&json!({"n": n, "alpha": a, "t": t, "tset": set}))
        } else {
            render_leaves(&set)
        })
    }

    fn gmap(&self, args: &[&str]) -> SessionResult<String> {
        Self::arity("gmap", args, 3, 3)?;
        let n = Self::num(args[0])?;
        let (a, c) = (self.leaf(args[1])?, self.leaf(args[2])?);
        let g = g_map(n, &a, &c).map_err(domain)?;
        Ok(g.to_json())
    }

    fn eta_or_ell(&self, verb: &str, args: &[&str]) -> SessionResult<String> {
        Self::arity(verb, args, 3, 4)?;
        let k = Self::num(args[0])?;
        let (a, t) = (self.leaf(args[1])?, self.term(args[2])?);
        let mode = self.mode(args.get(3))?;
        let v = if verb == "eta" {
            eta_compute(&self.ctx, k, &a, &t, mode)
        } else {
            l_compute(&self.ctx, k, &a, &t, mode)
        }
        .map_err(domain)?;
        Ok(if self.json() { pretty(&json!({"op": verb, "k": k, "alpha": a, "t": t, "value": v})) } else { v.to_string() })
    }

    fn lambda(&self, args: &[&str]) -> SessionResult<String> {
        Self::arity("lambda", args, 2, 2)?;
        let j = Self::num(args[0])?;
        let t = self.term(args[1])?;
        let v = lambda_locate(j, &t).map_err(domain)?;
        let shown = v.as_ref().map_or_else(|| "-inf".to_string(), |e| e.to_string());
        Ok(if self.json() { pretty(&json!({"j": j, "t": t, "lambda": shown})) } else { shown })
    }

    fn canon(&mut self, args: &[&str]) -> SessionResult<String> {
        Self::arity("canon", args, 3, 4)?;
        let (i, k) = (Self::num(args[0])?, Self::num(args[2])?);
        let e = self.leaf(args[1])?;
        if let Some(g) = args.get(3) {
            let templates = gamma1_templates(self.rel(g)?, k.max(self.ctx.gamma1_len() as u32)).map_err(domain)?;
            self.ctx.set_gamma1_templates(templates).map_err(domain)?;
        }
        let cp = canonical_point(&mut self.ctx, i, &e, k).map_err(domain)?;
        Ok(if self.json() {
            pretty(&cp)
        } else {
            format!("x = {}\ngamma = {}\nchain = {}", cp.x, cp.gamma, render_leaves(&cp.chain))
        })
    }

    fn grid(&mut self, args: &[&str]) -> SessionResult<String> {
        Self::arity("grid", args, 2, usize::MAX)?;
        let name = args[0].to_string();
        if self.grids.contains_key(&name) {
            return Err(SessionError::Domain(format!("grid `{name}` already exists")));
        }
        let bound = self.term(args[1])?;
        let mut seeds = args[2..].iter().map(|s| self.term(s)).collect::<SessionResult<Vec<_>>>()?;
        if seeds.is_empty() {
            seeds = default_seeds(&bound);
        }
        let grid = build_grid(&bound, &seeds, GridOps::default(), self.config.grid_cap).map_err(domain)?;
        let rel = load_or_compute(grid, self.config.subset_cap, self.config.cache_dir.as_deref()).map_err(domain)?;
        let g = rel.grid();
        let (points, test, hash) = (g.len(), g.test_indices().len(), g.content_hash());
        self.grids.insert(name.clone(), rel);
        Ok(if self.json() {
            pretty(&json!({"grid": name, "points": points, "test": test, "grid_hash": hash}))
        } else {
            format!("{name}: {points} points ({test} test), hash {}", &hash[..16])
        })
    }

    fn leq1(&self, args: &[&str]) -> SessionResult<String> {
        Self::arity("leq1", args, 3, 3)?;
        let rel = self.rel(args[0])?;
        let (a, b) = (self.term(args[1])?, self.term(args[2])?);
        let holds = rel.leq1(&a, &b).map_err(domain)?;
        Ok(if self.json() {
            pretty(&json!({"grid": args[0], "a": a, "b": b, "holds": holds, "scope": "grid-relative"}))
        } else {
            format!("{holds} (grid-relative)")
        })
    }

    fn mhat(&self, args: &[&str]) -> SessionResult<String> {
        Self::arity("mhat", args, 2, 2)?;
        let rel = self.rel(args[0])?;
        let t = self.term(args[1])?;
        let m = rel.m_hat(&t).map_err(domain)?;
        Ok(if self.json() {
            pretty(&json!({"grid": args[0], "t": t, "m_hat": m, "scope": "grid-relative"}))
        } else {
            format!("{m} (grid-relative)")
        })
    }

    fn classdetect(&self, args: &[&str]) -> SessionResult<String> {
        Self::arity("classdetect", args, 2, 2)?;
        let rel = self.rel(args[0])?;
        let j = Self::num(args[1])? as usize;
        let found = rel.class_detect(j);
        Ok(if self.json() {
            pretty(&json!({"grid": args[0], "j": j, "members": found, "scope": "grid-relative"}))
        } else {
            let pts: Vec<OrdTerm> = found.into_iter().map(|w| w.point).collect();
            format!("{} (grid-relative)", render_terms(&pts))
        })
    }

    fn hierarchy(&self, verb: &str, args: &[&str]) -> SessionResult<String> {
        Self::arity(verb, args, 3, 4)?;
        let n = Self::num(args[0])?;
        let (a, t) = (self.leaf(args[1])?, self.term(args[2])?);
        let regime = match args.get(3) {
            Some(g) => Regime::Grid(self.rel(g)?),
            None => Regime::Symbolic,
        };
        let cands = g_candidates(regime, &self.ctx, n, &a).map_err(domain)?;
        let mut set = g_table(regime, &self.ctx, n, &a, &t, &cands).map_err(domain)?;
        if verb == "astep" {
            set = a_successor_step(regime, &self.ctx, n, &a, &t, &set).map_err(domain)?;
        }
        Ok(if self.json() { set.to_json() } else { render_set(&set) })
    }

    fn export(&self, args: &[&str]) -> SessionResult<String> {
        Self::arity("export", args, 2, 2)?;
        let rel = self.rel(args[0])?;
        let body = match self.config.format {
            Format::Dot => to_dot(rel),
            Format::Text | Format::Json => to_json(rel),
        };
        std::fs::write(args[1], body).map_err(|e| SessionError::Domain(format!("{}: {e}", args[1])))?;
        Ok(format!("wrote {}", args[1]))
    }
}

fn render_set(set: &HierarchySet) -> String {
    let mut s = render_leaves(&set.members);
    if !set.undetermined.is_empty() {
        s.push_str(&format!(" undetermined {}", render_leaves(&set.undetermined)));
    }
    if set.sample_relative {
        s.push_str(" (sample-relative)");
    }
    s
}

/// `ε_0, …, ε_{n-1}` for a bound `ε_n` with natural `n`, otherwise nothing.
fn default_seeds(bound: &OrdTerm) -> Vec<OrdTerm> {
    let n = match bound.as_leaf() {
        Some(EpsLeaf::Eps(i)) => i.as_nat().and_then(|n| u64::try_from(n).ok()),
        _ => None,
    };
    (0..n.unwrap_or(0)).map(OrdTerm::eps).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session() -> Session {
        Session::new(ClassContext::new(), SessionConfig::default())
    }

    #[test]
    fn basic_verbs() {
        let mut s = session();
        assert_eq!(s.run_command("eval w^(eps(0))+1").unwrap().unwrap(), "eps(0)+1");
        assert_eq!(s.run_command("tset 1 eps(0) eps(0)*2+w").unwrap().unwrap(), "{eps(0)}");
        assert_eq!(s.run_command("lambda 2 eps(0)").unwrap().unwrap(), "-inf");
        assert_eq!(s.run_command("# comment").unwrap(), None);
        assert_eq!(s.run_command("declare A 2").unwrap().unwrap(), "A@2");
        assert_eq!(s.run_command("gset 2 A@2 A@2*2+1").unwrap().unwrap(), "{A@2}");
        assert_eq!(s.run_command("eta 1 eps(0) eps(0)+3").unwrap().unwrap(), "eps(0)*2");
    }

    #[test]
    fn error_codes() {
        let mut s = session();
        assert_eq!(s.run_command("frobnicate").unwrap_err().exit_code(), 2);
        assert_eq!(s.run_command("eval w^^").unwrap_err().exit_code(), 2);
        assert_eq!(s.run_command("tset 1 eps(0) eps(1)").unwrap_err().exit_code(), 1);
        assert_eq!(s.run_command("leq1 nogrid 0 1").unwrap_err().exit_code(), 1);
        let e = s.run_script("eval 1\n\neval (").unwrap_err();
        assert!(matches!(e, SessionError::AtLine { line: 3, .. }));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn grid_verbs() {
        let mut s = session();
        s.run_command("grid g eps(2)").unwrap();
        assert_eq!(s.run_command("leq1 g eps(0) eps(0)*2").unwrap().unwrap(), "true (grid-relative)");
        assert_eq!(s.run_command("leq1 g eps(0) eps(0)*2+1").unwrap().unwrap(), "false (grid-relative)");
        assert_eq!(s.run_command("mhat g eps(1)").unwrap().unwrap(), "eps(1)*2 (grid-relative)");
        assert_eq!(s.run_command("classdetect g 1").unwrap().unwrap(), "{eps(0), eps(1)} (grid-relative)");
        assert_eq!(s.run_command("astep 2 eps(1) eps(1)*2 g").unwrap().unwrap(), "{} (sample-relative)");
    }
}
