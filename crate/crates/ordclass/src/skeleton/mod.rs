//! The Class(n) machinery: successor chains, `λ`, `η`, `l`, canonical
//! points, T-sets, the f/S sets and g-maps.
//!
//! Symbolic computations read `m` values from a [`ClassContext`]; grid
//! computations read `m̂` from an oracle relation. The two are never mixed
//! in one call.

mod canon;
mod context;
mod eta;
mod tset;

pub use canon::{canonical_point, gamma1, gamma1_templates, CanonicalPoint};
pub use context::{chain_down, class_level, class_succ, ClassContext, MEntry, MSource};
pub use eta::{chain_threshold, eta_compute, l_compute, p_set, pi_term, Mode};
pub use tset::{f_and_s, g_map, t_set, t_set_capped, DEFAULT_O_CAP};

use crate::oracle::OracleError;
use crate::subst::SubstError;
use crate::term::TermError;
use thiserror::Error;

/// Errors raised by skeleton computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("no known value for m({0})")]
    MissingM(String),
    #[error("level violation: {0}")]
    Level(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("symbolic and grid terms mixed in one call: {0}")]
    Mixed(String),
    #[error("O-sets did not stabilize within {cap} rounds: {}", trace.join(" -> "))]
    IterationCap { cap: usize, trace: Vec<String> },
    #[error("bad context file: {0}")]
    Format(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub type SkeletonResult<T> = Result<T, SkeletonError>;
