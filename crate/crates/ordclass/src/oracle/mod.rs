//! Finite-grid `≤₁` oracle: grids, the relation, `m̂`, class detection,
//! exports and an on-disk cache.

mod export;
mod fixpoint;
mod grid;

pub use export::{cache_key, load_or_compute, to_dot, to_json, CACHE_ENV};
pub use fixpoint::{leq1_fixpoint, ClassWitness, LawViolation, Leq1Relation, DEFAULT_SUBSET_CAP};
pub use grid::{additive_parts, build_grid, tower_over, Grid, GridOps, DEFAULT_GRID_CAP};

use crate::term::TermError;
use thiserror::Error;

/// Errors raised by the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grid needs concrete terms, got `{0}`")]
    NotConcrete(String),
    #[error("grid exceeds the cap of {cap} points")]
    CapExceeded { cap: usize },
    #[error("`{0}` is not a grid point")]
    NotInGrid(String),
    #[error("subset cap must be at least 2, got {0}")]
    SubsetCap(usize),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

pub type OracleResult<T> = Result<T, OracleError>;
