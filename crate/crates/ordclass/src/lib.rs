//! Symbolic workbench for the ordinal classes induced by the `≤₁` relation.
//!
//! * [`term`]: Cantor Normal Form terms over epsilon leaves and class atoms.
//! * [`subst`]: simultaneous epsilon substitution `x[f]` and map algebra.
//! * [`skeleton`]: successor chains, `λ`, `η`, `l`, canonical points, T-sets and g-maps.
//! * [`oracle`]: finite-grid `≤₁` fixed point, `m̂` and class detection.
//! * [`hierarchy`]: the `G` predicate, the `A` successor step, `S` and `M` sets.
//! * [`session`]: the command interpreter behind the `ordclass` binary.

pub mod hierarchy;
pub mod oracle;
pub mod session;
pub mod skeleton;
pub mod subst;
pub mod term;
