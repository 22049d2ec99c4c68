//! Terms, triple patterns, filter constraints and pattern trees, with the
//! structural measures used throughout the crate (var(P), BGP(P), O(P),
//! OPT-depth, OPT count).

mod constraint;
mod pattern;
mod term;

pub use constraint::Constraint;
pub use pattern::{OptId, Pattern};
pub use term::{Term, TriplePattern, Var, RDF_TYPE};
