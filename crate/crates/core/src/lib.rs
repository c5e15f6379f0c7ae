//! Saturation-based abduction of ground implicates over a set of abducible
//! constants, for theories presented as sets of equational clauses.

pub mod abduction;
pub mod abstraction;
pub mod oracle;
pub mod ordering;
pub mod problem;
pub mod saturation;
pub mod subsumption;
pub mod term;
pub mod unification;

pub use term::{Abducibles, Apply, Clause, Literal, Signature, Substitution, Symbol, Term, Var, VarClass};
