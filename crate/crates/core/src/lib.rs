//! Satisfiability of prenex quantified LTL under classic, behavioral and
//! weak-behavioral semantics, with finite-memory Skolem witnesses.

pub mod bits;
pub mod budget;
pub mod cli;
pub mod error;
pub mod formula;
pub mod games;
pub mod graph;
pub mod random;
pub mod skolem;
pub mod solver;
pub mod trace;
pub mod tree;
pub mod word;

pub use budget::Budget;
pub use error::{Error, Result};
