//! Finite-memory Skolem functions: machines, visibility checks, exact
//! validation, a bounded search oracle, and the bridge from strategy trees.

mod decompose;
mod mealy;
mod oracle;
mod validate;

pub use decompose::{decompose, tree_to_mealy};
pub use mealy::{check_conformance, MealyMachine, Mode, SkolemFamily};
pub use oracle::{enumerate_oracle, OracleOutcome, OracleReport};
pub use validate::{validate, Validation};
