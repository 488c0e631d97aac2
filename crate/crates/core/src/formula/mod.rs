//! Prenex QLTL formulas: syntax tree, parser, structural queries.

mod ast;
mod parser;

pub use ast::{
    dep, var_set, FragmentClass, FragmentTag, Matrix, QuantBlock, QuantifiedFormula, Quantifier,
    Var, VarSet,
};
pub use parser::{parse, parse_matrix};
