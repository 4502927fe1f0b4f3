//! First-order logic over a single binary relation symbol.

mod definable;
mod eval;
mod formula;
mod parser;
mod relativize;

pub use definable::{definable_set, w_invariant, DefinableSet, WInvariant};
pub use eval::{evaluate, Assignment, CompiledFormula};
pub use formula::{fresh_var, Formula};
pub use parser::parse;
pub use relativize::relativize;

use thiserror::Error;

use crate::poset::PosetError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("free variable `{0}` is not assigned")]
    Unassigned(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relativizing formula mentions `{0}`, which is neither a parameter nor the subject")]
    RelativizerScope(String),
    #[error("free variable `{0}` of the relativized formula is also a parameter")]
    ParameterClash(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}
