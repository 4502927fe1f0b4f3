//! Finite lexicographic decompositions `X = Σ_I X_i` whose blocks all have a
//! greatest element (`fld1`) or a least element (`fld0`), together with the
//! first-order formulas that recover the blocks from their roots.

mod decompose;
mod transfer;
mod witness;

pub use decompose::{
    autonomous_partitions, enumerate_decompositions, enumerate_decompositions_with_budget,
    Decomposition, DecompositionJson, Mode, DEFAULT_PARTITION_BUDGET,
};
pub use transfer::{transfer_decomposition, transfer_decomposition_with_budget, Transfer, DEFAULT_TUPLE_BUDGET};
pub use witness::{
    build_witness_formulas, verify_block_definability, BlockReport, BlockViolation, WitnessFormulas,
};

use thiserror::Error;

use crate::logic::FormulaError;
use crate::poset::PosetError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FldError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("expected {expected} block sentences, got {actual}")]
    SentenceCount { expected: usize, actual: usize },
    #[error("block sentence {index} has free variables: {}", .free.join(", "))]
    OpenSentence { index: usize, free: Vec<String> },
    #[error("not a decomposition: {0}")]
    Invalid(String),
}
