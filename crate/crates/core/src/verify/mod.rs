//! Seeded, deterministic verification suites over small posets.
//!
//! Every suite enumerates (or, where marked, samples with a fixed seed) a
//! family of instances, checks one structural property on each, and stops
//! at the first failure, which is reported as a counterexample. Instances
//! are visited in increasing size, so the first failure is a smallest one.

mod corpus;
mod suites;

pub use corpus::{phi_corpus, psi_corpus, sentence_corpus, PHI_TEXTS, PSI_TEXTS, SENTENCE_TEXTS};
pub use suites::{chain_criterion, equivalence_classes};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::poset::PosetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Relativization,
    WInvariance,
    PiUnion,
    SumComposition,
    Associativity,
    ClosureOnestep,
    BlockDefinability,
    Transfer,
    ClassChain,
    EfChains,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Relativization,
        Suite::WInvariance,
        Suite::PiUnion,
        Suite::SumComposition,
        Suite::Associativity,
        Suite::ClosureOnestep,
        Suite::BlockDefinability,
        Suite::Transfer,
        Suite::ClassChain,
        Suite::EfChains,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relativization => "relativization",
            Suite::WInvariance => "w-invariance",
            Suite::PiUnion => "pi-union",
            Suite::SumComposition => "sum-composition",
            Suite::Associativity => "associativity",
            Suite::ClosureOnestep => "closure-onestep",
            Suite::BlockDefinability => "block-definability",
            Suite::Transfer => "transfer",
            Suite::ClassChain => "class-chain",
            Suite::EfChains => "ef-chains",
        }
    }

    /// Size bound used when none is given.
    pub fn default_bound(self) -> usize {
        match self {
            Suite::Relativization | Suite::WInvariance | Suite::PiUnion | Suite::Transfer => 4,
            Suite::SumComposition | Suite::Associativity => 3,
            Suite::ClosureOnestep | Suite::BlockDefinability | Suite::ClassChain => 5,
            Suite::EfChains => 8,
        }
    }

    /// Largest accepted size bound.
    pub fn max_bound(self) -> usize {
        match self {
            Suite::Relativization | Suite::WInvariance | Suite::SumComposition | Suite::Associativity => 5,
            Suite::PiUnion | Suite::Transfer | Suite::BlockDefinability => 6,
            Suite::ClosureOnestep => 7,
            Suite::ClassChain => 8,
            Suite::EfChains => 12,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Parameters shared by all suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub bound: usize,
    pub seed: u64,
    /// Largest number of game rounds, for the game-based suites.
    pub max_k: usize,
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub bound: usize,
    pub seed: u64,
    pub checks: u64,
    pub passed: bool,
    pub counterexample: Option<Value>,
    /// Free-form notes on coverage, e.g. how many samples were drawn.
    pub notes: Vec<String>,
}

/// Runs one suite.
pub fn run_suite(suite: Suite, config: SuiteConfig) -> Result<SuiteReport, PosetError> {
    if config.bound == 0 || config.bound > suite.max_bound() {
        return Err(PosetError::BudgetExceeded {
            what: "suite size bound",
            size: config.bound,
            budget: suite.max_bound(),
        });
    }
    let mut out = suites::Outcome::default();
    match suite {
        Suite::Relativization => suites::relativization(config, &mut out)?,
        Suite::WInvariance => suites::w_invariance(config, &mut out)?,
        Suite::PiUnion => suites::pi_union(config, &mut out)?,
        Suite::SumComposition => suites::sum_composition(config, &mut out)?,
        Suite::Associativity => suites::associativity(config, &mut out)?,
        Suite::ClosureOnestep => suites::closure_onestep(config, &mut out)?,
        Suite::BlockDefinability => suites::block_definability(config, &mut out)?,
        Suite::Transfer => suites::transfer(config, &mut out)?,
        Suite::ClassChain => suites::class_chain(config, &mut out)?,
        Suite::EfChains => suites::ef_chains(config, &mut out)?,
    }
    Ok(SuiteReport {
        suite,
        bound: config.bound,
        seed: config.seed,
        checks: out.checks,
        passed: out.counterexample.is_none(),
        counterexample: out.counterexample,
        notes: out.notes,
    })
}
