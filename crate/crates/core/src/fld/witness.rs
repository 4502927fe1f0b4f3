use serde::Serialize;

use super::{Decomposition, FldError, Mode};
use crate::logic::{relativize, CompiledFormula, Formula};
use crate::poset::{reverse, FinitePoset};

pub(crate) const SUBJECT: &str = "v";
pub(crate) const SECOND_SUBJECT: &str = "u";

pub(crate) fn param(i: usize) -> String {
    format!("w{i}")
}

/// The formulas that define a decomposition from its roots `w0..w{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFormulas {
    pub mode: Mode,
    pub index: FinitePoset,
    pub params: Vec<String>,
    pub subject: String,
    pub second_subject: String,
    /// `phi_i(w, v)`: `v` lies in block `i`.
    pub phi_i: Vec<Formula>,
    /// `epsilon(w, u, v)`: `u` and `v` lie in the same block.
    pub epsilon: Formula,
    /// The blocks partition the domain.
    pub phi_p: Formula,
    /// The blocks are ordered as the index prescribes.
    pub phi_m: Formula,
    /// `w_i` is the root of block `i`.
    pub phi_r: Vec<Formula>,
    /// Block `i` satisfies sentence `i`.
    pub phi_t: Option<Formula>,
    pub sentences: Option<Vec<Formula>>,
    pub combined: Formula,
}

/// Builds the witness formulas of `d`, optionally carrying one sentence per
/// block.
pub fn build_witness_formulas(d: &Decomposition, sentences: Option<&[Formula]>) -> Result<WitnessFormulas, FldError> {
    if let Some(ts) = sentences {
        if ts.len() != d.len() {
            return Err(FldError::SentenceCount {
                expected: d.len(),
                actual: ts.len(),
            });
        }
        if let Some((index, t)) = ts.iter().enumerate().find(|(_, t)| !t.is_sentence()) {
            return Err(FldError::OpenSentence {
                index,
                free: t.free_vars().into_iter().collect(),
            });
        }
    }
    witness_for_index(d.index(), d.mode(), sentences)
}

pub(crate) fn witness_for_index(
    index: &FinitePoset,
    mode: Mode,
    sentences: Option<&[Formula]>,
) -> Result<WitnessFormulas, FldError> {
    let n = index.len();
    let params: Vec<String> = (0..n).map(param).collect();
    let (phi_i, phi_m, phi_r) = match mode {
        Mode::Fld1 => ones_formulas(index),
        Mode::Fld0 => {
            // the fld1 formulas of the reversed index, read in the reversed order
            let (a, b, c) = ones_formulas(&reverse(index));
            (
                a.iter().map(Formula::dual).collect(),
                b.dual(),
                c.iter().map(Formula::dual).collect(),
            )
        }
    };
    let at = |f: &Formula, var: &str| f.substitute(SUBJECT, var);
    let epsilon = Formula::disjunction(
        phi_i
            .iter()
            .map(|f| at(f, SECOND_SUBJECT).and(f.clone())),
    )
    .expect("index is nonempty");
    let phi_p = Formula::forall(
        SUBJECT,
        Formula::disjunction((0..n).map(|i| {
            let others = Formula::conjunction((0..n).filter(|&j| j != i).map(|j| phi_i[j].clone().not()));
            match others {
                Some(o) => phi_i[i].clone().and(o),
                None => phi_i[i].clone(),
            }
        }))
        .expect("index is nonempty"),
    );
    let phi_t = match sentences {
        Some(ts) => Some(
            Formula::conjunction(
                ts.iter()
                    .zip(&phi_i)
                    .map(|(t, phi)| relativize(t, phi, &params, SUBJECT))
                    .collect::<Result<Vec<_>, _>>()?,
            )
            .expect("index is nonempty"),
        ),
        None => None,
    };
    let mut parts = vec![phi_p.clone(), phi_m.clone()];
    parts.extend(phi_r.iter().cloned());
    parts.extend(phi_t.clone());
    let combined = Formula::conjunction(parts).expect("nonempty");
    Ok(WitnessFormulas {
        mode,
        index: index.clone(),
        params,
        subject: SUBJECT.into(),
        second_subject: SECOND_SUBJECT.into(),
        phi_i,
        epsilon,
        phi_p,
        phi_m,
        phi_r,
        phi_t,
        sentences: sentences.map(<[Formula]>::to_vec),
        combined,
    })
}

fn ones_formulas(index: &FinitePoset) -> (Vec<Formula>, Formula, Vec<Formula>) {
    let n = index.len();
    let v = SUBJECT;
    let phi_i: Vec<Formula> = (0..n)
        .map(|i| {
            let mut f = Formula::le(v, param(i));
            for j in (0..n).filter(|&j| j != i) {
                let w = param(j);
                let (a, b) = if index.lt(j, i) {
                    (Formula::le(&w, v), Formula::eq(&w, v).not())
                } else if index.lt(i, j) {
                    (Formula::le(v, &w), Formula::eq(v, &w).not())
                } else {
                    (Formula::le(&w, v).not(), Formula::le(v, &w).not())
                };
                f = f.and(a).and(b);
            }
            f
        })
        .collect();
    let (u, at) = (SECOND_SUBJECT, |i: usize, var: &str| phi_i[i].substitute(v, var));
    let mut m = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let premise = at(i, u).and(phi_i[j].clone());
            let conclusion = if index.lt(i, j) {
                Formula::le(u, v)
            } else {
                Formula::le(u, v).not()
            };
            m.push(Formula::forall(u, Formula::forall(v, premise.implies(conclusion))));
        }
    }
    let phi_m = Formula::conjunction(m).unwrap_or_else(Formula::truth);
    let phi_r = (0..n)
        .map(|i| Formula::forall(v, phi_i[i].clone().implies(Formula::le(v, param(i)))))
        .collect();
    (phi_i, phi_m, phi_r)
}

impl WitnessFormulas {
    pub fn len(&self) -> usize {
        self.phi_i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi_i.is_empty()
    }

    pub(crate) fn inputs_with_subject(&self) -> Vec<String> {
        let mut inputs = self.params.clone();
        inputs.push(self.subject.clone());
        inputs
    }

    /// The formulas in the text grammar, keyed by name.
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            mode: self.mode,
            params: self.params.clone(),
            phi_i: self.phi_i.iter().map(Formula::to_string).collect(),
            epsilon: self.epsilon.to_string(),
            phi_p: self.phi_p.to_string(),
            phi_m: self.phi_m.to_string(),
            phi_r: self.phi_r.iter().map(Formula::to_string).collect(),
            phi_t: self.phi_t.as_ref().map(Formula::to_string),
            combined: self.combined.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub mode: Mode,
    pub params: Vec<String>,
    pub phi_i: Vec<String>,
    pub epsilon: String,
    pub phi_p: String,
    pub phi_m: String,
    pub phi_r: Vec<String>,
    pub phi_t: Option<String>,
    pub combined: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockViolation {
    pub block: usize,
    pub expected: Vec<String>,
    pub defined: Vec<String>,
}

/// Outcome of checking that the witness formulas recover `d` from its roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    /// Blocks whose defined set differs from the block.
    pub violations: Vec<BlockViolation>,
    /// The relation defined by `epsilon` is an equivalence relation.
    pub epsilon_is_equivalence: bool,
    /// Its classes, each sorted by position, in order of least position.
    pub epsilon_classes: Vec<Vec<String>>,
    /// The classes are exactly the blocks.
    pub epsilon_matches_blocks: bool,
    /// `phi_p`, `phi_m` and every `phi_r` hold at the roots.
    pub sentences_hold: bool,
}

impl BlockReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.epsilon_is_equivalence && self.epsilon_matches_blocks && self.sentences_hold
    }
}

pub fn verify_block_definability(d: &Decomposition) -> Result<BlockReport, FldError> {
    let w = build_witness_formulas(d, None)?;
    let x = d.parent();
    let n = x.len();
    let inputs = w.inputs_with_subject();
    let mut values: Vec<usize> = d.roots().to_vec();
    values.push(0);
    let last = values.len() - 1;

    let mut violations = Vec::new();
    for (i, phi) in w.phi_i.iter().enumerate() {
        let c = CompiledFormula::new(phi, &inputs)?;
        let defined: Vec<usize> = (0..n)
            .filter(|&a| {
                values[last] = a;
                c.eval(x, &values)
            })
            .collect();
        if defined != d.blocks()[i] {
            violations.push(BlockViolation {
                block: i,
                expected: d.block_names(i),
                defined: defined.iter().map(|&a| x.name(a).to_owned()).collect(),
            });
        }
    }

    let mut eps_inputs = w.params.clone();
    eps_inputs.push(w.second_subject.clone());
    eps_inputs.push(w.subject.clone());
    let eps = CompiledFormula::new(&w.epsilon, &eps_inputs)?;
    let mut vals: Vec<usize> = d.roots().to_vec();
    vals.extend([0, 0]);
    let k = vals.len();
    let mut rel = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            vals[k - 2] = a;
            vals[k - 1] = b;
            rel[a * n + b] = eps.eval(x, &vals);
        }
    }
    let r = |a: usize, b: usize| rel[a * n + b];
    let reflexive = (0..n).all(|a| r(a, a));
    let symmetric = (0..n).all(|a| (0..n).all(|b| r(a, b) == r(b, a)));
    let transitive = (0..n).all(|a| (0..n).all(|b| !r(a, b) || (0..n).all(|c| !r(b, c) || r(a, c))));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if !classes.iter().any(|c| c.contains(&a)) {
            classes.push((0..n).filter(|&b| r(a, b)).collect());
        }
    }
    let mut expected: Vec<Vec<usize>> = d.blocks().to_vec();
    expected.sort();
    let mut got = classes.clone();
    got.sort();

    let mut sentences = vec![w.phi_p.clone(), w.phi_m.clone()];
    sentences.extend(w.phi_r.iter().cloned());
    let mut sentences_hold = true;
    for s in &sentences {
        sentences_hold &= CompiledFormula::new(s, &w.params)?.eval(x, d.roots());
    }

    Ok(BlockReport {
        violations,
        epsilon_is_equivalence: reflexive && symmetric && transitive,
        epsilon_classes: classes
            .iter()
            .map(|c| c.iter().map(|&a| x.name(a).to_owned()).collect())
            .collect(),
        epsilon_matches_blocks: got == expected,
        sentences_hold,
    })
}
