use serde::Serialize;

use super::decompose::is_autonomous;
use super::witness::WitnessFormulas;
use super::{Decomposition, FldError, Mode};
use crate::logic::CompiledFormula;
use crate::poset::{FinitePoset, PosetError};

/// Largest number of root tuples `|Y|^n` searched.
pub const DEFAULT_TUPLE_BUDGET: usize = 1 << 24;

/// A root tuple of `Y` satisfying the combined witness formula, and the
/// blocks it defines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub roots: Vec<usize>,
    /// `D_{phi_i(roots, v), Y}` for each `i`.
    pub blocks: Vec<Vec<usize>>,
    /// The blocks partition `Y` and are the classes of `epsilon`.
    pub partition: bool,
    /// `Y` is the sum of the blocks over the index with `roots[i]` the
    /// root of block `i`.
    pub sum: bool,
    /// Block `i` satisfies sentence `i` (true when no sentences were given).
    pub sentences: bool,
    /// The resulting decomposition when the blocks form one.
    pub decomposition: Option<Decomposition>,
}

impl Transfer {
    pub fn passed(&self) -> bool {
        self.partition && self.sum && self.sentences && self.decomposition.is_some()
    }

    pub fn to_json(&self, y: &FinitePoset) -> TransferJson {
        let names = |v: &[usize]| v.iter().map(|&a| y.name(a).to_owned()).collect::<Vec<_>>();
        TransferJson {
            roots: names(&self.roots),
            blocks: self.blocks.iter().map(|b| names(b)).collect(),
            partition: self.partition,
            sum: self.sum,
            sentences: self.sentences,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferJson {
    pub roots: Vec<String>,
    pub blocks: Vec<Vec<String>>,
    pub partition: bool,
    pub sum: bool,
    pub sentences: bool,
}

/// Searches `Y^n` in lexicographic order for the first root tuple
/// satisfying `w.combined` and checks what it defines.
pub fn transfer_decomposition(y: &FinitePoset, w: &WitnessFormulas) -> Result<Option<Transfer>, FldError> {
    transfer_decomposition_with_budget(y, w, DEFAULT_TUPLE_BUDGET)
}

pub fn transfer_decomposition_with_budget(
    y: &FinitePoset,
    w: &WitnessFormulas,
    budget: usize,
) -> Result<Option<Transfer>, FldError> {
    let n = w.len();
    let tuples = (y.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if tuples > budget as u128 {
        return Err(PosetError::BudgetExceeded {
            what: "root tuple search",
            size: tuples.min(usize::MAX as u128) as usize,
            budget,
        }
        .into());
    }
    let combined = CompiledFormula::new(&w.combined, &w.params)?;
    let mut tuple = vec![0usize; n];
    loop {
        if combined.eval(y, &tuple) {
            return Ok(Some(check(y, w, &tuple)?));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < y.len() {
                break;
            }
            tuple[k] = 0;
        }
    }
}

fn check(y: &FinitePoset, w: &WitnessFormulas, roots: &[usize]) -> Result<Transfer, FldError> {
    let m = y.len();
    let inputs = w.inputs_with_subject();
    let mut values = roots.to_vec();
    values.push(0);
    let last = values.len() - 1;
    let mut blocks = Vec::with_capacity(w.len());
    for phi in &w.phi_i {
        let c = CompiledFormula::new(phi, &inputs)?;
        blocks.push(
            (0..m)
                .filter(|&a| {
                    values[last] = a;
                    c.eval(y, &values)
                })
                .collect::<Vec<usize>>(),
        );
    }

    let mut owner = vec![Vec::new(); m];
    for (i, b) in blocks.iter().enumerate() {
        for &a in b {
            owner[a].push(i);
        }
    }
    let mut partition = owner.iter().all(|o| o.len() == 1) && blocks.iter().all(|b| !b.is_empty());
    if partition {
        let mut eps_inputs = w.params.clone();
        eps_inputs.push(w.second_subject.clone());
        eps_inputs.push(w.subject.clone());
        let eps = CompiledFormula::new(&w.epsilon, &eps_inputs)?;
        let mut vals = roots.to_vec();
        vals.extend([0, 0]);
        let k = vals.len();
        'outer: for a in 0..m {
            for b in 0..m {
                vals[k - 2] = a;
                vals[k - 1] = b;
                if eps.eval(y, &vals) != (owner[a][0] == owner[b][0]) {
                    partition = false;
                    break 'outer;
                }
            }
        }
    }

    let mut sum = partition;
    if partition {
        for a in 0..m {
            for b in 0..m {
                let (i, j) = (owner[a][0], owner[b][0]);
                if i != j && y.le(a, b) != w.index.lt(i, j) {
                    sum = false;
                }
            }
        }
        for (i, &r) in roots.iter().enumerate() {
            let rooted = blocks[i].contains(&r)
                && blocks[i].iter().all(|&a| match w.mode {
                    Mode::Fld1 => y.le(a, r),
                    Mode::Fld0 => y.le(r, a),
                });
            sum &= rooted && is_autonomous(y, &blocks[i]);
        }
    }

    let mut sentences = true;
    if let (Some(ts), true) = (&w.sentences, partition) {
        for (t, b) in ts.iter().zip(&blocks) {
            let sub = y.induced(b)?;
            sentences &= CompiledFormula::new(t, &[])?.eval(&sub, &[]);
        }
    }

    let decomposition = if partition && sum {
        let d = Decomposition::from_blocks(y, blocks.clone(), w.mode)?;
        // block numbering of the result follows names, so compare via roots
        let same_shape = (0..d.len()).all(|i| {
            let src = blocks.iter().position(|b| b.contains(&d.blocks()[i][0])).expect("partition");
            (0..d.len()).all(|j| {
                let tgt = blocks.iter().position(|b| b.contains(&d.blocks()[j][0])).expect("partition");
                d.index().le(i, j) == w.index.le(src, tgt)
            })
        });
        same_shape.then_some(d)
    } else {
        None
    };

    Ok(Transfer {
        roots: roots.to_vec(),
        blocks,
        partition,
        sum,
        sentences,
        decomposition,
    })
}
