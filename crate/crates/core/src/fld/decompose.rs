use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FldError;
use crate::poset::{numbered, FinitePoset, PosetError, PosetJson};

/// Largest domain for which set partitions are enumerated.
pub const DEFAULT_PARTITION_BUDGET: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every block has a greatest element.
    Fld1,
    /// Every block has a least element.
    Fld0,
}

impl Mode {
    pub fn dual(self) -> Mode {
        match self {
            Mode::Fld1 => Mode::Fld0,
            Mode::Fld0 => Mode::Fld1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Fld1 => "fld1",
            Mode::Fld0 => "fld0",
        }
    }

    fn root(self, block: &FinitePoset) -> Option<usize> {
        match self {
            Mode::Fld1 => block.max(),
            Mode::Fld0 => block.min(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "fld1" => Ok(Mode::Fld1),
            "fld0" => Ok(Mode::Fld0),
            other => Err(format!("unknown mode `{other}` (expected fld1 or fld0)")),
        }
    }
}

/// A partition of `parent` into order-autonomous blocks, each with a root.
///
/// Index element `i` (named `"i"`) carries block `blocks[i]`. Blocks are
/// numbered by their least element name, so the numbering is a function of
/// the partition alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    parent: FinitePoset,
    index: FinitePoset,
    blocks: Vec<Vec<usize>>,
    roots: Vec<usize>,
    mode: Mode,
}

impl Decomposition {
    /// Validates a block partition and derives the index order and roots.
    pub fn from_blocks(parent: &FinitePoset, blocks: Vec<Vec<usize>>, mode: Mode) -> Result<Decomposition, FldError> {
        let n = parent.len();
        let mut owner = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(FldError::Invalid(format!("block {i} is empty")));
            }
            for &a in b {
                if a >= n {
                    return Err(FldError::Invalid(format!("element #{a} out of range")));
                }
                if owner[a] != usize::MAX {
                    return Err(FldError::Invalid(format!("`{}` lies in two blocks", parent.name(a))));
                }
                owner[a] = i;
            }
        }
        if let Some(a) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(FldError::Invalid(format!("`{}` lies in no block", parent.name(a))));
        }
        for b in &blocks {
            if !is_autonomous(parent, b) {
                let names: Vec<&str> = b.iter().map(|&a| parent.name(a)).collect();
                return Err(FldError::Invalid(format!("block {{{}}} is not autonomous", names.join(","))));
            }
        }
        Decomposition::build(parent, blocks, mode).ok_or_else(|| {
            FldError::Invalid(format!("some block has no {}", if mode == Mode::Fld1 { "maximum" } else { "minimum" }))
        })
    }

    /// Sorts the blocks, builds the quotient index and finds the roots.
    /// Returns `None` when some block lacks a root. The blocks must already
    /// be an autonomous partition.
    fn build(parent: &FinitePoset, mut blocks: Vec<Vec<usize>>, mode: Mode) -> Option<Decomposition> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by(|p, q| least_name(parent, p).cmp(least_name(parent, q)));
        let mut roots = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let sub = parent.induced(b).expect("blocks are nonempty");
            roots.push(b[mode.root(&sub)?]);
        }
        let m = blocks.len();
        let mut le = vec![false; m * m];
        for i in 0..m {
            for j in 0..m {
                le[i * m + j] = i == j || parent.le(blocks[i][0], blocks[j][0]);
            }
        }
        let index = FinitePoset::from_matrix(numbered(m), le).expect("quotient of an autonomous partition");
        Some(Decomposition {
            parent: parent.clone(),
            index,
            blocks,
            roots,
            mode,
        })
    }

    pub fn parent(&self) -> &FinitePoset {
        &self.parent
    }

    pub fn index(&self) -> &FinitePoset {
        &self.index
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The summand `X_i` as an induced subposet.
    pub fn block_poset(&self, i: usize) -> FinitePoset {
        self.parent.induced(&self.blocks[i]).expect("blocks are nonempty")
    }

    pub fn block_names(&self, i: usize) -> Vec<String> {
        self.blocks[i].iter().map(|&a| self.parent.name(a).to_owned()).collect()
    }

    /// Sorted element names of each block; the identity of the decomposition.
    pub fn partition_key(&self) -> Vec<Vec<String>> {
        (0..self.len())
            .map(|i| {
                let mut names = self.block_names(i);
                names.sort();
                names
            })
            .collect()
    }

    /// `lex_sum(index, blocks)`.
    pub fn resum(&self) -> FinitePoset {
        let parts: Vec<FinitePoset> = (0..self.len()).map(|i| self.block_poset(i)).collect();
        crate::poset::lex_sum(&self.index, &parts).expect("one summand per index element")
    }

    /// The same blocks read as a decomposition of the reversed order, with
    /// the dual mode.
    pub fn reversed(&self) -> Decomposition {
        let parent = crate::poset::reverse(&self.parent);
        Decomposition::build(&parent, self.blocks.clone(), self.mode.dual()).expect("roots dualize")
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            index: PosetJson::from(&self.index),
            blocks: (0..self.len())
                .map(|i| (self.index.name(i).to_owned(), self.block_names(i)))
                .collect(),
            roots: (0..self.len())
                .map(|i| (self.index.name(i).to_owned(), self.parent.name(self.roots[i]).to_owned()))
                .collect(),
            mode: self.mode,
        }
    }
}

/// Wire format of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub index: PosetJson,
    pub blocks: BTreeMap<String, Vec<String>>,
    pub roots: BTreeMap<String, String>,
    pub mode: Mode,
}

fn least_name<'a>(parent: &'a FinitePoset, block: &[usize]) -> &'a str {
    block.iter().map(|&a| parent.name(a)).min().expect("blocks are nonempty")
}

/// Every outside element relates to all of `block` in the same way.
pub(crate) fn is_autonomous(x: &FinitePoset, block: &[usize]) -> bool {
    let mut inside = vec![false; x.len()];
    for &a in block {
        inside[a] = true;
    }
    let first = block[0];
    (0..x.len()).filter(|&o| !inside[o]).all(|o| {
        let below = x.le(o, first);
        let above = x.le(first, o);
        block.iter().all(|&a| x.le(o, a) == below && x.le(a, o) == above)
    })
}

/// All partitions of the domain into autonomous blocks accepted by `keep`,
/// each as a list of blocks of positions.
pub fn autonomous_partitions(
    x: &FinitePoset,
    budget: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Result<Vec<Vec<Vec<usize>>>, PosetError> {
    let n = x.len();
    if n > budget || n >= usize::BITS as usize {
        return Err(PosetError::BudgetExceeded {
            what: "partition enumeration",
            size: n,
            budget,
        });
    }
    let full = (1usize << n) - 1;
    let members = |mask: usize| -> Vec<usize> { (0..n).filter(|&a| mask >> a & 1 == 1).collect() };
    let usable: Vec<bool> = (0..=full)
        .map(|mask| {
            if mask == 0 {
                return false;
            }
            let b = members(mask);
            is_autonomous(x, &b) && keep(&b)
        })
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(full, &usable, &mut current, &mut out);
    Ok(out
        .into_iter()
        .map(|masks: Vec<usize>| masks.into_iter().map(members).collect())
        .collect())
}

fn extend(remaining: usize, usable: &[bool], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    let low = remaining & remaining.wrapping_neg();
    let rest = remaining & !low;
    // every subset of `rest`, joined with the lowest remaining element
    let mut sub = rest;
    loop {
        let block = sub | low;
        if usable[block] {
            current.push(block);
            extend(remaining & !block, usable, current, out);
            current.pop();
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
}

/// All decompositions of `x` in the given mode, sorted by block count and
/// then by the sorted block name lists.
pub fn enumerate_decompositions(x: &FinitePoset, mode: Mode) -> Result<Vec<Decomposition>, FldError> {
    enumerate_decompositions_with_budget(x, mode, DEFAULT_PARTITION_BUDGET)
}

pub fn enumerate_decompositions_with_budget(
    x: &FinitePoset,
    mode: Mode,
    budget: usize,
) -> Result<Vec<Decomposition>, FldError> {
    let partitions = autonomous_partitions(x, budget, |b| {
        let sub = x.induced(b).expect("nonempty");
        mode.root(&sub).is_some()
    })?;
    let mut out: Vec<(usize, Vec<Vec<String>>, Decomposition)> = partitions
        .into_iter()
        .map(|blocks| {
            let d = Decomposition::build(x, blocks, mode).expect("blocks were filtered for roots");
            (d.len(), d.partition_key(), d)
        })
        .collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, d)| d).collect())
}
