use std::collections::BTreeMap;

use serde::Serialize;

use super::FinitePoset;

/// A finite injective partial function between element positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct PartialMap {
    // sorted by source, then target
    pairs: Vec<(usize, usize)>,
}

impl PartialMap {
    /// Returns `None` unless the pairs form an injective function.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Option<PartialMap> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for &(a, b) in &pairs {
            if forward.insert(a, b).is_some() || backward.insert(b, a).is_some() {
                return None;
            }
        }
        Some(PartialMap { pairs })
    }

    pub fn identity(n: usize) -> PartialMap {
        PartialMap {
            pairs: (0..n).map(|a| (a, a)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn apply(&self, a: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&a, |&(s, _)| s)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn inverse(&self) -> PartialMap {
        PartialMap::new(self.pairs.iter().map(|&(a, b)| (b, a))).expect("inverse of an injection")
    }

    /// `other` after `self`, defined where both are.
    pub fn then(&self, other: &PartialMap) -> PartialMap {
        PartialMap::new(
            self.pairs
                .iter()
                .filter_map(|&(a, b)| other.apply(b).map(|c| (a, c))),
        )
        .expect("composition of injections")
    }

    /// Union of two maps, `None` if the result is not an injection.
    pub fn union(&self, other: &PartialMap) -> Option<PartialMap> {
        PartialMap::new(self.pairs.iter().chain(&other.pairs).copied())
    }

    /// Whether the map is a partial isomorphism from `x` to `y`: for all
    /// pairs `(a, b)`, `(a', b')` we have `a <= a'` iff `b <= b'`.
    pub fn is_partial_isomorphism(&self, x: &FinitePoset, y: &FinitePoset) -> bool {
        self.pairs.iter().all(|&(a, b)| a < x.len() && b < y.len())
            && self.pairs.iter().all(|&(a, b)| {
                self.pairs
                    .iter()
                    .all(|&(a2, b2)| x.le(a, a2) == y.le(b, b2))
            })
    }

    /// Whether the map is an automorphism of `x`.
    pub fn is_automorphism(&self, x: &FinitePoset) -> bool {
        self.len() == x.len() && self.is_partial_isomorphism(x, x)
    }

    /// Names of the pairs.
    pub fn named(&self, x: &FinitePoset, y: &FinitePoset) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(a, b)| (x.name(a).to_owned(), y.name(b).to_owned()))
            .collect()
    }

    /// Shifts sources by `source_offset` and targets by `target_offset`;
    /// used to lift a summand map into a lexicographic sum.
    pub fn shifted(&self, source_offset: usize, target_offset: usize) -> PartialMap {
        PartialMap {
            pairs: self
                .pairs
                .iter()
                .map(|&(a, b)| (a + source_offset, b + target_offset))
                .collect(),
        }
    }
}
