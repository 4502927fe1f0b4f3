//! Finite partial orders and the constructions used to build them.
//!
//! A [`FinitePoset`] is a nonempty list of named elements together with a
//! reflexive, antisymmetric and transitive relation stored as a dense
//! matrix. Operations address elements by their position in the list;
//! names are only used at the boundary (JSON, formulas, reports).

mod canon;
mod catalog;
mod json;
mod map;
mod ops;

pub use canon::{
    automorphisms, canonical_form, canonical_form_with_budget, isomorphic, CanonicalForm,
    DEFAULT_CANON_BUDGET,
};
pub use catalog::{posets_of_size, posets_up_to, CATALOG_BUDGET};
pub use json::PosetJson;
pub use map::PartialMap;
pub use ops::{
    add_bottom, add_top, direct_product, disjoint_union, lex_sum, lex_sum_map, reverse, rooted,
};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("a poset needs at least one element")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}` in relation")]
    UnknownElement(String),
    #[error("antisymmetry violation: cycle {}", .0.join(" <= "))]
    AntisymmetryViolation(Vec<String>),
    #[error("relation matrix is not a partial order: {0}")]
    NotAPartialOrder(&'static str),
    #[error("no summand given for index element `{0}`")]
    MissingSummand(String),
    #[error("expected {expected} summands, got {actual}")]
    SummandCount { expected: usize, actual: usize },
    #[error("operation needs at least one part")]
    NoParts,
    #[error("{what}: size {size} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        size: usize,
        budget: usize,
    },
    #[error("invalid poset JSON: {0}")]
    Json(String),
}

/// A finite partial order on named elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    names: Vec<String>,
    // le[a * n + b] <=> a <= b
    le: Vec<bool>,
}

impl FinitePoset {
    /// Builds a poset from an arbitrary relation: the reflexive-transitive
    /// closure is taken and the result is rejected if it contains a cycle.
    pub fn from_relation<S: AsRef<str>>(
        elements: &[S],
        relation: &[(S, S)],
    ) -> Result<Self, PosetError> {
        let names: Vec<String> = elements.iter().map(|e| e.as_ref().to_owned()).collect();
        check_names(&names)?;
        let n = names.len();
        let position = |name: &str| {
            names
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| PosetError::UnknownElement(name.to_owned()))
        };
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (a, b) in relation {
            let (a, b) = (position(a.as_ref())?, position(b.as_ref())?);
            le[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if le[a * n + b] && le[b * n + a] {
                    let cycle = find_cycle(&names, relation, a, b);
                    return Err(PosetError::AntisymmetryViolation(cycle));
                }
            }
        }
        Ok(FinitePoset { names, le })
    }

    /// Builds a poset from a full `n * n` relation matrix, checking every
    /// partial-order axiom.
    pub fn from_matrix(names: Vec<String>, le: Vec<bool>) -> Result<Self, PosetError> {
        check_names(&names)?;
        let n = names.len();
        if le.len() != n * n {
            return Err(PosetError::NotAPartialOrder("matrix has the wrong dimensions"));
        }
        let p = FinitePoset { names, le };
        p.check_axioms()?;
        Ok(p)
    }

    /// Unchecked constructor for internal builders whose output is a poset
    /// by construction.
    pub(crate) fn from_parts(names: Vec<String>, le: Vec<bool>) -> Self {
        debug_assert_eq!(le.len(), names.len() * names.len());
        FinitePoset { names, le }
    }

    /// Checks the partial-order axioms on the stored matrix.
    pub fn is_valid(&self) -> bool {
        self.check_axioms().is_ok()
    }

    fn check_axioms(&self) -> Result<(), PosetError> {
        let n = self.len();
        for a in 0..n {
            if !self.le(a, a) {
                return Err(PosetError::NotAPartialOrder("not reflexive"));
            }
            for b in 0..n {
                if a != b && self.le(a, b) && self.le(b, a) {
                    return Err(PosetError::NotAPartialOrder("not antisymmetric"));
                }
                if self.le(a, b) {
                    for c in 0..n {
                        if self.le(b, c) && !self.le(a, c) {
                            return Err(PosetError::NotAPartialOrder("not transitive"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        assert!(n > 0, "chain needs at least one element");
        let mut le = vec![false; n * n];
        for a in 0..n {
            for b in a..n {
                le[a * n + b] = true;
            }
        }
        FinitePoset::from_parts(numbered(n), le)
    }

    /// The `n`-element antichain.
    pub fn antichain(n: usize) -> Self {
        assert!(n > 0, "antichain needs at least one element");
        let mut le = vec![false; n * n];
        for a in 0..n {
            le[a * n + a] = true;
        }
        FinitePoset::from_parts(numbered(n), le)
    }

    pub fn singleton() -> Self {
        FinitePoset::chain(1)
    }

    /// The four-element poset with Hasse diagram N: a < c, b < c, b < d.
    pub fn n_poset() -> Self {
        FinitePoset::from_relation(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("b", "c"), ("b", "d")],
        )
        .expect("N is a poset")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|e| e == name)
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.names.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    #[inline]
    pub fn incomparable(&self, a: usize, b: usize) -> bool {
        !self.comparable(a, b)
    }

    /// All pairs `(a, b)` with `a <= b`, by position.
    pub fn relation(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |a| (0..n).filter(move |&b| self.le(a, b)).map(move |b| (a, b)))
    }

    /// Number of elements strictly below `a`.
    pub fn down_degree(&self, a: usize) -> usize {
        (0..self.len()).filter(|&b| self.lt(b, a)).count()
    }

    /// Number of elements strictly above `a`.
    pub fn up_degree(&self, a: usize) -> usize {
        (0..self.len()).filter(|&b| self.lt(a, b)).count()
    }

    /// Maximal elements.
    pub fn maxima(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| !self.lt(a, b)))
            .collect()
    }

    /// Minimal elements.
    pub fn minima(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| !self.lt(b, a)))
            .collect()
    }

    /// The greatest element, if one exists.
    pub fn max(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.le(b, a)))
    }

    /// The least element, if one exists.
    pub fn min(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.le(a, b)))
    }

    pub fn has_max(&self) -> bool {
        self.max().is_some()
    }

    pub fn has_min(&self) -> bool {
        self.min().is_some()
    }

    /// The substructure on `subset` (positions, kept in the given order).
    pub fn induced(&self, subset: &[usize]) -> Result<FinitePoset, PosetError> {
        if subset.is_empty() {
            return Err(PosetError::Empty);
        }
        let m = subset.len();
        let mut le = vec![false; m * m];
        for (i, &a) in subset.iter().enumerate() {
            for (j, &b) in subset.iter().enumerate() {
                le[i * m + j] = self.le(a, b);
            }
        }
        let names = subset.iter().map(|&a| self.names[a].clone()).collect();
        FinitePoset::from_matrix(names, le)
    }

    /// Same order, elements renamed position by position.
    pub fn rename(&self, names: Vec<String>) -> Result<FinitePoset, PosetError> {
        if names.len() != self.len() {
            return Err(PosetError::NotAPartialOrder("rename changes the element count"));
        }
        check_names(&names)?;
        Ok(FinitePoset {
            names,
            le: self.le.clone(),
        })
    }

    /// Applies a permutation of positions: element `a` of `self` becomes
    /// element `perm[a]` of the result, keeping its name.
    pub fn permute(&self, perm: &[usize]) -> FinitePoset {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let mut names = vec![String::new(); n];
        let mut le = vec![false; n * n];
        for a in 0..n {
            names[perm[a]] = self.names[a].clone();
            for b in 0..n {
                le[perm[a] * n + perm[b]] = self.le(a, b);
            }
        }
        FinitePoset::from_parts(names, le)
    }

    /// Whether the order is connected (its comparability graph is).
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected components of the comparability graph, each sorted by position.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(a) = stack.pop() {
                members.push(a);
                for b in 0..n {
                    if comp[b] == usize::MAX && self.comparable(a, b) {
                        comp[b] = id;
                        stack.push(b);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .relation()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| format!("{}<{}", self.names[a], self.names[b]))
            .collect();
        write!(f, "Poset{{{}; {}}}", self.names.join(","), pairs.join(" "))
    }
}

pub(crate) fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn check_names(names: &[String]) -> Result<(), PosetError> {
    if names.is_empty() {
        return Err(PosetError::Empty);
    }
    let mut seen = std::collections::HashSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(PosetError::DuplicateElement(name.clone()));
        }
    }
    Ok(())
}

// Finds a concrete cycle through `a` and `b` in the input relation, for
// error reporting.
fn find_cycle<S: AsRef<str>>(names: &[String], relation: &[(S, S)], a: usize, b: usize) -> Vec<String> {
    let n = names.len();
    let idx = |s: &str| names.iter().position(|e| e == s).unwrap();
    let mut succ = vec![Vec::new(); n];
    for (x, y) in relation {
        let (x, y) = (idx(x.as_ref()), idx(y.as_ref()));
        if x != y {
            succ[x].push(y);
        }
    }
    let path = |from: usize, to: usize| -> Vec<usize> {
        let mut prev = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::from([from]);
        prev[from] = from;
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &y in &succ[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut p = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            p.push(cur);
        }
        p.reverse();
        p
    };
    let mut cycle = path(a, b);
    cycle.extend(path(b, a).into_iter().skip(1));
    cycle.into_iter().map(|i| names[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_is_taken() {
        let p = FinitePoset::from_relation(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.le(0, 2));
        assert!(p.le(1, 1));
        assert!(!p.le(2, 0));
    }

    #[test]
    fn cycle_is_rejected_and_named() {
        let err =
            FinitePoset::from_relation(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")])
                .unwrap_err();
        match err {
            PosetError::AntisymmetryViolation(cycle) => {
                assert_eq!(cycle, vec!["a", "b", "c", "a"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constructor_errors() {
        let empty: [&str; 0] = [];
        assert_eq!(FinitePoset::from_relation(&empty, &[]), Err(PosetError::Empty));
        assert_eq!(
            FinitePoset::from_relation(&["a", "a"], &[]),
            Err(PosetError::DuplicateElement("a".into()))
        );
        assert_eq!(
            FinitePoset::from_relation(&["a"], &[("a", "z")]),
            Err(PosetError::UnknownElement("z".into()))
        );
        assert!(FinitePoset::from_matrix(vec!["a".into(), "b".into()], vec![true, true, false, false]).is_err());
    }

    #[test]
    fn extremal_elements() {
        let n = FinitePoset::n_poset();
        let maxima: Vec<&str> = n.maxima().into_iter().map(|a| n.name(a)).collect();
        assert_eq!(maxima, vec!["c", "d"]);
        let minima: Vec<&str> = n.minima().into_iter().map(|a| n.name(a)).collect();
        assert_eq!(minima, vec!["a", "b"]);
        assert!(!n.has_max() && !n.has_min());

        assert!(!FinitePoset::antichain(2).has_max());
        let v_top = reverse(&rooted(&FinitePoset::antichain(2)));
        assert!(v_top.has_max());
        assert_eq!(FinitePoset::chain(3).max(), Some(2));
    }

    #[test]
    fn components_of_disjoint_chains() {
        let p = disjoint_union(&[FinitePoset::chain(2), FinitePoset::chain(2)]).unwrap();
        assert_eq!(p.components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(FinitePoset::n_poset().is_connected());
    }
}
