//! Canonical forms and automorphisms by pruned permutation search.
//!
//! Elements are first coloured by an isomorphism-invariant refinement that
//! starts from (strict down-degree, strict up-degree) and repeatedly splits
//! colours by the colours of strict lower and upper neighbours. Only
//! permutations that lay the colour classes out in colour order are
//! searched; the canonical code is the lexicographically least encoding
//! among them. Incomparable twins (elements with identical relations to
//! everything else) are interchangeable, so only one of them is tried at
//! each search level.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FinitePoset, PartialMap, PosetError};

/// Largest poset `canonical_form` accepts by default.
pub const DEFAULT_CANON_BUDGET: usize = 10;

/// An isomorphism-type identifier: equal for exactly the isomorphic posets.
///
/// The code lists, for each position `p > 0` and each earlier position
/// `q < p`, the bits `q <= p` and `p <= q` of the order matrix under the
/// chosen element ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub size: usize,
    pub code: String,
}

impl CanonicalForm {
    /// Rebuilds a representative poset on elements `0..size`.
    pub fn to_poset(&self) -> FinitePoset {
        FinitePoset::from_parts(super::numbered(self.size), self.matrix())
    }

    fn matrix(&self) -> Vec<bool> {
        let n = self.size;
        let bits = self.code.as_bytes();
        let mut le = vec![false; n * n];
        let mut k = 0;
        for p in 0..n {
            le[p * n + p] = true;
            for q in 0..p {
                le[q * n + p] = bits[k] == b'1';
                le[p * n + q] = bits[k + 1] == b'1';
                k += 2;
            }
        }
        le
    }

    /// Parses the `size:bits` rendering produced by `Display`.
    pub fn parse(text: &str) -> Option<CanonicalForm> {
        let (size, code) = text.split_once(':')?;
        let size: usize = size.parse().ok()?;
        if size == 0
            || code.len() != size * (size - 1)
            || !code.bytes().all(|b| b == b'0' || b == b'1')
        {
            return None;
        }
        let form = CanonicalForm {
            size,
            code: code.to_owned(),
        };
        FinitePoset::from_matrix(super::numbered(size), form.matrix()).ok()?;
        Some(form)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.size, self.code)
    }
}

/// Canonical form with the default size budget.
pub fn canonical_form(x: &FinitePoset) -> Result<CanonicalForm, PosetError> {
    canonical_form_with_budget(x, DEFAULT_CANON_BUDGET)
}

pub fn canonical_form_with_budget(
    x: &FinitePoset,
    budget: usize,
) -> Result<CanonicalForm, PosetError> {
    let n = x.len();
    if n > budget {
        return Err(PosetError::BudgetExceeded {
            what: "canonical form",
            size: n,
            budget,
        });
    }
    let colours = refine_colours(x);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| colours[a]);
    let slot_colour: Vec<usize> = order.iter().map(|&a| colours[a]).collect();
    let twins = twin_classes(x);

    let mut search = Search {
        x,
        colours: &colours,
        slot_colour: &slot_colour,
        twins: &twins,
        placed: Vec::with_capacity(n),
        used: vec![false; n],
        code: Vec::with_capacity(n * n),
        best: None,
    };
    search.run();
    let best = search.best.expect("at least one permutation");
    Ok(CanonicalForm {
        size: n,
        code: best.into_iter().map(|b| if b { '1' } else { '0' }).collect(),
    })
}

struct Search<'a> {
    x: &'a FinitePoset,
    colours: &'a [usize],
    slot_colour: &'a [usize],
    twins: &'a [usize],
    placed: Vec<usize>,
    used: Vec<bool>,
    code: Vec<bool>,
    best: Option<Vec<bool>>,
}

impl Search<'_> {
    fn run(&mut self) {
        let p = self.placed.len();
        let n = self.x.len();
        if p == n {
            if self.best.as_ref().is_none_or(|best| self.code < *best) {
                self.best = Some(self.code.clone());
            }
            return;
        }
        let mut tried_twins: Vec<usize> = Vec::new();
        for a in 0..n {
            if self.used[a] || self.colours[a] != self.slot_colour[p] {
                continue;
            }
            if tried_twins.contains(&self.twins[a]) {
                continue;
            }
            tried_twins.push(self.twins[a]);

            let start = self.code.len();
            for &q in &self.placed {
                self.code.push(self.x.le(q, a));
                self.code.push(self.x.le(a, q));
            }
            let prune = self
                .best
                .as_ref()
                .is_some_and(|best| self.code[..] > best[..self.code.len()]);
            if !prune {
                self.placed.push(a);
                self.used[a] = true;
                self.run();
                self.used[a] = false;
                self.placed.pop();
            }
            self.code.truncate(start);
        }
    }
}

/// Isomorphism-invariant colouring, colours numbered in signature order.
fn refine_colours(x: &FinitePoset) -> Vec<usize> {
    let n = x.len();
    let initial: Vec<(usize, usize)> = (0..n).map(|a| (x.down_degree(a), x.up_degree(a))).collect();
    let mut colours = rank(&initial);
    loop {
        let signatures: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|a| {
                let mut lower: Vec<usize> = (0..n).filter(|&b| x.lt(b, a)).map(|b| colours[b]).collect();
                let mut upper: Vec<usize> = (0..n).filter(|&b| x.lt(a, b)).map(|b| colours[b]).collect();
                lower.sort_unstable();
                upper.sort_unstable();
                (colours[a], lower, upper)
            })
            .collect();
        let next = rank(&signatures);
        let before = colours.iter().max().copied().unwrap_or(0);
        let after = next.iter().max().copied().unwrap_or(0);
        colours = next;
        if after == before {
            return colours;
        }
    }
}

fn rank<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = values.to_vec();
    distinct.sort();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).expect("present"))
        .collect()
}

// Incomparable elements with identical relations to all other elements
// share a class id.
fn twin_classes(x: &FinitePoset) -> Vec<usize> {
    let n = x.len();
    let mut class: Vec<usize> = (0..n).collect();
    for a in 0..n {
        if class[a] != a {
            continue;
        }
        for b in (a + 1)..n {
            if class[b] == b
                && x.incomparable(a, b)
                && (0..n)
                    .filter(|&z| z != a && z != b)
                    .all(|z| x.le(z, a) == x.le(z, b) && x.le(a, z) == x.le(b, z))
            {
                class[b] = a;
            }
        }
    }
    class
}

/// Whether `x` and `y` are order-isomorphic, by direct backtracking search.
pub fn isomorphic(x: &FinitePoset, y: &FinitePoset) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let inv = |p: &FinitePoset| -> Vec<(usize, usize)> {
        (0..p.len()).map(|a| (p.down_degree(a), p.up_degree(a))).collect()
    };
    let (ix, iy) = (inv(x), inv(y));
    let mut sx = ix.clone();
    let mut sy = iy.clone();
    sx.sort_unstable();
    sy.sort_unstable();
    if sx != sy {
        return false;
    }
    let mut image = vec![usize::MAX; x.len()];
    let mut taken = vec![false; y.len()];
    extend_iso(x, y, &ix, &iy, 0, &mut image, &mut taken, &mut |_| true)
}

/// Every automorphism of `x`, identity first.
pub fn automorphisms(x: &FinitePoset) -> Vec<PartialMap> {
    let inv: Vec<(usize, usize)> = (0..x.len())
        .map(|a| (x.down_degree(a), x.up_degree(a)))
        .collect();
    let mut image = vec![usize::MAX; x.len()];
    let mut taken = vec![false; x.len()];
    let mut found = Vec::new();
    extend_iso(x, x, &inv, &inv, 0, &mut image, &mut taken, &mut |img| {
        found.push(PartialMap::new(img.iter().copied().enumerate()).expect("bijection"));
        false
    });
    found.sort_by_key(|m| m.pairs().iter().any(|&(a, b)| a != b));
    found
}

// Extends `image` on positions `a..` to an isomorphism. `on_found` returns
// true to stop the search.
#[allow(clippy::too_many_arguments)]
fn extend_iso(
    x: &FinitePoset,
    y: &FinitePoset,
    ix: &[(usize, usize)],
    iy: &[(usize, usize)],
    a: usize,
    image: &mut Vec<usize>,
    taken: &mut Vec<bool>,
    on_found: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if a == x.len() {
        return on_found(image);
    }
    for b in 0..y.len() {
        if taken[b] || ix[a] != iy[b] {
            continue;
        }
        let consistent = (0..a).all(|c| x.le(a, c) == y.le(b, image[c]) && x.le(c, a) == y.le(image[c], b));
        if !consistent {
            continue;
        }
        image[a] = b;
        taken[b] = true;
        let stop = extend_iso(x, y, ix, iy, a + 1, image, taken, on_found);
        taken[b] = false;
        image[a] = usize::MAX;
        if stop {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{direct_product, reverse};

    #[test]
    fn renaming_invariance() {
        let abc = FinitePoset::from_relation(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let zyx = FinitePoset::from_relation(&["z", "y", "x"], &[("x", "y"), ("y", "z")]).unwrap();
        assert_eq!(canonical_form(&abc).unwrap(), canonical_form(&zyx).unwrap());
    }

    #[test]
    fn distinguishes_n_from_chain() {
        let n = canonical_form(&FinitePoset::n_poset()).unwrap();
        let c = canonical_form(&FinitePoset::chain(4)).unwrap();
        assert_ne!(n, c);
    }

    #[test]
    fn round_trips_through_representative() {
        let n = FinitePoset::n_poset();
        let form = canonical_form(&n).unwrap();
        let rep = form.to_poset();
        assert!(isomorphic(&rep, &n));
        assert_eq!(canonical_form(&rep).unwrap(), form);
        assert_eq!(CanonicalForm::parse(&form.to_string()), Some(form));
        assert_eq!(CanonicalForm::parse("2:11"), None);
        assert_eq!(CanonicalForm::parse("3:0"), None);
    }

    #[test]
    fn budget() {
        let big = FinitePoset::antichain(11);
        assert!(matches!(
            canonical_form(&big),
            Err(PosetError::BudgetExceeded { size: 11, budget: 10, .. })
        ));
        assert!(canonical_form_with_budget(&big, 11).is_ok());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&FinitePoset::chain(4)).len(), 1);
        assert_eq!(automorphisms(&FinitePoset::antichain(2)).len(), 2);
        let diamond = direct_product(&[FinitePoset::chain(2), FinitePoset::chain(2)]).unwrap();
        let auts = automorphisms(&diamond);
        assert_eq!(auts.len(), 2);
        assert_eq!(auts[0], PartialMap::identity(4));
        assert_eq!(automorphisms(&FinitePoset::antichain(4)).len(), 24);
    }

    #[test]
    fn automorphisms_form_a_group() {
        for p in [
            FinitePoset::n_poset(),
            FinitePoset::antichain(3),
            direct_product(&[FinitePoset::chain(2), FinitePoset::antichain(2)]).unwrap(),
        ] {
            let auts = automorphisms(&p);
            for f in &auts {
                assert!(f.is_automorphism(&p));
                assert!(auts.contains(&f.inverse()));
                for g in &auts {
                    assert!(auts.contains(&f.then(g)));
                }
            }
        }
    }

    #[test]
    fn reversal_changes_the_form_of_v() {
        let v = crate::poset::rooted(&FinitePoset::antichain(2));
        assert_ne!(canonical_form(&v).unwrap(), canonical_form(&reverse(&v)).unwrap());
        assert!(!isomorphic(&v, &reverse(&v)));
    }
}
