//! Classes of finite posets and bounded closures under lexicographic sums,
//! rooted sums, and disjoint unions with direct products.

mod closure;
mod membership;
mod spec;

pub use closure::{
    closure, closure_sigma, closure_sigma_rooted, closure_union_product, ClosureJson, ClosureResult, Operator,
    DEFAULT_CLOSURE_BUDGET,
};
pub use membership::{membership, Construction};
pub use spec::{ClassSpec, Predicate};

use thiserror::Error;

use crate::poset::{direct_product, isomorphic, FinitePoset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("invalid class expression `{text}`: {message}")]
    Spec { text: String, message: String },
    #[error("cannot read seeds file `{path}`: {message}")]
    Seeds { path: String, message: String },
}

/// Any two elements are comparable.
pub fn is_linear(x: &FinitePoset) -> bool {
    (0..x.len()).all(|a| (0..x.len()).all(|b| x.comparable(a, b)))
}

/// Every principal down-set `(., x]` is a chain.
pub fn is_tree(x: &FinitePoset) -> bool {
    let n = x.len();
    (0..n).all(|t| {
        (0..n).all(|a| !x.le(a, t) || (0..n).all(|b| !x.le(b, t) || x.comparable(a, b)))
    })
}

/// Every principal up-set `[x, .)` is a chain.
pub fn is_reversed_tree(x: &FinitePoset) -> bool {
    let n = x.len();
    (0..n).all(|t| {
        (0..n).all(|a| !x.le(t, a) || (0..n).all(|b| !x.le(t, b) || x.comparable(a, b)))
    })
}

/// An induced copy of N: `a < c`, `b < c`, `b < d` and no other strict
/// relation among the four.
pub fn find_n(x: &FinitePoset) -> Option<[usize; 4]> {
    let n = x.len();
    for c in 0..n {
        for b in (0..n).filter(|&b| x.lt(b, c)) {
            for a in (0..n).filter(|&a| x.lt(a, c) && x.incomparable(a, b)) {
                if let Some(d) = (0..n).find(|&d| x.lt(b, d) && x.incomparable(c, d) && x.incomparable(a, d)) {
                    return Some([a, b, c, d]);
                }
            }
        }
    }
    None
}

/// No induced copy of N.
pub fn is_reticle(x: &FinitePoset) -> bool {
    find_n(x).is_none()
}

/// Isomorphic to the lattice of subsets of some finite set.
pub fn is_boolean_algebra(x: &FinitePoset) -> bool {
    let n = x.len();
    if !n.is_power_of_two() {
        return false;
    }
    let m = n.trailing_zeros() as usize;
    if m == 0 {
        return true;
    }
    let cube = direct_product(&vec![FinitePoset::chain(2); m]).expect("at least one factor");
    isomorphic(x, &cube)
}

pub fn is_antichain(x: &FinitePoset) -> bool {
    (0..x.len()).all(|a| (0..x.len()).all(|b| a == b || x.incomparable(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{posets_up_to, reverse};

    #[test]
    fn n_is_not_a_reticle() {
        assert!(!is_reticle(&FinitePoset::n_poset()));
        assert_eq!(find_n(&FinitePoset::n_poset()), Some([0, 1, 2, 3]));
        assert!(is_reticle(&FinitePoset::chain(4)));
    }

    #[test]
    fn boolean_algebras() {
        let diamond = direct_product(&[FinitePoset::chain(2), FinitePoset::chain(2)]).unwrap();
        assert!(is_boolean_algebra(&diamond));
        assert!(!is_boolean_algebra(&FinitePoset::chain(3)));
        assert!(!is_boolean_algebra(&FinitePoset::chain(4)));
        assert!(is_boolean_algebra(&FinitePoset::singleton()));
        assert!(is_boolean_algebra(&FinitePoset::chain(2)));
    }

    #[test]
    fn trees() {
        let v = FinitePoset::from_relation(&["r", "a", "b"], &[("r", "a"), ("r", "b")]).unwrap();
        assert!(is_tree(&v) && !is_reversed_tree(&v));
        assert!(is_reversed_tree(&reverse(&v)));
        assert!(!is_tree(&FinitePoset::n_poset()));
    }

    #[test]
    fn reticle_is_self_dual_on_small_posets() {
        for f in posets_up_to(5).unwrap() {
            let x = f.to_poset();
            assert_eq!(is_reticle(&x), is_reticle(&reverse(&x)));
        }
    }
}
