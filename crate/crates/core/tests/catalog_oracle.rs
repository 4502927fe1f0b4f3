//! The catalogue and canonical forms checked against brute force.

use std::collections::BTreeSet;

use fldkit::poset::{automorphisms, canonical_form, isomorphic, posets_of_size};
use fldkit::FinitePoset;
use proptest::prelude::*;

/// Every reflexive antisymmetric transitive relation on `0..n`, as matrices.
fn labeled_posets(n: usize) -> Vec<Vec<bool>> {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << off.len()) {
        let mut m = vec![false; n * n];
        for a in 0..n {
            m[a * n + a] = true;
        }
        for (bit, &(a, b)) in off.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                m[a * n + b] = true;
            }
        }
        let antisym = (0..n).all(|a| (0..n).all(|b| a == b || !(m[a * n + b] && m[b * n + a])));
        let trans = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(m[a * n + b] && m[b * n + c]) || m[a * n + c])));
        if antisym && trans {
            out.push(m);
        }
    }
    out
}

fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn relabel(m: &[bool], n: usize, p: &[usize]) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            out[p[a] * n + p[b]] = m[a * n + b];
        }
    }
    out
}

/// Orbit representatives: the lexicographically least relabeling.
fn unlabeled_count(n: usize) -> (usize, usize) {
    let ps = perms(n);
    let labeled = labeled_posets(n);
    let reps: BTreeSet<Vec<bool>> = labeled
        .iter()
        .map(|m| ps.iter().map(|p| relabel(m, n, p)).min().expect("at least one permutation"))
        .collect();
    (labeled.len(), reps.len())
}

fn brute_isomorphic(x: &FinitePoset, y: &FinitePoset) -> bool {
    let n = x.len();
    n == y.len() && perms(n).iter().any(|p| (0..n).all(|a| (0..n).all(|b| x.le(a, b) == y.le(p[a], p[b]))))
}

fn matrix_poset(m: &[bool], n: usize) -> FinitePoset {
    FinitePoset::from_matrix((0..n).map(|i| i.to_string()).collect(), m.to_vec()).unwrap()
}

#[test]
fn counts_match_labeled_enumeration() {
    // labeled 1, 3, 19, 219; unlabeled 1, 2, 5, 16
    let expected = [(1, 1), (3, 2), (19, 5), (219, 16)];
    for n in 1..=4 {
        let (labeled, unlabeled) = unlabeled_count(n);
        assert_eq!((labeled, unlabeled), expected[n - 1]);
        assert_eq!(posets_of_size(n).unwrap().len(), unlabeled, "size {n}");
    }
}

#[test]
fn size_four_catalogue_is_the_orbit_set() {
    let labeled = labeled_posets(4);
    let forms: BTreeSet<_> = labeled.iter().map(|m| canonical_form(&matrix_poset(m, 4)).unwrap()).collect();
    let catalog: BTreeSet<_> = posets_of_size(4).unwrap().into_iter().collect();
    assert_eq!(forms, catalog);
}

#[test]
fn isomorphism_agrees_with_brute_force() {
    let mut all = Vec::new();
    for n in 1..=4 {
        all.extend(labeled_posets(n).iter().map(|m| matrix_poset(m, n)));
    }
    // every labeled 3-poset against every other, and a stride over size 4
    let threes: Vec<_> = all.iter().filter(|p| p.len() == 3).collect();
    for a in &threes {
        for b in &threes {
            let brute = brute_isomorphic(a, b);
            assert_eq!(isomorphic(a, b), brute);
            assert_eq!(canonical_form(a).unwrap() == canonical_form(b).unwrap(), brute);
        }
    }
    let fours: Vec<_> = all.iter().filter(|p| p.len() == 4).collect();
    for a in fours.iter().step_by(7) {
        for b in &fours {
            assert_eq!(canonical_form(a).unwrap() == canonical_form(b).unwrap(), brute_isomorphic(a, b));
        }
    }
}

#[test]
fn canonical_forms_separate_catalogue_pairs_up_to_five() {
    use fldkit::poset::posets_up_to;
    let ps: Vec<FinitePoset> = posets_up_to(5).unwrap().iter().map(|f| f.to_poset()).collect();
    for (i, a) in ps.iter().enumerate() {
        for (j, b) in ps.iter().enumerate() {
            // a shuffled copy, so equal forms cannot come from equal matrices
            let mut perm: Vec<usize> = (0..b.len()).collect();
            perm.rotate_left(j % b.len());
            let b = b.permute(&perm);
            let brute = brute_isomorphic(a, &b);
            assert_eq!(brute, i == j);
            assert_eq!(canonical_form(a).unwrap() == canonical_form(&b).unwrap(), brute);
            assert_eq!(isomorphic(a, &b), brute);
        }
    }
}

#[test]
fn automorphism_counts() {
    for (p, count) in [
        (FinitePoset::chain(4), 1),
        (FinitePoset::antichain(4), 24),
        (FinitePoset::n_poset(), 1),
        (FinitePoset::from_relation(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap(), 2),
    ] {
        let brute = perms(p.len())
            .iter()
            .filter(|q| (0..p.len()).all(|a| (0..p.len()).all(|b| p.le(a, b) == p.le(q[a], q[b]))))
            .count();
        assert_eq!(brute, count);
        assert_eq!(automorphisms(&p).len(), count);
    }
}

fn arb_poset(max: usize) -> impl Strategy<Value = FinitePoset> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            // keep only pairs a < b in position order; transitive closure is taken
            let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let rel: Vec<(String, String)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|&(a, b)| bits[a * n + b])
                .map(|(a, b)| (names[a].clone(), names[b].clone()))
                .collect();
            FinitePoset::from_relation(&names, &rel).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn canonical_form_is_invariant(p in arb_poset(7), seed in any::<u64>()) {
        let n = p.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let q = p.permute(&perm);
        prop_assert_eq!(canonical_form(&p).unwrap(), canonical_form(&q).unwrap());
        prop_assert!(isomorphic(&canonical_form(&p).unwrap().to_poset(), &p));
    }
}
