//! Closures against naive recursive membership.

use std::collections::BTreeSet;

use fldkit::classes::{
    closure_sigma, closure_sigma_rooted, closure_union_product, membership, ClassSpec, Operator, Predicate,
};
use fldkit::poset::{canonical_form, direct_product, disjoint_union, isomorphic, posets_of_size, posets_up_to, CanonicalForm};
use fldkit::FinitePoset;

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        if i == n {
            let mut blocks = vec![Vec::new(); k];
            for (e, &b) in rgs.iter().enumerate() {
                blocks[b].push(e);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=k {
            rgs.push(b);
            go(i + 1, n, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

fn autonomous(x: &FinitePoset, blocks: &[Vec<usize>]) -> bool {
    let rel = |a: usize, b: usize| (x.le(a, b), x.le(b, a));
    blocks.iter().enumerate().all(|(i, p)| {
        blocks.iter().skip(i + 1).all(|q| {
            let r = rel(p[0], q[0]);
            p.iter().all(|&a| q.iter().all(|&b| rel(a, b) == r))
        })
    })
}

/// Size by size: a poset is in the closure iff it is in the base or splits
/// into at least two autonomous blocks that are all in the closure.
fn sigma_oracle(base: &ClassSpec, bound: usize) -> BTreeSet<CanonicalForm> {
    let mut members = BTreeSet::new();
    for n in 1..=bound {
        for f in posets_of_size(n).unwrap() {
            let x = f.to_poset();
            let inside = base.contains(&x).unwrap()
                || set_partitions(n).into_iter().filter(|bs| bs.len() >= 2).any(|bs| {
                    autonomous(&x, &bs)
                        && bs
                            .iter()
                            .all(|b| members.contains(&canonical_form(&x.induced(b).unwrap()).unwrap()))
                });
            if inside {
                members.insert(f);
            }
        }
    }
    members
}

fn union_product_oracle(base: &ClassSpec, bound: usize) -> BTreeSet<CanonicalForm> {
    let mut members: BTreeSet<CanonicalForm> = base.members_up_to(bound).unwrap().into_iter().collect();
    loop {
        let current: Vec<FinitePoset> = members.iter().map(|f| f.to_poset()).collect();
        let mut added = false;
        for a in &current {
            for b in &current {
                let pair = [a.clone(), b.clone()];
                if a.len() + b.len() <= bound {
                    added |= members.insert(canonical_form(&disjoint_union(&pair).unwrap()).unwrap());
                }
                if a.len() * b.len() <= bound {
                    added |= members.insert(canonical_form(&direct_product(&pair).unwrap()).unwrap());
                }
            }
        }
        if !added {
            return members;
        }
    }
}

fn bases() -> Vec<ClassSpec> {
    vec![
        ClassSpec::predicate(Predicate::SingletonOnly),
        ClassSpec::predicate(Predicate::Linear),
        ClassSpec::predicate(Predicate::Antichain),
        ClassSpec::Predicates(vec![Predicate::Tree, Predicate::HasMin]),
        ClassSpec::predicate(Predicate::BooleanAlgebra),
        ClassSpec::seeds([&FinitePoset::chain(2)]).unwrap(),
        ClassSpec::seeds([&FinitePoset::n_poset()]).unwrap(),
    ]
}

#[test]
fn sigma_matches_oracle() {
    for base in bases() {
        let r = closure_sigma(&base, 5).unwrap();
        assert_eq!(r.members(), sigma_oracle(&base, 5), "{base}");
        assert!(r.cross_check);
        assert_eq!(r.stabilized_at, 1);
        for f in posets_up_to(5).unwrap() {
            let x = f.to_poset();
            let w = membership(&x, &base, Operator::Sigma).unwrap();
            assert_eq!(w.is_some(), r.contains(&f));
            if let Some(w) = w {
                assert!(isomorphic(&w.evaluate(), &x));
            }
        }
    }
}

#[test]
fn union_product_matches_oracle() {
    for base in bases() {
        let r = closure_union_product(&base, 6).unwrap();
        assert_eq!(r.members(), union_product_oracle(&base, 6), "{base}");
        for f in r.members() {
            let w = r.witness(&f).expect("every member has a construction");
            assert!(isomorphic(&w.evaluate(), &f.to_poset()));
        }
    }
}

#[test]
fn singleton_sums_give_every_poset() {
    let r = closure_sigma(&ClassSpec::predicate(Predicate::SingletonOnly), 4).unwrap();
    let size_four = r.members().iter().filter(|f| f.to_poset().len() == 4).count();
    assert_eq!(size_four, 16);
    assert_eq!(r.members().len(), 1 + 2 + 5 + 16);
}

#[test]
fn rooted_closure_identities() {
    let all: BTreeSet<_> = posets_up_to(5).unwrap().into_iter().collect();
    let r = closure_sigma_rooted(&ClassSpec::predicate(Predicate::AllFinite), 5).unwrap();
    assert_eq!(r.members(), all);
    assert_eq!(r.stabilized_at, 1);
    assert!(r.cross_check);
    for f in &all {
        let x = f.to_poset();
        let w = membership(&x, &ClassSpec::predicate(Predicate::AllFinite), Operator::SigmaRooted).unwrap();
        assert!(w.is_some_and(|w| isomorphic(&w.evaluate(), &x)));
    }
}
