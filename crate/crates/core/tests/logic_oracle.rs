//! Evaluation and relativization against a direct, uncompiled evaluator.

use std::collections::HashMap;

use fldkit::logic::{definable_set, evaluate, parse, relativize, Assignment, Formula};
use fldkit::poset::posets_up_to;
use fldkit::verify::{phi_corpus, psi_corpus};
use fldkit::FinitePoset;
use proptest::prelude::*;

fn naive(x: &FinitePoset, f: &Formula, env: &mut HashMap<String, usize>) -> bool {
    match f {
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Le(a, b) => x.le(env[a], env[b]),
        Formula::Not(g) => !naive(x, g, env),
        Formula::And(g, h) => naive(x, g, env) && naive(x, h, env),
        Formula::Or(g, h) => naive(x, g, env) || naive(x, h, env),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let saved = env.get(v).copied();
            let universal = matches!(f, Formula::Forall(..));
            let mut result = universal;
            for e in 0..x.len() {
                env.insert(v.clone(), e);
                if naive(x, g, env) != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            result
        }
    }
}

fn all_posets(n: usize) -> Vec<FinitePoset> {
    posets_up_to(n).unwrap().iter().map(|f| f.to_poset()).collect()
}

const VARS: [&str; 3] = ["x", "y", "z"];

fn arb_formula() -> impl Strategy<Value = Formula> {
    let atom = (0..3usize, 0..3usize, any::<bool>()).prop_map(|(a, b, le)| {
        if le {
            Formula::le(VARS[a], VARS[b])
        } else {
            Formula::eq(VARS[a], VARS[b])
        }
    });
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (0..3usize, inner.clone()).prop_map(|(v, b)| Formula::forall(VARS[v], b)),
            (0..3usize, inner).prop_map(|(v, b)| Formula::exists(VARS[v], b)),
        ]
    })
}

proptest! {
    #[test]
    fn compiled_matches_naive(f in arb_formula(), p in 0usize..24, a in 0usize..4, b in 0usize..4, c in 0usize..4) {
        let ps = all_posets(4);
        let x = &ps[p % ps.len()];
        let vals = [a % x.len(), b % x.len(), c % x.len()];
        let mut env: HashMap<String, usize> = VARS.iter().map(|v| v.to_string()).zip(vals).collect();
        let assignment = VARS.iter().zip(vals).fold(Assignment::new(), |acc, (v, e)| acc.with(v, e));
        prop_assert_eq!(evaluate(x, &f, &assignment).unwrap(), naive(x, &f, &mut env));
    }

    #[test]
    fn printing_round_trips(f in arb_formula()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}

#[test]
fn relativization_against_substructure() {
    let psis = psi_corpus();
    for x in all_posets(3) {
        for (phi, params) in phi_corpus() {
            let tuples: Vec<Vec<usize>> = (0..x.len().pow(params.len() as u32))
                .map(|mut c| {
                    (0..params.len())
                        .map(|_| {
                            let e = c % x.len();
                            c /= x.len();
                            e
                        })
                        .collect()
                })
                .collect();
            for t in tuples {
                let bound: Vec<(String, usize)> = params.iter().cloned().zip(t.iter().copied()).collect();
                let d = definable_set(&x, &phi, &bound, "v").unwrap();
                if d.is_empty() {
                    continue;
                }
                let sub = x.induced(&d.members).unwrap();
                for psi in &psis {
                    let rel = relativize(psi, &phi, &params, "v").unwrap();
                    let free: Vec<String> = psi.free_vars().into_iter().collect();
                    for code in 0..d.members.len().pow(free.len() as u32) {
                        let mut c = code;
                        let mut inner = HashMap::new();
                        let mut outer: HashMap<String, usize> = bound.iter().cloned().collect();
                        for v in &free {
                            let i = c % d.members.len();
                            c /= d.members.len();
                            inner.insert(v.clone(), i);
                            outer.insert(v.clone(), d.members[i]);
                        }
                        assert_eq!(naive(&sub, psi, &mut inner), naive(&x, &rel, &mut outer), "{psi} under {phi}");
                    }
                }
            }
        }
    }
}
