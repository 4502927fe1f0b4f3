use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::corpus::{phi_corpus, psi_corpus, sentence_corpus};
use super::SuiteConfig;
use crate::classes::{
    closure_sigma, closure_sigma_rooted, closure_union_product, is_reticle, membership, ClassSpec, Operator, Predicate,
};
use crate::ef::equiv_k;
use crate::fld::{build_witness_formulas, enumerate_decompositions, transfer_decomposition, Mode};
use crate::logic::{relativize, w_invariant, CompiledFormula, Formula};
use crate::poset::{
    automorphisms, canonical_form, DEFAULT_CANON_BUDGET, isomorphic, lex_sum, posets_up_to, reverse, rooted, FinitePoset, PartialMap,
    PosetError,
};

#[derive(Debug, Default)]
pub(super) struct Outcome {
    pub checks: u64,
    pub counterexample: Option<Value>,
    pub notes: Vec<String>,
}

impl Outcome {
    /// Records one check; returns `false` (stop) on failure.
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        self.checks += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
        ok
    }
}

fn all_posets(bound: usize) -> Result<Vec<FinitePoset>, PosetError> {
    Ok(posets_up_to(bound)?.iter().map(|f| f.to_poset()).collect())
}

/// Calls `f` on every tuple in `0..n` of length `m`, in lexicographic order,
/// until it returns `false`.
fn for_each_tuple(n: usize, m: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut t = vec![0usize; m];
    if m > 0 && n == 0 {
        return true;
    }
    loop {
        if !f(&t) {
            return false;
        }
        let mut k = m;
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < n {
                break;
            }
            t[k] = 0;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn pj(x: &FinitePoset) -> Value {
    x.to_json()
}

/// `m = n` or both are at least `2^k - 1`.
pub fn chain_criterion(m: usize, n: usize, k: usize) -> bool {
    let threshold = (1usize << k) - 1;
    m == n || m.min(n) >= threshold
}

/// For each poset, the position of the first poset `≡_k` to it.
pub fn equivalence_classes(posets: &[FinitePoset], k: usize) -> Vec<usize> {
    let mut rep = vec![usize::MAX; posets.len()];
    for i in 0..posets.len() {
        if rep[i] != usize::MAX {
            continue;
        }
        rep[i] = i;
        for j in i + 1..posets.len() {
            if rep[j] == usize::MAX && equiv_k(&posets[i], &posets[j], k) {
                rep[j] = i;
            }
        }
    }
    rep
}

pub(super) fn relativization(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    let psis = psi_corpus();
    let mut cases = Vec::new();
    for (phi, params) in phi_corpus() {
        let mut inputs = params.clone();
        inputs.push("v".into());
        let phi_c = CompiledFormula::new(&phi, &inputs).expect("corpus relativizer is well scoped");
        for psi in &psis {
            let free: Vec<String> = psi.free_vars().into_iter().collect();
            let rel = relativize(psi, &phi, &params, "v").expect("corpus is well scoped");
            let mut rel_inputs = params.clone();
            rel_inputs.extend(free.iter().cloned());
            let lhs = CompiledFormula::new(psi, &free).expect("free variables are inputs");
            let rhs = CompiledFormula::new(&rel, &rel_inputs).expect("free variables are inputs");
            cases.push((phi.clone(), params.clone(), phi_c.clone(), psi.clone(), free.len(), lhs, rhs));
        }
    }
    for x in all_posets(c.bound)? {
        for (phi, params, phi_c, psi, nfree, lhs, rhs) in &cases {
            let m = params.len();
            let mut vals = vec![0; m + 1];
            let ok = for_each_tuple(x.len(), m, |a| {
                vals[..m].copy_from_slice(a);
                let members: Vec<usize> = (0..x.len())
                    .filter(|&e| {
                        vals[m] = e;
                        phi_c.eval(&x, &vals)
                    })
                    .collect();
                let Ok(sub) = x.induced(&members) else {
                    return true;
                };
                let mut rvals = a.to_vec();
                rvals.extend(std::iter::repeat_n(0, *nfree));
                for_each_tuple(members.len(), *nfree, |ys| {
                    for (i, &y) in ys.iter().enumerate() {
                        rvals[m + i] = members[y];
                    }
                    let inner = lhs.eval(&sub, ys);
                    let outer = rhs.eval(&x, &rvals);
                    out.check(inner == outer, || {
                        json!({
                            "poset": pj(&x),
                            "phi": phi.to_string(),
                            "params": params.iter().zip(a).map(|(p, &e)| json!([p, x.name(e)])).collect::<Vec<_>>(),
                            "psi": psi.to_string(),
                            "subjects": ys.iter().map(|&y| x.name(members[y])).collect::<Vec<_>>(),
                            "in_substructure": inner,
                            "relativized": outer,
                        })
                    })
                })
            });
            if !ok {
                return Ok(());
            }
        }
    }
    Ok(())
}

pub(super) fn w_invariance(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let phis = phi_corpus();
    for x in all_posets(c.bound)? {
        let base: Vec<_> = phis
            .iter()
            .map(|(phi, ps)| w_invariant(&x, phi, ps, "v").expect("corpus relativizer is well scoped"))
            .collect();
        for perm in permutations(x.len()) {
            let mut names: Vec<String> = (0..x.len()).map(|i| format!("e{i}")).collect();
            names.shuffle(&mut rng);
            let y = x.permute(&perm).rename(names)?;
            for ((phi, ps), wx) in phis.iter().zip(&base) {
                let wy = w_invariant(&y, phi, ps, "v").expect("corpus relativizer is well scoped");
                let ok = out.check(wx.forms == wy.forms && wx.empty_tuples == wy.empty_tuples, || {
                    json!({"left": pj(&x), "right": pj(&y), "phi": phi.to_string()})
                });
                if !ok {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn random_partial_iso(rng: &mut ChaCha8Rng, x: &FinitePoset, y: &FinitePoset) -> PartialMap {
    let mut best = PartialMap::default();
    for _ in 0..30 {
        let size = rng.gen_range(0..=x.len().min(y.len()));
        let mut src: Vec<usize> = (0..x.len()).collect();
        let mut dst: Vec<usize> = (0..y.len()).collect();
        src.shuffle(rng);
        dst.shuffle(rng);
        let f = PartialMap::new(src.into_iter().zip(dst).take(size)).expect("injective by construction");
        if f.len() > best.len() && f.is_partial_isomorphism(x, y) {
            best = f;
        }
    }
    best
}

fn offsets(parts: &[FinitePoset]) -> Vec<usize> {
    let mut acc = 0;
    parts
        .iter()
        .map(|p| {
            let o = acc;
            acc += p.len();
            o
        })
        .collect()
}

pub(super) fn pi_union(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    const SAMPLES: usize = 400;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let posets = all_posets(c.bound)?;
    let indices = all_posets(3)?;
    let mut nontrivial = 0;
    for _ in 0..SAMPLES {
        let index = indices.choose(&mut rng).expect("nonempty").clone();
        let xs: Vec<FinitePoset> = (0..index.len()).map(|_| posets.choose(&mut rng).expect("nonempty").clone()).collect();
        let ys: Vec<FinitePoset> = xs
            .iter()
            .map(|x| {
                if rng.gen_bool(0.5) {
                    let mut perm: Vec<usize> = (0..x.len()).collect();
                    perm.shuffle(&mut rng);
                    x.permute(&perm)
                } else {
                    posets.choose(&mut rng).expect("nonempty").clone()
                }
            })
            .collect();
        let fs: Vec<PartialMap> = xs.iter().zip(&ys).map(|(x, y)| random_partial_iso(&mut rng, x, y)).collect();
        let (sx, sy) = (lex_sum(&index, &xs)?, lex_sum(&index, &ys)?);
        let (ox, oy) = (offsets(&xs), offsets(&ys));
        let union = PartialMap::new(
            fs.iter()
                .enumerate()
                .flat_map(|(i, f)| f.shifted(ox[i], oy[i]).pairs().to_vec()),
        )
        .expect("blocks are disjoint");
        if union.len() > 1 {
            nontrivial += 1;
        }
        let ok = out.check(union.is_partial_isomorphism(&sx, &sy), || {
            json!({"index": pj(&index), "left": pj(&sx), "right": pj(&sy), "map": union.named(&sx, &sy)})
        });
        if !ok {
            return Ok(());
        }
        let autos: Vec<PartialMap> = xs
            .iter()
            .map(|x| automorphisms(x).choose(&mut rng).expect("identity").clone())
            .collect();
        let whole = PartialMap::new(
            autos
                .iter()
                .enumerate()
                .flat_map(|(i, f)| f.shifted(ox[i], ox[i]).pairs().to_vec()),
        )
        .expect("blocks are disjoint");
        let ok = out.check(whole.is_automorphism(&sx), || {
            json!({"index": pj(&index), "sum": pj(&sx), "map": whole.named(&sx, &sx)})
        });
        if !ok {
            return Ok(());
        }
    }
    out.notes.push(format!("{SAMPLES} sampled sums, {nontrivial} with a union of at least two pairs"));
    Ok(())
}

pub(super) fn sum_composition(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    let posets = all_posets(c.bound)?;
    let indices = all_posets(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let n = posets.len();
    for k in 1..=c.max_k {
        let rep = equivalence_classes(&posets, k);
        let classes = (0..n).filter(|&i| rep[i] == i).count();
        out.notes.push(format!("k={k}: {classes} classes among {n} posets"));
        let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            members.entry(rep[i]).or_default().push(i);
        }
        let class_pairs: u128 = members.values().map(|m| (m.len() * m.len()) as u128).sum();
        for index in &indices {
            let m = index.len();
            // every sum against the sum of class representatives
            let ok = for_each_tuple(n, m, |t| {
                let xs: Vec<FinitePoset> = t.iter().map(|&i| posets[i].clone()).collect();
                let rs: Vec<FinitePoset> = t.iter().map(|&i| posets[rep[i]].clone()).collect();
                let (sx, sr) = (lex_sum(index, &xs).expect("sizes match"), lex_sum(index, &rs).expect("sizes match"));
                out.check(equiv_k(&sx, &sr, k), || {
                    json!({"k": k, "index": pj(index), "left": xs.iter().map(pj).collect::<Vec<_>>(),
                           "right": rs.iter().map(pj).collect::<Vec<_>>()})
                })
            });
            if !ok {
                return Ok(());
            }
            // every pair directly, when the count is moderate; otherwise a sample
            let pairs = class_pairs.pow(m as u32);
            let sample = pairs > 2_000_000;
            let mut check_pair = |xt: &[usize], yt: &[usize]| {
                let xs: Vec<FinitePoset> = xt.iter().map(|&i| posets[i].clone()).collect();
                let ys: Vec<FinitePoset> = yt.iter().map(|&i| posets[i].clone()).collect();
                let (sx, sy) = (lex_sum(index, &xs).expect("sizes match"), lex_sum(index, &ys).expect("sizes match"));
                out.check(equiv_k(&sx, &sy, k), || {
                    json!({"k": k, "index": pj(index), "left": xs.iter().map(pj).collect::<Vec<_>>(),
                           "right": ys.iter().map(pj).collect::<Vec<_>>()})
                })
            };
            if sample {
                for _ in 0..20_000 {
                    let xt: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
                    let yt: Vec<usize> = xt.iter().map(|&i| *members[&rep[i]].choose(&mut rng).expect("nonempty")).collect();
                    if !check_pair(&xt, &yt) {
                        return Ok(());
                    }
                }
            } else {
                let ok = for_each_tuple(n, m, |xt| {
                    let cls: Vec<&Vec<usize>> = xt.iter().map(|&i| &members[&rep[i]]).collect();
                    let lens: Vec<usize> = cls.iter().map(|c| c.len()).collect();
                    let mut pos = vec![0usize; m];
                    loop {
                        let yt: Vec<usize> = (0..m).map(|j| cls[j][pos[j]]).collect();
                        if yt.as_slice() > xt && !check_pair(xt, &yt) {
                            return false;
                        }
                        let mut j = m;
                        loop {
                            if j == 0 {
                                return true;
                            }
                            j -= 1;
                            pos[j] += 1;
                            if pos[j] < lens[j] {
                                break;
                            }
                            pos[j] = 0;
                        }
                    }
                });
                if !ok {
                    return Ok(());
                }
            }
            if sample {
                let note = format!(
                    "k={k}, index of size {m}: {pairs} class-respecting pairs; 20000 sampled, all sums checked against class representatives"
                );
                if !out.notes.contains(&note) {
                    out.notes.push(note);
                }
            }
        }
    }
    Ok(())
}

pub(super) fn associativity(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    let indices = all_posets(c.bound)?;
    let summands = all_posets(2)?;
    // (inner index, summand choice, inner sum)
    let mut inner = Vec::new();
    for (ji, j) in indices.iter().enumerate() {
        for_each_tuple(summands.len(), j.len(), |t| {
            let parts: Vec<FinitePoset> = t.iter().map(|&s| summands[s].clone()).collect();
            inner.push((ji, parts.clone(), lex_sum(j, &parts).expect("sizes match")));
            true
        });
    }
    let mut canon_checked = 0u64;
    for index in &indices {
        let mut flat_index: HashMap<Vec<usize>, FinitePoset> = HashMap::new();
        let ok = for_each_tuple(inner.len(), index.len(), |t| {
            let nested_parts: Vec<&FinitePoset> = t.iter().map(|&i| &inner[i].2).collect();
            let nested = lex_sum(index, &nested_parts).expect("sizes match");
            let js: Vec<usize> = t.iter().map(|&i| inner[i].0).collect();
            let fi = flat_index.entry(js.clone()).or_insert_with(|| {
                let parts: Vec<&FinitePoset> = js.iter().map(|&j| &indices[j]).collect();
                lex_sum(index, &parts).expect("sizes match")
            });
            let flat_parts: Vec<&FinitePoset> = t.iter().flat_map(|&i| inner[i].1.iter()).collect();
            let flat = lex_sum(fi, &flat_parts).expect("sizes match");
            let mut same = nested == flat;
            if same && nested.len() <= DEFAULT_CANON_BUDGET {
                canon_checked += 1;
                same = canonical_form(&nested).ok() == canonical_form(&flat).ok();
            }
            out.check(same, || {
                json!({"index": pj(index),
                       "inner": t.iter().map(|&i| json!({"index": pj(&indices[inner[i].0]),
                                 "summands": inner[i].1.iter().map(pj).collect::<Vec<_>>()})).collect::<Vec<_>>(),
                       "nested": pj(&nested), "flat": pj(&flat)})
            })
        });
        if !ok {
            return Ok(());
        }
    }
    out.notes.push(format!(
        "nested and flat sums compared element by element; canonical forms also compared for {canon_checked} sums of at most {DEFAULT_CANON_BUDGET} elements"
    ));
    Ok(())
}

pub(super) fn closure_onestep(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    let bound = c.bound;
    let lift = |e: crate::classes::ClassError| match e {
        crate::classes::ClassError::Poset(p) => p,
        other => PosetError::Json(other.to_string()),
    };
    let all: std::collections::BTreeSet<_> = posets_up_to(bound)?.into_iter().collect();
    let bases = vec![
        ClassSpec::predicate(Predicate::SingletonOnly),
        ClassSpec::predicate(Predicate::Linear),
        ClassSpec::seeds([&FinitePoset::chain(2)]).map_err(lift)?,
        ClassSpec::predicate(Predicate::Antichain),
        ClassSpec::Predicates(vec![Predicate::Tree, Predicate::HasMin]),
        ClassSpec::seeds([&FinitePoset::antichain(2), &FinitePoset::n_poset()]).map_err(lift)?,
    ];
    for base in &bases {
        let r = closure_sigma(base, bound).map_err(lift)?;
        if !out.check(r.cross_check && r.stabilized_at == 1, || {
            json!({"operator": "sigma", "base": base.to_string(), "bound": bound, "stages": r.to_json().stages})
        }) {
            return Ok(());
        }
        for f in &all {
            let x = f.to_poset();
            let found = membership(&x, base, Operator::Sigma).map_err(lift)?;
            let agrees = found.is_some() == r.contains(f)
                && found.as_ref().is_none_or(|w| isomorphic(&w.evaluate(), &x));
            if !out.check(agrees, || json!({"operator": "sigma", "base": base.to_string(), "poset": pj(&x)})) {
                return Ok(());
            }
        }
        let u = closure_union_product(base, bound).map_err(lift)?;
        if !out.check(u.cross_check && u.stabilized_at == 1, || {
            json!({"operator": "union-product", "base": base.to_string(), "bound": bound, "stages": u.to_json().stages})
        }) {
            return Ok(());
        }
    }
    let singleton = closure_sigma(&ClassSpec::predicate(Predicate::SingletonOnly), bound).map_err(lift)?;
    if !out.check(singleton.members() == all, || json!({"identity": "singleton sums give every poset", "bound": bound})) {
        return Ok(());
    }
    for base in [ClassSpec::predicate(Predicate::AllFinite), ClassSpec::predicate(Predicate::SingletonOnly)] {
        let r = closure_sigma_rooted(&base, bound).map_err(lift)?;
        if !out.check(r.members() == all && r.stabilized_at == 1 && r.cross_check, || {
            json!({"operator": "sigma-rooted", "base": base.to_string(), "bound": bound, "stages": r.to_json().stages})
        }) {
            return Ok(());
        }
    }
    Ok(())
}

pub(super) fn block_definability(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    let lift = |e: crate::fld::FldError| match e {
        crate::fld::FldError::Poset(p) => p,
        other => PosetError::Json(other.to_string()),
    };
    for x in all_posets(c.bound)? {
        for mode in [Mode::Fld1, Mode::Fld0] {
            for d in enumerate_decompositions(&x, mode).map_err(lift)? {
                let r = crate::fld::verify_block_definability(&d).map_err(lift)?;
                if !out.check(r.passed(), || json!({"decomposition": d.to_json(), "poset": pj(&x), "report": r})) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

pub(super) fn transfer(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    const TARGET: usize = 100;
    const ATTEMPTS: usize = 20_000;
    let lift = |e: crate::fld::FldError| match e {
        crate::fld::FldError::Poset(p) => p,
        other => PosetError::Json(other.to_string()),
    };
    let posets = all_posets(c.bound)?;
    let targets = all_posets((c.bound + 1).min(6))?;
    let mut decomps = Vec::new();
    for x in &posets {
        for mode in [Mode::Fld1, Mode::Fld0] {
            for d in enumerate_decompositions(x, mode).map_err(lift)? {
                let w = build_witness_formulas(&d, None).map_err(lift)?;
                let t = transfer_decomposition(x, &w).map_err(lift)?;
                let ok = t.as_ref().is_some_and(|t| t.passed());
                if !out.check(ok, || json!({"self_witnessing": d.to_json(), "poset": pj(x)})) {
                    return Ok(());
                }
                decomps.push(d);
            }
        }
    }
    out.notes.push(format!("self-witnessing: {} decompositions", decomps.len()));
    let sentences = sentence_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let (mut found, mut attempts) = (0, 0);
    while found < TARGET && attempts < ATTEMPTS {
        attempts += 1;
        let d = decomps.choose(&mut rng).expect("nonempty");
        let taus: Option<Vec<Formula>> = if rng.gen_bool(0.5) {
            Some(
                (0..d.len())
                    .map(|i| {
                        let block = d.block_poset(i);
                        let true_here: Vec<&Formula> = sentences
                            .iter()
                            .filter(|s| CompiledFormula::new(s, &[]).expect("sentence").eval(&block, &[]))
                            .collect();
                        (*true_here.choose(&mut rng).expect("the corpus has a valid sentence")).clone()
                    })
                    .collect(),
            )
        } else {
            None
        };
        let w = build_witness_formulas(d, taus.as_deref()).map_err(lift)?;
        let y = targets.choose(&mut rng).expect("nonempty");
        let Some(t) = transfer_decomposition(y, &w).map_err(lift)? else {
            continue;
        };
        found += 1;
        let ok = t.passed()
            && t.decomposition
                .as_ref()
                .is_some_and(|nd| isomorphic(&nd.resum(), y) && isomorphic(nd.index(), d.index()));
        if !out.check(ok, || {
            json!({"source": d.to_json(), "target": pj(y), "transfer": t.to_json(y),
                   "sentences": taus.as_ref().map(|ts| ts.iter().map(|t| t.to_string()).collect::<Vec<_>>())})
        }) {
            return Ok(());
        }
    }
    out.notes.push(format!("{found} sampled transfers with a witness tuple in {attempts} attempts"));
    out.check(found >= TARGET, || json!({"insufficient_samples": found, "attempts": attempts}));
    Ok(())
}

pub(super) fn class_chain(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    use crate::classes::{is_linear, is_tree};
    if !out.check(!is_reticle(&FinitePoset::n_poset()), || json!({"n_poset_is_reticle": true})) {
        return Ok(());
    }
    let posets = all_posets(c.bound)?;
    let (mut with_min, mut with_max) = (0usize, 0usize);
    for x in &posets {
        let min = x.has_min();
        let chain_ok = (!(is_linear(x) && min) || (is_tree(x) && min)) && (!(is_tree(x) && min) || is_reticle(x));
        let r = reverse(x);
        let dual_ok = is_reticle(x) == is_reticle(&r) && x.has_min() == r.has_max() && rooted(x).has_min();
        if !out.check(chain_ok && dual_ok, || json!({"poset": pj(x)})) {
            return Ok(());
        }
        with_min += min as usize;
        with_max += x.has_max() as usize;
    }
    out.check(with_min == with_max, || json!({"with_min": with_min, "with_max": with_max}));
    Ok(())
}

pub(super) fn ef_chains(c: SuiteConfig, out: &mut Outcome) -> Result<(), PosetError> {
    for k in 1..=c.max_k {
        for m in 1..=c.bound {
            for n in m..=c.bound {
                let game = equiv_k(&FinitePoset::chain(m), &FinitePoset::chain(n), k);
                if !out.check(game == chain_criterion(m, n, k), || json!({"k": k, "m": m, "n": n, "game": game})) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}
