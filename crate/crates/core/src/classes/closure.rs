use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{membership, ClassError, ClassSpec, Construction};
use crate::poset::{
    canonical_form, direct_product, disjoint_union, lex_sum, posets_of_size, posets_up_to, rooted, CanonicalForm,
    FinitePoset, PosetError,
};

/// Largest size bound accepted by default.
pub const DEFAULT_CLOSURE_BUDGET: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Operator {
    /// Finite lexicographic sums.
    #[serde(rename = "sigma")]
    Sigma,
    /// Finite lexicographic sums of rooted summands.
    #[serde(rename = "sigma-rooted")]
    SigmaRooted,
    /// Finite disjoint unions of finite direct products.
    #[serde(rename = "union-product")]
    UnionProduct,
}

impl Operator {
    pub fn as_str(self) -> &'static str {
        match self {
            Operator::Sigma => "sigma",
            Operator::SigmaRooted => "sigma-rooted",
            Operator::UnionProduct => "union-product",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Operator {
    type Err = String;

    fn from_str(s: &str) -> Result<Operator, String> {
        match s {
            "sigma" => Ok(Operator::Sigma),
            "sigma-rooted" => Ok(Operator::SigmaRooted),
            "union-product" => Ok(Operator::UnionProduct),
            other => Err(format!("unknown operator `{other}` (expected sigma, sigma-rooted or union-product)")),
        }
    }
}

/// The members of a closure with at most `bound` elements.
///
/// Stage 0 holds the base members; stage `n + 1` holds what one application
/// of the generating step to stages `0..=n` adds. Iteration stops at the
/// least `s >= 1` whose next step adds nothing; `stabilized_at` is that `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub operator: Operator,
    pub bound: usize,
    pub stages: Vec<Vec<CanonicalForm>>,
    pub stabilized_at: usize,
    /// Agreement with a second, independent computation: for `sigma`, the
    /// single step from the base equals the fixpoint; for `union-product`,
    /// the fixpoint of binary unions and products equals the result; for
    /// `sigma-rooted`, recursive membership search agrees on every poset
    /// within the bound.
    pub cross_check: bool,
    witnesses: BTreeMap<CanonicalForm, Construction>,
}

impl ClosureResult {
    pub fn members(&self) -> BTreeSet<CanonicalForm> {
        self.stages.iter().flatten().cloned().collect()
    }

    pub fn contains(&self, form: &CanonicalForm) -> bool {
        self.witnesses.contains_key(form)
    }

    pub fn witness(&self, form: &CanonicalForm) -> Option<&Construction> {
        self.witnesses.get(form)
    }

    pub fn to_json(&self) -> ClosureJson {
        ClosureJson {
            operator: self.operator,
            bound: self.bound,
            stages: self
                .stages
                .iter()
                .map(|s| s.iter().map(CanonicalForm::to_string).collect())
                .collect(),
            stabilized_at: self.stabilized_at,
            cross_check: self.cross_check,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureJson {
    pub operator: Operator,
    pub bound: usize,
    pub stages: Vec<Vec<String>>,
    pub stabilized_at: usize,
    pub cross_check: bool,
}

type Members = BTreeMap<CanonicalForm, Construction>;

fn check_bound(bound: usize, budget: usize) -> Result<(), ClassError> {
    if bound == 0 || bound > budget {
        return Err(PosetError::BudgetExceeded {
            what: "closure size bound",
            size: bound,
            budget,
        }
        .into());
    }
    Ok(())
}

fn base_members(base: &ClassSpec, bound: usize) -> Result<Members, ClassError> {
    Ok(base
        .members_up_to(bound)?
        .into_iter()
        .map(|form| (form.clone(), Construction::Base { form }))
        .collect())
}

fn by_size(members: &Members) -> Vec<(FinitePoset, &Construction)> {
    let mut v: Vec<(FinitePoset, &Construction)> = members.iter().map(|(f, c)| (f.to_poset(), c)).collect();
    v.sort_by_key(|(p, _)| p.len());
    v
}

/// All sums `Σ_I X_i` with summands from `inputs` and at most `bound`
/// elements.
fn sigma_step(inputs: &[(FinitePoset, Construction)], bound: usize) -> Result<Members, ClassError> {
    let mut out = Members::new();
    for (p, c) in inputs {
        if p.len() <= bound {
            out.entry(canonical_form(p)?).or_insert_with(|| c.clone());
        }
    }
    let smallest = inputs.iter().map(|(p, _)| p.len()).min().unwrap_or(usize::MAX);
    for m in 2..=bound {
        if m.saturating_mul(smallest) > bound {
            break;
        }
        for idx in posets_of_size(m)? {
            let index = idx.to_poset();
            let mut chosen = Vec::with_capacity(m);
            assign(&index, inputs, bound, smallest, &mut chosen, &mut out)?;
        }
    }
    Ok(out)
}

fn assign(
    index: &FinitePoset,
    inputs: &[(FinitePoset, Construction)],
    room: usize,
    smallest: usize,
    chosen: &mut Vec<usize>,
    out: &mut Members,
) -> Result<(), ClassError> {
    let m = index.len();
    if chosen.len() == m {
        let parts: Vec<FinitePoset> = chosen.iter().map(|&i| inputs[i].0.clone()).collect();
        let sum = lex_sum(index, &parts)?;
        let form = canonical_form(&sum)?;
        out.entry(form).or_insert_with(|| Construction::Sum {
            index: index.clone(),
            summands: chosen.iter().map(|&i| inputs[i].1.clone()).collect(),
        });
        return Ok(());
    }
    let reserve = (m - chosen.len() - 1) * smallest;
    for (i, (p, _)) in inputs.iter().enumerate() {
        if p.len() + reserve > room {
            continue;
        }
        chosen.push(i);
        assign(index, inputs, room - p.len(), smallest, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

fn owned(members: &Members) -> Vec<(FinitePoset, Construction)> {
    by_size(members).into_iter().map(|(p, c)| (p, c.clone())).collect()
}

fn rooted_inputs(members: &Members, bound: usize) -> Result<Vec<(FinitePoset, Construction)>, ClassError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (p, c) in by_size(members) {
        let (r, rc) = if p.has_min() {
            (p, c.clone())
        } else {
            (rooted(&p), Construction::Rooted { of: Box::new(c.clone()) })
        };
        if r.len() <= bound && seen.insert(canonical_form(&r)?) {
            out.push((r, rc));
        }
    }
    Ok(out)
}

/// Disjoint unions of direct products of `inputs`, at most `bound` elements.
fn union_product_step(inputs: &[(FinitePoset, Construction)], bound: usize) -> Result<Members, ClassError> {
    let mut products = Members::new();
    let factors: Vec<&(FinitePoset, Construction)> = inputs.iter().filter(|(p, _)| p.len() > 1).collect();
    for (p, c) in inputs.iter().filter(|(p, _)| p.len() == 1) {
        products.entry(canonical_form(p)?).or_insert_with(|| c.clone());
    }
    let mut chosen = Vec::new();
    multisets(factors.len(), &mut chosen, &mut |chosen| {
        let size: usize = chosen.iter().map(|&i| factors[i].0.len()).product();
        size <= bound
    }, &mut |chosen| {
        let ps: Vec<FinitePoset> = chosen.iter().map(|&i| factors[i].0.clone()).collect();
        let p = direct_product(&ps)?;
        let form = canonical_form(&p)?;
        products.entry(form).or_insert_with(|| {
            if chosen.len() == 1 {
                factors[chosen[0]].1.clone()
            } else {
                Construction::Product {
                    factors: chosen.iter().map(|&i| factors[i].1.clone()).collect(),
                }
            }
        });
        Ok(())
    })?;
    let prods = owned(&products);
    let mut out = Members::new();
    multisets(prods.len(), &mut chosen, &mut |chosen| {
        chosen.iter().map(|&i| prods[i].0.len()).sum::<usize>() <= bound
    }, &mut |chosen| {
        let ps: Vec<FinitePoset> = chosen.iter().map(|&i| prods[i].0.clone()).collect();
        let form = canonical_form(&disjoint_union(&ps)?)?;
        out.entry(form).or_insert_with(|| {
            if chosen.len() == 1 {
                prods[chosen[0]].1.clone()
            } else {
                Construction::Union {
                    parts: chosen.iter().map(|&i| prods[i].1.clone()).collect(),
                }
            }
        });
        Ok(())
    })?;
    Ok(out)
}

/// Visits every nonempty multiset of `0..n` (as a nondecreasing list)
/// accepted by `fits`; `fits` must be monotone under extension.
fn multisets(
    n: usize,
    chosen: &mut Vec<usize>,
    fits: &mut dyn FnMut(&[usize]) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> Result<(), ClassError>,
) -> Result<(), ClassError> {
    let start = chosen.last().copied().unwrap_or(0);
    for i in start..n {
        chosen.push(i);
        if fits(chosen) {
            visit(chosen)?;
            multisets(n, chosen, fits, visit)?;
        }
        chosen.pop();
    }
    Ok(())
}

/// Iterates `step` from the base until a step after the first adds nothing.
fn staged(
    base: Members,
    mut step: impl FnMut(&Members) -> Result<Members, ClassError>,
) -> Result<(Vec<Vec<CanonicalForm>>, usize, Members, Members), ClassError> {
    let mut all = base.clone();
    let mut stages = vec![base.keys().cloned().collect::<Vec<_>>()];
    let mut first_step = Members::new();
    let mut n = 0;
    loop {
        let next = step(&all)?;
        if n == 0 {
            first_step = next.clone();
        }
        let new: Members = next.into_iter().filter(|(f, _)| !all.contains_key(f)).collect();
        if n >= 1 && new.is_empty() {
            break;
        }
        stages.push(new.keys().cloned().collect());
        all.extend(new);
        n += 1;
    }
    Ok((stages, n, all, first_step))
}

/// `<base>_Σ` restricted to at most `bound` elements.
pub fn closure_sigma(base: &ClassSpec, bound: usize) -> Result<ClosureResult, ClassError> {
    closure_sigma_with_budget(base, bound, DEFAULT_CLOSURE_BUDGET)
}

pub fn closure_sigma_with_budget(base: &ClassSpec, bound: usize, budget: usize) -> Result<ClosureResult, ClassError> {
    check_bound(bound, budget)?;
    let b = base_members(base, bound)?;
    let (stages, s, all, first) = staged(b.clone(), |m| sigma_step(&owned(m), bound))?;
    let mut one_step: BTreeSet<CanonicalForm> = b.keys().cloned().collect();
    one_step.extend(first.keys().cloned());
    let cross_check = one_step == all.keys().cloned().collect();
    Ok(ClosureResult {
        operator: Operator::Sigma,
        bound,
        stages,
        stabilized_at: s,
        cross_check,
        witnesses: all,
    })
}

/// `<base>_Σʳ` restricted to at most `bound` elements.
pub fn closure_sigma_rooted(base: &ClassSpec, bound: usize) -> Result<ClosureResult, ClassError> {
    closure_sigma_rooted_with_budget(base, bound, DEFAULT_CLOSURE_BUDGET)
}

pub fn closure_sigma_rooted_with_budget(
    base: &ClassSpec,
    bound: usize,
    budget: usize,
) -> Result<ClosureResult, ClassError> {
    check_bound(bound, budget)?;
    let b = base_members(base, bound)?;
    let (stages, s, all, _) = staged(b, |m| sigma_step(&rooted_inputs(m, bound)?, bound))?;
    let mut cross_check = true;
    for form in posets_up_to(bound)? {
        let found = membership(&form.to_poset(), base, Operator::SigmaRooted)?.is_some();
        cross_check &= found == all.contains_key(&form);
    }
    Ok(ClosureResult {
        operator: Operator::SigmaRooted,
        bound,
        stages,
        stabilized_at: s,
        cross_check,
        witnesses: all,
    })
}

/// `<base>_{∪̇Π}` restricted to at most `bound` elements.
pub fn closure_union_product(base: &ClassSpec, bound: usize) -> Result<ClosureResult, ClassError> {
    closure_union_product_with_budget(base, bound, DEFAULT_CLOSURE_BUDGET.max(crate::poset::CATALOG_BUDGET))
}

pub fn closure_union_product_with_budget(
    base: &ClassSpec,
    bound: usize,
    budget: usize,
) -> Result<ClosureResult, ClassError> {
    check_bound(bound, budget)?;
    let b = base_members(base, bound)?;
    let (stages, s, all, _) = staged(b.clone(), |m| union_product_step(&owned(m), bound))?;
    let binary = binary_fixpoint(&b, bound)?;
    let cross_check = binary == all.keys().cloned().collect::<BTreeSet<_>>();
    Ok(ClosureResult {
        operator: Operator::UnionProduct,
        bound,
        stages,
        stabilized_at: s,
        cross_check,
        witnesses: all,
    })
}

/// Closes under binary disjoint union and binary direct product.
fn binary_fixpoint(base: &Members, bound: usize) -> Result<BTreeSet<CanonicalForm>, ClassError> {
    let mut set: BTreeSet<CanonicalForm> = base.keys().cloned().collect();
    loop {
        let ps: Vec<FinitePoset> = set.iter().map(CanonicalForm::to_poset).collect();
        let mut added = BTreeSet::new();
        for (i, a) in ps.iter().enumerate() {
            for b in &ps[i..] {
                if a.len() + b.len() <= bound {
                    let f = canonical_form(&disjoint_union(&[a.clone(), b.clone()])?)?;
                    if !set.contains(&f) {
                        added.insert(f);
                    }
                }
                if a.len() * b.len() <= bound {
                    let f = canonical_form(&direct_product(&[a.clone(), b.clone()])?)?;
                    if !set.contains(&f) {
                        added.insert(f);
                    }
                }
            }
        }
        if added.is_empty() {
            return Ok(set);
        }
        set.extend(added);
    }
}

/// Dispatches on the operator.
pub fn closure(op: Operator, base: &ClassSpec, bound: usize, budget: usize) -> Result<ClosureResult, ClassError> {
    match op {
        Operator::Sigma => closure_sigma_with_budget(base, bound, budget),
        Operator::SigmaRooted => closure_sigma_rooted_with_budget(base, bound, budget),
        Operator::UnionProduct => closure_union_product_with_budget(base, bound, budget),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::Predicate;
    use crate::poset::{add_bottom, posets_up_to};

    fn form(p: &FinitePoset) -> CanonicalForm {
        canonical_form(p).unwrap()
    }

    #[test]
    fn singletons_generate_everything() {
        let r = closure_sigma(&ClassSpec::predicate(Predicate::SingletonOnly), 4).unwrap();
        let all: BTreeSet<_> = posets_up_to(4).unwrap().into_iter().collect();
        assert_eq!(r.members(), all);
        assert_eq!(r.stabilized_at, 1);
        assert!(r.cross_check);
    }

    #[test]
    fn two_chains() {
        let base = ClassSpec::seeds([&FinitePoset::chain(2)]).unwrap();
        let r = closure_sigma(&base, 4).unwrap();
        let m = r.members();
        assert!(m.contains(&form(&FinitePoset::chain(4))));
        assert!(m.contains(&form(&disjoint_union(&[FinitePoset::chain(2), FinitePoset::chain(2)]).unwrap())));
        assert!(!m.contains(&form(&FinitePoset::chain(3))));
        // 2-chain, and the five 2-element-index sums... of which chain/antichain
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn rooted_stages() {
        let r = closure_sigma_rooted(&ClassSpec::predicate(Predicate::AllFinite), 5).unwrap();
        assert_eq!(r.members().len(), 1 + 2 + 5 + 16 + 63);
        assert_eq!(r.stabilized_at, 1);
        assert!(r.stages[1].is_empty());
        assert!(r.cross_check);
        let anti = ClassSpec::seeds([&FinitePoset::antichain(2)]).unwrap();
        let r = closure_sigma_rooted(&anti, 3).unwrap();
        assert!(r.contains(&form(&add_bottom(&FinitePoset::antichain(2)))));
        assert!(r.cross_check);
    }

    #[test]
    fn union_products_of_two_chains() {
        let base = ClassSpec::seeds([&FinitePoset::chain(2)]).unwrap();
        let r = closure_union_product(&base, 4).unwrap();
        let diamond = direct_product(&[FinitePoset::chain(2), FinitePoset::chain(2)]).unwrap();
        let twice = disjoint_union(&[FinitePoset::chain(2), FinitePoset::chain(2)]).unwrap();
        let expected: BTreeSet<_> = [form(&FinitePoset::chain(2)), form(&diamond), form(&twice)].into();
        assert_eq!(r.members(), expected);
        assert!(r.cross_check);
        let r = closure_union_product(&ClassSpec::predicate(Predicate::SingletonOnly), 5).unwrap();
        let anti: BTreeSet<_> = (1..=5).map(|n| form(&FinitePoset::antichain(n))).collect();
        assert_eq!(r.members(), anti);
    }

    #[test]
    fn budget() {
        assert!(closure_sigma(&ClassSpec::predicate(Predicate::Linear), 9).is_err());
        assert!(closure_sigma(&ClassSpec::predicate(Predicate::Linear), 0).is_err());
    }

    #[test]
    fn json() {
        let r = closure_sigma(&ClassSpec::predicate(Predicate::SingletonOnly), 2).unwrap();
        assert_eq!(
            serde_json::to_string(&r.to_json()).unwrap(),
            r#"{"operator":"sigma","bound":2,"stages":[["1:"],["2:00","2:10"]],"stabilized_at":1,"cross_check":true}"#
        );
    }
}
