use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Serialize, Serializer};

use super::{closure_union_product, ClassError, ClassSpec, Operator};
use crate::fld::{autonomous_partitions, DEFAULT_PARTITION_BUDGET};
use crate::poset::{
    add_bottom, canonical_form, direct_product, disjoint_union, lex_sum, numbered, CanonicalForm, FinitePoset,
    PosetJson,
};

/// How a poset is built from base members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Construction {
    /// A member of the base class.
    Base {
        #[serde(serialize_with = "as_display")]
        form: CanonicalForm,
    },
    /// `Σ_I X_i`, one summand per index element in position order.
    Sum {
        #[serde(serialize_with = "as_poset_json")]
        index: FinitePoset,
        summands: Vec<Construction>,
    },
    /// `1 + X`, applied only when `X` has no least element.
    Rooted { of: Box<Construction> },
    Union { parts: Vec<Construction> },
    Product { factors: Vec<Construction> },
}

fn as_display<S: Serializer>(f: &CanonicalForm, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

fn as_poset_json<S: Serializer>(p: &FinitePoset, s: S) -> Result<S::Ok, S::Error> {
    PosetJson::from(p).serialize(s)
}

impl Construction {
    /// Rebuilds the poset described by the construction.
    pub fn evaluate(&self) -> FinitePoset {
        match self {
            Construction::Base { form } => form.to_poset(),
            Construction::Sum { index, summands } => {
                let parts: Vec<FinitePoset> = summands.iter().map(Construction::evaluate).collect();
                lex_sum(index, &parts).expect("one summand per index element")
            }
            Construction::Rooted { of } => add_bottom(&of.evaluate()),
            Construction::Union { parts } => {
                let ps: Vec<FinitePoset> = parts.iter().map(Construction::evaluate).collect();
                disjoint_union(&ps).expect("nonempty")
            }
            Construction::Product { factors } => {
                let ps: Vec<FinitePoset> = factors.iter().map(Construction::evaluate).collect();
                direct_product(&ps).expect("nonempty")
            }
        }
    }

    /// Nesting depth; base members have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Construction::Base { .. } => 0,
            Construction::Sum { summands: c, .. }
            | Construction::Union { parts: c }
            | Construction::Product { factors: c } => 1 + c.iter().map(Construction::depth).max().unwrap_or(0),
            Construction::Rooted { of } => 1 + of.depth(),
        }
    }
}

/// Decides `x ∈ <base>_op` and returns a construction of a poset
/// isomorphic to `x` when it is a member.
pub fn membership(x: &FinitePoset, base: &ClassSpec, op: Operator) -> Result<Option<Construction>, ClassError> {
    match op {
        Operator::Sigma => sigma_member(x, base),
        Operator::SigmaRooted => RootedSearch::new(base).member(x),
        Operator::UnionProduct => {
            let result = closure_union_product(base, x.len())?;
            Ok(result.witness(&canonical_form(x)?).cloned())
        }
    }
}

fn quotient(x: &FinitePoset, blocks: &[Vec<usize>]) -> FinitePoset {
    let m = blocks.len();
    let mut le = vec![false; m * m];
    for i in 0..m {
        for j in 0..m {
            le[i * m + j] = i == j || x.le(blocks[i][0], blocks[j][0]);
        }
    }
    FinitePoset::from_matrix(numbered(m), le).expect("quotient of an autonomous partition")
}

fn sigma_member(x: &FinitePoset, base: &ClassSpec) -> Result<Option<Construction>, ClassError> {
    if base.contains(x)? {
        return Ok(Some(Construction::Base {
            form: canonical_form(x)?,
        }));
    }
    let error = RefCell::new(None);
    let partitions = autonomous_partitions(x, DEFAULT_PARTITION_BUDGET, |b| {
        let sub = x.induced(b).expect("nonempty");
        base.contains(&sub).unwrap_or_else(|e| {
            error.borrow_mut().get_or_insert(e);
            false
        })
    })?;
    if let Some(e) = error.into_inner() {
        return Err(e);
    }
    let Some(blocks) = partitions.into_iter().next() else {
        return Ok(None);
    };
    let summands = blocks
        .iter()
        .map(|b| {
            Ok(Construction::Base {
                form: canonical_form(&x.induced(b)?)?,
            })
        })
        .collect::<Result<Vec<_>, ClassError>>()?;
    Ok(Some(Construction::Sum {
        index: quotient(x, &blocks),
        summands,
    }))
}

/// Recursive search for `<base>_Σʳ`, memoized by isomorphism type.
struct RootedSearch<'a> {
    base: &'a ClassSpec,
    memo: RefCell<HashMap<CanonicalForm, Option<Construction>>>,
}

impl<'a> RootedSearch<'a> {
    fn new(base: &'a ClassSpec) -> RootedSearch<'a> {
        RootedSearch {
            base,
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn member(&self, z: &FinitePoset) -> Result<Option<Construction>, ClassError> {
        let form = canonical_form(z)?;
        if let Some(hit) = self.memo.borrow().get(&form) {
            return Ok(hit.clone());
        }
        let found = self.search(z, &form)?;
        self.memo.borrow_mut().insert(form, found.clone());
        Ok(found)
    }

    /// A construction of `w` as `(Y)_r` with `Y` in the closure. `whole`
    /// marks the single-block case, where `Y = w` would be circular.
    fn rooted_summand(&self, w: &FinitePoset, whole: bool) -> Result<Option<Construction>, ClassError> {
        let Some(bottom) = w.min() else {
            return Ok(None);
        };
        if !whole {
            if let Some(c) = self.member(w)? {
                return Ok(Some(c));
            }
        }
        let rest: Vec<usize> = (0..w.len()).filter(|&a| a != bottom).collect();
        if rest.is_empty() {
            return Ok(None);
        }
        let y = w.induced(&rest)?;
        if y.has_min() {
            return Ok(None);
        }
        Ok(self.member(&y)?.map(|c| Construction::Rooted { of: Box::new(c) }))
    }

    fn search(&self, z: &FinitePoset, form: &CanonicalForm) -> Result<Option<Construction>, ClassError> {
        if self.base.contains(z)? {
            return Ok(Some(Construction::Base { form: form.clone() }));
        }
        let n = z.len();
        let error = RefCell::new(None);
        let summands: RefCell<HashMap<Vec<usize>, Option<Construction>>> = RefCell::new(HashMap::new());
        let partitions = autonomous_partitions(z, DEFAULT_PARTITION_BUDGET, |b| {
            if error.borrow().is_some() {
                return false;
            }
            let sub = z.induced(b).expect("nonempty");
            match self.rooted_summand(&sub, b.len() == n) {
                Ok(c) => {
                    let ok = c.is_some();
                    summands.borrow_mut().insert(b.to_vec(), c);
                    ok
                }
                Err(e) => {
                    *error.borrow_mut() = Some(e);
                    false
                }
            }
        })?;
        if let Some(e) = error.into_inner() {
            return Err(e);
        }
        let Some(blocks) = partitions.into_iter().next() else {
            return Ok(None);
        };
        let summands = summands.into_inner();
        let parts: Vec<Construction> = blocks
            .iter()
            .map(|b| summands[b].clone().expect("usable block"))
            .collect();
        Ok(Some(if parts.len() == 1 {
            parts.into_iter().next().expect("one part")
        } else {
            Construction::Sum {
                index: quotient(z, &blocks),
                summands: parts,
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::Predicate;
    use crate::poset::{isomorphic, rooted};

    #[test]
    fn four_chain_from_two_chains() {
        let base = ClassSpec::seeds([&FinitePoset::chain(2)]).unwrap();
        let c = membership(&FinitePoset::chain(4), &base, Operator::Sigma).unwrap().unwrap();
        assert!(isomorphic(&c.evaluate(), &FinitePoset::chain(4)));
        assert!(matches!(&c, Construction::Sum { index, summands } if index.len() == 2 && summands.len() == 2));
        assert!(membership(&FinitePoset::chain(3), &base, Operator::Sigma).unwrap().is_none());
    }

    #[test]
    fn n_is_a_sum_of_singletons() {
        let base = ClassSpec::predicate(Predicate::Linear);
        let n = FinitePoset::n_poset();
        let c = membership(&n, &base, Operator::Sigma).unwrap().unwrap();
        assert!(matches!(&c, Construction::Sum { summands, .. } if summands.len() == 4));
        assert!(isomorphic(&c.evaluate(), &n));
    }

    #[test]
    fn rooted_closure() {
        let base = ClassSpec::seeds([&FinitePoset::antichain(2)]).unwrap();
        let v = rooted(&FinitePoset::antichain(2));
        let c = membership(&v, &base, Operator::SigmaRooted).unwrap().unwrap();
        assert_eq!(c, Construction::Rooted { of: Box::new(Construction::Base { form: canonical_form(&FinitePoset::antichain(2)).unwrap() }) });
        assert!(isomorphic(&c.evaluate(), &v));
        assert!(membership(&FinitePoset::singleton(), &base, Operator::SigmaRooted).unwrap().is_none());
        let all = ClassSpec::predicate(Predicate::AllFinite);
        let x = FinitePoset::n_poset();
        assert!(isomorphic(&membership(&x, &all, Operator::SigmaRooted).unwrap().unwrap().evaluate(), &x));
    }

    #[test]
    fn union_product() {
        let base = ClassSpec::seeds([&FinitePoset::chain(2)]).unwrap();
        let diamond = direct_product(&[FinitePoset::chain(2), FinitePoset::chain(2)]).unwrap();
        let c = membership(&diamond, &base, Operator::UnionProduct).unwrap().unwrap();
        assert!(isomorphic(&c.evaluate(), &diamond));
        assert!(membership(&FinitePoset::chain(4), &base, Operator::UnionProduct).unwrap().is_none());
    }

    #[test]
    fn json() {
        let c = Construction::Rooted {
            of: Box::new(Construction::Base {
                form: canonical_form(&FinitePoset::antichain(2)).unwrap(),
            }),
        };
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"op":"rooted","of":{"op":"base","form":"2:00"}}"#);
    }
}
