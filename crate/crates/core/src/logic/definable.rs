use std::collections::BTreeSet;

use super::{CompiledFormula, Formula, FormulaError};
use crate::poset::{canonical_form, CanonicalForm, FinitePoset};

/// The set `{x : X |= phi[params, x]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinableSet {
    pub formula: Formula,
    pub subject: String,
    pub parameters: Vec<(String, usize)>,
    /// Member positions in increasing order.
    pub members: Vec<usize>,
}

impl DefinableSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The induced substructure, `None` when the set is empty.
    pub fn substructure(&self, x: &FinitePoset) -> Option<FinitePoset> {
        x.induced(&self.members).ok()
    }
}

fn compile_relativizer(
    phi: &Formula,
    params: &[String],
    subject: &str,
) -> Result<CompiledFormula, FormulaError> {
    if let Some(v) = phi
        .free_vars()
        .into_iter()
        .find(|v| v != subject && !params.contains(v))
    {
        return Err(FormulaError::RelativizerScope(v));
    }
    let mut inputs = params.to_vec();
    inputs.push(subject.to_owned());
    CompiledFormula::new(phi, &inputs)
}

/// Members of `x` satisfying `phi` with the given parameter values.
pub fn definable_set(
    x: &FinitePoset,
    phi: &Formula,
    params: &[(String, usize)],
    subject: &str,
) -> Result<DefinableSet, FormulaError> {
    let names: Vec<String> = params.iter().map(|(v, _)| v.clone()).collect();
    let compiled = compile_relativizer(phi, &names, subject)?;
    let mut values: Vec<usize> = params.iter().map(|&(_, a)| a).collect();
    if let Some(&bad) = values.iter().find(|&&a| a >= x.len()) {
        return Err(FormulaError::UnknownElement(format!("#{bad}")));
    }
    values.push(0);
    let last = values.len() - 1;
    let members = (0..x.len())
        .filter(|&e| {
            values[last] = e;
            compiled.eval(x, &values)
        })
        .collect();
    Ok(DefinableSet {
        formula: phi.clone(),
        subject: subject.to_owned(),
        parameters: params.to_vec(),
        members,
    })
}

/// Isomorphism types of the substructures defined by `phi` over all
/// parameter tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WInvariant {
    pub forms: BTreeSet<CanonicalForm>,
    /// Parameter tuples whose defined set was empty (skipped).
    pub empty_tuples: usize,
}

pub fn w_invariant(
    x: &FinitePoset,
    phi: &Formula,
    params: &[String],
    subject: &str,
) -> Result<WInvariant, FormulaError> {
    let compiled = compile_relativizer(phi, params, subject)?;
    let m = params.len();
    let mut forms = BTreeSet::new();
    let mut empty_tuples = 0;
    let mut values = vec![0usize; m + 1];
    loop {
        let members: Vec<usize> = (0..x.len())
            .filter(|&e| {
                values[m] = e;
                compiled.eval(x, &values)
            })
            .collect();
        match x.induced(&members) {
            Ok(sub) => {
                forms.insert(canonical_form(&sub)?);
            }
            Err(_) => empty_tuples += 1,
        }
        // next tuple in X^m
        let mut k = 0;
        while k < m {
            values[k] += 1;
            if values[k] < x.len() {
                break;
            }
            values[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
    }
    Ok(WInvariant { forms, empty_tuples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    #[test]
    fn down_set_of_a_parameter() {
        let c = FinitePoset::from_relation(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let d = definable_set(&c, &parse("v <= w").unwrap(), &[("w".into(), 1)], "v").unwrap();
        assert_eq!(d.members, vec![0, 1]);
        assert_eq!(d.substructure(&c).unwrap().names(), &["a", "b"]);
    }

    #[test]
    fn whole_domain() {
        let n = FinitePoset::n_poset();
        let d = definable_set(&n, &parse("v = v").unwrap(), &[], "v").unwrap();
        assert_eq!(d.members, vec![0, 1, 2, 3]);
        let w = w_invariant(&n, &parse("v = v").unwrap(), &[], "v").unwrap();
        assert_eq!(w.forms, BTreeSet::from([canonical_form(&n).unwrap()]));
    }

    #[test]
    fn empty_sets_are_flagged_and_skipped() {
        let c = FinitePoset::chain(2);
        let d = definable_set(&c, &parse("!(v = v)").unwrap(), &[], "v").unwrap();
        assert!(d.is_empty() && d.substructure(&c).is_none());
        let w = w_invariant(&c, &parse("v <= w & !(v = w)").unwrap(), &["w".into()], "v").unwrap();
        assert_eq!(w.empty_tuples, 1);
        assert_eq!(w.forms.len(), 1);
    }

    #[test]
    fn w_of_down_sets_in_a_chain() {
        let w = w_invariant(&FinitePoset::chain(3), &parse("v <= w").unwrap(), &["w".into()], "v").unwrap();
        let expected: BTreeSet<_> = (1..=3).map(|n| canonical_form(&FinitePoset::chain(n)).unwrap()).collect();
        assert_eq!(w.forms, expected);
        assert_eq!(w.empty_tuples, 0);
    }

    #[test]
    fn scope_is_checked() {
        let c = FinitePoset::chain(2);
        assert!(definable_set(&c, &parse("v <= q").unwrap(), &[], "v").is_err());
        assert!(w_invariant(&c, &parse("v <= q").unwrap(), &[], "v").is_err());
    }
}
