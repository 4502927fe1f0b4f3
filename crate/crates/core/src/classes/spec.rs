use std::collections::BTreeSet;
use std::fmt;

use serde_json::Value;

use super::{is_antichain, is_boolean_algebra, is_linear, is_reticle, is_reversed_tree, is_tree, ClassError};
use crate::poset::{canonical_form, posets_up_to, CanonicalForm, FinitePoset, PosetJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Predicate {
    Linear,
    Tree,
    ReversedTree,
    Reticle,
    BooleanAlgebra,
    HasMin,
    HasMax,
    Antichain,
    AllFinite,
    SingletonOnly,
}

impl Predicate {
    pub const ALL: [Predicate; 10] = [
        Predicate::Linear,
        Predicate::Tree,
        Predicate::ReversedTree,
        Predicate::Reticle,
        Predicate::BooleanAlgebra,
        Predicate::HasMin,
        Predicate::HasMax,
        Predicate::Antichain,
        Predicate::AllFinite,
        Predicate::SingletonOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Linear => "linear",
            Predicate::Tree => "tree",
            Predicate::ReversedTree => "reversed-tree",
            Predicate::Reticle => "reticle",
            Predicate::BooleanAlgebra => "boolean-algebra",
            Predicate::HasMin => "has-min",
            Predicate::HasMax => "has-max",
            Predicate::Antichain => "antichain",
            Predicate::AllFinite => "all-finite",
            Predicate::SingletonOnly => "singleton-only",
        }
    }

    fn from_name(s: &str) -> Option<Predicate> {
        match s {
            "min" => Some(Predicate::HasMin),
            "max" => Some(Predicate::HasMax),
            _ => Predicate::ALL.into_iter().find(|p| p.name() == s),
        }
    }

    pub fn holds(self, x: &FinitePoset) -> bool {
        match self {
            Predicate::Linear => is_linear(x),
            Predicate::Tree => is_tree(x),
            Predicate::ReversedTree => is_reversed_tree(x),
            Predicate::Reticle => is_reticle(x),
            Predicate::BooleanAlgebra => is_boolean_algebra(x),
            Predicate::HasMin => x.has_min(),
            Predicate::HasMax => x.has_max(),
            Predicate::Antichain => is_antichain(x),
            Predicate::AllFinite => true,
            Predicate::SingletonOnly => x.len() == 1,
        }
    }
}

/// A base class: an intersection of named predicates, or an explicit set
/// of isomorphism types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassSpec {
    Predicates(Vec<Predicate>),
    Seeds(BTreeSet<CanonicalForm>),
}

impl ClassSpec {
    pub fn predicate(p: Predicate) -> ClassSpec {
        ClassSpec::Predicates(vec![p])
    }

    pub fn seeds<'a>(posets: impl IntoIterator<Item = &'a FinitePoset>) -> Result<ClassSpec, ClassError> {
        let mut set = BTreeSet::new();
        for p in posets {
            set.insert(canonical_form(p)?);
        }
        Ok(ClassSpec::Seeds(set))
    }

    /// Parses `name`, `name & qualifier & ...` or `seeds:PATH`. The seeds
    /// file holds a JSON array whose entries are poset objects or canonical
    /// form strings `size:bits`.
    pub fn parse(text: &str) -> Result<ClassSpec, ClassError> {
        let trimmed = text.trim();
        if let Some(path) = trimmed.strip_prefix("seeds:") {
            let path = path.trim().trim_start_matches('[').trim_end_matches(']');
            let body = std::fs::read_to_string(path).map_err(|e| ClassError::Seeds {
                path: path.to_owned(),
                message: e.to_string(),
            })?;
            return ClassSpec::parse_seeds(&body).map_err(|message| ClassError::Seeds {
                path: path.to_owned(),
                message,
            });
        }
        let mut preds = Vec::new();
        for part in trimmed.split('&') {
            let name = part.trim();
            let p = Predicate::from_name(name).ok_or_else(|| ClassError::Spec {
                text: text.to_owned(),
                message: if name.is_empty() {
                    "empty class name".to_owned()
                } else {
                    format!("unknown class `{name}`")
                },
            })?;
            if !preds.contains(&p) {
                preds.push(p);
            }
        }
        Ok(ClassSpec::Predicates(preds))
    }

    /// Reads a JSON array of seeds.
    pub fn parse_seeds(body: &str) -> Result<ClassSpec, String> {
        let items: Vec<Value> = serde_json::from_str(body).map_err(|e| e.to_string())?;
        let mut set = BTreeSet::new();
        for (i, item) in items.into_iter().enumerate() {
            let form = match item {
                Value::String(s) => {
                    CanonicalForm::parse(&s).ok_or_else(|| format!("entry {i}: `{s}` is not a canonical form"))?
                }
                other => {
                    let raw: PosetJson = serde_json::from_value(other).map_err(|e| format!("entry {i}: {e}"))?;
                    let p = raw.into_poset().map_err(|e| format!("entry {i}: {e}"))?;
                    canonical_form(&p).map_err(|e| format!("entry {i}: {e}"))?
                }
            };
            set.insert(form);
        }
        Ok(ClassSpec::Seeds(set))
    }

    pub fn contains(&self, x: &FinitePoset) -> Result<bool, ClassError> {
        Ok(match self {
            ClassSpec::Predicates(ps) => ps.iter().all(|p| p.holds(x)),
            ClassSpec::Seeds(set) => set.contains(&canonical_form(x)?),
        })
    }

    /// Canonical forms of the members with at most `n` elements, by size
    /// then code.
    pub fn members_up_to(&self, n: usize) -> Result<Vec<CanonicalForm>, ClassError> {
        Ok(match self {
            ClassSpec::Predicates(ps) => posets_up_to(n)?
                .into_iter()
                .filter(|f| {
                    let x = f.to_poset();
                    ps.iter().all(|p| p.holds(&x))
                })
                .collect(),
            ClassSpec::Seeds(set) => {
                let mut v: Vec<CanonicalForm> = set.iter().filter(|f| f.size <= n).cloned().collect();
                v.sort_by(|a, b| (a.size, &a.code).cmp(&(b.size, &b.code)));
                v
            }
        })
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSpec::Predicates(ps) => {
                let names: Vec<&str> = ps.iter().map(|p| p.name()).collect();
                f.write_str(&names.join(" & "))
            }
            ClassSpec::Seeds(set) => {
                let forms: Vec<String> = set.iter().map(|c| c.to_string()).collect();
                write!(f, "seeds{{{}}}", forms.join(","))
            }
        }
    }
}
