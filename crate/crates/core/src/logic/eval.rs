//! Tarskian satisfaction over finite posets.
//!
//! Formulas are compiled to a slot-addressed tree first: every free
//! variable gets a slot in the caller's order and every quantifier a
//! private slot, so evaluation is a plain recursive walk over an array of
//! element positions.

use std::collections::BTreeMap;

use super::{Formula, FormulaError};
use crate::poset::FinitePoset;

/// A map from variable names to element positions of one poset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, usize>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Resolves `(variable, element name)` pairs against `x`.
    pub fn from_names<V: AsRef<str>, E: AsRef<str>>(
        x: &FinitePoset,
        pairs: &[(V, E)],
    ) -> Result<Assignment, FormulaError> {
        let mut out = Assignment::new();
        for (var, elem) in pairs {
            let a = x
                .index_of(elem.as_ref())
                .ok_or_else(|| FormulaError::UnknownElement(elem.as_ref().to_owned()))?;
            out.set(var.as_ref(), a);
        }
        Ok(out)
    }

    pub fn set(&mut self, var: &str, element: usize) {
        self.0.insert(var.to_owned(), element);
    }

    pub fn with(mut self, var: &str, element: usize) -> Assignment {
        self.set(var, element);
        self
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

#[derive(Debug, Clone)]
enum Node {
    Eq(usize, usize),
    Le(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A formula compiled against a fixed ordering of its free variables.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    root: Node,
    inputs: Vec<String>,
    slots: usize,
}

impl CompiledFormula {
    /// Compiles `f` with `inputs` as its argument order. Every free
    /// variable of `f` must appear in `inputs`; extra inputs are ignored.
    pub fn new(f: &Formula, inputs: &[String]) -> Result<CompiledFormula, FormulaError> {
        let mut scope: Vec<(String, usize)> =
            inputs.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut slots = inputs.len();
        let root = compile(f, &mut scope, &mut slots)?;
        Ok(CompiledFormula {
            root,
            inputs: inputs.to_vec(),
            slots,
        })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    /// Evaluates with `values[i]` bound to `inputs[i]`.
    pub fn eval(&self, x: &FinitePoset, values: &[usize]) -> bool {
        assert_eq!(values.len(), self.inputs.len(), "one value per input variable");
        let mut env = vec![0usize; self.slots];
        env[..values.len()].copy_from_slice(values);
        holds(&self.root, x, &mut env)
    }
}

fn compile(f: &Formula, scope: &mut Vec<(String, usize)>, slots: &mut usize) -> Result<Node, FormulaError> {
    let lookup = |scope: &[(String, usize)], v: &str| {
        scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, s)| s)
            .ok_or_else(|| FormulaError::Unassigned(v.to_owned()))
    };
    Ok(match f {
        Formula::Eq(a, b) => Node::Eq(lookup(scope, a)?, lookup(scope, b)?),
        Formula::Le(a, b) => Node::Le(lookup(scope, a)?, lookup(scope, b)?),
        Formula::Not(g) => Node::Not(Box::new(compile(g, scope, slots)?)),
        Formula::And(g, h) => Node::And(Box::new(compile(g, scope, slots)?), Box::new(compile(h, scope, slots)?)),
        Formula::Or(g, h) => Node::Or(Box::new(compile(g, scope, slots)?), Box::new(compile(h, scope, slots)?)),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let slot = *slots;
            *slots += 1;
            scope.push((v.clone(), slot));
            let body = compile(g, scope, slots);
            scope.pop();
            let body = Box::new(body?);
            if matches!(f, Formula::Forall(..)) {
                Node::Forall(slot, body)
            } else {
                Node::Exists(slot, body)
            }
        }
    })
}

fn holds(node: &Node, x: &FinitePoset, env: &mut [usize]) -> bool {
    match node {
        Node::Eq(a, b) => env[*a] == env[*b],
        Node::Le(a, b) => x.le(env[*a], env[*b]),
        Node::Not(g) => !holds(g, x, env),
        Node::And(g, h) => holds(g, x, env) && holds(h, x, env),
        Node::Or(g, h) => holds(g, x, env) || holds(h, x, env),
        Node::Forall(slot, g) => (0..x.len()).all(|e| {
            env[*slot] = e;
            holds(g, x, env)
        }),
        Node::Exists(slot, g) => (0..x.len()).any(|e| {
            env[*slot] = e;
            holds(g, x, env)
        }),
    }
}

/// `x |= f[a]`. Every free variable of `f` must be assigned.
pub fn evaluate(x: &FinitePoset, f: &Formula, a: &Assignment) -> Result<bool, FormulaError> {
    let inputs: Vec<String> = f.free_vars().into_iter().collect();
    let mut values = Vec::with_capacity(inputs.len());
    for v in &inputs {
        let e = a.get(v).ok_or_else(|| FormulaError::Unassigned(v.clone()))?;
        if e >= x.len() {
            return Err(FormulaError::UnknownElement(format!("#{e}")));
        }
        values.push(e);
    }
    Ok(CompiledFormula::new(f, &inputs)?.eval(x, &values))
}
