use std::collections::BTreeSet;
use std::fmt;

/// A first-order formula over one binary relation symbol `<=`.
///
/// Implication is not a constructor: `a -> b` is stored as `!a | b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(String, String),
    Le(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn eq(a: impl Into<String>, b: impl Into<String>) -> Formula {
        Eq(a.into(), b.into())
    }

    pub fn le(a: impl Into<String>, b: impl Into<String>) -> Formula {
        Le(a.into(), b.into())
    }

    /// `a < b`, spelled `a <= b & !(a = b)`.
    pub fn lt(a: impl Into<String>, b: impl Into<String>) -> Formula {
        let (a, b) = (a.into(), b.into());
        Formula::le(a.clone(), b.clone()).and(Formula::eq(a, b).not())
    }

    /// `a` and `b` incomparable, spelled `!(a <= b) & !(b <= a)`.
    pub fn incomparable(a: impl Into<String>, b: impl Into<String>) -> Formula {
        let (a, b) = (a.into(), b.into());
        Formula::le(a.clone(), b.clone())
            .not()
            .and(Formula::le(b, a).not())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        self.not().or(other)
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Exists(var.into(), Box::new(body))
    }

    /// Left-nested conjunction; `None` for no conjuncts.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for no disjuncts.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// The sentence `forall v . v = v`, used for empty conjunctions.
    pub fn truth() -> Formula {
        Formula::forall("v", Formula::eq("v", "v"))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Eq(a, b) | Le(a, b) => {
                for v in [a, b] {
                    if !bound.contains(&v.as_str()) {
                        out.insert(v.clone());
                    }
                }
            }
            Not(f) => f.collect_free(bound, out),
            And(f, g) | Or(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Forall(v, f) | Exists(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Variables occurring under a quantifier binding them.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Forall(v, _) | Exists(v, _) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    /// Every variable name occurring anywhere.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Eq(a, b) | Le(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Forall(v, _) | Exists(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Eq(..) | Le(..) => 0,
            Not(f) => f.quantifier_rank(),
            And(f, g) | Or(f, g) => f.quantifier_rank().max(g.quantifier_rank()),
            Forall(_, f) | Exists(_, f) => 1 + f.quantifier_rank(),
        }
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Eq(..) | Le(..) => {}
            Not(g) | Forall(_, g) | Exists(_, g) => g.visit(f),
            And(g, h) | Or(g, h) => {
                g.visit(f);
                h.visit(f);
            }
        }
    }

    /// Capture-avoiding substitution of the variable `to` for the free
    /// occurrences of `from`. Bound variables named `to` are renamed when
    /// they would capture the substituted occurrence.
    pub fn substitute(&self, from: &str, to: &str) -> Formula {
        if from == to {
            return self.clone();
        }
        let rename = |v: &String| if v == from { to.to_owned() } else { v.clone() };
        match self {
            Eq(a, b) => Eq(rename(a), rename(b)),
            Le(a, b) => Le(rename(a), rename(b)),
            Not(f) => f.substitute(from, to).not(),
            And(f, g) => f.substitute(from, to).and(g.substitute(from, to)),
            Or(f, g) => f.substitute(from, to).or(g.substitute(from, to)),
            Forall(v, f) | Exists(v, f) => {
                let (v, body) = if v == from {
                    (v.clone(), (**f).clone())
                } else if v == to && f.free_vars().contains(from) {
                    let mut avoid = f.all_vars();
                    avoid.insert(to.to_owned());
                    let fresh = fresh_var(v, &avoid);
                    (fresh.clone(), f.substitute(v, &fresh).substitute(from, to))
                } else {
                    (v.clone(), f.substitute(from, to))
                };
                if matches!(self, Forall(..)) {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        }
    }

    /// Renames every bound variable that lies in `avoid` to a fresh name
    /// outside `avoid` and outside the formula's own variables.
    pub fn rename_bound_away(&self, avoid: &BTreeSet<String>) -> Formula {
        match self {
            Eq(..) | Le(..) => self.clone(),
            Not(f) => f.rename_bound_away(avoid).not(),
            And(f, g) => f.rename_bound_away(avoid).and(g.rename_bound_away(avoid)),
            Or(f, g) => f.rename_bound_away(avoid).or(g.rename_bound_away(avoid)),
            Forall(v, f) | Exists(v, f) => {
                let mut body = f.rename_bound_away(avoid);
                let mut var = v.clone();
                if avoid.contains(v) {
                    let mut taken = avoid.clone();
                    taken.extend(body.all_vars());
                    var = fresh_var(v, &taken);
                    body = body.substitute(v, &var);
                }
                if matches!(self, Forall(..)) {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                }
            }
        }
    }

    /// The order-dual formula: every atom `a <= b` becomes `b <= a`.
    pub fn dual(&self) -> Formula {
        match self {
            Eq(..) => self.clone(),
            Le(a, b) => Le(b.clone(), a.clone()),
            Not(f) => f.dual().not(),
            And(f, g) => f.dual().and(g.dual()),
            Or(f, g) => f.dual().or(g.dual()),
            Forall(v, f) => Formula::forall(v.clone(), f.dual()),
            Exists(v, f) => Formula::exists(v.clone(), f.dual()),
        }
    }

    /// `Some((a, b))` when the formula is the desugared implication `a -> b`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Or(l, r) => match &**l {
                Not(a) => Some((a, r)),
                _ => None,
            },
            _ => None,
        }
    }
}

/// `base_1`, `base_2`, ... : the first not in `avoid`.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|v| !avoid.contains(v))
        .expect("unbounded supply")
}

// Printing contexts, from loosest to tightest.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Ctx {
    Top,
    Or,
    And,
    Unary,
}

impl Formula {
    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: Ctx) -> fmt::Result {
        match self {
            Eq(a, b) => write!(f, "{a} = {b}"),
            Le(a, b) => write!(f, "{a} <= {b}"),
            Not(g) => {
                f.write_str("!")?;
                if matches!(**g, Not(_)) {
                    g.write(f, Ctx::Unary)
                } else {
                    paren(f, g)
                }
            }
            Forall(v, g) | Exists(v, g) => {
                let open = ctx != Ctx::Top;
                if open {
                    f.write_str("(")?;
                }
                let q = if matches!(self, Forall(..)) { "forall" } else { "exists" };
                write!(f, "{q} {v} . ")?;
                match **g {
                    And(..) | Or(..) => paren(f, g)?,
                    _ => g.write(f, Ctx::Top)?,
                }
                if open {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Or(l, r) => {
                if let Some((a, b)) = self.as_implication() {
                    let open = ctx != Ctx::Top;
                    if open {
                        f.write_str("(")?;
                    }
                    a.write(f, Ctx::Or)?;
                    f.write_str(" -> ")?;
                    b.write(f, Ctx::Top)?;
                    if open {
                        f.write_str(")")?;
                    }
                    return Ok(());
                }
                let open = ctx > Ctx::Or;
                if open {
                    f.write_str("(")?;
                }
                l.write(f, Ctx::Or)?;
                f.write_str(" | ")?;
                r.write(f, Ctx::And)?;
                if open {
                    f.write_str(")")?;
                }
                Ok(())
            }
            And(l, r) => {
                let open = ctx > Ctx::And;
                if open {
                    f.write_str("(")?;
                }
                l.write(f, Ctx::And)?;
                f.write_str(" & ")?;
                r.write(f, Ctx::Unary)?;
                if open {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

fn paren(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    f.write_str("(")?;
    g.write(f, Ctx::Top)?;
    f.write_str(")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, Ctx::Top)
    }
}
