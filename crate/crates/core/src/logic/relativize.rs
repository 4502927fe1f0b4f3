use std::collections::BTreeSet;

use super::{Formula, FormulaError};

/// Relativizes `psi` to the set defined by `phi(params, subject)`.
///
/// Atoms are left unchanged and `!`, `&`, `|` are mapped homomorphically.
/// A quantifier over `u` is restricted to the defined set: `forall u . b`
/// becomes `forall u . (phi(params, u) -> b')` and `exists u . b` becomes
/// `exists u . (phi(params, u) & b')`.
///
/// Bound variables of `psi` that coincide with a parameter are renamed
/// first so the parameters are never captured.
pub fn relativize(
    psi: &Formula,
    phi: &Formula,
    params: &[String],
    subject: &str,
) -> Result<Formula, FormulaError> {
    if let Some(v) = phi
        .free_vars()
        .into_iter()
        .find(|v| v != subject && !params.contains(v))
    {
        return Err(FormulaError::RelativizerScope(v));
    }
    let params_set: BTreeSet<String> = params.iter().cloned().collect();
    if let Some(v) = psi.free_vars().intersection(&params_set).next() {
        return Err(FormulaError::ParameterClash(v.clone()));
    }
    let psi = psi.rename_bound_away(&params_set);
    Ok(go(&psi, phi, subject))
}

fn go(psi: &Formula, phi: &Formula, subject: &str) -> Formula {
    match psi {
        Formula::Eq(..) | Formula::Le(..) => psi.clone(),
        Formula::Not(f) => go(f, phi, subject).not(),
        Formula::And(f, g) => go(f, phi, subject).and(go(g, phi, subject)),
        Formula::Or(f, g) => go(f, phi, subject).or(go(g, phi, subject)),
        Formula::Forall(u, f) => {
            Formula::forall(u.clone(), phi.substitute(subject, u).implies(go(f, phi, subject)))
        }
        Formula::Exists(u, f) => {
            Formula::exists(u.clone(), phi.substitute(subject, u).and(go(f, phi, subject)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    fn params(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn quantifier_clauses() {
        let psi = parse("forall u . exists t . u <= t").unwrap();
        let phi = parse("v <= w").unwrap();
        let r = relativize(&psi, &phi, &params(&["w"]), "v").unwrap();
        assert_eq!(r.to_string(), "forall u . (u <= w -> exists t . (t <= w & u <= t))");
    }

    #[test]
    fn atoms_unchanged() {
        let psi = parse("x <= y").unwrap();
        let phi = parse("v <= w").unwrap();
        assert_eq!(relativize(&psi, &phi, &params(&["w"]), "v").unwrap(), psi);
    }

    #[test]
    fn negation_of_existential() {
        let psi = parse("!(exists t . t = t)").unwrap();
        let phi = parse("v <= w").unwrap();
        let r = relativize(&psi, &phi, &params(&["w"]), "v").unwrap();
        assert_eq!(
            r,
            Formula::exists("t", Formula::le("t", "w").and(Formula::eq("t", "t"))).not()
        );
    }

    #[test]
    fn scope_errors() {
        let psi = parse("x = x").unwrap();
        let phi = parse("v <= z").unwrap();
        assert_eq!(
            relativize(&psi, &phi, &params(&["w"]), "v"),
            Err(FormulaError::RelativizerScope("z".into()))
        );
        let psi = parse("w <= x").unwrap();
        let phi = parse("v <= w").unwrap();
        assert_eq!(
            relativize(&psi, &phi, &params(&["w"]), "v"),
            Err(FormulaError::ParameterClash("w".into()))
        );
    }

    #[test]
    fn parameter_named_bound_variable_is_renamed() {
        let psi = parse("forall w . w <= w").unwrap();
        let phi = parse("v <= w").unwrap();
        let r = relativize(&psi, &phi, &params(&["w"]), "v").unwrap();
        assert_eq!(r.to_string(), "forall w_1 . (w_1 <= w -> w_1 <= w_1)");
    }

    #[test]
    fn relativizer_bound_variable_does_not_capture() {
        // phi has a bound t; psi quantifies over t as well
        let psi = parse("exists t . t = t").unwrap();
        let phi = parse("exists t . v <= t & !(t = v)").unwrap();
        let r = relativize(&psi, &phi, &[], "v").unwrap();
        assert_eq!(r.to_string(), "exists t . ((exists t_1 . (t <= t_1 & !(t_1 = t))) & t = t)");
    }
}
