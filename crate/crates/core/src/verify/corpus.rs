//! Fixed formula corpora used by the verification suites and tests.

use crate::logic::{parse, Formula};

/// Formulas `psi`, open and closed, of quantifier rank at most 3. Free
/// variables are drawn from `x`, `y`; some bind `w` to exercise renaming
/// away from relativizer parameters.
pub const PSI_TEXTS: [&str; 24] = [
    "x <= y",
    "x = y",
    "!(x <= y) & !(y <= x)",
    "exists t . x <= t & !(t = x)",
    "forall t . t <= x",
    "forall t . x <= t",
    "exists t . forall s . s <= t",
    "exists t . forall s . t <= s",
    "forall t . forall s . (t <= s | s <= t)",
    "exists t . exists s . (!(t <= s) & !(s <= t))",
    "forall t . exists s . (t <= s & !(s = t))",
    "exists t . exists s . exists r . (t <= s & s <= r & !(t = s) & !(s = r))",
    "forall r . forall t . forall s . (t <= r & s <= r -> t <= s | s <= t)",
    "exists t . (x <= t & y <= t)",
    "forall t . (t <= x -> t <= y)",
    "exists w . (w <= x & !(w = x))",
    "forall w . exists t . (w <= t & (forall s . (t <= s -> s = t)))",
    "exists t . forall s . (s = t | !(s <= t) & !(t <= s))",
    "forall t . forall s . (t <= s & s <= t -> t = s)",
    "exists t . exists s . !(t = s)",
    "!(exists t . !(t = x))",
    "x <= y -> exists t . (x <= t & t <= y & !(t = x) & !(t = y))",
    "forall t . (x <= t | t <= x)",
    "exists u . exists v . (u <= v & !(u = v) & (forall t . (t <= v -> t = v | t <= u)))",
];

/// Relativizers `phi(params, v)` with their parameter lists.
pub const PHI_TEXTS: [(&str, &[&str]); 8] = [
    ("v <= w", &["w"]),
    ("w <= v", &["w"]),
    ("!(v <= w) & !(w <= v) | v = w", &["w"]),
    ("v <= w & w1 <= v", &["w", "w1"]),
    ("v = v", &[]),
    ("!(v = w)", &["w"]),
    ("exists t . (v <= t & !(t = v))", &[]),
    ("v <= w | v <= w1", &["w", "w1"]),
];

/// Sentences used as block theories in transfer checks.
pub const SENTENCE_TEXTS: [&str; 8] = [
    "exists t . forall s . s <= t",
    "exists t . forall s . t <= s",
    "forall t . forall s . (t <= s | s <= t)",
    "exists t . exists s . !(t = s)",
    "forall t . forall s . t = s",
    "exists t . exists s . (!(t <= s) & !(s <= t))",
    "exists t . exists s . exists r . (t <= s & s <= r & !(t = s) & !(s = r))",
    "forall t . t = t",
];

pub fn psi_corpus() -> Vec<Formula> {
    PSI_TEXTS.iter().map(|t| parse(t).expect("corpus formula parses")).collect()
}

/// `(phi, params)`; the subject variable is always `v`.
pub fn phi_corpus() -> Vec<(Formula, Vec<String>)> {
    PHI_TEXTS
        .iter()
        .map(|(t, ps)| {
            (
                parse(t).expect("corpus formula parses"),
                ps.iter().map(|p| p.to_string()).collect(),
            )
        })
        .collect()
}

pub fn sentence_corpus() -> Vec<Formula> {
    SENTENCE_TEXTS.iter().map(|t| parse(t).expect("corpus formula parses")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let psi = psi_corpus();
        assert!(psi.len() >= 20);
        assert!(psi.iter().all(|f| f.quantifier_rank() <= 3));
        assert!(psi.iter().any(|f| f.quantifier_rank() == 3));
        let phi = phi_corpus();
        assert!(phi.len() >= 5);
        for (f, ps) in &phi {
            assert!(f.free_vars().iter().all(|v| v == "v" || ps.contains(v)));
        }
        assert!(sentence_corpus().iter().all(Formula::is_sentence));
    }
}
