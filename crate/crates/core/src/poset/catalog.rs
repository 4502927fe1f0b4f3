//! All posets of a given size, one per isomorphism type.
//!
//! Every poset on `n + 1` elements arises from one on `n` elements by
//! adding a new maximal element whose strict down-set is an order ideal,
//! so the catalogue is grown layer by layer and deduplicated by canonical
//! form.

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use super::{canonical_form_with_budget, CanonicalForm, FinitePoset, PosetError};

/// Largest size the catalogue will generate (16999 types at size 8).
pub const CATALOG_BUDGET: usize = 8;

fn layers() -> &'static Mutex<Vec<Vec<CanonicalForm>>> {
    static LAYERS: OnceLock<Mutex<Vec<Vec<CanonicalForm>>>> = OnceLock::new();
    LAYERS.get_or_init(|| Mutex::new(Vec::new()))
}

/// Canonical forms of all posets with exactly `n` elements, sorted.
pub fn posets_of_size(n: usize) -> Result<Vec<CanonicalForm>, PosetError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > CATALOG_BUDGET {
        return Err(PosetError::BudgetExceeded {
            what: "poset catalogue",
            size: n,
            budget: CATALOG_BUDGET,
        });
    }
    let mut cache = layers().lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(vec![canonical_form_with_budget(&FinitePoset::singleton(), 1)?]);
    }
    while cache.len() < n {
        let next = grow(cache.last().expect("nonempty"))?;
        cache.push(next);
    }
    Ok(cache[n - 1].clone())
}

/// Canonical forms of all posets with `1..=n` elements, by size then code.
pub fn posets_up_to(n: usize) -> Result<Vec<CanonicalForm>, PosetError> {
    let mut out = Vec::new();
    for m in 1..=n {
        out.extend(posets_of_size(m)?);
    }
    Ok(out)
}

fn grow(layer: &[CanonicalForm]) -> Result<Vec<CanonicalForm>, PosetError> {
    let mut out = BTreeSet::new();
    for form in layer {
        let p = form.to_poset();
        let n = p.len();
        for ideal in 0u32..(1 << n) {
            let down_closed = (0..n).filter(|&a| ideal >> a & 1 == 1).all(|a| {
                (0..n).all(|b| !p.le(b, a) || ideal >> b & 1 == 1)
            });
            if !down_closed {
                continue;
            }
            let m = n + 1;
            let mut le = vec![false; m * m];
            for a in 0..n {
                for b in 0..n {
                    le[a * m + b] = p.le(a, b);
                }
                le[a * m + n] = ideal >> a & 1 == 1;
            }
            le[n * m + n] = true;
            let q = FinitePoset::from_parts(super::numbered(m), le);
            out.insert(canonical_form_with_budget(&q, m)?);
        }
    }
    Ok(out.into_iter().collect())
}
