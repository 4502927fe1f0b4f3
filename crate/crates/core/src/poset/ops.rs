//! Constructions on posets: lexicographic sums, disjoint unions, direct
//! products, reversal and rooting.

use std::borrow::Borrow;
use std::collections::BTreeMap;

use super::{FinitePoset, PosetError};

/// Lexicographic sum of `summands[i]` over the index poset, one summand per
/// index position.
///
/// Summand element `x` placed at index element `i` is renamed `i.x`, so
/// the summand domains are disjoint whatever their original names. Inside a
/// summand the summand's own order applies; across summands `x <= x'` holds
/// exactly when the index elements satisfy `i < j`.
pub fn lex_sum<P: Borrow<FinitePoset>>(index: &FinitePoset, summands: &[P]) -> Result<FinitePoset, PosetError> {
    if summands.len() != index.len() {
        return Err(PosetError::SummandCount {
            expected: index.len(),
            actual: summands.len(),
        });
    }
    let n: usize = summands.iter().map(|p| p.borrow().len()).sum();
    let mut names = Vec::with_capacity(n);
    let mut block = Vec::with_capacity(n);
    let mut offset = Vec::with_capacity(summands.len());
    for (i, part) in summands.iter().enumerate() {
        let part = part.borrow();
        offset.push(names.len());
        let prefix = index.name(i);
        for x in part.names() {
            let mut name = String::with_capacity(prefix.len() + 1 + x.len());
            name.push_str(prefix);
            name.push('.');
            name.push_str(x);
            names.push(name);
            block.push(i);
        }
    }
    let mut le = vec![false; n * n];
    for a in 0..n {
        let (i, row) = (block[a], a * n);
        for b in 0..n {
            let j = block[b];
            le[row + b] = if i == j {
                summands[i].borrow().le(a - offset[i], b - offset[i])
            } else {
                index.le(i, j)
            };
        }
    }
    Ok(FinitePoset::from_parts(names, le))
}

/// [`lex_sum`] with summands keyed by index element name.
pub fn lex_sum_map(
    index: &FinitePoset,
    summands: &BTreeMap<String, FinitePoset>,
) -> Result<FinitePoset, PosetError> {
    let ordered = index
        .names()
        .iter()
        .map(|i| {
            summands
                .get(i)
                .cloned()
                .ok_or_else(|| PosetError::MissingSummand(i.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    lex_sum(index, &ordered)
}

/// Disjoint union, i.e. the lexicographic sum over an antichain.
pub fn disjoint_union(parts: &[FinitePoset]) -> Result<FinitePoset, PosetError> {
    if parts.is_empty() {
        return Err(PosetError::NoParts);
    }
    lex_sum(&FinitePoset::antichain(parts.len()), parts)
}

/// Direct product with the componentwise order. Elements are named
/// `(a,b,...)`.
pub fn direct_product(parts: &[FinitePoset]) -> Result<FinitePoset, PosetError> {
    if parts.is_empty() {
        return Err(PosetError::NoParts);
    }
    // Tuples in lexicographic order of positions, last coordinate fastest.
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for part in parts {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..part.len()).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    let n = tuples.len();
    let names = tuples
        .iter()
        .map(|t| {
            let coords: Vec<&str> = t.iter().zip(parts).map(|(&x, p)| p.name(x)).collect();
            format!("({})", coords.join(","))
        })
        .collect();
    let mut le = vec![false; n * n];
    for (a, ta) in tuples.iter().enumerate() {
        for (b, tb) in tuples.iter().enumerate() {
            le[a * n + b] = parts.iter().enumerate().all(|(k, p)| p.le(ta[k], tb[k]));
        }
    }
    Ok(FinitePoset::from_parts(names, le))
}

/// The reversed order.
pub fn reverse(x: &FinitePoset) -> FinitePoset {
    let n = x.len();
    let mut le = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            le[a * n + b] = x.le(b, a);
        }
    }
    FinitePoset::from_parts(x.names().to_vec(), le)
}

/// `1 + X`: a fresh element below everything, placed first.
pub fn add_bottom(x: &FinitePoset) -> FinitePoset {
    adjoin(x, true)
}

/// `X + 1`: a fresh element above everything, placed last.
pub fn add_top(x: &FinitePoset) -> FinitePoset {
    adjoin(x, false)
}

/// `X` itself when it has a least element, otherwise `1 + X`.
pub fn rooted(x: &FinitePoset) -> FinitePoset {
    if x.has_min() {
        x.clone()
    } else {
        add_bottom(x)
    }
}

fn adjoin(x: &FinitePoset, bottom: bool) -> FinitePoset {
    let fresh = fresh_name(x, if bottom { "bot" } else { "top" });
    let n = x.len() + 1;
    let (new, shift) = if bottom { (0, 1) } else { (n - 1, 0) };
    let mut names = vec![String::new(); n];
    names[new] = fresh;
    let mut le = vec![false; n * n];
    for a in 0..x.len() {
        names[a + shift] = x.name(a).to_owned();
        for b in 0..x.len() {
            le[(a + shift) * n + b + shift] = x.le(a, b);
        }
    }
    for a in 0..n {
        if bottom {
            le[new * n + a] = true;
        } else {
            le[a * n + new] = true;
        }
    }
    FinitePoset::from_parts(names, le)
}

fn fresh_name(x: &FinitePoset, base: &str) -> String {
    let mut name = base.to_owned();
    while x.index_of(&name).is_some() {
        name.push('\'');
    }
    name
}
