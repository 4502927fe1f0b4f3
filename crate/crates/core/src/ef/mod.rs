//! Ehrenfeucht–Fraïssé games of bounded length between finite posets.
//!
//! In each round Player I picks an element of either structure and
//! Player II answers with an element of the other one. II wins when the
//! chosen pairs, together with the pinned parameters, form a partial
//! isomorphism after the last round (and, equivalently for the search,
//! after every round).

mod trace;

pub use trace::{play, verify_trace, GameTrace, Move, Player, Side, TraceError};

use std::collections::HashMap;

use crate::poset::{FinitePoset, PartialMap, PosetError};

/// Default caps used by the command-line front end.
pub const DEFAULT_MAX_ROUNDS: usize = 5;
pub const DEFAULT_MAX_SIZE: usize = 8;

/// The state of a game: two structures, the map built so far (pins
/// included) and the number of rounds still to play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GamePosition<'a> {
    pub left: &'a FinitePoset,
    pub right: &'a FinitePoset,
    pub map: PartialMap,
    pub rounds_left: usize,
}

impl<'a> GamePosition<'a> {
    /// Starts a game with the pinned tuples paired position by position.
    /// Returns `None` when the pins are not even a function.
    pub fn start(
        left: &'a FinitePoset,
        lpins: &[usize],
        right: &'a FinitePoset,
        rpins: &[usize],
        k: usize,
    ) -> Option<GamePosition<'a>> {
        assert_eq!(lpins.len(), rpins.len(), "pin tuples must have equal length");
        let map = PartialMap::new(lpins.iter().copied().zip(rpins.iter().copied()))?;
        Some(GamePosition {
            left,
            right,
            map,
            rounds_left: k,
        })
    }

    pub fn is_partial_isomorphism(&self) -> bool {
        self.map.is_partial_isomorphism(self.left, self.right)
    }

    /// Whether Player II wins from here.
    pub fn second_player_wins(&self) -> bool {
        self.is_partial_isomorphism() && Solver::new(self.left, self.right).wins(self.map.pairs(), self.rounds_left)
    }
}

/// Memoizing game solver for one pair of structures.
pub struct Solver<'a> {
    x: &'a FinitePoset,
    y: &'a FinitePoset,
    memo: HashMap<(Vec<(usize, usize)>, usize), bool>,
}

impl<'a> Solver<'a> {
    pub fn new(x: &'a FinitePoset, y: &'a FinitePoset) -> Solver<'a> {
        Solver {
            x,
            y,
            memo: HashMap::new(),
        }
    }

    /// Whether `(a, b)` can be added to `pairs` keeping a partial isomorphism.
    pub fn extends(&self, pairs: &[(usize, usize)], a: usize, b: usize) -> bool {
        pairs.iter().all(|&(c, d)| {
            (a == c) == (b == d) && self.x.le(a, c) == self.y.le(b, d) && self.x.le(c, a) == self.y.le(d, b)
        })
    }

    /// Whether II wins the `k`-round game from `pairs`, which must already
    /// be a partial isomorphism.
    pub fn wins(&mut self, pairs: &[(usize, usize)], k: usize) -> bool {
        if k == 0 {
            return true;
        }
        let mut key: Vec<(usize, usize)> = pairs.to_vec();
        key.sort_unstable();
        key.dedup();
        if k >= 2 {
            if let Some(&w) = self.memo.get(&(key.clone(), k)) {
                return w;
            }
        }
        let result = self.search(&key, k);
        if k >= 2 {
            self.memo.insert((key, k), result);
        }
        result
    }

    fn search(&mut self, pairs: &[(usize, usize)], k: usize) -> bool {
        let mut next = pairs.to_vec();
        next.push((0, 0));
        let last = next.len() - 1;
        for a in 0..self.x.len() {
            if pairs.iter().any(|&(c, _)| c == a) {
                continue;
            }
            let answered = (0..self.y.len()).any(|b| {
                if !self.extends(pairs, a, b) {
                    return false;
                }
                next[last] = (a, b);
                self.wins(&next, k - 1)
            });
            if !answered {
                return false;
            }
        }
        for b in 0..self.y.len() {
            if pairs.iter().any(|&(_, d)| d == b) {
                continue;
            }
            let answered = (0..self.x.len()).any(|a| {
                if !self.extends(pairs, a, b) {
                    return false;
                }
                next[last] = (a, b);
                self.wins(&next, k - 1)
            });
            if !answered {
                return false;
            }
        }
        true
    }
}

/// Whether Player II wins `EF_k((left, lpins), (right, rpins))`.
pub fn ef_wins(left: &FinitePoset, lpins: &[usize], right: &FinitePoset, rpins: &[usize], k: usize) -> bool {
    match GamePosition::start(left, lpins, right, rpins, k) {
        Some(p) => p.second_player_wins(),
        None => false,
    }
}

/// `left ≡_k right`: no sentence of quantifier rank at most `k` tells them apart.
pub fn equiv_k(left: &FinitePoset, right: &FinitePoset, k: usize) -> bool {
    Solver::new(left, right).wins(&[], k)
}

/// The least `k <= cap` with `left ≢_k right`.
pub fn distinguishing_rank(left: &FinitePoset, right: &FinitePoset, cap: usize) -> Option<usize> {
    let mut solver = Solver::new(left, right);
    (1..=cap).find(|&k| !solver.wins(&[], k))
}

/// Checks the default caps on rounds and structure sizes.
pub fn check_caps(left: &FinitePoset, right: &FinitePoset, k: usize, max_rounds: usize, max_size: usize) -> Result<(), PosetError> {
    if k > max_rounds {
        return Err(PosetError::BudgetExceeded {
            what: "game rounds",
            size: k,
            budget: max_rounds,
        });
    }
    let size = left.len().max(right.len());
    if size > max_size {
        return Err(PosetError::BudgetExceeded {
            what: "game structure size",
            size,
            budget: max_size,
        });
    }
    Ok(())
}
