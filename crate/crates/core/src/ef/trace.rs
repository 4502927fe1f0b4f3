use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Solver;
use crate::poset::FinitePoset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "I")]
    First,
    #[serde(rename = "II")]
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One round: Player I picks on `side`, Player II answers on the other side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub side: Side,
    pub pick: String,
    pub response: String,
}

/// The winner and one line of play consistent with a winning strategy.
///
/// When II wins, I's picks are arbitrary and II's answers are winning.
/// When I wins, I's picks are winning and the line stops at the first
/// answer that breaks the partial isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTrace {
    pub winner: Player,
    pub k: usize,
    pub trace: Vec<Move>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("pin tuples have different lengths")]
    PinLength,
    #[error("trace has {moves} moves but the game has {k} rounds")]
    Length { moves: usize, k: usize },
    #[error("round {round}: {message}")]
    Illegal { round: usize, message: String },
    #[error("the claimed winner {0:?} does not win this game")]
    WrongWinner(Player),
}

struct Game<'a> {
    x: &'a FinitePoset,
    y: &'a FinitePoset,
    solver: Solver<'a>,
}

impl<'a> Game<'a> {
    fn consistent(&self, pairs: &[(usize, usize)]) -> bool {
        pairs
            .iter()
            .enumerate()
            .all(|(i, &(a, b))| self.solver.extends(&pairs[..i], a, b))
    }

    fn second_wins(&mut self, pairs: &[(usize, usize)], k: usize) -> bool {
        self.consistent(pairs) && self.solver.wins(pairs, k)
    }

    fn pair(side: Side, pick: usize, response: usize) -> (usize, usize) {
        match side {
            Side::Left => (pick, response),
            Side::Right => (response, pick),
        }
    }

    fn candidates(&self, side: Side) -> usize {
        match side {
            Side::Left => self.y.len(),
            Side::Right => self.x.len(),
        }
    }

    /// II's first answer keeping a win with `k` rounds left afterwards.
    fn winning_answer(&mut self, pairs: &[(usize, usize)], side: Side, pick: usize, k: usize) -> Option<usize> {
        let mut next = pairs.to_vec();
        (0..self.candidates(side)).find(|&r| {
            next.push(Game::pair(side, pick, r));
            let ok = self.second_wins(&next, k);
            next.pop();
            ok
        })
    }
}

/// Solves the game and records one line of play.
pub fn play(left: &FinitePoset, lpins: &[usize], right: &FinitePoset, rpins: &[usize], k: usize) -> GameTrace {
    assert_eq!(lpins.len(), rpins.len(), "pin tuples must have equal length");
    let mut g = Game {
        x: left,
        y: right,
        solver: Solver::new(left, right),
    };
    let mut pairs: Vec<(usize, usize)> = lpins.iter().copied().zip(rpins.iter().copied()).collect();
    let winner = if g.second_wins(&pairs, k) {
        Player::Second
    } else {
        Player::First
    };
    let mut trace = Vec::new();
    for round in 0..k {
        let left_rounds = k - round - 1;
        if !g.consistent(&pairs) {
            break;
        }
        let (side, pick, response) = match winner {
            Player::Second => {
                let unused_left = (0..left.len()).find(|&a| pairs.iter().all(|&(c, _)| c != a));
                let unused_right = (0..right.len()).find(|&b| pairs.iter().all(|&(_, d)| d != b));
                let (side, pick) = match (unused_left, unused_right) {
                    (Some(a), _) => (Side::Left, a),
                    (None, Some(b)) => (Side::Right, b),
                    (None, None) => (Side::Left, 0),
                };
                let r = g
                    .winning_answer(&pairs, side, pick, left_rounds)
                    .expect("II has a winning answer to every pick");
                (side, pick, r)
            }
            Player::First => {
                let picks = (0..left.len())
                    .map(|a| (Side::Left, a))
                    .chain((0..right.len()).map(|b| (Side::Right, b)));
                let mut found = None;
                for (side, pick) in picks {
                    if g.winning_answer(&pairs, side, pick, left_rounds).is_none() {
                        found = Some((side, pick));
                        break;
                    }
                }
                let (side, pick) = found.expect("I has a winning pick");
                // II answers so as to stay a partial isomorphism if it can
                let r = (0..g.candidates(side))
                    .find(|&r| {
                        let mut next = pairs.clone();
                        next.push(Game::pair(side, pick, r));
                        g.consistent(&next)
                    })
                    .unwrap_or(0);
                (side, pick, r)
            }
        };
        pairs.push(Game::pair(side, pick, response));
        let (pick_name, response_name) = match side {
            Side::Left => (left.name(pick), right.name(response)),
            Side::Right => (right.name(pick), left.name(response)),
        };
        trace.push(Move {
            side,
            pick: pick_name.to_owned(),
            response: response_name.to_owned(),
        });
    }
    GameTrace { winner, k, trace }
}

/// Replays a trace: checks that every move is legal, that the final map
/// agrees with the claimed winner, and that the winner's choices keep the
/// game won at every step.
pub fn verify_trace(
    left: &FinitePoset,
    lpins: &[usize],
    right: &FinitePoset,
    rpins: &[usize],
    t: &GameTrace,
) -> Result<(), TraceError> {
    if lpins.len() != rpins.len() {
        return Err(TraceError::PinLength);
    }
    if t.trace.len() > t.k {
        return Err(TraceError::Length {
            moves: t.trace.len(),
            k: t.k,
        });
    }
    let mut g = Game {
        x: left,
        y: right,
        solver: Solver::new(left, right),
    };
    let resolve = |p: &FinitePoset, name: &str| p.index_of(name).ok_or_else(|| TraceError::UnknownElement(name.to_owned()));
    let mut pairs: Vec<(usize, usize)> = lpins.iter().copied().zip(rpins.iter().copied()).collect();
    if pairs.iter().any(|&(a, b)| a >= left.len() || b >= right.len()) {
        return Err(TraceError::UnknownElement("pin".into()));
    }
    if g.second_wins(&pairs, t.k) != (t.winner == Player::Second) {
        return Err(TraceError::WrongWinner(t.winner));
    }
    for (round, m) in t.trace.iter().enumerate() {
        let rounds_after = t.k - round - 1;
        if !g.consistent(&pairs) {
            return Err(TraceError::Illegal {
                round,
                message: "the game was already lost by II".into(),
            });
        }
        let (pick, response) = match m.side {
            Side::Left => (resolve(left, &m.pick)?, resolve(right, &m.response)?),
            Side::Right => (resolve(right, &m.pick)?, resolve(left, &m.response)?),
        };
        if t.winner == Player::First && g.winning_answer(&pairs, m.side, pick, rounds_after).is_some() {
            return Err(TraceError::Illegal {
                round,
                message: format!("pick `{}` is not winning for I", m.pick),
            });
        }
        pairs.push(Game::pair(m.side, pick, response));
        let second = g.second_wins(&pairs, rounds_after);
        if (t.winner == Player::Second) != second {
            return Err(TraceError::Illegal {
                round,
                message: format!("answer `{}` changes the outcome", m.response),
            });
        }
    }
    let finished = t.trace.len() == t.k || !g.consistent(&pairs);
    if !finished {
        return Err(TraceError::Length {
            moves: t.trace.len(),
            k: t.k,
        });
    }
    if g.consistent(&pairs) != (t.winner == Player::Second) {
        return Err(TraceError::WrongWinner(t.winner));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn traces_replay() {
        let c = FinitePoset::chain;
        for (m, n, k) in [(2, 3, 2), (3, 4, 2), (2, 2, 3), (1, 3, 2), (4, 7, 3)] {
            let t = play(&c(m), &[], &c(n), &[], k);
            assert_eq!(t.winner == Player::Second, super::super::equiv_k(&c(m), &c(n), k));
            verify_trace(&c(m), &[], &c(n), &[], &t).unwrap();
        }
        let t = play(&FinitePoset::n_poset(), &[], &c(4), &[], 2);
        assert_eq!(t.winner, Player::First);
        verify_trace(&FinitePoset::n_poset(), &[], &c(4), &[], &t).unwrap();
    }

    #[test]
    fn tampered_traces_are_rejected() {
        let c = FinitePoset::chain;
        let mut t = play(&c(2), &[], &c(3), &[], 2);
        t.winner = Player::Second;
        assert!(verify_trace(&c(2), &[], &c(3), &[], &t).is_err());
        let mut t = play(&c(3), &[], &c(4), &[], 2);
        t.trace[0].response = "nope".into();
        assert_eq!(
            verify_trace(&c(3), &[], &c(4), &[], &t),
            Err(TraceError::UnknownElement("nope".into()))
        );
        let mut t = play(&c(3), &[], &c(4), &[], 2);
        t.trace.pop();
        assert!(verify_trace(&c(3), &[], &c(4), &[], &t).is_err());
    }

    #[test]
    fn json_shape() {
        let t = play(&FinitePoset::chain(2), &[], &FinitePoset::chain(2), &[], 1);
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"winner":"II","k":1,"trace":[{"side":"left","pick":"0","response":"0"}]}"#
        );
    }
}
