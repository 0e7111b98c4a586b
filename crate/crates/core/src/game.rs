//! Competitive decision making: several players take distinct choices from
//! the same chain, each trying to end up holding the alternative with the
//! highest expected utility once rho resolves.
//!
//! A single rho governs every interval, so after all players have chosen,
//! the winner is decided by the preference segments computed over the
//! taken choices only and by where the realized rho falls among them.
//! Players move sequentially and anticipate the rational moves of everyone
//! after them; the solver walks the resulting decision tree from the last
//! mover upward. At every level a tie is broken toward the highest choice
//! number.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::preference::{argmax_highest, pref_bounds, pref_uniform, CrossingPoints, NestedChain};

const MAX_CHAIN: usize = 64;

/// The probability that choice `j` beats every other member of `s`, where
/// `s` is a set of chain choice numbers containing `j`.
///
/// This is the length of the rho range on which `j` has the highest
/// interpolated expected utility among `s`: from its latest crossing with a
/// smaller member (0 if none) to its earliest crossing with a larger member
/// (1 if none). Over all members of `s` the values sum to 1.
pub fn pref_among(
    chain: &NestedChain,
    crossings: &CrossingPoints,
    j: usize,
    s: &[usize],
) -> Result<f64> {
    check(chain, crossings)?;
    for &member in s {
        chain.choice(member)?;
    }
    if !s.contains(&j) {
        return Err(Error::ChoiceNotInSet(j));
    }
    let bounds = pref_bounds(crossings, j, s.iter().copied());
    Ok((bounds.hi - bounds.lo).max(0.0))
}

/// The preference a first mover can guarantee by taking choice `j` when a
/// single opponent picks second.
///
/// The opponent will sit either just above `j` in the chain, cutting `j`
/// back to its earliest upper crossing, or just below it, cutting `j` back
/// to the complement of its latest lower crossing. The guarantee is the
/// worse of the two.
pub fn first_mover_pref(chain: &NestedChain, crossings: &CrossingPoints, j: usize) -> Result<f64> {
    check(chain, crossings)?;
    chain.choice(j)?;
    if chain.len() < 2 {
        return Err(Error::ChainTooSmall {
            required: 2,
            len: chain.len(),
        });
    }
    let bounds = pref_bounds(crossings, j, 1..=chain.len());
    Ok(bounds.hi.min(1.0 - bounds.lo))
}

/// The preference of answering an opponent who already took choice `k`
/// with choice `j`: the measure of rho on which `j` beats `k`.
///
/// For `j` below `k` this is their crossing point; for `j` above `k` it is
/// the remainder above the crossing. The two directions are complements.
pub fn second_mover_pref(
    chain: &NestedChain,
    crossings: &CrossingPoints,
    j: usize,
    k: usize,
) -> Result<f64> {
    check(chain, crossings)?;
    chain.choice(j)?;
    chain.choice(k)?;
    if j == k {
        return Err(Error::IdenticalChoices);
    }
    pref_among(chain, crossings, j, &[j, k])
}

/// A sequential game: `players` decision makers take distinct choices from
/// a chain, in order.
#[derive(Debug, Clone)]
pub struct GameSpec<'a> {
    chain: &'a NestedChain,
    crossings: &'a CrossingPoints,
    players: usize,
}

impl<'a> GameSpec<'a> {
    pub fn new(
        chain: &'a NestedChain,
        crossings: &'a CrossingPoints,
        players: usize,
    ) -> Result<Self> {
        check(chain, crossings)?;
        if chain.len() > MAX_CHAIN {
            return Err(Error::ChainTooLarge {
                len: chain.len(),
                max: MAX_CHAIN,
            });
        }
        if players == 0 || players > chain.len() {
            return Err(Error::InvalidPlayerCount {
                players,
                choices: chain.len(),
            });
        }
        Ok(Self {
            chain,
            crossings,
            players,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }
}

/// One move of the principal variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameMove {
    /// 1-based player index in move order.
    pub player: usize,
    /// Chain choice number taken.
    pub choice: usize,
    /// The player's realized preference once every player has moved.
    pub pref: f64,
}

/// The solved line of play.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution {
    pub moves: Vec<GameMove>,
}

impl GameSolution {
    /// The chain choice numbers taken, in move order.
    pub fn choices(&self) -> Vec<usize> {
        self.moves.iter().map(|m| m.choice).collect()
    }
}

/// Solves the sequential game by backward induction.
///
/// Each player evaluates an available choice by the preference it yields
/// against the final set of taken choices, assuming every later player
/// responds rationally; ties go to the highest choice number. With a
/// single player there is no one to beat, so the game reduces to the
/// single-decision rule: maximize the preference over the whole chain.
pub fn solve_sequential_game(spec: &GameSpec) -> Result<GameSolution> {
    let chain = spec.chain;
    let crossings = spec.crossings;
    let n = chain.len();

    if spec.players == 1 {
        let prefs = (1..=n)
            .map(|j| pref_uniform(chain, crossings, j))
            .collect::<Result<Vec<f64>>>()?;
        let choice = argmax_highest(&prefs);
        return Ok(GameSolution {
            moves: vec![GameMove {
                player: 1,
                choice,
                pref: prefs[choice - 1],
            }],
        });
    }

    // memo: taken-set bitmask -> (choice taken at this node, final set).
    let mut memo: HashMap<u64, (usize, u64)> = HashMap::new();
    let final_mask = best_line(chain, crossings, 0, spec.players, &mut memo)?;
    let final_set = mask_to_set(final_mask);

    let mut moves = Vec::with_capacity(spec.players);
    let mut taken = 0u64;
    for player in 1..=spec.players {
        let (choice, _) = memo[&taken];
        let pref = pref_among(chain, crossings, choice, &final_set)?;
        moves.push(GameMove {
            player,
            choice,
            pref,
        });
        taken |= 1 << (choice - 1);
    }
    Ok(GameSolution { moves })
}

fn best_line(
    chain: &NestedChain,
    crossings: &CrossingPoints,
    taken: u64,
    remaining: usize,
    memo: &mut HashMap<u64, (usize, u64)>,
) -> Result<u64> {
    if remaining == 0 {
        return Ok(taken);
    }
    if let Some(&(_, final_mask)) = memo.get(&taken) {
        return Ok(final_mask);
    }
    let n = chain.len();
    let mut options: Vec<(f64, u64)> = Vec::new();
    for j in 1..=n {
        if taken & (1 << (j - 1)) != 0 {
            options.push((f64::NEG_INFINITY, 0));
            continue;
        }
        let final_mask = best_line(chain, crossings, taken | 1 << (j - 1), remaining - 1, memo)?;
        let value = pref_among(chain, crossings, j, &mask_to_set(final_mask))?;
        options.push((value, final_mask));
    }
    let values: Vec<f64> = options.iter().map(|&(v, _)| v).collect();
    let choice = argmax_highest(&values);
    let final_mask = options[choice - 1].1;
    memo.insert(taken, (choice, final_mask));
    Ok(final_mask)
}

fn mask_to_set(mask: u64) -> Vec<usize> {
    (1..=64).filter(|&j| mask & (1 << (j - 1)) != 0).collect()
}

fn check(chain: &NestedChain, crossings: &CrossingPoints) -> Result<()> {
    if chain.len() != crossings.n() {
        return Err(Error::CrossingSizeMismatch {
            crossings: crossings.n(),
            chain: chain.len(),
        });
    }
    Ok(())
}
