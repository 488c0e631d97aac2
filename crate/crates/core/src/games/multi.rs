//! The ordered multi-player parity game of a prefixed formula and its
//! reduction to a two-player game.
//!
//! Players move in block order within each round; the state advances on the
//! joint letter. Both teams see the whole history, so each team acts as a
//! single player and a round unrolls into a chain of choice positions.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::parity::{ParityGame, Player, Solution};
use crate::bits::{letter_count, mask_of, remap, Letter};
use crate::error::{Error, Result};
use crate::formula::{QuantBlock, Quantifier, Var, VarSet};
use crate::word::Dpw;

#[derive(Debug, Clone)]
pub struct MultiParityGame {
    pub dpw: Dpw,
    pub blocks: Vec<QuantBlock>,
    /// Bitmask of each block's variables over the automaton alphabet.
    pub masks: Vec<Letter>,
}

impl MultiParityGame {
    pub fn players(&self) -> usize {
        self.blocks.len()
    }

    pub fn team(&self, player: usize) -> Player {
        match self.blocks[player].kind {
            Quantifier::Exists => Player::Even,
            Quantifier::Forall => Player::Odd,
        }
    }

    /// The actions of `player`, as letters over the automaton alphabet.
    pub fn actions(&self, player: usize) -> Vec<Letter> {
        let block: Vec<Var> = self.blocks[player].var_list();
        (0..letter_count(&block) as Letter)
            .map(|a| remap(a, &block, self.dpw.vars()))
            .collect()
    }
}

/// Game over the automaton of the matrix; the prefix blocks must partition
/// its alphabet.
pub fn build_multi_game(dpw: &Dpw, prefix: &[QuantBlock]) -> Result<MultiParityGame> {
    let alphabet = dpw.var_set();
    let mut covered = VarSet::new();
    for b in prefix {
        for v in &b.vars {
            if !covered.insert(v.clone()) {
                return Err(Error::Partition(format!("`{v}` is in two blocks")));
            }
        }
    }
    if covered != alphabet {
        return Err(Error::Partition(format!(
            "blocks cover {covered:?} but the alphabet is {alphabet:?}"
        )));
    }
    let masks = prefix
        .iter()
        .map(|b| mask_of(dpw.vars(), &b.var_list()))
        .collect();
    Ok(MultiParityGame {
        dpw: dpw.clone(),
        blocks: prefix.to_vec(),
        masks,
    })
}

/// Position of the sequentialized game: automaton state, player to move,
/// and the letter chosen so far in this round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeqPosition {
    pub state: u32,
    pub player: usize,
    pub partial: Letter,
}

#[derive(Debug, Clone)]
pub struct Sequentialized {
    pub game: ParityGame,
    pub positions: Vec<SeqPosition>,
    pub index: HashMap<SeqPosition, u32>,
}

pub fn sequentialize(m: &MultiParityGame) -> Sequentialized {
    let n = m.players();
    let actions: Vec<Vec<Letter>> = (0..n).map(|i| m.actions(i)).collect();
    let mut positions = Vec::new();
    let mut index = HashMap::new();
    let mut moves: Vec<Vec<u32>> = Vec::new();
    let mut queue = VecDeque::new();
    let start = SeqPosition {
        state: m.dpw.initial(),
        player: 0,
        partial: 0,
    };
    let intern = |p: SeqPosition,
                  positions: &mut Vec<SeqPosition>,
                  index: &mut HashMap<SeqPosition, u32>,
                  moves: &mut Vec<Vec<u32>>,
                  queue: &mut VecDeque<u32>| {
        *index.entry(p).or_insert_with(|| {
            positions.push(p);
            moves.push(Vec::new());
            let id = (positions.len() - 1) as u32;
            queue.push_back(id);
            id
        })
    };
    if n == 0 {
        // no players: the play is the single run on the empty letter
        let mut ids = HashMap::new();
        let mut q = m.dpw.initial();
        while !ids.contains_key(&q) {
            let p = SeqPosition {
                state: q,
                player: 0,
                partial: 0,
            };
            ids.insert(q, positions.len() as u32);
            positions.push(p);
            index.insert(p, ids[&q]);
            q = m.dpw.step(q, 0);
        }
        let moves = positions
            .iter()
            .map(|p| vec![ids[&m.dpw.step(p.state, 0)]])
            .collect();
        let color = positions.iter().map(|p| m.dpw.color(p.state)).collect();
        let owner = vec![Player::Even; positions.len()];
        return Sequentialized {
            game: ParityGame::new(owner, moves, color, 0),
            positions,
            index,
        };
    }
    intern(start, &mut positions, &mut index, &mut moves, &mut queue);
    while let Some(id) = queue.pop_front() {
        let p = positions[id as usize];
        let mut succ = Vec::new();
        for &a in &actions[p.player] {
            let partial = p.partial | a;
            let next = if p.player + 1 < n {
                SeqPosition {
                    state: p.state,
                    player: p.player + 1,
                    partial,
                }
            } else {
                SeqPosition {
                    state: m.dpw.step(p.state, partial),
                    player: 0,
                    partial: 0,
                }
            };
            succ.push(intern(
                next,
                &mut positions,
                &mut index,
                &mut moves,
                &mut queue,
            ));
        }
        moves[id as usize] = succ;
    }
    let owner = positions.iter().map(|p| m.team(p.player)).collect();
    let color = positions.iter().map(|p| m.dpw.color(p.state)).collect();
    Sequentialized {
        game: ParityGame::new(owner, moves, color, 0),
        positions,
        index,
    }
}

/// Choices of the existential players: for player `i`, a map from the
/// automaton state and the letter chosen by players `< i` this round to the
/// player's action (a letter over the automaton alphabet).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeamStrategyProfile {
    pub choices: BTreeMap<usize, BTreeMap<(u32, Letter), Letter>>,
}

impl TeamStrategyProfile {
    /// Action of Even player `i`; positions never reached in a winning play
    /// default to the empty action.
    pub fn action(&self, player: usize, state: u32, partial: Letter) -> Letter {
        self.choices
            .get(&player)
            .and_then(|t| t.get(&(state, partial)))
            .copied()
            .unwrap_or(0)
    }

    /// Joint letter of a round, given the universal players' actions (as one
    /// letter over the automaton alphabet).
    pub fn round(&self, m: &MultiParityGame, state: u32, universal: Letter) -> Letter {
        let mut partial = 0;
        for i in 0..m.players() {
            let a = match m.team(i) {
                Player::Odd => universal & m.masks[i],
                Player::Even => self.action(i, state, partial),
            };
            partial |= a;
        }
        partial
    }
}

/// Reads the Even team's strategy off a solved sequentialization and checks
/// it against every behavior of the universal players.
pub fn extract_team_strategy(
    m: &MultiParityGame,
    seq: &Sequentialized,
    sol: &Solution,
) -> Result<TeamStrategyProfile> {
    if sol.winner[seq.game.initial as usize] != Player::Even {
        return Err(Error::NotWinning);
    }
    let mut choices: BTreeMap<usize, BTreeMap<(u32, Letter), Letter>> = BTreeMap::new();
    for (id, p) in seq.positions.iter().enumerate() {
        if m.team(p.player) != Player::Even || sol.winner[id] != Player::Even {
            continue;
        }
        let next = seq.positions[sol.strategy[id] as usize];
        let chosen = if p.player + 1 < m.players() {
            next.partial & m.masks[p.player]
        } else {
            // the round closed; any action reaching the chosen state will do
            m.actions(p.player)
                .into_iter()
                .find(|&a| m.dpw.step(p.state, p.partial | a) == next.state)
                .expect("the strategy move is a legal action")
        };
        choices
            .entry(p.player)
            .or_default()
            .insert((p.state, p.partial), chosen);
    }
    let profile = TeamStrategyProfile { choices };
    if !verify_profile(m, &profile) {
        return Err(Error::InvalidWitness(
            "extracted team strategy loses against some universal behavior".into(),
        ));
    }
    Ok(profile)
}

/// Every play consistent with the profile is won by Even: the restricted
/// round graph over automaton states has no reachable cycle with an odd top
/// color.
pub fn verify_profile(m: &MultiParityGame, profile: &TeamStrategyProfile) -> bool {
    let universal_mask: Letter = (0..m.players())
        .filter(|&i| m.team(i) == Player::Odd)
        .fold(0, |acc, i| acc | m.masks[i]);
    let n = m.dpw.states();
    let mut adj = vec![Vec::new(); n];
    for (q, row) in adj.iter_mut().enumerate() {
        for u in 0..m.dpw.letter_count() as Letter {
            if u & !universal_mask != 0 {
                continue;
            }
            let l = profile.round(m, q as u32, u);
            row.push(m.dpw.step(q as u32, l) as usize);
        }
    }
    let owner = vec![Player::Odd; n];
    let moves: Vec<Vec<u32>> = adj
        .iter()
        .map(|r| r.iter().map(|&w| w as u32).collect())
        .collect();
    let color: Vec<u32> = (0..n as u32).map(|q| m.dpw.color(q)).collect();
    let g = ParityGame::new(owner, moves, color, m.dpw.initial());
    let reach = crate::graph::reachable(&adj, &[m.dpw.initial() as usize]);
    // Even owns nothing here, so the strategy argument is never consulted
    g.verify(Player::Even, &reach, &vec![0; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::formula::parse;
    use crate::word::{ltl_to_nbw, nbw_to_dpw};

    fn setup(text: &str) -> (MultiParityGame, Sequentialized, Solution) {
        let f = parse(text).unwrap();
        let b = Budget::default();
        let d = nbw_to_dpw(&ltl_to_nbw(f.matrix(), &f.all_vars(), &b).unwrap(), &b).unwrap();
        let m = build_multi_game(&d, f.prefix()).unwrap();
        let s = sequentialize(&m);
        let sol = s.game.solve();
        (m, s, sol)
    }

    #[test]
    fn copy_game_is_won_by_copying() {
        let (m, s, sol) = setup("A{x} E{y} G (y <-> x)");
        assert_eq!(m.team(0), Player::Odd);
        assert_eq!(m.team(1), Player::Even);
        let p = extract_team_strategy(&m, &s, &sol).unwrap();
        let x = m.masks[0];
        let y = m.masks[1];
        let q0 = m.dpw.initial();
        assert_eq!(p.round(&m, q0, x), x | y);
        assert_eq!(p.round(&m, q0, 0), 0);
    }

    #[test]
    fn first_example_is_lost() {
        let (_, s, sol) = setup("A{x} E{y} (G x <-> y)");
        assert_eq!(sol.winner[s.game.initial as usize], Player::Odd);
    }

    #[test]
    fn second_example_is_won() {
        let (m, s, sol) = setup("E{y} A{x} (F x <-> F y)");
        assert_eq!(m.team(0), Player::Even);
        assert_eq!(sol.winner[s.game.initial as usize], Player::Even);
        assert!(extract_team_strategy(&m, &s, &sol).is_ok());
    }

    #[test]
    fn single_player() {
        let (m, s, sol) = setup("E{y} G y");
        assert_eq!(m.players(), 1);
        let p = extract_team_strategy(&m, &s, &sol).unwrap();
        assert_eq!(p.round(&m, m.dpw.initial(), 0), m.masks[0]);
    }

    #[test]
    fn partition_is_checked() {
        let f = parse("A{x} E{y} G (y <-> x)").unwrap();
        let b = Budget::default();
        let d = nbw_to_dpw(&ltl_to_nbw(f.matrix(), &f.all_vars(), &b).unwrap(), &b).unwrap();
        assert!(build_multi_game(&d, &f.prefix()[..1]).is_err());
    }
}
