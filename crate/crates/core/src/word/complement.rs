//! Rank-based complementation.
//!
//! A state of the complement is a level ranking (a rank in `0..=2n` or
//! nothing for every source state, accepting states on even ranks) and the
//! set of states still owing a visit to an odd rank. The complement accepts
//! when that set empties infinitely often.

use std::collections::{HashMap, VecDeque};

use super::nbw::Nbw;
use crate::bits::Letter;
use crate::budget::Budget;
use crate::error::Result;

const NONE: u8 = u8::MAX;

#[derive(Clone, PartialEq, Eq, Hash)]
struct RankState {
    ranks: Vec<u8>,
    owing: Vec<bool>,
}

/// Büchi automaton for the complement language.
pub fn complement_rank_based(a: &Nbw, budget: &Budget) -> Result<Nbw> {
    let a = a.reduce();
    let n = a.states();
    let top = (2 * n) as u8;
    let mut out = Nbw::new(&a.var_set(), 1, 0)?;
    let mut ids: HashMap<RankState, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut start = RankState {
        ranks: vec![NONE; n],
        owing: vec![false; n],
    };
    start.ranks[a.initial() as usize] = top;
    ids.insert(start.clone(), 0);
    out.set_accepting(0, true);
    queue.push_back(start);
    while let Some(state) = queue.pop_front() {
        budget.check_states("complement", ids.len())?;
        let id = ids[&state];
        for l in 0..a.letter_count() as Letter {
            // upper bound on each successor rank: least rank of a predecessor
            let mut bound = vec![NONE; n];
            for q in 0..n {
                if state.ranks[q] == NONE {
                    continue;
                }
                for &s in a.successors(q as u32, l) {
                    let s = s as usize;
                    bound[s] = if bound[s] == NONE {
                        state.ranks[q]
                    } else {
                        bound[s].min(state.ranks[q])
                    };
                }
            }
            let mut owing_next = vec![false; n];
            let restart = state.owing.iter().all(|o| !o);
            if !restart {
                for q in 0..n {
                    if state.owing[q] {
                        for &s in a.successors(q as u32, l) {
                            owing_next[s as usize] = true;
                        }
                    }
                }
            }
            for ranks in rankings(&a, &bound, budget)? {
                let owing = (0..n)
                    .map(|s| ranks[s] != NONE && ranks[s] % 2 == 0 && (restart || owing_next[s]))
                    .collect();
                let next = RankState { ranks, owing };
                let t = match ids.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = out.add_state();
                        out.set_accepting(t, next.owing.iter().all(|o| !o));
                        ids.insert(next.clone(), t);
                        queue.push_back(next);
                        t
                    }
                };
                out.add_edge(id, l, t);
            }
        }
    }
    Ok(out.reduce())
}

// Every ranking below `bound`, with accepting states on even ranks.
fn rankings(a: &Nbw, bound: &[u8], budget: &Budget) -> Result<Vec<Vec<u8>>> {
    let mut out = vec![Vec::with_capacity(bound.len())];
    for (q, &b) in bound.iter().enumerate() {
        let choices: Vec<u8> = if b == NONE {
            vec![NONE]
        } else {
            (0..=b)
                .filter(|r| !a.is_accepting(q as u32) || r % 2 == 0)
                .collect()
        };
        if choices.is_empty() {
            return Ok(Vec::new());
        }
        budget.check_states("complement", out.len() * choices.len())?;
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&r| {
                    let mut v = prefix.clone();
                    v.push(r);
                    v
                })
            })
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_matrix, var_set};
    use crate::trace::LassoTrace;
    use crate::word::ltl_to_nbw;

    fn lasso(stem: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        LassoTrace::from_names(&["x"], stem, cycle).unwrap()
    }

    #[test]
    fn complement_of_globally() {
        let b = Budget::default();
        let g = ltl_to_nbw(&parse_matrix("G x").unwrap(), &var_set(&["x"]), &b).unwrap();
        let c = complement_rank_based(&g, &b).unwrap();
        assert!(c.accepts(&lasso(&[], &[&["x"], &[]])).unwrap());
        assert!(!c.accepts(&lasso(&[], &[&["x"]])).unwrap());
        assert!(g.product(&c, &b).unwrap().is_empty());
    }

    #[test]
    fn complement_of_empty_is_universal() {
        let b = Budget::default();
        let e = Nbw::empty(&var_set(&["x"])).unwrap();
        let c = complement_rank_based(&e, &b).unwrap();
        for t in [
            lasso(&[], &[&["x"]]),
            lasso(&[&[]], &[&["x"], &[]]),
            lasso(&[&["x"], &["x"]], &[&[]]),
        ] {
            assert!(c.accepts(&t).unwrap());
        }
    }

    #[test]
    fn complement_of_infinitely_often() {
        let b = Budget::default();
        let a = ltl_to_nbw(&parse_matrix("G F x").unwrap(), &var_set(&["x"]), &b).unwrap();
        let c = complement_rank_based(&a, &b).unwrap();
        assert!(c.accepts(&lasso(&[&["x"]], &[&[]])).unwrap());
        assert!(!c.accepts(&lasso(&[], &[&[], &["x"]])).unwrap());
    }
}
