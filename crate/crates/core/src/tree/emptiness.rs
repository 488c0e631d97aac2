//! Emptiness through the game between the automaton, choosing a label and a
//! transition at each node, and a pathfinder choosing the direction.

use std::collections::HashMap;

use super::automata::{Apt, Npt};
use super::ndet::ndet;
use super::regular::RegularTree;
use crate::bits::Letter;
use crate::budget::Budget;
use crate::error::Result;
use crate::games::{ParityGame, Player};

/// `None` when the language is empty, otherwise a tree in it whose memory
/// is a set of automaton states.
pub fn npt_emptiness(n: &Npt, budget: &Budget) -> Result<Option<RegularTree>> {
    let states = n.states();
    let mut owner = vec![Player::Even; states];
    let mut moves: Vec<Vec<u32>> = vec![Vec::new(); states];
    let mut color: Vec<u32> = (0..states as u32).map(|q| n.color(q)).collect();
    // pathfinder positions, one per distinct successor vector
    let mut pick_ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut pick_succ: Vec<Vec<u32>> = Vec::new();
    for q in 0..states as u32 {
        for l in 0..n.labels() as Letter {
            for c in n.choices(q, l) {
                let id = *pick_ids.entry(c.clone()).or_insert_with(|| {
                    let id = (states + pick_succ.len()) as u32;
                    pick_succ.push(c.clone());
                    id
                });
                moves[q as usize].push(id);
            }
        }
        budget.check_states("tree emptiness", states + pick_succ.len())?;
    }
    for succ in &pick_succ {
        owner.push(Player::Odd);
        moves.push(succ.clone());
        color.push(0);
    }
    let g = ParityGame::new(owner, moves, color, n.initial());
    let sol = g.solve();
    if sol.winner[n.initial() as usize] != Player::Even {
        return Ok(None);
    }
    // every pick carries the same successors, so any labeling that offers
    // it will do; find the one the strategy move came from
    let mut labels = vec![0; states];
    let mut update = vec![Vec::new(); states];
    for q in 0..states as u32 {
        if sol.winner[q as usize] != Player::Even {
            labels[q as usize] = 0;
            update[q as usize] = vec![q; n.directions()];
            continue;
        }
        let pick = sol.strategy[q as usize] as usize;
        let succ = &pick_succ[pick - states];
        let label = (0..n.labels() as Letter)
            .find(|&l| n.choices(q, l).iter().any(|c| c == succ))
            .expect("strategy follows a transition");
        labels[q as usize] = label;
        update[q as usize] = succ.clone();
    }
    let tree = RegularTree::new(
        &n.dir_vars().iter().cloned().collect(),
        &n.label_vars().iter().cloned().collect(),
        n.initial(),
        update,
        labels,
    )?;
    Ok(Some(tree.trim()))
}

pub fn apt_emptiness(a: &Apt, budget: &Budget) -> Result<Option<RegularTree>> {
    npt_emptiness(&ndet(a, budget)?, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_matrix, var_set, VarSet};
    use crate::tree::{build_synthesis_apt, Pbf};
    use crate::word::{ltl_to_nbw, nbw_to_dpw};

    fn synthesis(text: &str) -> Apt {
        let b = Budget::default();
        let m = parse_matrix(text).unwrap();
        let d = nbw_to_dpw(&ltl_to_nbw(&m, &var_set(&["x", "y"]), &b).unwrap(), &b).unwrap();
        build_synthesis_apt(&d, &var_set(&["x"]), &var_set(&["y"])).unwrap()
    }

    #[test]
    fn copy_synthesis_has_a_copy_witness() {
        let a = synthesis("G (y <-> x)");
        let t = apt_emptiness(&a, &Budget::default()).unwrap().unwrap();
        assert!(a.accepts(&t).unwrap());
        let copy = RegularTree::new(
            &var_set(&["x"]),
            &var_set(&["y"]),
            0,
            vec![vec![0, 1], vec![0, 1]],
            vec![0, 1],
        )
        .unwrap();
        // the witness agrees with copying below the root
        for path in [[0u32, 1], [1, 1], [1, 0], [0, 0]] {
            assert_eq!(t.label_at(&path), copy.label_at(&path));
        }
    }

    #[test]
    fn prediction_is_impossible() {
        assert!(
            apt_emptiness(&synthesis("G (y <-> X x)"), &Budget::default())
                .unwrap()
                .is_none()
        );
        assert!(apt_emptiness(&synthesis("G x"), &Budget::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn false_initial_transition_is_empty() {
        let e = VarSet::new();
        let a = Apt::new(&e, &var_set(&["x"]), 0, vec![vec![Pbf::False]], vec![0]).unwrap();
        assert!(apt_emptiness(&a, &Budget::default()).unwrap().is_none());
    }
}
