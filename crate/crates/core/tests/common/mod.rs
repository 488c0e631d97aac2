//! Oracles shared by the integration suites. Each one decides its question
//! by exhaustive search over small objects, independently of the
//! constructions under test.
#![allow(dead_code)]

use std::collections::HashMap;

use bqltl_core::bits::Letter;
use bqltl_core::formula::{var_set, VarSet};
use bqltl_core::games::{ParityGame, Player};
use bqltl_core::random::{self, Rng8};
use bqltl_core::tree::{all_trees, tree_compose, Apt, Npt, Pbf, RegularTree};
use rand::Rng;

/// Winner of the play from `v` when both players follow fixed positional
/// choices.
fn play_winner(g: &ParityGame, choice: &[usize], v: usize) -> Player {
    let mut seen = HashMap::new();
    let mut path = Vec::new();
    let mut cur = v;
    while !seen.contains_key(&cur) {
        seen.insert(cur, path.len());
        path.push(cur);
        cur = g.moves[cur][choice[cur]] as usize;
    }
    let top = path[seen[&cur]..]
        .iter()
        .map(|&p| g.color[p])
        .max()
        .expect("nonempty cycle");
    Player::of_color(top)
}

fn choice_vectors(g: &ParityGame, who: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &v in who {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..g.moves[v].len()).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

/// Winners by enumerating every pair of positional strategies; exact since
/// parity games are positionally determined.
pub fn brute_force_winners(g: &ParityGame) -> Vec<Player> {
    let n = g.len();
    let even: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Player::Even).collect();
    let odd: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Player::Odd).collect();
    let es = choice_vectors(g, &even);
    let os = choice_vectors(g, &odd);
    (0..n)
        .map(|v| {
            let wins = es.iter().any(|e| {
                os.iter().all(|o| {
                    let mut choice = vec![0; n];
                    for (k, &p) in even.iter().enumerate() {
                        choice[p] = e[k];
                    }
                    for (k, &p) in odd.iter().enumerate() {
                        choice[p] = o[k];
                    }
                    play_winner(g, &choice, v) == Player::Even
                })
            });
            if wins {
                Player::Even
            } else {
                Player::Odd
            }
        })
        .collect()
}

pub fn random_game(rng: &mut Rng8, max_positions: usize, colors: u32) -> ParityGame {
    let n = rng.gen_range(1..=max_positions);
    let owner = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Player::Even
            } else {
                Player::Odd
            }
        })
        .collect();
    let moves = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=2);
            (0..k).map(|_| rng.gen_range(0..n) as u32).collect()
        })
        .collect();
    let color = (0..n).map(|_| rng.gen_range(0..colors)).collect();
    ParityGame::new(owner, moves, color, 0)
}

fn random_pbf(rng: &mut Rng8, states: u32, dirs: u32, depth: usize) -> Pbf {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return match rng.gen_range(0..12) {
            0 => Pbf::True,
            1 => Pbf::False,
            _ => Pbf::atom(rng.gen_range(0..states), rng.gen_range(0..dirs)),
        };
    }
    let parts: Vec<Pbf> = (0..2)
        .map(|_| random_pbf(rng, states, dirs, depth - 1))
        .collect();
    if rng.gen_bool(0.5) {
        Pbf::and(parts)
    } else {
        Pbf::or(parts)
    }
}

/// A micro alternating automaton: up to three states, two adjacent colors,
/// labels over {y} and directions over {x}.
pub fn micro_apt(rng: &mut Rng8) -> Apt {
    let states = rng.gen_range(1..=3u32);
    let base = rng.gen_range(0..2u32);
    let delta = (0..states)
        .map(|_| (0..2).map(|_| random_pbf(rng, states, 2, 2)).collect())
        .collect();
    let colors = (0..states).map(|_| base + rng.gen_range(0..2)).collect();
    Apt::new(&var_set(&["y"]), &var_set(&["x"]), 0, delta, colors).expect("well formed")
}

/// A micro nondeterministic automaton over the given alphabets.
pub fn micro_npt(rng: &mut Rng8, labels: &VarSet, dirs: &VarSet, states: u32) -> Npt {
    let nl = 1usize << labels.len();
    let nd = 1usize << dirs.len();
    let delta = (0..states)
        .map(|_| {
            (0..nl)
                .map(|_| {
                    let k = rng.gen_range(0..=2);
                    (0..k)
                        .map(|_| (0..nd).map(|_| rng.gen_range(0..states)).collect())
                        .collect()
                })
                .collect()
        })
        .collect();
    let colors = (0..states).map(|_| rng.gen_range(0..3)).collect();
    Npt::new(labels, dirs, 0, delta, colors).expect("well formed")
}

/// Whether some tree with at most `bound` memory states is accepted.
pub fn bounded_nonempty(a: &Apt, bound: usize) -> Option<RegularTree> {
    let labels: VarSet = a.label_vars().iter().cloned().collect();
    let dirs: VarSet = a.dir_vars().iter().cloned().collect();
    all_trees(&dirs, &labels, bound)
        .into_iter()
        .find(|t| a.accepts(t).expect("aligned alphabets"))
}

/// The shape language by brute force: some hidden tree with at most
/// `bound` memory states composes with `t` into the language of `n`.
pub fn shape_by_search(n: &Npt, xi: &VarSet, t: &RegularTree, bound: usize) -> bool {
    let dirs: VarSet = n.dir_vars().iter().cloned().collect();
    all_trees(&dirs, xi, bound).iter().any(|h| {
        let joint = tree_compose(&[h, t]).expect("disjoint labels");
        n.accepts(&joint).expect("aligned alphabets")
    })
}

pub fn letter_of(bits: &[bool]) -> Letter {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as Letter) << i))
}

/// Twelve micro alternating automata from a fixed seed.
pub fn micro_apts() -> Vec<Apt> {
    let mut rng = random::rng(7);
    (0..12).map(|_| micro_apt(&mut rng)).collect()
}

/// Micro nondeterministic automata with the labels to hide and the
/// directions to keep: nothing hidden, labels only, every direction, and
/// part of the directions.
pub fn change_cases() -> Vec<(Npt, VarSet, VarSet)> {
    let mut rng = random::rng(11);
    let y = var_set(&["y"]);
    let yz = var_set(&["y", "z"]);
    let x = var_set(&["x"]);
    let wx = var_set(&["w", "x"]);
    let mut out = Vec::new();
    for _ in 0..3 {
        // nothing hidden
        out.push((micro_npt(&mut rng, &y, &x, 2), VarSet::new(), x.clone()));
    }
    for _ in 0..3 {
        // label projection only
        out.push((micro_npt(&mut rng, &yz, &x, 2), y.clone(), x.clone()));
    }
    for _ in 0..3 {
        // hidden direction, hidden label
        out.push((micro_npt(&mut rng, &y, &x, 2), y.clone(), VarSet::new()));
    }
    for _ in 0..2 {
        // partly hidden directions, visible label remains
        out.push((micro_npt(&mut rng, &yz, &wx, 2), y.clone(), var_set(&["w"])));
    }
    out
}
