//! Alternation removal.
//!
//! A run of an alternating automaton may be taken memoryless: at each node
//! every active state commits to one minimal model of its transition. Such a
//! commitment is, per direction, a relation between states, and the run is
//! accepting iff no path carries a trace whose largest recurring color is
//! odd. That trace condition is a Büchi property of relation words (guess
//! the trace and its odd color), so a deterministic parity automaton for its
//! complement, run along every path, turns the guess of commitments into a
//! nondeterministic tree automaton.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};

use super::automata::{Apt, Npt};
use super::pbf::Model;
use crate::bits::{BitSet, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::word::safra::{max_color, SafraTree};

const MODEL_LIMIT: usize = 1 << 12;

/// The bad-trace Büchi automaton: states `(q, mode)` with mode 0 before the
/// odd color is guessed and `k` once `odds[k-1]` is.
struct BadTraces<'a> {
    apt: &'a Apt,
    odds: Vec<u32>,
}

impl BadTraces<'_> {
    fn modes(&self) -> usize {
        self.odds.len() + 1
    }

    fn size(&self) -> usize {
        self.apt.states() * self.modes()
    }

    fn index(&self, q: u32, mode: usize) -> usize {
        q as usize * self.modes() + mode
    }

    fn entering(&self, q: u32, out: &mut BitSet) {
        out.insert(self.index(q, 0));
        for (k, &o) in self.odds.iter().enumerate() {
            if self.apt.color(q) <= o {
                out.insert(self.index(q, k + 1));
            }
        }
    }

    fn accepting(&self) -> BitSet {
        let mut acc = BitSet::new();
        for q in 0..self.apt.states() as u32 {
            for (k, &o) in self.odds.iter().enumerate() {
                if self.apt.color(q) == o {
                    acc.insert(self.index(q, k + 1));
                }
            }
        }
        acc
    }

    fn post(&self, set: &BitSet, relation: &[Vec<u32>]) -> BitSet {
        let mut out = BitSet::new();
        for s in set.iter() {
            let q = s / self.modes();
            let mode = s % self.modes();
            for &q2 in &relation[q] {
                if mode == 0 {
                    self.entering(q2, &mut out);
                } else if self.apt.color(q2) <= self.odds[mode - 1] {
                    out.insert(self.index(q2, mode));
                }
            }
        }
        out
    }

    fn active(&self, tree: &SafraTree) -> Vec<u32> {
        let reach = tree.reach();
        (0..self.apt.states() as u32)
            .filter(|&q| reach.contains(self.index(q, 0)))
            .collect()
    }
}

/// A nondeterministic automaton with the same language. Automata that
/// already send at most one copy per direction are converted directly.
pub fn ndet(a: &Apt, budget: &Budget) -> Result<Npt> {
    let a = &a.quotient();
    if let Some(n) = a.as_npt() {
        return Ok(n);
    }
    let mut odds: Vec<u32> = a.colors.iter().copied().filter(|c| c % 2 == 1).collect();
    odds.sort_unstable();
    odds.dedup();
    let bad = BadTraces { apt: a, odds };
    let n = bad.size();
    let accepting = bad.accepting();
    let mut start = BitSet::new();
    bad.entering(a.initial, &mut start);
    let start = (SafraTree::initial(start.iter()), 2 * n as u32 + 1);
    let mut ids: HashMap<(SafraTree, u32), u32> = HashMap::new();
    let mut states = vec![start.clone()];
    ids.insert(start, 0);
    let mut queue = VecDeque::from([0u32]);
    let mut delta: Vec<Vec<Vec<Vec<u32>>>> = vec![Vec::new()];
    // minimal models per (state, label), computed once
    let mut models: HashMap<(u32, Letter), Vec<Model>> = HashMap::new();
    while let Some(id) = queue.pop_front() {
        budget.check_states("ndet", states.len())?;
        budget.check_time("ndet")?;
        let tree = states[id as usize].0.clone();
        let active = bad.active(&tree);
        let mut row = Vec::with_capacity(a.labels());
        for l in 0..a.labels() as Letter {
            let mut options: Vec<&Vec<Model>> = Vec::with_capacity(active.len());
            for &q in &active {
                if let Entry::Vacant(e) = models.entry((q, l)) {
                    let ms = a
                        .delta(q, l)
                        .minimal_models(MODEL_LIMIT)
                        .ok_or_else(|| Error::resource("ndet", MODEL_LIMIT))?;
                    e.insert(ms);
                }
            }
            for &q in &active {
                options.push(&models[&(q, l)]);
            }
            let total: usize = options.iter().map(|o| o.len()).product();
            budget.check_states("ndet", total)?;
            let mut choices = BTreeSet::new();
            for mut code in 0..total {
                let mut relation = vec![vec![Vec::new(); a.states()]; a.directions()];
                for (k, &q) in active.iter().enumerate() {
                    let pick = &options[k][code % options[k].len()];
                    code /= options[k].len();
                    for &(q2, d) in pick {
                        relation[d as usize][q as usize].push(q2);
                    }
                }
                let succ: Vec<u32> = relation
                    .iter()
                    .map(|rel| {
                        let (next, prio) =
                            tree.step(&mut |s: &BitSet| bad.post(s, rel), &accepting, n);
                        let key = (next, prio);
                        let fresh = states.len() as u32;
                        *ids.entry(key.clone()).or_insert_with(|| {
                            states.push(key);
                            delta.push(Vec::new());
                            queue.push_back(fresh);
                            fresh
                        })
                    })
                    .collect();
                choices.insert(succ);
            }
            row.push(choices.into_iter().collect());
        }
        delta[id as usize] = row;
    }
    // good runs are those the bad-trace automaton rejects
    let colors = states.iter().map(|&(_, p)| max_color(p, n) + 1).collect();
    Npt::new(
        &a.label_vars.iter().cloned().collect(),
        &a.dir_vars.iter().cloned().collect(),
        0,
        delta,
        colors,
    )
}
