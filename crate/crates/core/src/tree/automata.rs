//! Alternating and nondeterministic parity tree automata (max-even).

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use super::pbf::Pbf;
use super::regular::RegularTree;
use crate::bits::{letter_count, remap, show_letter, Letter};
use crate::error::{Error, Result};
use crate::formula::{Var, VarSet};
use crate::games::{ParityGame, Player};
use crate::word::{check_alphabet, Dpw};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Apt {
    pub(crate) label_vars: Vec<Var>,
    pub(crate) dir_vars: Vec<Var>,
    pub(crate) initial: u32,
    /// `delta[q][label]`
    pub(crate) delta: Vec<Vec<Pbf>>,
    pub(crate) colors: Vec<u32>,
}

/// Each transition is a list of choices, a choice naming one successor per
/// direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Npt {
    pub(crate) label_vars: Vec<Var>,
    pub(crate) dir_vars: Vec<Var>,
    pub(crate) initial: u32,
    /// `delta[q][label][choice][direction]`
    pub(crate) delta: Vec<Vec<Vec<Vec<u32>>>>,
    pub(crate) colors: Vec<u32>,
}

fn list(vs: &VarSet) -> Vec<Var> {
    vs.iter().cloned().collect()
}

impl Apt {
    pub fn new(
        label_vars: &VarSet,
        dir_vars: &VarSet,
        initial: u32,
        delta: Vec<Vec<Pbf>>,
        colors: Vec<u32>,
    ) -> Result<Apt> {
        check_alphabet(&list(label_vars))?;
        check_alphabet(&list(dir_vars))?;
        let a = Apt {
            label_vars: list(label_vars),
            dir_vars: list(dir_vars),
            initial,
            delta,
            colors,
        };
        let n = a.colors.len();
        let ok = (initial as usize) < n
            && a.delta.len() == n
            && a.delta.iter().all(|row| {
                row.len() == a.labels()
                    && row.iter().all(|f| {
                        f.atoms()
                            .iter()
                            .all(|&(q, d)| (q as usize) < n && (d as usize) < a.directions())
                    })
            });
        if !ok {
            return Err(Error::Invalid(
                "malformed alternating tree automaton".into(),
            ));
        }
        Ok(a)
    }

    pub fn label_vars(&self) -> &[Var] {
        &self.label_vars
    }

    pub fn dir_vars(&self) -> &[Var] {
        &self.dir_vars
    }

    pub fn states(&self) -> usize {
        self.colors.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn labels(&self) -> usize {
        letter_count(&self.label_vars)
    }

    pub fn directions(&self) -> usize {
        letter_count(&self.dir_vars)
    }

    pub fn delta(&self, q: u32, label: Letter) -> &Pbf {
        &self.delta[q as usize][label as usize]
    }

    pub fn color(&self, q: u32) -> u32 {
        self.colors[q as usize]
    }

    /// Reachable part, with bisimilar states merged: states agreeing on
    /// color whose transitions coincide up to the merge.
    pub fn quotient(&self) -> Apt {
        let mut order = vec![self.initial];
        let mut index = HashMap::from([(self.initial, 0u32)]);
        let mut k = 0;
        while k < order.len() {
            let q = order[k];
            for f in &self.delta[q as usize] {
                for (q2, _) in f.atoms() {
                    if let Entry::Vacant(e) = index.entry(q2) {
                        e.insert(order.len() as u32);
                        order.push(q2);
                    }
                }
            }
            k += 1;
        }
        let mut class: Vec<u32> = vec![0; order.len()];
        let mut count = 0;
        loop {
            let mut ids: HashMap<(u32, u32, Vec<Pbf>), u32> = HashMap::new();
            let next: Vec<u32> = order
                .iter()
                .enumerate()
                .map(|(i, &q)| {
                    let sig = self.delta[q as usize]
                        .iter()
                        .map(|f| f.map_atoms(&|q2, d| Pbf::atom(class[index[&q2] as usize], d)))
                        .collect();
                    let fresh = ids.len() as u32;
                    *ids.entry((class[i], self.color(q), sig)).or_insert(fresh)
                })
                .collect();
            let settled = ids.len() == count;
            count = ids.len();
            class = next;
            if settled {
                break;
            }
        }
        let mut delta = vec![Vec::new(); count];
        let mut colors = vec![0; count];
        for (i, &q) in order.iter().enumerate() {
            let c = class[i] as usize;
            if delta[c].is_empty() {
                colors[c] = self.color(q);
                delta[c] = self.delta[q as usize]
                    .iter()
                    .map(|f| f.map_atoms(&|q2, d| Pbf::atom(class[index[&q2] as usize], d)))
                    .collect();
            }
        }
        Apt {
            label_vars: self.label_vars.clone(),
            dir_vars: self.dir_vars.clone(),
            initial: class[0],
            delta,
            colors,
        }
    }

    /// The same automaton as a nondeterministic one, when every transition
    /// is a disjunction of choices sending at most one copy per direction.
    /// Directions a choice leaves unconstrained go to an accepting sink.
    pub fn as_npt(&self) -> Option<Npt> {
        let n = self.states() as u32;
        let mut sink_used = false;
        let mut delta = Vec::with_capacity(self.states());
        for row in &self.delta {
            let mut out_row = Vec::with_capacity(row.len());
            for f in row {
                let models = f.minimal_models(4096)?;
                let mut choices = BTreeSet::new();
                for m in models {
                    let mut succ = vec![None; self.directions()];
                    for (q, d) in m {
                        if succ[d as usize].replace(q).is_some() {
                            return None;
                        }
                    }
                    let succ: Vec<u32> = succ
                        .into_iter()
                        .map(|s| {
                            s.unwrap_or_else(|| {
                                sink_used = true;
                                n
                            })
                        })
                        .collect();
                    choices.insert(succ);
                }
                out_row.push(choices.into_iter().collect());
            }
            delta.push(out_row);
        }
        let mut colors = self.colors.clone();
        if sink_used {
            delta.push(vec![vec![vec![n; self.directions()]]; self.labels()]);
            colors.push(0);
        }
        Some(Npt {
            label_vars: self.label_vars.clone(),
            dir_vars: self.dir_vars.clone(),
            initial: self.initial,
            delta,
            colors,
        })
    }

    /// Whether the automaton accepts `tree`, by solving the acceptance game
    /// on the product of its states with the tree memory.
    pub fn accepts(&self, tree: &RegularTree) -> Result<bool> {
        let (labels, dirs) = align(tree, &self.label_vars, &self.dir_vars)?;
        let mut b = GameBuilder::default();
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pending = Vec::new();
        let root = b.position(Player::Even, self.color(self.initial));
        ids.insert((self.initial, tree.initial()), root);
        pending.push((self.initial, tree.initial(), root));
        while let Some((q, m, pos)) = pending.pop() {
            let f = self.delta(q, labels[m as usize]);
            let mut atom = |q2: u32, d: Letter, b: &mut GameBuilder| {
                let m2 = tree.step(m, dirs[d as usize]);
                *ids.entry((q2, m2)).or_insert_with(|| {
                    let p = b.position(Player::Even, self.color(q2));
                    pending.push((q2, m2, p));
                    p
                })
            };
            let entry = b.formula(f, &mut atom);
            b.moves[pos as usize].push(entry);
        }
        Ok(b.solve(root))
    }

    pub fn to_json(&self) -> Value {
        let delta: Vec<Value> = self
            .delta
            .iter()
            .map(|row| {
                let r: serde_json::Map<String, Value> = row
                    .iter()
                    .enumerate()
                    .map(|(l, f)| {
                        (
                            show_letter(l as Letter, &self.label_vars),
                            json!(f.to_string()),
                        )
                    })
                    .collect();
                Value::Object(r)
            })
            .collect();
        json!({
            "labels": self.label_vars.iter().map(Var::as_str).collect::<Vec<_>>(),
            "directions": self.dir_vars.iter().map(Var::as_str).collect::<Vec<_>>(),
            "initial": self.initial,
            "colors": self.colors,
            "delta": delta,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph apt {\n  init [shape=point];\n");
        s.push_str(&format!("  init -> q{};\n", self.initial));
        for q in 0..self.states() {
            s.push_str(&format!("  q{q} [label=\"{q} / {}\"];\n", self.colors[q]));
            for (l, f) in self.delta[q].iter().enumerate() {
                for (t, d) in f.atoms() {
                    s.push_str(&format!(
                        "  q{q} -> q{t} [label=\"{} -> {}\"];\n",
                        show_letter(l as Letter, &self.label_vars),
                        show_letter(d, &self.dir_vars)
                    ));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

impl Npt {
    pub fn new(
        label_vars: &VarSet,
        dir_vars: &VarSet,
        initial: u32,
        delta: Vec<Vec<Vec<Vec<u32>>>>,
        colors: Vec<u32>,
    ) -> Result<Npt> {
        check_alphabet(&list(label_vars))?;
        check_alphabet(&list(dir_vars))?;
        let a = Npt {
            label_vars: list(label_vars),
            dir_vars: list(dir_vars),
            initial,
            delta,
            colors,
        };
        let n = a.colors.len();
        let ok = (initial as usize) < n
            && a.delta.len() == n
            && a.delta.iter().all(|row| {
                row.len() == a.labels()
                    && row.iter().all(|cs| {
                        cs.iter().all(|c| {
                            c.len() == a.directions() && c.iter().all(|&q| (q as usize) < n)
                        })
                    })
            });
        if !ok {
            return Err(Error::Invalid(
                "malformed nondeterministic tree automaton".into(),
            ));
        }
        Ok(a)
    }

    pub fn label_vars(&self) -> &[Var] {
        &self.label_vars
    }

    pub fn dir_vars(&self) -> &[Var] {
        &self.dir_vars
    }

    pub fn states(&self) -> usize {
        self.colors.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn labels(&self) -> usize {
        letter_count(&self.label_vars)
    }

    pub fn directions(&self) -> usize {
        letter_count(&self.dir_vars)
    }

    pub fn choices(&self, q: u32, label: Letter) -> &[Vec<u32>] {
        &self.delta[q as usize][label as usize]
    }

    pub fn color(&self, q: u32) -> u32 {
        self.colors[q as usize]
    }

    pub fn to_apt(&self) -> Apt {
        let delta = self
            .delta
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cs| {
                        Pbf::or(cs.iter().map(|c| {
                            Pbf::and(
                                c.iter()
                                    .enumerate()
                                    .map(|(d, &q)| Pbf::atom(q, d as Letter)),
                            )
                        }))
                    })
                    .collect()
            })
            .collect();
        Apt {
            label_vars: self.label_vars.clone(),
            dir_vars: self.dir_vars.clone(),
            initial: self.initial,
            delta,
            colors: self.colors.clone(),
        }
    }

    pub fn accepts(&self, tree: &RegularTree) -> Result<bool> {
        self.to_apt().accepts(tree)
    }

    /// Fixes the `tree` part of the labels and the directions it reads: the
    /// result runs on the remaining labels over the same directions and
    /// accepts `t` iff `t` composed with `tree` is accepted here.
    pub fn restrict(&self, tree: &RegularTree) -> Result<Npt> {
        let fixed: VarSet = tree.label_vars().iter().cloned().collect();
        let labels: VarSet = self.label_vars.iter().cloned().collect();
        let dirs: VarSet = self.dir_vars.iter().cloned().collect();
        if !fixed.is_subset(&labels) || !tree.dir_vars().iter().all(|v| dirs.contains(v)) {
            return Err(Error::AlphabetMismatch(
                "the fixed tree must read a part of the labels and directions".into(),
            ));
        }
        let rest: Vec<Var> = labels.difference(&fixed).cloned().collect();
        let tree_dirs: Vec<Letter> = (0..self.directions() as Letter)
            .map(|d| remap(d, &self.dir_vars, tree.dir_vars()))
            .collect();
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut order = vec![(self.initial, tree.initial())];
        ids.insert(order[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let (q, m) = order[i];
            let own = remap(tree.label_of(m), tree.label_vars(), &self.label_vars);
            let mut row = Vec::with_capacity(letter_count(&rest));
            for l in 0..letter_count(&rest) as Letter {
                let full = own | remap(l, &rest, &self.label_vars);
                let mut cs = BTreeSet::new();
                for c in self.choices(q, full) {
                    let succ: Vec<u32> = c
                        .iter()
                        .enumerate()
                        .map(|(d, &q2)| {
                            let key = (q2, tree.step(m, tree_dirs[d]));
                            let n = ids.len() as u32;
                            *ids.entry(key).or_insert_with(|| {
                                order.push(key);
                                n
                            })
                        })
                        .collect();
                    cs.insert(succ);
                }
                row.push(cs.into_iter().collect());
            }
            delta.push(row);
            i += 1;
        }
        let colors = order.iter().map(|&(q, _)| self.color(q)).collect();
        Npt::new(&rest.into_iter().collect(), &dirs, 0, delta, colors)
    }
}

/// Letter translation tables from the tree's alphabets to the automaton's.
fn align(tree: &RegularTree, labels: &[Var], dirs: &[Var]) -> Result<(Vec<Letter>, Vec<Letter>)> {
    if tree.label_vars() != labels || tree.dir_vars() != dirs {
        return Err(Error::AlphabetMismatch(format!(
            "tree over labels {:?} and directions {:?}, automaton over {:?} and {:?}",
            tree.label_vars(),
            tree.dir_vars(),
            labels,
            dirs
        )));
    }
    let label_table = (0..tree.memory() as u32)
        .map(|m| tree.label_of(m))
        .collect();
    let dir_table = (0..letter_count(dirs) as Letter).collect();
    Ok((label_table, dir_table))
}

/// Incremental construction of an acceptance game. Formula nodes carry the
/// least color so they never decide a play.
#[derive(Default)]
pub(crate) struct GameBuilder {
    pub owner: Vec<Player>,
    pub moves: Vec<Vec<u32>>,
    pub color: Vec<u32>,
}

impl GameBuilder {
    pub fn position(&mut self, owner: Player, color: u32) -> u32 {
        self.owner.push(owner);
        self.moves.push(Vec::new());
        self.color.push(color);
        (self.owner.len() - 1) as u32
    }

    /// Positions for the subformulas of `f`; returns the entry position.
    pub fn formula(
        &mut self,
        f: &Pbf,
        atom: &mut impl FnMut(u32, Letter, &mut Self) -> u32,
    ) -> u32 {
        match f {
            Pbf::Atom(q, d) => atom(*q, *d, self),
            Pbf::True => {
                let p = self.position(Player::Odd, 0);
                self.moves[p as usize].push(p);
                p
            }
            Pbf::False => {
                let p = self.position(Player::Even, 1);
                self.moves[p as usize].push(p);
                p
            }
            Pbf::And(xs) | Pbf::Or(xs) => {
                let owner = if matches!(f, Pbf::And(_)) {
                    Player::Odd
                } else {
                    Player::Even
                };
                let p = self.position(owner, 0);
                for x in xs {
                    let c = self.formula(x, atom);
                    self.moves[p as usize].push(c);
                }
                p
            }
        }
    }

    pub fn solve(self, root: u32) -> bool {
        let g = ParityGame::new(self.owner, self.moves, self.color, root);
        g.solve().winner[root as usize] == Player::Even
    }
}

/// The automaton accepting the strategy trees of the synthesis problem for
/// `d`: 2^`y`-labeled 2^`x`-trees whose branches, read with the label of
/// node x(0)…x(k) as the outputs of instant k, all lie in the language of
/// `d`. The root label is not read.
pub fn build_synthesis_apt(d: &Dpw, x: &VarSet, y: &VarSet) -> Result<Apt> {
    if !x.is_disjoint(y) {
        let both: Vec<String> = x.intersection(y).map(|v| v.as_str().to_string()).collect();
        return Err(Error::OverlappingUniverse(both));
    }
    let joint: VarSet = x.union(y).cloned().collect();
    if joint != d.var_set() {
        return Err(Error::AlphabetMismatch(format!(
            "automaton over {:?}, synthesis over {:?}",
            d.var_set(),
            joint
        )));
    }
    let xs = list(x);
    let ys = list(y);
    let dirs = letter_count(&xs) as u32;
    let labels = letter_count(&ys);
    let state = |q: u32, xl: Letter| 1 + q * dirs + xl;
    let mut delta = Vec::new();
    let mut colors = Vec::new();
    let start = Pbf::and((0..dirs).map(|x2| Pbf::atom(state(d.initial(), x2), x2)));
    delta.push(vec![start; labels]);
    colors.push(d.min_color());
    for q in 0..d.states() as u32 {
        for xl in 0..dirs {
            let row = (0..labels as Letter)
                .map(|yl| {
                    let letter = remap(xl, &xs, d.vars()) | remap(yl, &ys, d.vars());
                    let q2 = d.step(q, letter);
                    Pbf::and((0..dirs).map(|x2| Pbf::atom(state(q2, x2), x2)))
                })
                .collect();
            delta.push(row);
            colors.push(d.color(q));
        }
    }
    Apt::new(y, x, 0, delta, colors)
}
