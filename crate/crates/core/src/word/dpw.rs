use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::nbw::{check_alphabet, Nbw};
use super::safra::{max_color, SafraTree};
use crate::bits::{letter_count, remap, show_letter, BitSet, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::formula::{Var, VarSet};
use crate::trace::LassoTrace;

/// Deterministic parity automaton over `2^vars`; a run is accepting iff the
/// largest color seen infinitely often is even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dpw {
    vars: Vec<Var>,
    initial: u32,
    /// `transitions[state][letter]`.
    transitions: Vec<Vec<u32>>,
    colors: Vec<u32>,
}

impl Dpw {
    pub fn new(
        vars: &VarSet,
        initial: u32,
        transitions: Vec<Vec<u32>>,
        colors: Vec<u32>,
    ) -> Result<Dpw> {
        let vars: Vec<Var> = vars.iter().cloned().collect();
        check_alphabet(&vars)?;
        let n = transitions.len();
        let letters = letter_count(&vars);
        let total = transitions
            .iter()
            .all(|row| row.len() == letters && row.iter().all(|&t| (t as usize) < n));
        if n == 0 || colors.len() != n || !total || initial as usize >= n {
            return Err(Error::Invalid("parity automaton is not total".into()));
        }
        Ok(Dpw {
            vars,
            initial,
            transitions,
            colors,
        })
    }

    /// Builds an automaton from a min-even cover `⟨F_0, …, F_k⟩` (state `q`
    /// belongs to exactly one `F_j`; the least index seen infinitely often
    /// decides, even wins).
    pub fn from_min_cover(
        vars: &VarSet,
        initial: u32,
        transitions: Vec<Vec<u32>>,
        cover: &[BitSet],
    ) -> Result<Dpw> {
        let n = transitions.len();
        let mut index = vec![None; n];
        for (j, set) in cover.iter().enumerate() {
            for q in set.iter() {
                if q >= n {
                    return Err(Error::Partition(format!("state {q} does not exist")));
                }
                if index[q].replace(j).is_some() {
                    return Err(Error::Partition(format!("state {q} is in two sets")));
                }
            }
        }
        let top = cover.len().saturating_sub(1);
        let top = (top + top % 2) as u32;
        let mut colors = Vec::with_capacity(n);
        for (q, j) in index.into_iter().enumerate() {
            let j = j.ok_or_else(|| Error::Partition(format!("state {q} is in no set")))?;
            // reversing the order around an even pivot keeps parities
            colors.push(top - j as u32);
        }
        Dpw::new(vars, initial, transitions, colors)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn var_set(&self) -> VarSet {
        self.vars.iter().cloned().collect()
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn letter_count(&self) -> usize {
        letter_count(&self.vars)
    }

    pub fn step(&self, q: u32, letter: Letter) -> u32 {
        self.transitions[q as usize][letter as usize]
    }

    pub fn color(&self, q: u32) -> u32 {
        self.colors[q as usize]
    }

    pub fn max_color(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn min_color(&self) -> u32 {
        self.colors.iter().copied().min().unwrap_or(0)
    }

    /// Membership of a lasso whose universe contains the alphabet.
    pub fn accepts(&self, trace: &LassoTrace) -> Result<bool> {
        for v in &self.vars {
            if !trace.universe().contains(v) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        let span = trace.span();
        let mut seen: HashMap<(u32, usize), usize> = HashMap::new();
        let mut run = Vec::new();
        let (mut q, mut i) = (self.initial, 0);
        loop {
            if let Some(&start) = seen.get(&(q, i)) {
                let best = run[start..].iter().map(|&s| self.color(s)).max();
                return Ok(best.unwrap_or(1) % 2 == 0);
            }
            seen.insert((q, i), run.len());
            run.push(q);
            let l = remap(trace.letter(i), trace.universe(), &self.vars);
            q = self.step(q, l);
            i = trace.normalize(i + 1);
            if i >= span {
                unreachable!("normalized positions stay in range");
            }
        }
    }

    /// Same transitions with every color shifted by one.
    pub fn complement(&self) -> Dpw {
        Dpw {
            colors: self.colors.iter().map(|c| c + 1).collect(),
            ..self.clone()
        }
    }

    /// Equivalent Büchi automaton: guess an even color `e` and a point after
    /// which every color is at most `e`, with `e` itself recurring.
    pub fn to_nbw(&self) -> Result<Nbw> {
        let mut evens: Vec<u32> = self.colors.iter().copied().filter(|c| c % 2 == 0).collect();
        evens.sort_unstable();
        evens.dedup();
        let n = self.states();
        let copies = 1 + evens.len();
        let mut out = Nbw::new(&self.var_set(), n * copies, self.initial)?;
        let id = |q: usize, copy: usize| (copy * n + q) as u32;
        for (k, &e) in evens.iter().enumerate() {
            for q in 0..n {
                if self.colors[q] == e {
                    out.set_accepting(id(q, k + 1), true);
                }
            }
        }
        for q in 0..n {
            for l in 0..self.letter_count() {
                let t = self.transitions[q][l] as usize;
                out.add_edge(id(q, 0), l as Letter, id(t, 0));
                for (k, &e) in evens.iter().enumerate() {
                    if self.colors[t] <= e {
                        out.add_edge(id(q, 0), l as Letter, id(t, k + 1));
                        if self.colors[q] <= e {
                            out.add_edge(id(q, k + 1), l as Letter, id(t, k + 1));
                        }
                    }
                }
            }
        }
        Ok(out.reduce())
    }

    /// Same language over a larger alphabet.
    pub fn extend_alphabet(&self, vars: &VarSet) -> Result<Dpw> {
        let own = self.var_set();
        if !own.is_subset(vars) {
            return Err(Error::AlphabetMismatch(format!(
                "cannot shrink {own:?} to {vars:?}"
            )));
        }
        let to: Vec<Var> = vars.iter().cloned().collect();
        check_alphabet(&to)?;
        let transitions = self
            .transitions
            .iter()
            .map(|row| {
                (0..letter_count(&to) as Letter)
                    .map(|l| row[remap(l, &to, &self.vars) as usize])
                    .collect()
            })
            .collect();
        Ok(Dpw {
            vars: to,
            initial: self.initial,
            transitions,
            colors: self.colors.clone(),
        })
    }

    /// Some accepted lasso, if any.
    pub fn emptiness(&self) -> Result<Option<LassoTrace>> {
        Ok(self.to_nbw()?.emptiness())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dpw {\n  rankdir=LR;\n  init [shape=point];\n");
        for q in 0..self.states() {
            s.push_str(&format!(
                "  q{q} [shape=circle, label=\"q{q} / {}\"];\n",
                self.colors[q]
            ));
        }
        s.push_str(&format!("  init -> q{};\n", self.initial));
        for (q, row) in self.transitions.iter().enumerate() {
            let mut by_target: Vec<(u32, Vec<String>)> = Vec::new();
            for (l, &t) in row.iter().enumerate() {
                let label = show_letter(l as Letter, &self.vars);
                match by_target.iter_mut().find(|(x, _)| *x == t) {
                    Some((_, ls)) => ls.push(label),
                    None => by_target.push((t, vec![label])),
                }
            }
            for (t, ls) in by_target {
                s.push_str(&format!("  q{q} -> q{t} [label=\"{}\"];\n", ls.join(" ")));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Deterministic automaton whose states are `(Safra tree, priority)` pairs
/// reached from `initial` under the abstract letters `0..letters`.
/// `post(set, letter)` computes successor sets.
pub(crate) struct Determinized {
    pub transitions: Vec<Vec<u32>>,
    pub colors: Vec<u32>,
}

pub(crate) fn determinize_with(
    initial: &[usize],
    n: usize,
    accepting: &BitSet,
    letters: usize,
    mut post: impl FnMut(&BitSet, usize) -> BitSet,
    budget: &Budget,
    stage: &str,
) -> Result<Determinized> {
    let mut ids: HashMap<(SafraTree, u32), u32> = HashMap::new();
    let mut states: Vec<(SafraTree, u32)> = Vec::new();
    let mut queue = VecDeque::new();
    let start = (
        SafraTree::initial(initial.iter().copied()),
        2 * n as u32 + 1,
    );
    ids.insert(start.clone(), 0);
    states.push(start);
    queue.push_back(0u32);
    let mut transitions: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(id) = queue.pop_front() {
        budget.check_states(stage, states.len())?;
        let tree = states[id as usize].0.clone();
        let mut row = Vec::with_capacity(letters);
        for l in 0..letters {
            let (next, prio) = tree.step(&mut |s: &BitSet| post(s, l), accepting, n);
            let key = (next, prio);
            let t = match ids.get(&key) {
                Some(&t) => t,
                None => {
                    let t = states.len() as u32;
                    ids.insert(key.clone(), t);
                    states.push(key);
                    transitions.push(Vec::new());
                    queue.push_back(t);
                    t
                }
            };
            row.push(t);
        }
        transitions[id as usize] = row;
    }
    let colors = states.iter().map(|(_, p)| max_color(*p, n)).collect();
    Ok(Determinized {
        transitions,
        colors,
    })
}

/// Safra determinization of a Büchi automaton.
pub fn nbw_to_dpw(a: &Nbw, budget: &Budget) -> Result<Dpw> {
    let a = a.reduce();
    let n = a.states();
    let accepting: BitSet = (0..n).filter(|&q| a.is_accepting(q as u32)).collect();
    let det = determinize_with(
        &[a.initial() as usize],
        n,
        &accepting,
        a.letter_count(),
        |set, l| {
            let mut out = BitSet::new();
            for q in set.iter() {
                for &s in a.successors(q as u32, l as Letter) {
                    out.insert(s as usize);
                }
            }
            out
        },
        budget,
        "determinize",
    )?;
    Dpw::new(&a.var_set(), 0, det.transitions, det.colors).map(|d| d.trim())
}

impl Dpw {
    /// Merges colors into a dense range starting at 0 or 1 (parities kept)
    /// and drops nothing else; keeps the automaton small to print.
    fn trim(self) -> Dpw {
        let mut used: Vec<u32> = self.colors.clone();
        used.sort_unstable();
        used.dedup();
        // compress runs: color k-th distinct value to the smallest number with
        // the same parity exceeding the previous one
        let mut map = HashMap::new();
        let mut prev: Option<u32> = None;
        for c in used {
            let v = match prev {
                None => c % 2,
                Some(p) if (p % 2) == (c % 2) => p,
                Some(p) => p + 1,
            };
            map.insert(c, v);
            prev = Some(v);
        }
        Dpw {
            colors: self.colors.iter().map(|c| map[c]).collect(),
            ..self
        }
    }
}

/// Complement through determinization.
pub fn complement_via_dpw(a: &Nbw, budget: &Budget) -> Result<Nbw> {
    nbw_to_dpw(a, budget)?.complement().to_nbw()
}
