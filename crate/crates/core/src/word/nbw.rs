use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bits::{letter_count, remap, remap_table, show_letter, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::formula::{Var, VarSet};
use crate::graph;
use crate::trace::LassoTrace;

/// Hard cap on the number of variables of a single explicit alphabet.
pub const MAX_ALPHABET_VARS: usize = 6;

pub(crate) fn check_alphabet(vars: &[Var]) -> Result<()> {
    if vars.len() > MAX_ALPHABET_VARS {
        return Err(Error::AlphabetTooLarge {
            found: vars.len(),
            limit: MAX_ALPHABET_VARS,
        });
    }
    Ok(())
}

/// Nondeterministic Büchi automaton over `2^vars`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nbw {
    vars: Vec<Var>,
    initial: u32,
    /// `transitions[state][letter]`, sorted and deduplicated.
    transitions: Vec<Vec<Vec<u32>>>,
    accepting: Vec<bool>,
}

impl Nbw {
    /// An automaton with `states` states and no transitions.
    pub fn new(vars: &VarSet, states: usize, initial: u32) -> Result<Nbw> {
        let vars: Vec<Var> = vars.iter().cloned().collect();
        check_alphabet(&vars)?;
        let letters = letter_count(&vars);
        Ok(Nbw {
            transitions: vec![vec![Vec::new(); letters]; states.max(1)],
            accepting: vec![false; states.max(1)],
            vars,
            initial,
        })
    }

    /// The automaton with the empty language.
    pub fn empty(vars: &VarSet) -> Result<Nbw> {
        Nbw::new(vars, 1, 0)
    }

    /// The automaton accepting every word.
    pub fn universal(vars: &VarSet) -> Result<Nbw> {
        let mut a = Nbw::new(vars, 1, 0)?;
        a.accepting[0] = true;
        for l in 0..a.letter_count() as Letter {
            a.add_edge(0, l, 0);
        }
        Ok(a)
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

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn set_accepting(&mut self, q: u32, acc: bool) {
        self.accepting[q as usize] = acc;
    }

    pub fn successors(&self, q: u32, letter: Letter) -> &[u32] {
        &self.transitions[q as usize][letter as usize]
    }

    pub fn add_state(&mut self) -> u32 {
        self.transitions.push(vec![Vec::new(); self.letter_count()]);
        self.accepting.push(false);
        (self.transitions.len() - 1) as u32
    }

    pub fn add_edge(&mut self, from: u32, letter: Letter, to: u32) {
        let succ = &mut self.transitions[from as usize][letter as usize];
        if let Err(pos) = succ.binary_search(&to) {
            succ.insert(pos, to);
        }
    }

    pub fn transition_count(&self) -> usize {
        self.transitions
            .iter()
            .flat_map(|row| row.iter().map(Vec::len))
            .sum()
    }

    fn adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<Letter>>) {
        let mut adj = vec![Vec::new(); self.states()];
        let mut labels = vec![Vec::new(); self.states()];
        for (q, row) in self.transitions.iter().enumerate() {
            for (l, succ) in row.iter().enumerate() {
                for &s in succ {
                    adj[q].push(s as usize);
                    labels[q].push(l as Letter);
                }
            }
        }
        (adj, labels)
    }

    /// Some accepted lasso, or `None` when the language is empty. Stem and
    /// loop are each at most `states()` long.
    pub fn emptiness(&self) -> Option<LassoTrace> {
        let (adj, labels) = self.adjacency();
        let reach = graph::reachable(&adj, &[self.initial as usize]);
        let (comp, count) = graph::scc(&adj);
        let cyclic = graph::nontrivial(&adj, &comp, count);
        let target = (0..self.states()).find(|&q| reach[q] && cyclic[q] && self.accepting[q])?;
        let word = |path: &[(usize, usize)]| -> Vec<Letter> {
            path.iter().map(|&(v, k)| labels[v][k]).collect()
        };
        let stem = graph::path_to(&adj, self.initial as usize, |v| v == target)?;
        let cycle =
            graph::shortest_path(&adj, target, |v| comp[v] == comp[target], |v| v == target)?;
        Some(
            LassoTrace::new(self.var_set(), word(&stem), word(&cycle))
                .expect("witness letters are in range"),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.emptiness().is_none()
    }

    /// Membership of a lasso whose universe contains the alphabet; extra
    /// variables of the trace are ignored.
    pub fn accepts(&self, trace: &LassoTrace) -> Result<bool> {
        for v in &self.vars {
            if !trace.universe().contains(v) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        let span = trace.span();
        let letters: Vec<Letter> = (0..span)
            .map(|i| remap(trace.letter(i), trace.universe(), &self.vars))
            .collect();
        // product of the automaton with the lasso's position graph
        let id = |q: usize, i: usize| q * span + i;
        let mut adj = vec![Vec::new(); self.states() * span];
        for q in 0..self.states() {
            for (i, &l) in letters.iter().enumerate() {
                let j = trace.normalize(i + 1);
                for &s in &self.transitions[q][l as usize] {
                    adj[id(q, i)].push(id(s as usize, j));
                }
            }
        }
        let reach = graph::reachable(&adj, &[id(self.initial as usize, 0)]);
        let (comp, count) = graph::scc(&adj);
        let cyclic = graph::nontrivial(&adj, &comp, count);
        Ok((0..self.states())
            .any(|q| self.accepting[q] && (0..span).any(|i| reach[id(q, i)] && cyclic[id(q, i)])))
    }

    /// Keeps only states that are reachable and can reach an accepting cycle.
    pub fn reduce(&self) -> Nbw {
        let (adj, _) = self.adjacency();
        let reach = graph::reachable(&adj, &[self.initial as usize]);
        let (comp, count) = graph::scc(&adj);
        let cyclic = graph::nontrivial(&adj, &comp, count);
        let good: Vec<usize> = (0..self.states())
            .filter(|&q| reach[q] && cyclic[q] && self.accepting[q])
            .collect();
        let mut rev = vec![Vec::new(); self.states()];
        for (q, succ) in adj.iter().enumerate() {
            for &s in succ {
                rev[s].push(q);
            }
        }
        let useful = graph::reachable(&rev, &good);
        let keep: Vec<bool> = (0..self.states()).map(|q| reach[q] && useful[q]).collect();
        if !keep[self.initial as usize] {
            return Nbw::empty(&self.var_set()).expect("alphabet already checked");
        }
        let mut index = vec![u32::MAX; self.states()];
        let mut order = vec![self.initial as usize];
        order.extend((0..self.states()).filter(|&q| keep[q] && q != self.initial as usize));
        for (k, &q) in order.iter().enumerate() {
            index[q] = k as u32;
        }
        let mut out = Nbw {
            vars: self.vars.clone(),
            initial: 0,
            transitions: vec![vec![Vec::new(); self.letter_count()]; order.len()],
            accepting: order.iter().map(|&q| self.accepting[q]).collect(),
        };
        for (k, &q) in order.iter().enumerate() {
            for (l, succ) in self.transitions[q].iter().enumerate() {
                out.transitions[k][l] = succ
                    .iter()
                    .filter(|&&s| keep[s as usize])
                    .map(|&s| index[s as usize])
                    .collect();
                out.transitions[k][l].sort_unstable();
            }
        }
        out
    }

    /// Same language over a larger alphabet (the new variables are unconstrained).
    pub fn extend_alphabet(&self, vars: &VarSet) -> Result<Nbw> {
        let own = self.var_set();
        if !own.is_subset(vars) {
            return Err(Error::AlphabetMismatch(format!(
                "cannot shrink {own:?} to {vars:?}"
            )));
        }
        let to: Vec<Var> = vars.iter().cloned().collect();
        check_alphabet(&to)?;
        let back = remap_table(&to, &self.vars);
        Ok(Nbw {
            transitions: self
                .transitions
                .iter()
                .map(|row| back.iter().map(|&l| row[l as usize].clone()).collect())
                .collect(),
            accepting: self.accepting.clone(),
            initial: self.initial,
            vars: to,
        })
    }

    /// Intersection, by the two-track construction on reachable state pairs.
    pub fn product(&self, other: &Nbw, budget: &Budget) -> Result<Nbw> {
        if self.vars != other.vars {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        let letters = self.letter_count();
        let mut ids: HashMap<(u32, u32, bool), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut out = Nbw::new(&self.var_set(), 0, 0)?;
        out.transitions.clear();
        out.accepting.clear();
        let mut intern = |key: (u32, u32, bool), out: &mut Nbw, queue: &mut VecDeque<_>| {
            *ids.entry(key).or_insert_with(|| {
                let id = out.add_state();
                // track 0 waits for the left automaton, track 1 for the right
                out.accepting[id as usize] = !key.2 && self.accepting[key.0 as usize];
                queue.push_back((key, id));
                id
            })
        };
        intern((self.initial, other.initial, false), &mut out, &mut queue);
        while let Some(((p, q, track), id)) = queue.pop_front() {
            budget.check_states("product", out.states())?;
            let next_track = if !track && self.accepting[p as usize] {
                true
            } else if track && other.accepting[q as usize] {
                false
            } else {
                track
            };
            for l in 0..letters {
                for &p2 in &self.transitions[p as usize][l] {
                    for &q2 in &other.transitions[q as usize][l] {
                        let t = intern((p2, q2, next_track), &mut out, &mut queue);
                        out.add_edge(id, l as Letter, t);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Union by a fresh initial state.
    pub fn union(&self, other: &Nbw) -> Result<Nbw> {
        if self.vars != other.vars {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        let n = self.states() as u32;
        let mut out = self.clone();
        for q in 0..other.states() {
            let id = out.add_state();
            out.accepting[id as usize] = other.accepting[q];
            for (l, succ) in other.transitions[q].iter().enumerate() {
                for &s in succ {
                    out.add_edge(id, l as Letter, s + n);
                }
            }
        }
        let init = out.add_state();
        for l in 0..self.letter_count() {
            let mut succ = self.transitions[self.initial as usize][l].clone();
            succ.extend(
                other.transitions[other.initial as usize][l]
                    .iter()
                    .map(|s| s + n),
            );
            for s in succ {
                out.add_edge(init, l as Letter, s);
            }
        }
        // the fresh initial state is visited once, so its acceptance is irrelevant
        out.initial = init;
        Ok(out)
    }

    /// Existential projection: removes `vars` from the alphabet.
    pub fn project_exists(&self, vars: &VarSet) -> Result<Nbw> {
        let own = self.var_set();
        if !vars.is_subset(&own) {
            let missing: Vec<String> = vars.difference(&own).map(|v| v.to_string()).collect();
            return Err(Error::AlphabetMismatch(format!(
                "cannot project {missing:?}: not in the alphabet"
            )));
        }
        let keep: Vec<Var> = self
            .vars
            .iter()
            .filter(|v| !vars.contains(*v))
            .cloned()
            .collect();
        let down = remap_table(&self.vars, &keep);
        let mut out = Nbw {
            transitions: vec![vec![Vec::new(); letter_count(&keep)]; self.states()],
            accepting: self.accepting.clone(),
            initial: self.initial,
            vars: keep,
        };
        for (q, row) in self.transitions.iter().enumerate() {
            for (l, succ) in row.iter().enumerate() {
                for &s in succ {
                    out.add_edge(q as u32, down[l], s);
                }
            }
        }
        Ok(out)
    }

    /// Renders the automaton in Graphviz syntax.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nbw {\n  rankdir=LR;\n  init [shape=point];\n");
        for q in 0..self.states() {
            let shape = if self.accepting[q] {
                "doublecircle"
            } else {
                "circle"
            };
            s.push_str(&format!("  q{q} [shape={shape}];\n"));
        }
        s.push_str(&format!("  init -> q{};\n", self.initial));
        for (q, row) in self.transitions.iter().enumerate() {
            let mut by_target: Vec<(u32, Vec<String>)> = Vec::new();
            for (l, succ) in row.iter().enumerate() {
                for &t in succ {
                    let label = show_letter(l as Letter, &self.vars);
                    match by_target.iter_mut().find(|(x, _)| *x == t) {
                        Some((_, ls)) => ls.push(label),
                        None => by_target.push((t, vec![label])),
                    }
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::var_set;

    // Gx over {x}
    fn always_x() -> Nbw {
        let mut a = Nbw::new(&var_set(&["x"]), 1, 0).unwrap();
        a.set_accepting(0, true);
        a.add_edge(0, 1, 0);
        a
    }

    // Fx over {x}
    fn eventually_x() -> Nbw {
        let mut a = Nbw::new(&var_set(&["x"]), 2, 0).unwrap();
        a.set_accepting(1, true);
        a.add_edge(0, 0, 0);
        a.add_edge(0, 1, 1);
        a.add_edge(1, 0, 1);
        a.add_edge(1, 1, 1);
        a
    }

    fn lasso(stem: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        LassoTrace::from_names(&["x"], stem, cycle).unwrap()
    }

    #[test]
    fn membership_and_witness() {
        let g = always_x();
        assert!(g.accepts(&lasso(&[], &[&["x"]])).unwrap());
        assert!(!g.accepts(&lasso(&[], &[&["x"], &[]])).unwrap());
        assert_eq!(g.emptiness().unwrap(), lasso(&[], &[&["x"]]));
    }

    #[test]
    fn product_of_g_and_f() {
        let b = Budget::default();
        let p = always_x().product(&eventually_x(), &b).unwrap();
        assert!(p.accepts(&lasso(&[], &[&["x"]])).unwrap());
        let mut never = Nbw::new(&var_set(&["x"]), 1, 0).unwrap();
        never.set_accepting(0, true);
        never.add_edge(0, 0, 0);
        let f_not_x = {
            let mut a = eventually_x();
            // swap the roles of the letters: F !x
            a.transitions[0].swap(0, 1);
            a
        };
        assert!(always_x().product(&f_not_x, &b).unwrap().is_empty());
        assert!(always_x().product(&never, &b).unwrap().is_empty());
    }

    #[test]
    fn projection() {
        let p = eventually_x().project_exists(&var_set(&["x"])).unwrap();
        assert!(p.vars().is_empty());
        assert!(!p.is_empty());
        assert!(eventually_x().project_exists(&var_set(&["y"])).is_err());
    }

    #[test]
    fn reduce_drops_useless_states() {
        let mut a = always_x();
        let dead = a.add_state();
        a.add_edge(0, 0, dead);
        let r = a.reduce();
        assert_eq!(r.states(), 1);
        assert!(Nbw::empty(&var_set(&["x"])).unwrap().reduce().is_empty());
    }

    #[test]
    fn union_and_extension() {
        let u = always_x().union(&eventually_x()).unwrap();
        assert!(u.accepts(&lasso(&[&[]], &[&["x"]])).unwrap());
        assert!(!u.accepts(&lasso(&[], &[&[]])).unwrap());
        let wide = always_x().extend_alphabet(&var_set(&["x", "y"])).unwrap();
        let t = LassoTrace::from_names(&["x", "y"], &[], &[&["x", "y"], &["x"]]).unwrap();
        assert!(wide.accepts(&t).unwrap());
    }

    #[test]
    fn alphabet_cap() {
        let names = ["a", "b", "c", "d", "e", "f", "g"];
        assert!(matches!(
            Nbw::new(&var_set(&names), 1, 0),
            Err(Error::AlphabetTooLarge { found: 7, .. })
        ));
    }
}
