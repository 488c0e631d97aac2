//! LTL to Büchi translation by tableau expansion.
//!
//! A state is the set of obligations that must hold from now on. Expanding
//! it yields covers: literal constraints for the current letter plus the
//! obligations for the next instant. Each `a U b` contributes an acceptance
//! mark on transitions that do not postpone it; the marks are then
//! degeneralized with a round-robin counter.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::nbw::{check_alphabet, Nbw};
use crate::bits::{letter_count, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::formula::{Matrix, Var, VarSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(u32, bool),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Until(usize, usize),
    Release(usize, usize),
}

struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    untils: Vec<usize>,
}

impl Arena {
    fn intern(&mut self, node: Node) -> usize {
        if let Some(&i) = self.index.get(&node) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(node);
        self.index.insert(node, i);
        if matches!(node, Node::Until(..)) {
            self.untils.push(i);
        }
        i
    }

    fn build(&mut self, m: &Matrix, vars: &[Var]) -> usize {
        let node = match m {
            Matrix::True => Node::True,
            Matrix::False => Node::False,
            Matrix::Atom(v) => Node::Lit(pos(vars, v), true),
            Matrix::Not(a) => match &**a {
                Matrix::Atom(v) => Node::Lit(pos(vars, v), false),
                _ => unreachable!("input is in negation normal form"),
            },
            Matrix::And(a, b) => Node::And(self.build(a, vars), self.build(b, vars)),
            Matrix::Or(a, b) => Node::Or(self.build(a, vars), self.build(b, vars)),
            Matrix::Next(a) => Node::Next(self.build(a, vars)),
            Matrix::Until(a, b) => Node::Until(self.build(a, vars), self.build(b, vars)),
            Matrix::Release(a, b) => Node::Release(self.build(a, vars), self.build(b, vars)),
            _ => unreachable!("input is in negation normal form"),
        };
        self.intern(node)
    }
}

fn pos(vars: &[Var], v: &Var) -> u32 {
    vars.binary_search(v)
        .expect("variable checked against alphabet") as u32
}

#[derive(Debug, Clone)]
struct Cover {
    must: Letter,
    must_not: Letter,
    next: BTreeSet<usize>,
    postponed: BTreeSet<usize>,
}

fn expand(arena: &Arena, state: &BTreeSet<usize>) -> Vec<Cover> {
    let mut out = Vec::new();
    let start = Cover {
        must: 0,
        must_not: 0,
        next: BTreeSet::new(),
        postponed: BTreeSet::new(),
    };
    let todo: Vec<usize> = state.iter().copied().collect();
    go(arena, todo, BTreeSet::new(), start, &mut out);
    out
}

fn go(
    arena: &Arena,
    mut todo: Vec<usize>,
    mut done: BTreeSet<usize>,
    mut cover: Cover,
    out: &mut Vec<Cover>,
) {
    while let Some(f) = todo.pop() {
        if !done.insert(f) {
            continue;
        }
        match arena.nodes[f] {
            Node::True => {}
            Node::False => return,
            Node::Lit(v, positive) => {
                let bit = 1 << v;
                if positive {
                    cover.must |= bit;
                } else {
                    cover.must_not |= bit;
                }
                if cover.must & cover.must_not != 0 {
                    return;
                }
            }
            Node::And(a, b) => {
                todo.push(a);
                todo.push(b);
            }
            Node::Or(a, b) => {
                let mut left = todo.clone();
                left.push(a);
                go(arena, left, done.clone(), cover.clone(), out);
                todo.push(b);
            }
            Node::Next(a) => {
                cover.next.insert(a);
            }
            Node::Until(a, b) => {
                let mut now = todo.clone();
                now.push(b);
                go(arena, now, done.clone(), cover.clone(), out);
                todo.push(a);
                cover.next.insert(f);
                cover.postponed.insert(f);
            }
            Node::Release(a, b) => {
                let mut released = todo.clone();
                released.push(a);
                released.push(b);
                go(arena, released, done.clone(), cover.clone(), out);
                todo.push(b);
                cover.next.insert(f);
            }
        }
    }
    out.push(cover);
}

/// Büchi automaton over `2^alphabet` for the words satisfying `m` at 0.
pub fn ltl_to_nbw(m: &Matrix, alphabet: &VarSet, budget: &Budget) -> Result<Nbw> {
    for v in m.vars() {
        if !alphabet.contains(&v) {
            return Err(Error::UnknownVariable(v.to_string()));
        }
    }
    let vars: Vec<Var> = alphabet.iter().cloned().collect();
    check_alphabet(&vars)?;
    let mut arena = Arena {
        nodes: Vec::new(),
        index: HashMap::new(),
        untils: Vec::new(),
    };
    let root = arena.build(&m.to_nnf(), &vars);
    let k = arena.untils.len();
    let letters = letter_count(&vars);

    let mut out = Nbw::new(alphabet, 1, 0)?;
    let mut ids: HashMap<(BTreeSet<usize>, usize), u32> = HashMap::new();
    let mut queue = VecDeque::new();
    let init = (BTreeSet::from([root]), 0usize);
    ids.insert(init.clone(), 0);
    out.set_accepting(0, k == 0);
    queue.push_back(init);
    let mut covers_of: HashMap<BTreeSet<usize>, Vec<Cover>> = HashMap::new();
    while let Some((set, counter)) = queue.pop_front() {
        let id = ids[&(set.clone(), counter)];
        budget.check_states("ltl-to-nbw", ids.len())?;
        let covers = covers_of
            .entry(set.clone())
            .or_insert_with(|| expand(&arena, &set))
            .clone();
        for cover in covers {
            // advance the round-robin counter past every satisfied mark
            let mut c = if counter == k { 0 } else { counter };
            while c < k && !cover.postponed.contains(&arena.untils[c]) {
                c += 1;
            }
            let key = (cover.next.clone(), c);
            let target = match ids.get(&key) {
                Some(&t) => t,
                None => {
                    let t = out.add_state();
                    out.set_accepting(t, c == k);
                    ids.insert(key.clone(), t);
                    queue.push_back(key);
                    t
                }
            };
            for l in 0..letters as Letter {
                if l & cover.must == cover.must && l & cover.must_not == 0 {
                    out.add_edge(id, l, target);
                }
            }
        }
    }
    Ok(out.reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_matrix, var_set};
    use crate::trace::{eval_ltl, LassoTrace};

    fn nbw(m: &str, vars: &[&str]) -> Nbw {
        ltl_to_nbw(
            &parse_matrix(m).unwrap(),
            &var_set(vars),
            &Budget::default(),
        )
        .unwrap()
    }

    #[test]
    fn globally_x_is_one_state() {
        let a = nbw("G x", &["x"]);
        assert_eq!(a.states(), 1);
        assert!(a.is_accepting(0));
        assert_eq!(a.successors(0, 1), &[0]);
        assert!(a.successors(0, 0).is_empty());
    }

    #[test]
    fn footnote_formula_is_empty() {
        assert!(nbw("G (y & X !y)", &["y"]).is_empty());
    }

    #[test]
    fn eventually_x_examples() {
        let a = nbw("F x", &["x"]);
        for k in 0..3 {
            let mut stem: Vec<&[&str]> = vec![&[]; k];
            stem.push(&["x"]);
            let t = LassoTrace::from_names(&["x"], &stem, &[&[]]).unwrap();
            assert!(a.accepts(&t).unwrap());
        }
        let never = LassoTrace::from_names(&["x"], &[], &[&[]]).unwrap();
        assert!(!a.accepts(&never).unwrap());
    }

    #[test]
    fn witness_satisfies_formula() {
        for m in [
            "G F x & G F !x",
            "x U (y & X !x)",
            "F G (x <-> X y)",
            "!x R (y | X x)",
        ] {
            let matrix = parse_matrix(m).unwrap();
            let a = nbw(m, &["x", "y"]);
            let w = a.emptiness().expect("satisfiable");
            assert!(eval_ltl(&matrix, &w, 0).unwrap(), "{m}: {w}");
        }
    }

    #[test]
    fn unknown_variable() {
        let m = parse_matrix("z").unwrap();
        assert!(ltl_to_nbw(&m, &var_set(&["x"]), &Budget::default()).is_err());
    }
}
