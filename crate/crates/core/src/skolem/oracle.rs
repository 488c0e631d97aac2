//! Bounded search for Skolem machines.
//!
//! Machine tables are filled lazily, in the order the product with the
//! negated-matrix automaton first needs an entry. A partial family whose
//! defined part already admits an accepting cycle cannot be completed into
//! a witness, so the search backtracks there. Fresh memory states are only
//! introduced in increasing order, and memory bounds are tried smallest
//! first, so the first family found is the least in that order.

use std::collections::{HashMap, VecDeque};

use super::mealy::{MealyMachine, Mode, SkolemFamily};
use super::validate::{validate, Validation};
use crate::bits::{letter_count, remap, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::formula::{dep, Matrix, QuantifiedFormula, Var, VarSet};
use crate::graph;
use crate::word::{ltl_to_nbw, Nbw};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Sat(SkolemFamily),
    UnknownWithinBounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub outcome: OracleOutcome,
    /// Partial families examined.
    pub candidates: usize,
}

struct Spec {
    block: Vec<Var>,
    inputs: Vec<Var>,
    now: Vec<Var>,
}

#[derive(Clone)]
struct Partial {
    update: Vec<Vec<Vec<Option<u32>>>>,
    output: Vec<Vec<Vec<Option<Letter>>>>,
    used: Vec<u32>,
}

#[derive(Clone, Copy)]
enum Need {
    Output(usize, u32, Letter),
    Update(usize, u32, Letter),
}

struct Search<'a> {
    specs: &'a [Spec],
    observed: Vec<Var>,
    negated: &'a Nbw,
    bound: u32,
    candidates: usize,
    cap: usize,
    budget: &'a Budget,
}

struct Exhausted;

impl Search<'_> {
    /// Explores the product as far as the tables are defined. Returns
    /// whether an accepting cycle is already present, and the first missing
    /// entry if any.
    fn explore(&self, p: &Partial) -> (bool, Option<Need>) {
        let joint = self.negated.vars();
        let letters = letter_count(&self.observed) as Letter;
        let start = (self.negated.initial(), vec![0u32; self.specs.len()]);
        let mut ids: HashMap<(u32, Vec<u32>), usize> = HashMap::new();
        let mut nodes = vec![start.clone()];
        ids.insert(start, 0);
        let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
        let mut need = None;
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let (q, mem) = nodes[id].clone();
            'letters: for u in 0..letters {
                let mut letter = remap(u, &self.observed, joint);
                let mut next = Vec::with_capacity(mem.len());
                for (i, s) in self.specs.iter().enumerate() {
                    let n = remap(u, &self.observed, &s.now);
                    let Some(o) = p.output[i][mem[i] as usize][n as usize] else {
                        need.get_or_insert(Need::Output(i, mem[i], n));
                        continue 'letters;
                    };
                    letter |= remap(o, &s.block, joint);
                    let x = remap(u, &self.observed, &s.inputs);
                    let Some(t) = p.update[i][mem[i] as usize][x as usize] else {
                        need.get_or_insert(Need::Update(i, mem[i], x));
                        continue 'letters;
                    };
                    next.push(t);
                }
                for &q2 in self.negated.successors(q, letter) {
                    let key = (q2, next.clone());
                    let t = match ids.get(&key) {
                        Some(&t) => t,
                        None => {
                            let t = nodes.len();
                            ids.insert(key.clone(), t);
                            nodes.push(key);
                            adj.push(Vec::new());
                            queue.push_back(t);
                            t
                        }
                    };
                    adj[id].push(t);
                }
            }
        }
        let (comp, count) = graph::scc(&adj);
        let cyclic = graph::nontrivial(&adj, &comp, count);
        let bad = (0..nodes.len()).any(|v| cyclic[v] && self.negated.is_accepting(nodes[v].0));
        (bad, need)
    }

    fn run(&mut self, p: &mut Partial) -> std::result::Result<bool, Exhausted> {
        self.candidates += 1;
        if self.candidates > self.cap
            || (self.candidates.is_multiple_of(64) && self.budget.check_time("oracle").is_err())
        {
            return Err(Exhausted);
        }
        let (bad, need) = self.explore(p);
        if bad {
            return Ok(false);
        }
        match need {
            None => Ok(true),
            Some(Need::Output(i, m, n)) => {
                for o in 0..letter_count(&self.specs[i].block) as Letter {
                    p.output[i][m as usize][n as usize] = Some(o);
                    if self.run(p)? {
                        return Ok(true);
                    }
                }
                p.output[i][m as usize][n as usize] = None;
                Ok(false)
            }
            Some(Need::Update(i, m, x)) => {
                let used = p.used[i];
                for t in 0..(used + 1).min(self.bound) {
                    p.update[i][m as usize][x as usize] = Some(t);
                    p.used[i] = used.max(t + 1);
                    if self.run(p)? {
                        return Ok(true);
                    }
                }
                p.update[i][m as usize][x as usize] = None;
                p.used[i] = used;
                Ok(false)
            }
        }
    }
}

fn visibility(f: &QuantifiedFormula, mode: Mode) -> Result<Vec<Spec>> {
    let free = f.free_vars();
    let observed: VarSet = free.union(&f.universal_vars()).cloned().collect();
    let mut specs = Vec::new();
    for (b, block) in f.prefix().iter().enumerate() {
        if !block.is_exists() {
            continue;
        }
        let d = dep(f.prefix(), b, &free)?;
        let inputs = match mode {
            Mode::Behavioral => d.clone(),
            Mode::WeakBehavioral => observed.clone(),
        };
        specs.push(Spec {
            block: block.var_list(),
            inputs: inputs.into_iter().collect(),
            now: d.into_iter().collect(),
        });
    }
    Ok(specs)
}

/// Searches every conformant family with at most `bound` memory states per
/// machine. A found family is re-validated before it is returned; running
/// out of bound or of the candidate budget yields `UnknownWithinBounds`.
pub fn enumerate_oracle(
    f: &QuantifiedFormula,
    mode: Mode,
    bound: usize,
    budget: &Budget,
) -> Result<OracleReport> {
    if bound == 0 {
        return Err(Error::Invalid("memory bound must be positive".into()));
    }
    let f = if f.is_closed() {
        f.clone()
    } else {
        f.with_leading_exists(f.free_vars())
    };
    let specs = visibility(&f, mode)?;
    let observed: Vec<Var> = f.universal_vars().into_iter().collect();
    let negated = ltl_to_nbw(&Matrix::not(f.matrix().clone()), &f.all_vars(), budget)?;
    let mut search = Search {
        specs: &specs,
        observed,
        negated: &negated,
        bound: 1,
        candidates: 0,
        cap: budget.oracle_candidates,
        budget,
    };
    for b in 1..=bound as u32 {
        search.bound = b;
        let mut p = Partial {
            update: specs
                .iter()
                .map(|s| vec![vec![None; letter_count(&s.inputs)]; b as usize])
                .collect(),
            output: specs
                .iter()
                .map(|s| vec![vec![None; letter_count(&s.now)]; b as usize])
                .collect(),
            used: vec![1; specs.len()],
        };
        match search.run(&mut p) {
            Err(Exhausted) => break,
            Ok(false) => continue,
            Ok(true) => {
                let family = finish(&specs, &p)?;
                if validate(&family, &f, budget)? != Validation::Valid {
                    return Err(Error::InvalidWitness(
                        "oracle family failed validation".into(),
                    ));
                }
                return Ok(OracleReport {
                    outcome: OracleOutcome::Sat(family),
                    candidates: search.candidates,
                });
            }
        }
    }
    Ok(OracleReport {
        outcome: OracleOutcome::UnknownWithinBounds,
        candidates: search.candidates,
    })
}

// Entries the product never reaches are irrelevant; they default to 0.
fn finish(specs: &[Spec], p: &Partial) -> Result<SkolemFamily> {
    let set = |vs: &[Var]| vs.iter().cloned().collect::<VarSet>();
    let machines = specs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let used = p.used[i] as usize;
            let update = p.update[i][..used]
                .iter()
                .map(|r| r.iter().map(|c| c.unwrap_or(0)).collect())
                .collect();
            let output = p.output[i][..used]
                .iter()
                .map(|r| r.iter().map(|c| c.unwrap_or(0)).collect())
                .collect();
            MealyMachine::new(
                &set(&s.block),
                &set(&s.inputs),
                &set(&s.now),
                0,
                update,
                output,
            )
        })
        .collect::<Result<_>>()?;
    Ok(SkolemFamily::new(machines))
}
