use std::time::Instant;

use super::{close_formula, solve_classic, Semantics, StageStat, Status, Verdict, Witness};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::formula::{dep, FragmentTag, QuantifiedFormula, VarSet};
use crate::skolem::{decompose, tree_to_mealy, MealyMachine, SkolemFamily};
use crate::tree::{
    apt_emptiness, build_synthesis_apt, change, ndet, npt_emptiness, tree_compose, Npt,
};
use crate::word::{ltl_to_nbw, nbw_to_dpw};

pub fn solve_behavioral(f: &QuantifiedFormula, budget: &Budget) -> Result<Verdict> {
    let f = close_formula(f);
    match f.classify().tag {
        FragmentTag::General => pipeline(&f, budget),
        _ => collapse(&f, budget),
    }
}

/// Σ0, Π0 and Σ1 formulas: dependencies are empty, so the existential
/// variables are fixed words and the classic answer carries over.
fn collapse(f: &QuantifiedFormula, budget: &Budget) -> Result<Verdict> {
    let c = solve_classic(f, budget)?;
    let mut v = Verdict::new(Semantics::Behavioral, c.status);
    v.stages = c.stages;
    v.counterexample = c.counterexample;
    if c.status == Status::Sat {
        let machines = match c.witness {
            Some(Witness::Lasso(w)) => vec![MealyMachine::from_lasso(&w)?],
            _ => Vec::new(),
        };
        v.witness = Some(Witness::Family(SkolemFamily::new(machines)));
    }
    Ok(v)
}

fn pipeline(f: &QuantifiedFormula, budget: &Budget) -> Result<Verdict> {
    let free = VarSet::new();
    let universal = f.universal_vars();
    let exists: Vec<usize> = (0..f.prefix().len())
        .filter(|&i| f.prefix()[i].is_exists())
        .collect();
    let deps: Vec<VarSet> = exists
        .iter()
        .map(|&b| dep(f.prefix(), b, &free))
        .collect::<Result<_>>()?;
    let mut stats = Vec::new();

    let clock = Instant::now();
    let nbw = ltl_to_nbw(f.matrix(), &f.all_vars(), budget)?;
    stats.push(StageStat::since("ltl", nbw.states(), clock));
    let clock = Instant::now();
    let dpw = nbw_to_dpw(&nbw, budget)?;
    stats.push(StageStat::since("determinize", dpw.states(), clock));
    let clock = Instant::now();
    let mut apt = build_synthesis_apt(&dpw, &universal, &f.existential_vars())?;
    stats.push(StageStat::since("synthesis", apt.states(), clock));

    // (hidden labels, kept directions) per step, innermost block first
    let mut steps: Vec<(VarSet, VarSet)> = Vec::new();
    let k = exists.len();
    if deps[k - 1] != universal {
        steps.push((VarSet::new(), deps[k - 1].clone()));
    }
    for j in (1..k).rev() {
        steps.push((f.prefix()[exists[j]].vars.clone(), deps[j - 1].clone()));
    }
    // the nondeterministic automaton before each hiding step
    let mut stages: Vec<Npt> = Vec::new();
    for (i, (xi, upsilon)) in steps.iter().enumerate() {
        let clock = Instant::now();
        let npt = ndet(&apt, budget)?;
        stats.push(StageStat::since(
            &format!("ndet {}", i + 1),
            npt.states(),
            clock,
        ));
        let clock = Instant::now();
        apt = change(&npt, xi, upsilon)?;
        stats.push(StageStat::since(
            &format!("change {}", i + 1),
            apt.states(),
            clock,
        ));
        stages.push(npt);
    }
    let clock = Instant::now();
    let found = apt_emptiness(&apt, budget)?;
    let mut v = Verdict::new(Semantics::Behavioral, Status::Unsat);
    let Some(mut tree) = found else {
        stats.push(StageStat::since("emptiness", 0, clock));
        v.stages = stats;
        return Ok(v);
    };
    stats.push(StageStat::since("emptiness", tree.memory(), clock));

    // rebuild the hidden parts, outermost stage first
    let clock = Instant::now();
    for s in stages.iter().rev() {
        let rest = s.restrict(&tree)?;
        let hidden = npt_emptiness(&rest, budget)?.ok_or_else(|| {
            Error::InvalidWitness("a peeled stage has no completion of its witness".into())
        })?;
        tree = tree_compose(&[&hidden, &tree])?;
    }
    let parts = decompose(&tree, f)?;
    let machines = parts
        .iter()
        .map(tree_to_mealy)
        .collect::<Result<Vec<_>>>()?;
    stats.push(StageStat::since("witness", tree.memory(), clock));
    v.status = Status::Sat;
    v.witness = Some(Witness::Family(SkolemFamily::new(machines)));
    v.tree = Some(tree);
    v.stages = stats;
    Ok(v)
}
