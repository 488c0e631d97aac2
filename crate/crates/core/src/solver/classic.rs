use std::time::Instant;

use super::{close_formula, Semantics, StageStat, Status, Verdict, Witness};
use crate::budget::Budget;
use crate::error::Result;
use crate::formula::{Matrix, QuantBlock, QuantifiedFormula, VarSet};
use crate::word::{complement_via_dpw, ltl_to_nbw, Nbw};

/// An automaton for a formula, or for its negation when `negated`.
pub(crate) struct Peeled {
    pub nbw: Nbw,
    pub negated: bool,
}

/// Applies the blocks of `prefix`, innermost first, to an automaton for
/// `matrix` over `all`. The automaton is complemented only when the block
/// kind flips the polarity it represents.
pub(crate) fn peel(
    prefix: &[QuantBlock],
    matrix: &Matrix,
    all: &VarSet,
    budget: &Budget,
    stages: &mut Vec<StageStat>,
) -> Result<Peeled> {
    let negated = prefix.last().is_some_and(|b| !b.is_exists());
    let clock = Instant::now();
    let body = if negated {
        Matrix::not(matrix.clone())
    } else {
        matrix.clone()
    };
    let nbw = ltl_to_nbw(&body, all, budget)?;
    stages.push(StageStat::since("ltl", nbw.states(), clock));
    let mut p = Peeled { nbw, negated };
    for b in prefix.iter().rev() {
        p = project(p, b, budget, stages)?;
    }
    Ok(p)
}

fn align(
    p: Peeled,
    block: &QuantBlock,
    budget: &Budget,
    stages: &mut Vec<StageStat>,
) -> Result<Peeled> {
    let want = !block.is_exists();
    if p.negated == want {
        return Ok(p);
    }
    let clock = Instant::now();
    let nbw = complement_via_dpw(&p.nbw, budget)?;
    stages.push(StageStat::since("complement", nbw.states(), clock));
    Ok(Peeled { nbw, negated: want })
}

fn project(
    p: Peeled,
    block: &QuantBlock,
    budget: &Budget,
    stages: &mut Vec<StageStat>,
) -> Result<Peeled> {
    let p = align(p, block, budget, stages)?;
    let clock = Instant::now();
    let nbw = p.nbw.project_exists(&block.vars)?.reduce();
    stages.push(StageStat::since("project", nbw.states(), clock));
    Ok(Peeled {
        nbw,
        negated: p.negated,
    })
}

/// The automaton over the outermost block's variables accepting exactly the
/// assignments under which the rest of the prefix holds (or fails, when
/// `negated`). `None` for an empty prefix.
pub(crate) fn residual(
    f: &QuantifiedFormula,
    budget: &Budget,
    stages: &mut Vec<StageStat>,
) -> Result<Option<Peeled>> {
    let Some((outer, rest)) = f.prefix().split_first() else {
        return Ok(None);
    };
    let inner = peel(rest, f.matrix(), &f.all_vars(), budget, stages)?;
    align(inner, outer, budget, stages).map(Some)
}

pub fn solve_classic(f: &QuantifiedFormula, budget: &Budget) -> Result<Verdict> {
    let f = close_formula(f);
    let mut stages = Vec::new();
    let mut v = Verdict::new(Semantics::Classic, Status::Unsat);
    match residual(&f, budget, &mut stages)? {
        None => {
            let clock = Instant::now();
            let nbw = ltl_to_nbw(f.matrix(), &VarSet::new(), budget)?;
            stages.push(StageStat::since("ltl", nbw.states(), clock));
            if !nbw.is_empty() {
                v.status = Status::Sat;
            }
        }
        Some(p) => {
            let lasso = p.nbw.emptiness();
            budget.check_time("classic")?;
            if f.prefix()[0].is_exists() {
                if let Some(w) = lasso {
                    v.status = Status::Sat;
                    v.witness = Some(Witness::Lasso(w));
                }
            } else {
                match lasso {
                    Some(cex) => v.counterexample = Some(cex),
                    None => v.status = Status::Sat,
                }
            }
        }
    }
    v.stages = stages;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::trace::eval_ltl;

    fn status(text: &str) -> Status {
        solve_classic(&parse(text).unwrap(), &Budget::default())
            .unwrap()
            .status
    }

    #[test]
    fn examples() {
        assert_eq!(status("A{x} E{y} (G x <-> y)"), Status::Sat);
        assert_eq!(status("E{y} A{x} (F x <-> F y)"), Status::Unsat);
        assert_eq!(status("E{y} G (y & X !y)"), Status::Unsat);
        assert_eq!(status("A{x} E{y} G (X y <-> x)"), Status::Sat);
        assert_eq!(status("true"), Status::Sat);
        assert_eq!(status("X false"), Status::Unsat);
        assert_eq!(status("A{x} F x"), Status::Unsat);
        assert_eq!(status("A{x} E{y} A{z} G (y <-> x)"), Status::Sat);
        assert_eq!(status("A{x} E{y} A{z} G (y <-> z)"), Status::Unsat);
    }

    #[test]
    fn free_variables_are_closed_existentially() {
        assert_eq!(status("G z"), Status::Sat);
        assert_eq!(status("A{x} G (z <-> x)"), Status::Unsat);
    }

    #[test]
    fn leading_witness_satisfies_the_matrix() {
        let f = parse("E{y} (F G y & X !y)").unwrap();
        let v = solve_classic(&f, &Budget::default()).unwrap();
        let Some(Witness::Lasso(w)) = v.witness else {
            panic!("expected a lasso")
        };
        assert!(eval_ltl(f.matrix(), &w, 0).unwrap());
    }

    #[test]
    fn universal_counterexample() {
        let v = solve_classic(&parse("A{x} G F x").unwrap(), &Budget::default()).unwrap();
        assert_eq!(v.status, Status::Unsat);
        let cex = v.counterexample.unwrap();
        let m = parse("G F x").unwrap();
        assert!(!eval_ltl(m.matrix(), &cex, 0).unwrap());
    }
}
