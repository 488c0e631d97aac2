//! Decision procedures for the three semantics and the checks tying them
//! together.

mod behavioral;
mod classic;
mod cross;
mod weak;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Value};

pub use behavioral::solve_behavioral;
pub use classic::solve_classic;
pub use cross::{cross_check, CrossReport};
pub use weak::solve_weak_behavioral;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::formula::{QuantifiedFormula, Quantifier};
use crate::skolem::{check_conformance, validate, MealyMachine, Mode, SkolemFamily};
use crate::trace::{eval_ltl, LassoTrace};
use crate::tree::RegularTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    Classic,
    Behavioral,
    WeakBehavioral,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [
        Semantics::Classic,
        Semantics::Behavioral,
        Semantics::WeakBehavioral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Classic => "classic",
            Semantics::Behavioral => "behavioral",
            Semantics::WeakBehavioral => "weak",
        }
    }

    /// The Skolem visibility of the semantics; classic has none.
    pub fn mode(self) -> Option<Mode> {
        match self {
            Semantics::Classic => None,
            Semantics::Behavioral => Some(Mode::Behavioral),
            Semantics::WeakBehavioral => Some(Mode::WeakBehavioral),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" | "c" => Ok(Semantics::Classic),
            "behavioral" | "b" => Ok(Semantics::Behavioral),
            "weak" | "weak-behavioral" | "wb" => Ok(Semantics::WeakBehavioral),
            _ => Err(Error::Invalid(format!("unknown semantics `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Sat,
    Unsat,
    UnknownWithinBounds,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
            Status::UnknownWithinBounds => "unknown",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Family(SkolemFamily),
    /// Assignment of the outermost existential block (classic semantics).
    Lasso(LassoTrace),
}

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Family(f) => f.to_json(),
            Witness::Lasso(l) => serde_json::to_value(l).expect("lassos serialize"),
        }
    }

    /// Reads either output of `to_json`; a single machine object is taken
    /// as a one-machine family.
    pub fn from_json(v: &Value) -> Result<Witness> {
        if v.get("universe").is_some() {
            let l: LassoTrace = serde_json::from_value(v.clone())
                .map_err(|e| Error::InvalidWitness(format!("bad lasso: {e}")))?;
            Ok(Witness::Lasso(l))
        } else if v.is_array() {
            Ok(Witness::Family(SkolemFamily::from_json(v)?))
        } else {
            Ok(Witness::Family(SkolemFamily::from_json(&Value::Array(
                vec![v.clone()],
            ))?))
        }
    }

    /// A Skolem family view of the witness: a lasso becomes a machine that
    /// ignores its inputs.
    pub fn family(&self) -> Result<SkolemFamily> {
        match self {
            Witness::Family(f) => Ok(f.clone()),
            Witness::Lasso(l) => Ok(SkolemFamily::new(vec![MealyMachine::from_lasso(l)?])),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageStat {
    pub stage: String,
    pub states: usize,
    pub millis: u128,
}

impl StageStat {
    pub(crate) fn since(stage: &str, states: usize, start: Instant) -> StageStat {
        StageStat {
            stage: stage.to_string(),
            states,
            millis: start.elapsed().as_millis(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub semantics: Semantics,
    pub status: Status,
    pub witness: Option<Witness>,
    /// The joint strategy tree behind a behavioral witness.
    pub tree: Option<RegularTree>,
    /// A falsifying assignment of an outermost universal block.
    pub counterexample: Option<LassoTrace>,
    pub stages: Vec<StageStat>,
}

impl Verdict {
    pub fn new(semantics: Semantics, status: Status) -> Verdict {
        Verdict {
            semantics,
            status,
            witness: None,
            tree: None,
            counterexample: None,
            stages: Vec::new(),
        }
    }

    /// Stage timings are left out unless asked for, so that reports are
    /// reproducible byte for byte.
    pub fn to_json(&self, timings: bool) -> Value {
        let stages: Vec<Value> = self
            .stages
            .iter()
            .map(|s| {
                if timings {
                    json!({"stage": s.stage, "states": s.states, "millis": s.millis as u64})
                } else {
                    json!({"stage": s.stage, "states": s.states})
                }
            })
            .collect();
        let mut v = json!({
            "semantics": self.semantics.name(),
            "status": self.status.name(),
            "stages": stages,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.to_json();
        }
        if let Some(t) = &self.tree {
            v["tree"] = t.to_json();
        }
        if let Some(c) = &self.counterexample {
            v["counterexample"] = serde_json::to_value(c).expect("lassos serialize");
        }
        v
    }
}

/// Binds the free variables existentially, in front of the prefix.
pub fn close_formula(f: &QuantifiedFormula) -> QuantifiedFormula {
    if f.is_closed() {
        f.clone()
    } else {
        f.with_leading_exists(f.free_vars())
    }
}

pub fn solve(f: &QuantifiedFormula, semantics: Semantics, budget: &Budget) -> Result<Verdict> {
    match semantics {
        Semantics::Classic => solve_classic(f, budget),
        Semantics::Behavioral => solve_behavioral(f, budget),
        Semantics::WeakBehavioral => solve_weak_behavioral(f, budget),
    }
}

/// Independent re-check of a witness for `f` under `semantics`.
///
/// Families are checked for visibility and validated exactly against every
/// universal behavior. A classic lasso fixes the outermost existential
/// block: with no alternation it is evaluated directly, under `∃∀` it is
/// validated as a constant machine, and otherwise it is tested against the
/// automaton of the remaining prefix.
pub fn validate_witness(
    f: &QuantifiedFormula,
    semantics: Semantics,
    witness: &Witness,
    budget: &Budget,
) -> Result<bool> {
    let f = close_formula(f);
    match (semantics.mode(), witness) {
        (Some(mode), Witness::Family(fam)) => {
            Ok(check_conformance(fam, &f, mode) && validate(fam, &f, budget)?.is_valid())
        }
        (Some(_), Witness::Lasso(_)) => Err(Error::InvalidWitness(
            "a lasso witnesses classic satisfiability only".into(),
        )),
        (None, w) => {
            let lasso = match w {
                Witness::Lasso(l) => l.clone(),
                Witness::Family(fam) => match fam.machines.as_slice() {
                    [m] if m.inputs().is_empty() && m.now().is_empty() => machine_word(m)?,
                    _ => {
                        return Err(Error::InvalidWitness(
                            "a classic witness fixes the outermost block only".into(),
                        ))
                    }
                },
            };
            classic_lasso(&f, &lasso, budget)
        }
    }
}

/// The word written by a machine that reads nothing.
fn machine_word(m: &MealyMachine) -> Result<LassoTrace> {
    let mut seen = std::collections::HashMap::new();
    let mut word = Vec::new();
    let mut q = m.initial();
    while !seen.contains_key(&q) {
        seen.insert(q, word.len());
        word.push(m.output(q, 0));
        q = m.update(q, 0);
    }
    let start = seen[&q];
    let cycle = word.split_off(start);
    LassoTrace::new(m.block_set(), word, cycle)
}

fn classic_lasso(f: &QuantifiedFormula, lasso: &LassoTrace, budget: &Budget) -> Result<bool> {
    let Some(outer) = f.prefix().first() else {
        return Err(Error::InvalidWitness(
            "the formula has no block to witness".into(),
        ));
    };
    if outer.kind != Quantifier::Exists || lasso.universe_set() != outer.vars {
        return Err(Error::InvalidWitness(
            "the lasso must assign exactly the outermost existential block".into(),
        ));
    }
    match f.prefix().len() {
        1 => eval_ltl(f.matrix(), lasso, 0),
        2 => {
            let fam = SkolemFamily::new(vec![MealyMachine::from_lasso(lasso)?]);
            Ok(validate(&fam, f, budget)?.is_valid())
        }
        _ => {
            let p = classic::residual(f, budget, &mut Vec::new())?.expect("nonempty prefix");
            Ok(p.nbw.accepts(lasso)? != p.negated)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn statuses(text: &str) -> Vec<Status> {
        let f = parse(text).unwrap();
        let b = Budget::default();
        Semantics::ALL
            .iter()
            .map(|&s| {
                let v = solve(&f, s, &b).unwrap();
                if let Some(w) = &v.witness {
                    assert!(validate_witness(&f, s, w, &b).unwrap(), "{text} under {s}");
                }
                v.status
            })
            .collect()
    }

    use Status::{Sat, Unsat};

    #[test]
    fn example_matrix() {
        assert_eq!(statuses("A{x} E{y} (G x <-> y)"), [Sat, Unsat, Unsat]);
        assert_eq!(statuses("E{y} A{x} (F x <-> F y)"), [Unsat, Unsat, Sat]);
        assert_eq!(statuses("E{y} G (y & X !y)"), [Unsat, Unsat, Unsat]);
        assert_eq!(statuses("A{x} E{y} G (X y <-> x)"), [Sat, Sat, Sat]);
    }

    #[test]
    fn planning_shape() {
        // the second move may not see the later disturbance
        assert_eq!(statuses("A{a} E{b} A{c} G (b <-> a)"), [Sat, Sat, Sat]);
        assert_eq!(
            statuses("A{a} E{b} A{c} G (b <-> c)"),
            [Unsat, Unsat, Unsat]
        );
        assert_eq!(
            statuses("A{a} E{b} A{c} G (X b <-> c)"),
            [Unsat, Unsat, Sat]
        );
    }

    #[test]
    fn closing() {
        let f = parse("A{x} E{y} G (y <-> z)").unwrap();
        assert_eq!(
            close_formula(&f).to_string(),
            parse("E{z} A{x} E{y} G (y <-> z)").unwrap().to_string()
        );
        let g = parse("E{y} G (y <-> z)").unwrap();
        assert_eq!(close_formula(&g).prefix().len(), 1);
        let c = parse("E{y} G y").unwrap();
        assert_eq!(close_formula(&c), c);
    }

    #[test]
    fn classic_witness_routes() {
        let b = Budget::default();
        for text in [
            "E{y} F y",
            "E{y} A{x} G (y | x | !x)",
            "E{y} A{x} E{z} G (z <-> (x & y))",
        ] {
            let f = parse(text).unwrap();
            let v = solve_classic(&f, &b).unwrap();
            let w = v.witness.expect("sat with a leading block");
            assert!(
                validate_witness(&f, Semantics::Classic, &w, &b).unwrap(),
                "{text}"
            );
        }
        let f = parse("E{y} A{x} E{z} G (z <-> (x & y)) & F !y").unwrap();
        let bad = Witness::Lasso(LassoTrace::from_names(&["y"], &[], &[&["y"]]).unwrap());
        assert!(!validate_witness(&f, Semantics::Classic, &bad, &b).unwrap());
    }

    #[test]
    fn timings_are_optional_in_reports() {
        let v = solve_classic(&parse("E{y} F y").unwrap(), &Budget::default()).unwrap();
        assert!(!v.to_json(false).to_string().contains("millis"));
        assert!(v.to_json(true).to_string().contains("millis"));
    }
}
