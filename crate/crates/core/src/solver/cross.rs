use super::{solve, validate_witness, Semantics, Status, Verdict};
use crate::budget::Budget;
use crate::error::Error;
use crate::formula::{FragmentTag, QuantifiedFormula, Quantifier};
use crate::skolem::{enumerate_oracle, Mode, OracleOutcome};
use crate::word::{ltl_to_nbw, nbw_to_dpw};

/// Every verdict for a formula and its negation, with the violated
/// relations between them. Solver failures are recorded, not raised.
#[derive(Debug, Clone)]
pub struct CrossReport {
    pub formula: QuantifiedFormula,
    pub verdicts: Vec<Result<Verdict, Error>>,
    /// Classic and behavioral verdicts of the negation.
    pub classic_negated: Result<Verdict, Error>,
    pub behavioral_negated: Result<Verdict, Error>,
    pub oracle: Option<Result<OracleOutcome, Error>>,
    pub violations: Vec<String>,
}

impl CrossReport {
    pub fn status(&self, s: Semantics) -> Option<Status> {
        let i = Semantics::ALL.iter().position(|&t| t == s).expect("listed");
        self.verdicts[i].as_ref().ok().map(|v| v.status)
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn status(r: &Result<Verdict, Error>) -> Option<Status> {
    r.as_ref().ok().map(|v| v.status)
}

/// Runs the three solvers on `f` and the classic and behavioral solvers on
/// its negation, checks determinacy, the implication lattice, fragment and
/// single-block coincidences, and re-validates every witness. With
/// `oracle_bound`, the behavioral oracle also runs, at a bound no larger
/// than the automaton of the matrix; a family it finds must agree with the
/// behavioral solver, and a satisfiable ∀∃ formula must yield one.
pub fn cross_check(
    f: &QuantifiedFormula,
    budget: &Budget,
    oracle_bound: Option<usize>,
) -> CrossReport {
    let f = super::close_formula(f);
    let verdicts: Vec<Result<Verdict, Error>> = Semantics::ALL
        .iter()
        .map(|&s| solve(&f, s, budget))
        .collect();
    let neg = f.negate();
    let classic_negated = solve(&neg, Semantics::Classic, budget);
    let behavioral_negated = solve(&neg, Semantics::Behavioral, budget);
    let mut violations = Vec::new();

    for (s, r) in Semantics::ALL.iter().zip(&verdicts) {
        match r {
            Err(e) => violations.push(format!("{s} failed: {e}")),
            Ok(v) => {
                if let Some(w) = &v.witness {
                    match validate_witness(&f, *s, w, budget) {
                        Ok(true) => {}
                        Ok(false) => violations.push(format!("{s} witness does not validate")),
                        Err(e) => violations.push(format!("{s} witness check failed: {e}")),
                    }
                } else if v.status == Status::Sat && *s != Semantics::Classic {
                    violations.push(format!("{s} is sat without a witness"));
                }
            }
        }
    }
    let c = status(&verdicts[0]);
    let b = status(&verdicts[1]);
    let wb = status(&verdicts[2]);
    let cn = status(&classic_negated);
    let bn = status(&behavioral_negated);
    let sat = Some(Status::Sat);
    if c.is_some() && cn.is_some() && (c == sat) == (cn == sat) {
        violations.push("determinacy: exactly one of the formula and its negation holds".into());
    }
    if b == sat && c.is_some() && c != sat {
        violations.push("behavioral sat but classic unsat".into());
    }
    if b == sat && wb.is_some() && wb != sat {
        violations.push("behavioral sat but weak-behavioral unsat".into());
    }
    if b == sat && bn == sat {
        violations.push("behavioral sat for both the formula and its negation".into());
    }
    if matches!(
        f.classify().tag,
        FragmentTag::Pi0 | FragmentTag::Sigma0 | FragmentTag::Sigma1
    ) && b.is_some()
        && c.is_some()
        && b != c
    {
        violations.push("behavioral and classic differ on a collapsing fragment".into());
    }
    let kinds: Vec<Quantifier> = f.prefix().iter().map(|q| q.kind).collect();
    let forall_exists = kinds == [Quantifier::Forall, Quantifier::Exists];
    if forall_exists && b.is_some() && wb.is_some() && b != wb {
        violations.push("behavioral and weak-behavioral differ under a single dependency".into());
    }

    let oracle = oracle_bound.map(|cap| {
        let dpw =
            ltl_to_nbw(f.matrix(), &f.all_vars(), budget).and_then(|n| nbw_to_dpw(&n, budget))?;
        let bound = cap.min(dpw.states()).max(1);
        enumerate_oracle(&f, Mode::Behavioral, bound, budget).map(|r| r.outcome)
    });
    match &oracle {
        Some(Ok(OracleOutcome::Sat(_))) if b.is_some() && b != sat => {
            violations.push("oracle found a behavioral family the solver missed".into())
        }
        Some(Ok(OracleOutcome::UnknownWithinBounds)) if forall_exists && b == sat => {
            violations.push("oracle found no family for a satisfiable single dependency".into())
        }
        Some(Err(e)) => violations.push(format!("oracle failed: {e}")),
        _ => {}
    }
    CrossReport {
        formula: f,
        verdicts,
        classic_negated,
        behavioral_negated,
        oracle,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn examples_have_no_violations() {
        let b = Budget::default();
        for (text, expect) in [
            (
                "A{x} E{y} (G x <-> y)",
                [Status::Sat, Status::Unsat, Status::Unsat],
            ),
            (
                "E{y} A{x} (F x <-> F y)",
                [Status::Unsat, Status::Unsat, Status::Sat],
            ),
            (
                "A{x} E{y} G (X y <-> x)",
                [Status::Sat, Status::Sat, Status::Sat],
            ),
        ] {
            let r = cross_check(&parse(text).unwrap(), &b, Some(3));
            assert!(r.ok(), "{text}: {:?}", r.violations);
            for (s, e) in Semantics::ALL.iter().zip(expect) {
                assert_eq!(r.status(*s), Some(e), "{text} under {s}");
            }
        }
    }
}
