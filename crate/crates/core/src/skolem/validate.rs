use std::collections::{HashMap, VecDeque};

use super::mealy::SkolemFamily;
use crate::bits::{letter_count, remap, Letter};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::formula::{Matrix, QuantifiedFormula, Var, VarSet};
use crate::trace::LassoTrace;
use crate::word::{ltl_to_nbw, Nbw};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Valid,
    /// An interpretation of the free and universal variables on which the
    /// machines' outputs falsify the matrix.
    Counterexample(LassoTrace),
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

/// Exact check that the family satisfies the matrix against every
/// interpretation of the free and universal variables: the product of the
/// machines with an automaton for the negated matrix must be empty.
pub fn validate(
    family: &SkolemFamily,
    f: &QuantifiedFormula,
    budget: &Budget,
) -> Result<Validation> {
    let exist = f.existential_vars();
    if family.outputs() != exist {
        return Err(Error::InvalidWitness(format!(
            "machines write {:?}, the prefix binds {:?} existentially",
            family.outputs(),
            exist
        )));
    }
    let observed: VarSet = f.free_vars().union(&f.universal_vars()).cloned().collect();
    if !family.reads().is_subset(&observed) {
        return Err(Error::InvalidWitness(
            "machines read variables that are not free or universal".into(),
        ));
    }
    let product = bad_product(family, f.matrix(), &observed, &f.all_vars(), budget)?;
    Ok(match product.emptiness() {
        None => Validation::Valid,
        Some(cex) => Validation::Counterexample(cex),
    })
}

/// Büchi automaton over `observed` accepting the interpretations on which
/// the family's outputs violate `matrix`.
fn bad_product(
    family: &SkolemFamily,
    matrix: &Matrix,
    observed: &VarSet,
    all: &VarSet,
    budget: &Budget,
) -> Result<Nbw> {
    let negated = ltl_to_nbw(&Matrix::not(matrix.clone()), all, budget)?;
    let obs: Vec<Var> = observed.iter().cloned().collect();
    let joint = negated.vars().to_vec();
    let letters = letter_count(&obs) as Letter;
    let mut out = Nbw::new(observed, 1, 0)?;
    let start = (
        negated.initial(),
        family
            .machines
            .iter()
            .map(|m| m.initial())
            .collect::<Vec<_>>(),
    );
    let mut ids: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
    out.set_accepting(0, negated.is_accepting(start.0));
    ids.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    while let Some((q, mem)) = queue.pop_front() {
        budget.check_states("validate", ids.len())?;
        let id = ids[&(q, mem.clone())];
        for u in 0..letters {
            let mut letter = remap(u, &obs, &joint);
            for (i, m) in family.machines.iter().enumerate() {
                letter |= remap(m.output_on(mem[i], u, &obs), m.block(), &joint);
            }
            let next_mem: Vec<u32> = family
                .machines
                .iter()
                .enumerate()
                .map(|(i, m)| m.update_on(mem[i], u, &obs))
                .collect();
            for &q2 in negated.successors(q, letter) {
                let key = (q2, next_mem.clone());
                let t = match ids.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = out.add_state();
                        out.set_accepting(t, negated.is_accepting(q2));
                        ids.insert(key.clone(), t);
                        queue.push_back(key);
                        t
                    }
                };
                out.add_edge(id, u, t);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var_set};
    use crate::skolem::MealyMachine;
    use crate::trace::eval_ltl;

    fn copy() -> MealyMachine {
        let x = var_set(&["x"]);
        MealyMachine::new(
            &var_set(&["y"]),
            &x,
            &x,
            0,
            vec![vec![0, 0]],
            vec![vec![0, 1]],
        )
        .unwrap()
    }

    fn delay() -> MealyMachine {
        MealyMachine::new(
            &var_set(&["y"]),
            &var_set(&["x"]),
            &VarSet::new(),
            0,
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0], vec![1]],
        )
        .unwrap()
    }

    #[test]
    fn copy_satisfies_copying() {
        let f = parse("A{x} E{y} G (y <-> x)").unwrap();
        let fam = SkolemFamily::new(vec![copy()]);
        assert!(validate(&fam, &f, &Budget::default()).unwrap().is_valid());
    }

    #[test]
    fn constant_false_is_refuted_by_always_x() {
        let f = parse("A{x} E{y} (G x <-> y)").unwrap();
        let fam = SkolemFamily::new(vec![MealyMachine::constant(&var_set(&["y"]), 0).unwrap()]);
        let Validation::Counterexample(cex) = validate(&fam, &f, &Budget::default()).unwrap()
        else {
            panic!("expected a counterexample")
        };
        // x holds forever on the refuting branch
        assert!((0..cex.span() + 2).all(|i| cex.letter(i) == 1));
        let joint = fam.apply(&cex).unwrap();
        assert!(!eval_ltl(f.matrix(), &joint, 0).unwrap());
    }

    #[test]
    fn delay_satisfies_the_weak_example() {
        let f = parse("E{y} A{x} (F x <-> F y)").unwrap();
        let fam = SkolemFamily::new(vec![delay()]);
        assert!(validate(&fam, &f, &Budget::default()).unwrap().is_valid());
    }

    #[test]
    fn outputs_must_match_the_prefix() {
        let f = parse("A{x} E{z} G (z <-> x)").unwrap();
        let fam = SkolemFamily::new(vec![copy()]);
        assert!(validate(&fam, &f, &Budget::default()).is_err());
    }
}
