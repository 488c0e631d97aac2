use std::time::Instant;

use super::{close_formula, Semantics, StageStat, Status, Verdict, Witness};
use crate::bits::{letter_count, remap, Letter};
use crate::budget::Budget;
use crate::error::Result;
use crate::formula::{dep, QuantifiedFormula, Var, VarSet};
use crate::games::{
    build_multi_game, extract_team_strategy, sequentialize, MultiParityGame, Player,
    TeamStrategyProfile,
};
use crate::skolem::{MealyMachine, SkolemFamily};
use crate::word::{ltl_to_nbw, nbw_to_dpw};

pub fn solve_weak_behavioral(f: &QuantifiedFormula, budget: &Budget) -> Result<Verdict> {
    let f = close_formula(f);
    let mut stats = Vec::new();
    let clock = Instant::now();
    let nbw = ltl_to_nbw(f.matrix(), &f.all_vars(), budget)?;
    stats.push(StageStat::since("ltl", nbw.states(), clock));
    let clock = Instant::now();
    let dpw = nbw_to_dpw(&nbw, budget)?;
    stats.push(StageStat::since("determinize", dpw.states(), clock));
    let clock = Instant::now();
    let game = build_multi_game(&dpw, f.prefix())?;
    let seq = sequentialize(&game);
    budget.check_states("game", seq.game.len())?;
    stats.push(StageStat::since("game", seq.game.len(), clock));
    let clock = Instant::now();
    let sol = seq.game.solve();
    budget.check_time("game")?;
    stats.push(StageStat::since("zielonka", seq.game.len(), clock));
    let mut v = Verdict::new(Semantics::WeakBehavioral, Status::Unsat);
    if sol.winner[seq.game.initial as usize] == Player::Even {
        let profile = extract_team_strategy(&game, &seq, &sol)?;
        let machines = (0..game.players())
            .filter(|&i| game.team(i) == Player::Even)
            .map(|i| machine(&game, &profile, &f, i))
            .collect::<Result<Vec<_>>>()?;
        v.status = Status::Sat;
        v.witness = Some(Witness::Family(SkolemFamily::new(machines)));
    }
    v.stages = stats;
    Ok(v)
}

/// Player `i`'s part of the team strategy. The memory tracks the automaton
/// state, which every existential player can recompute from the past of the
/// universal variables; the present of its dependencies fixes the earlier
/// moves of the round.
fn machine(
    game: &MultiParityGame,
    profile: &TeamStrategyProfile,
    f: &QuantifiedFormula,
    i: usize,
) -> Result<MealyMachine> {
    let d = &game.dpw;
    let inputs: Vec<Var> = f.universal_vars().into_iter().collect();
    let now_set = dep(f.prefix(), i, &VarSet::new())?;
    let now: Vec<Var> = now_set.iter().cloned().collect();
    let block = game.blocks[i].var_list();
    let update = (0..d.states() as u32)
        .map(|q| {
            (0..letter_count(&inputs) as Letter)
                .map(|u| d.step(q, profile.round(game, q, remap(u, &inputs, d.vars()))))
                .collect()
        })
        .collect();
    let output = (0..d.states() as u32)
        .map(|q| {
            (0..letter_count(&now) as Letter)
                .map(|n| {
                    let seen = remap(n, &now, d.vars());
                    let mut partial = 0;
                    for j in 0..i {
                        partial |= match game.team(j) {
                            Player::Odd => seen & game.masks[j],
                            Player::Even => profile.action(j, q, partial),
                        };
                    }
                    remap(profile.action(i, q, partial), d.vars(), &block)
                })
                .collect()
        })
        .collect();
    MealyMachine::new(
        &game.blocks[i].vars,
        &inputs.into_iter().collect(),
        &now_set,
        d.initial(),
        update,
        output,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::skolem::{check_conformance, validate, Mode};

    fn solve(text: &str) -> (QuantifiedFormula, Verdict) {
        let f = parse(text).unwrap();
        let v = solve_weak_behavioral(&f, &Budget::default()).unwrap();
        if let Some(Witness::Family(fam)) = &v.witness {
            assert!(check_conformance(fam, &f, Mode::WeakBehavioral));
            assert!(
                validate(fam, &f, &Budget::default()).unwrap().is_valid(),
                "{text}"
            );
        }
        (f, v)
    }

    #[test]
    fn examples() {
        assert_eq!(solve("A{x} E{y} (G x <-> y)").1.status, Status::Unsat);
        assert_eq!(solve("E{y} A{x} (F x <-> F y)").1.status, Status::Sat);
        assert_eq!(solve("E{y} G (y & X !y)").1.status, Status::Unsat);
        assert_eq!(solve("A{x} E{y} G (X y <-> x)").1.status, Status::Sat);
    }

    #[test]
    fn multiple_blocks() {
        assert_eq!(
            solve("A{a} E{b} A{c} E{d} G ((b <-> a) & (d <-> c))")
                .1
                .status,
            Status::Sat
        );
        assert_eq!(
            solve("A{a} E{b} A{c} E{d} G (b <-> c)").1.status,
            Status::Unsat
        );
        assert_eq!(solve("E{b} A{a} G (X b <-> a)").1.status, Status::Sat);
        assert_eq!(solve("A{a} G a").1.status, Status::Unsat);
        assert_eq!(solve("A{a} G (a | !a)").1.status, Status::Sat);
    }
}
