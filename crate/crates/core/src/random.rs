//! Seeded generators for formulas, lassos and small automata. Everything is
//! driven by a ChaCha stream so a seed fixes every suite byte for byte.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Letter;
use crate::formula::{Matrix, QuantBlock, QuantifiedFormula, Quantifier, Var, VarSet};
use crate::trace::LassoTrace;
use crate::word::Nbw;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random matrix over `vars` whose closure has at most `max_closure` nodes.
pub fn matrix(rng: &mut Rng8, vars: &[Var], max_closure: usize) -> Matrix {
    loop {
        let m = grow(rng, vars, 4);
        if m.closure_size() <= max_closure && (m.closure_size() >= 2 || vars.is_empty()) {
            return m;
        }
    }
}

fn grow(rng: &mut Rng8, vars: &[Var], depth: usize) -> Matrix {
    let leaf = |rng: &mut Rng8| {
        if vars.is_empty() || rng.gen_ratio(1, 12) {
            if rng.gen_bool(0.5) {
                Matrix::True
            } else {
                Matrix::False
            }
        } else {
            Matrix::Atom(vars.choose(rng).expect("nonempty vars").clone())
        }
    };
    if depth == 0 || rng.gen_ratio(1, 4) {
        return leaf(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..11) {
        0 => Matrix::not(grow(rng, vars, d)),
        1 => Matrix::and(grow(rng, vars, d), grow(rng, vars, d)),
        2 => Matrix::or(grow(rng, vars, d), grow(rng, vars, d)),
        3 => Matrix::implies(grow(rng, vars, d), grow(rng, vars, d)),
        4 => Matrix::iff(grow(rng, vars, d), grow(rng, vars, d)),
        5 => Matrix::next(grow(rng, vars, d)),
        6 => Matrix::until(grow(rng, vars, d), grow(rng, vars, d)),
        7 => Matrix::release(grow(rng, vars, d), grow(rng, vars, d)),
        8 => Matrix::eventually(grow(rng, vars, d)),
        9 => Matrix::globally(grow(rng, vars, d)),
        _ => leaf(rng),
    }
}

/// A random lasso over `universe` with the given length caps (loop ≥ 1).
pub fn lasso(rng: &mut Rng8, universe: &VarSet, max_stem: usize, max_loop: usize) -> LassoTrace {
    let top = 1u32 << universe.len();
    let stem_len = rng.gen_range(0..=max_stem);
    let loop_len = rng.gen_range(1..=max_loop.max(1));
    let stem = (0..stem_len).map(|_| rng.gen_range(0..top)).collect();
    let cycle = (0..loop_len).map(|_| rng.gen_range(0..top)).collect();
    LassoTrace::new(universe.clone(), stem, cycle).expect("letters in range")
}

/// A random Büchi automaton with `states` states over `vars`.
pub fn nbw(rng: &mut Rng8, vars: &VarSet, states: usize, density: f64) -> Nbw {
    let mut a = Nbw::new(vars, states, 0).expect("small alphabet");
    let letters = a.letter_count() as Letter;
    for q in 0..states as u32 {
        a.set_accepting(q, rng.gen_bool(0.4));
        for l in 0..letters {
            for t in 0..states as u32 {
                if rng.gen_bool(density) {
                    a.add_edge(q, l, t);
                }
            }
        }
    }
    a
}

/// Variable names `x0, x1, …` style helpers.
pub fn names(prefix: &str, n: usize) -> Vec<Var> {
    (0..n)
        .map(|i| Var::new(&format!("{prefix}{i}")).expect("valid name"))
        .collect()
}

/// A closed formula with `blocks` alternating blocks (first kind chosen at
/// random) of 1 to `max_vars` variables each.
pub fn closed_formula(
    rng: &mut Rng8,
    blocks: usize,
    max_vars: usize,
    max_closure: usize,
) -> QuantifiedFormula {
    let mut kind = if rng.gen_bool(0.5) {
        Quantifier::Exists
    } else {
        Quantifier::Forall
    };
    let mut prefix = Vec::new();
    let mut all = Vec::new();
    let pool = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let mut next = 0;
    for _ in 0..blocks {
        let k = rng.gen_range(1..=max_vars);
        let vars: VarSet = (0..k)
            .map(|_| {
                let v = Var::new(pool[next]).expect("valid");
                next += 1;
                v
            })
            .collect();
        all.extend(vars.iter().cloned());
        prefix.push(QuantBlock { kind, vars });
        kind = kind.dual();
    }
    let m = matrix(rng, &all, max_closure);
    QuantifiedFormula::new(prefix, m).expect("fresh names")
}

/// A formula with the given block kinds, one or two variables each.
pub fn shaped_formula(
    rng: &mut Rng8,
    kinds: &[Quantifier],
    vars_per_block: usize,
    max_closure: usize,
) -> QuantifiedFormula {
    let pool = ["a", "b", "c", "d", "e", "f", "g", "h"];
    let mut next = 0;
    let mut prefix = Vec::new();
    let mut all = Vec::new();
    for &kind in kinds {
        let vars: VarSet = (0..vars_per_block)
            .map(|_| {
                let v = Var::new(pool[next]).expect("valid");
                next += 1;
                v
            })
            .collect();
        all.extend(vars.iter().cloned());
        prefix.push(QuantBlock { kind, vars });
    }
    let m = matrix(rng, &all, max_closure);
    QuantifiedFormula::new(prefix, m).expect("fresh names")
}
