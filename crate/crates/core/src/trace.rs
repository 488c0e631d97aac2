//! Ultimately periodic interpretations and classic LTL evaluation on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{letter_vars, remap, Letter};
use crate::error::{Error, Result};
use crate::formula::{Matrix, Var, VarSet};

/// `stem · loop^ω` over subsets of `universe`. Letters are bitmasks over the
/// sorted universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoTrace {
    universe: Vec<Var>,
    stem: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl LassoTrace {
    pub fn new(universe: VarSet, stem: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self> {
        let universe: Vec<Var> = universe.into_iter().collect();
        if universe.len() > 31 {
            return Err(Error::AlphabetTooLarge {
                found: universe.len(),
                limit: 31,
            });
        }
        if cycle.is_empty() {
            return Err(Error::Invalid("lasso loop must be nonempty".into()));
        }
        let full = (1u32 << universe.len()) - 1;
        if stem.iter().chain(&cycle).any(|l| l & !full != 0) {
            return Err(Error::Invalid("letter outside the universe".into()));
        }
        Ok(LassoTrace {
            universe,
            stem,
            cycle,
        })
    }

    /// Builds a lasso from letters given as variable-name lists.
    pub fn from_names(universe: &[&str], stem: &[&[&str]], cycle: &[&[&str]]) -> Result<Self> {
        let vars: VarSet = universe
            .iter()
            .map(|n| Var::new(n))
            .collect::<Result<_>>()?;
        let order: Vec<Var> = vars.iter().cloned().collect();
        let enc = |letters: &[&[&str]]| -> Result<Vec<Letter>> {
            letters
                .iter()
                .map(|l| {
                    crate::bits::letter_from_names(l.iter().copied(), &order)
                        .ok_or_else(|| Error::UnknownVariable(format!("{l:?}")))
                })
                .collect()
        };
        LassoTrace::new(vars, enc(stem)?, enc(cycle)?)
    }

    pub fn universe(&self) -> &[Var] {
        &self.universe
    }

    pub fn universe_set(&self) -> VarSet {
        self.universe.iter().cloned().collect()
    }

    pub fn stem(&self) -> &[Letter] {
        &self.stem
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    /// Number of distinct positions, `|stem| + |loop|`.
    pub fn span(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    /// Canonical representative of position `i` in `0..span()`.
    pub fn normalize(&self, i: usize) -> usize {
        let s = self.stem.len();
        if i < s {
            i
        } else {
            s + (i - s) % self.cycle.len()
        }
    }

    pub fn letter(&self, i: usize) -> Letter {
        let j = self.normalize(i);
        if j < self.stem.len() {
            self.stem[j]
        } else {
            self.cycle[j - self.stem.len()]
        }
    }

    pub fn letter_set(&self, i: usize) -> VarSet {
        letter_vars(self.letter(i), &self.universe)
            .into_iter()
            .collect()
    }

    /// The finite segment `π(i, j)`, `j` exclusive.
    pub fn segment(&self, i: usize, j: usize) -> Vec<Letter> {
        (i..j).map(|k| self.letter(k)).collect()
    }

    /// Restriction to `vars` (intersected with the universe).
    pub fn project(&self, vars: &VarSet) -> LassoTrace {
        let to: Vec<Var> = self
            .universe
            .iter()
            .filter(|v| vars.contains(*v))
            .cloned()
            .collect();
        self.reencode(to)
    }

    /// Restriction to `universe ∖ vars`.
    pub fn project_out(&self, vars: &VarSet) -> LassoTrace {
        let to: Vec<Var> = self
            .universe
            .iter()
            .filter(|v| !vars.contains(*v))
            .cloned()
            .collect();
        self.reencode(to)
    }

    fn reencode(&self, to: Vec<Var>) -> LassoTrace {
        let map = |l: &Letter| remap(*l, &self.universe, &to);
        LassoTrace {
            stem: self.stem.iter().map(map).collect(),
            cycle: self.cycle.iter().map(map).collect(),
            universe: to,
        }
    }

    /// The unique trace over both universes whose projections are the inputs.
    pub fn combine(&self, other: &LassoTrace) -> Result<LassoTrace> {
        let overlap: Vec<String> = self
            .universe
            .iter()
            .filter(|v| other.universe.contains(v))
            .map(|v| v.to_string())
            .collect();
        if !overlap.is_empty() {
            return Err(Error::OverlappingUniverse(overlap));
        }
        let mut all: VarSet = self.universe_set();
        all.extend(other.universe.iter().cloned());
        let to: Vec<Var> = all.iter().cloned().collect();
        let stem_len = self.stem.len().max(other.stem.len());
        let cycle_len = lcm(self.cycle.len(), other.cycle.len());
        let at = |i: usize| {
            remap(self.letter(i), &self.universe, &to)
                | remap(other.letter(i), &other.universe, &to)
        };
        LassoTrace::new(
            all,
            (0..stem_len).map(at).collect(),
            (stem_len..stem_len + cycle_len).map(at).collect(),
        )
    }

    /// Widens the universe to `universe`, the new variables being always false.
    pub fn extend_universe(&self, universe: &VarSet) -> Result<LassoTrace> {
        let extra: VarSet = universe
            .iter()
            .filter(|v| !self.universe.contains(v))
            .cloned()
            .collect();
        let empty = LassoTrace::new(extra, vec![], vec![0])?;
        self.combine(&empty)
    }

    /// The suffix starting at position `k`.
    pub fn suffix(&self, k: usize) -> LassoTrace {
        let start = self.normalize(k);
        let s = self.stem.len();
        let (stem, cycle) = if start < s {
            (self.stem[start..].to_vec(), self.cycle.clone())
        } else {
            let r = start - s;
            let mut c = self.cycle[r..].to_vec();
            c.extend_from_slice(&self.cycle[..r]);
            (vec![], c)
        };
        LassoTrace {
            universe: self.universe.clone(),
            stem,
            cycle,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Classic satisfaction `π, i ⊨ m`.
pub fn eval_ltl(m: &Matrix, trace: &LassoTrace, i: usize) -> Result<bool> {
    for v in m.vars() {
        if !trace.universe.contains(&v) {
            return Err(Error::UnknownVariable(v.to_string()));
        }
    }
    let table = Evaluator { trace }.table(m);
    Ok(table[trace.normalize(i)])
}

struct Evaluator<'a> {
    trace: &'a LassoTrace,
}

impl Evaluator<'_> {
    // Truth value at every canonical position.
    fn table(&self, m: &Matrix) -> Vec<bool> {
        use Matrix::*;
        let t = self.trace;
        let n = t.span();
        let succ = |i: usize| t.normalize(i + 1);
        // any eventuality that holds is fulfilled within this many steps
        let horizon = t.stem.len() + 2 * t.cycle.len();
        match m {
            Atom(v) => {
                let bit = 1 << t.universe.iter().position(|u| u == v).expect("checked");
                (0..n).map(|i| t.letter(i) & bit != 0).collect()
            }
            True => vec![true; n],
            False => vec![false; n],
            Not(a) => self.table(a).into_iter().map(|b| !b).collect(),
            And(a, b) => zip(self.table(a), self.table(b), |x, y| x && y),
            Or(a, b) => zip(self.table(a), self.table(b), |x, y| x || y),
            Implies(a, b) => zip(self.table(a), self.table(b), |x, y| !x || y),
            Iff(a, b) => zip(self.table(a), self.table(b), |x, y| x == y),
            Next(a) => {
                let ta = self.table(a);
                (0..n).map(|i| ta[succ(i)]).collect()
            }
            Eventually(a) => self.table(&Matrix::until(True, (**a).clone())),
            Globally(a) => self.table(&Matrix::release(False, (**a).clone())),
            Until(a, b) => {
                let (ta, tb) = (self.table(a), self.table(b));
                (0..n)
                    .map(|i| {
                        let mut j = i;
                        for _ in 0..=horizon {
                            if tb[j] {
                                return true;
                            }
                            if !ta[j] {
                                return false;
                            }
                            j = succ(j);
                        }
                        false
                    })
                    .collect()
            }
            Release(a, b) => {
                // a R b holds iff b holds up to and including the first a, or forever
                let (ta, tb) = (self.table(a), self.table(b));
                (0..n)
                    .map(|i| {
                        let mut j = i;
                        for _ in 0..=horizon {
                            if !tb[j] {
                                return false;
                            }
                            if ta[j] {
                                return true;
                            }
                            j = succ(j);
                        }
                        true
                    })
                    .collect()
            }
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

#[derive(Serialize, Deserialize)]
struct LassoJson {
    universe: Vec<Var>,
    stem: Vec<Vec<Var>>,
    #[serde(rename = "loop")]
    cycle: Vec<Vec<Var>>,
}

impl Serialize for LassoTrace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dec = |ls: &[Letter]| -> Vec<Vec<Var>> {
            ls.iter().map(|l| letter_vars(*l, &self.universe)).collect()
        };
        LassoJson {
            universe: self.universe.clone(),
            stem: dec(&self.stem),
            cycle: dec(&self.cycle),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LassoTrace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LassoJson::deserialize(d)?;
        let universe: VarSet = raw.universe.into_iter().collect();
        let order: Vec<Var> = universe.iter().cloned().collect();
        let enc = |ls: Vec<Vec<Var>>| -> std::result::Result<Vec<Letter>, D::Error> {
            ls.into_iter()
                .map(|l| {
                    l.iter().try_fold(0, |acc, v| match order.binary_search(v) {
                        Ok(k) => Ok(acc | 1 << k),
                        Err(_) => Err(serde::de::Error::custom(format!(
                            "`{v}` is not in the universe"
                        ))),
                    })
                })
                .collect()
        };
        let stem = enc(raw.stem)?;
        let cycle = enc(raw.cycle)?;
        LassoTrace::new(universe, stem, cycle).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |ls: &[Letter]| {
            ls.iter()
                .map(|l| crate::bits::show_letter(*l, &self.universe))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} ({})^w", show(&self.stem), show(&self.cycle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_matrix, var_set};

    fn lasso(u: &[&str], stem: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        LassoTrace::from_names(u, stem, cycle).unwrap()
    }

    fn holds(m: &str, t: &LassoTrace, i: usize) -> bool {
        eval_ltl(&parse_matrix(m).unwrap(), t, i).unwrap()
    }

    #[test]
    fn letter_examples() {
        let t = lasso(&["x"], &[], &[&["x"]]);
        assert_eq!(t.letter_set(7), var_set(&["x"]));
        let t = lasso(&["x"], &[&["x"]], &[&[]]);
        assert_eq!(t.letter_set(0), var_set(&["x"]));
        assert_eq!(t.letter_set(3), var_set(&[]));
        let t = lasso(&["x"], &[], &[&["x"], &[]]);
        assert_eq!(t.letter_set(2), var_set(&["x"]));
    }

    #[test]
    fn projection_examples() {
        let t = lasso(&["x", "y"], &[], &[&["x", "y"]]);
        assert_eq!(t.project(&var_set(&["x"])), lasso(&["x"], &[], &[&["x"]]));
        assert_eq!(
            t.project_out(&var_set(&["x"])),
            lasso(&["y"], &[], &[&["y"]])
        );
        let e = t.project(&VarSet::new());
        assert!(e.universe().is_empty());
        assert_eq!(e.letter(5), 0);
    }

    #[test]
    fn combine_examples() {
        let a = lasso(&["x"], &[], &[&["x"]]);
        let b = lasso(&["y"], &[], &[&[]]);
        assert_eq!(a.combine(&b).unwrap(), lasso(&["x", "y"], &[], &[&["x"]]));
        let a = lasso(&["x"], &[&["x"]], &[&[]]);
        let b = lasso(&["y"], &[&[]], &[&["y"]]);
        assert_eq!(
            a.combine(&b).unwrap(),
            lasso(&["x", "y"], &[&["x"]], &[&["y"]])
        );
        assert!(matches!(a.combine(&a), Err(Error::OverlappingUniverse(_))));
    }

    #[test]
    fn combine_aligns_periods() {
        let a = lasso(&["x"], &[&[]], &[&["x"], &[]]);
        let b = lasso(&["y"], &[], &[&["y"], &[], &[]]);
        let c = a.combine(&b).unwrap();
        assert_eq!(c.cycle().len(), 6);
        for i in 0..20 {
            assert_eq!(c.project(&var_set(&["x"])).letter(i), a.letter(i));
            assert_eq!(c.project(&var_set(&["y"])).letter(i), b.letter(i));
        }
    }

    #[test]
    fn eval_examples() {
        let all_x = lasso(&["x"], &[], &[&["x"]]);
        assert!(holds("G x", &all_x, 0));
        let both = lasso(&["x", "y"], &[], &[&["x", "y"]]);
        assert!(holds("G x <-> y", &both, 0));
        let alt = lasso(&["y"], &[], &[&["y"], &[]]);
        assert!(holds("y & X !y", &alt, 0));
        assert!(!holds("G (y & X !y)", &alt, 0));
        assert!(holds("F !y", &alt, 0));
        assert!(holds("G F y & G F !y", &alt, 0));
        assert!(!holds("F G y", &alt, 0));
    }

    #[test]
    fn until_needs_the_stem() {
        // b occurs only in the stem; a U b from inside the loop must fail
        let t = lasso(&["a", "b"], &[&["a"], &["b"]], &[&["a"]]);
        assert!(holds("a U b", &t, 0));
        assert!(!holds("a U b", &t, 2));
        assert!(holds("G a", &t, 2));
        assert!(!holds("a R b", &t, 0));
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let t = lasso(&["x"], &[], &[&[]]);
        let m = parse_matrix("y").unwrap();
        assert_eq!(eval_ltl(&m, &t, 0), Err(Error::UnknownVariable("y".into())));
    }

    #[test]
    fn suffix_shifts_positions() {
        let t = lasso(&["x"], &[&["x"], &[]], &[&[], &["x"], &["x"]]);
        for k in 0..7 {
            let s = t.suffix(k);
            for i in 0..10 {
                assert_eq!(s.letter(i), t.letter(i + k));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = lasso(&["x", "y"], &[&["x"], &[]], &[&["x", "y"]]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"universe":["x","y"],"stem":[["x"],[]],"loop":[["x","y"]]}"#
        );
        let back: LassoTrace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(
            serde_json::from_str::<LassoTrace>(r#"{"universe":[],"stem":[],"loop":[]}"#).is_err()
        );
    }
}
