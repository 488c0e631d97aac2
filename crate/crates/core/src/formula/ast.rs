use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A propositional variable, `[a-z][a-zA-Z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Var(String);

impl Var {
    pub fn new(name: &str) -> Result<Var> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || name == "true" || name == "false" {
            return Err(Error::Invalid(format!("`{name}` is not a variable name")));
        }
        Ok(Var(name.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Var {
    type Error = Error;
    fn try_from(s: String) -> Result<Var> {
        Var::new(&s)
    }
}

impl From<Var> for String {
    fn from(v: Var) -> String {
        v.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type VarSet = BTreeSet<Var>;

/// Builds a variable set from names; panics on malformed names, so only use
/// it with literals.
pub fn var_set(names: &[&str]) -> VarSet {
    names
        .iter()
        .map(|n| Var::new(n).expect("bad name"))
        .collect()
}

/// Quantifier-free LTL.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Matrix {
    Atom(Var),
    True,
    False,
    Not(Box<Matrix>),
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
    Implies(Box<Matrix>, Box<Matrix>),
    Iff(Box<Matrix>, Box<Matrix>),
    Next(Box<Matrix>),
    Until(Box<Matrix>, Box<Matrix>),
    Release(Box<Matrix>, Box<Matrix>),
    Eventually(Box<Matrix>),
    Globally(Box<Matrix>),
}

impl Matrix {
    pub fn atom(name: &str) -> Matrix {
        Matrix::Atom(Var::new(name).expect("bad name"))
    }
    pub fn not(m: Matrix) -> Matrix {
        Matrix::Not(Box::new(m))
    }
    pub fn and(a: Matrix, b: Matrix) -> Matrix {
        Matrix::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Matrix, b: Matrix) -> Matrix {
        Matrix::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Matrix, b: Matrix) -> Matrix {
        Matrix::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Matrix, b: Matrix) -> Matrix {
        Matrix::Iff(Box::new(a), Box::new(b))
    }
    pub fn next(m: Matrix) -> Matrix {
        Matrix::Next(Box::new(m))
    }
    pub fn until(a: Matrix, b: Matrix) -> Matrix {
        Matrix::Until(Box::new(a), Box::new(b))
    }
    pub fn release(a: Matrix, b: Matrix) -> Matrix {
        Matrix::Release(Box::new(a), Box::new(b))
    }
    pub fn eventually(m: Matrix) -> Matrix {
        Matrix::Eventually(Box::new(m))
    }
    pub fn globally(m: Matrix) -> Matrix {
        Matrix::Globally(Box::new(m))
    }

    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Matrix::Atom(v) => {
                out.insert(v.clone());
            }
            Matrix::True | Matrix::False => {}
            Matrix::Not(a) | Matrix::Next(a) | Matrix::Eventually(a) | Matrix::Globally(a) => {
                a.collect_vars(out)
            }
            Matrix::And(a, b)
            | Matrix::Or(a, b)
            | Matrix::Implies(a, b)
            | Matrix::Iff(a, b)
            | Matrix::Until(a, b)
            | Matrix::Release(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Number of distinct subformulas.
    pub fn closure_size(&self) -> usize {
        let mut seen = BTreeSet::new();
        self.collect_subformulas(&mut seen);
        seen.len()
    }

    fn collect_subformulas<'a>(&'a self, seen: &mut BTreeSet<&'a Matrix>) {
        if !seen.insert(self) {
            return;
        }
        match self {
            Matrix::Atom(_) | Matrix::True | Matrix::False => {}
            Matrix::Not(a) | Matrix::Next(a) | Matrix::Eventually(a) | Matrix::Globally(a) => {
                a.collect_subformulas(seen)
            }
            Matrix::And(a, b)
            | Matrix::Or(a, b)
            | Matrix::Implies(a, b)
            | Matrix::Iff(a, b)
            | Matrix::Until(a, b)
            | Matrix::Release(a, b) => {
                a.collect_subformulas(seen);
                b.collect_subformulas(seen);
            }
        }
    }

    /// Negation normal form over `{atom, !atom, true, false, &, |, X, U, R}`.
    pub fn to_nnf(&self) -> Matrix {
        self.nnf(false)
    }

    fn nnf(&self, neg: bool) -> Matrix {
        use Matrix::*;
        match (self, neg) {
            (Atom(v), false) => Atom(v.clone()),
            (Atom(v), true) => Matrix::not(Atom(v.clone())),
            (True, false) | (False, true) => True,
            (True, true) | (False, false) => False,
            (Not(a), _) => a.nnf(!neg),
            (And(a, b), false) | (Or(a, b), true) => Matrix::and(a.nnf(neg), b.nnf(neg)),
            (Or(a, b), false) | (And(a, b), true) => Matrix::or(a.nnf(neg), b.nnf(neg)),
            (Implies(a, b), false) => Matrix::or(a.nnf(true), b.nnf(false)),
            (Implies(a, b), true) => Matrix::and(a.nnf(false), b.nnf(true)),
            (Iff(a, b), false) => Matrix::or(
                Matrix::and(a.nnf(false), b.nnf(false)),
                Matrix::and(a.nnf(true), b.nnf(true)),
            ),
            (Iff(a, b), true) => Matrix::or(
                Matrix::and(a.nnf(false), b.nnf(true)),
                Matrix::and(a.nnf(true), b.nnf(false)),
            ),
            (Next(a), _) => Matrix::next(a.nnf(neg)),
            (Until(a, b), false) | (Release(a, b), true) => Matrix::until(a.nnf(neg), b.nnf(neg)),
            (Release(a, b), false) | (Until(a, b), true) => Matrix::release(a.nnf(neg), b.nnf(neg)),
            (Eventually(a), false) | (Globally(a), true) => Matrix::until(True, a.nnf(neg)),
            (Globally(a), false) | (Eventually(a), true) => Matrix::release(False, a.nnf(neg)),
        }
    }

    pub fn is_nnf(&self) -> bool {
        use Matrix::*;
        match self {
            Atom(_) | True | False => true,
            Not(a) => matches!(**a, Atom(_)),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => a.is_nnf() && b.is_nnf(),
            Next(a) => a.is_nnf(),
            Implies(..) | Iff(..) | Eventually(_) | Globally(_) => false,
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Matrix::*;
        match self {
            Atom(v) => write!(f, "{v}"),
            True => f.write_str("true"),
            False => f.write_str("false"),
            Not(a) => write!(f, "!{a}"),
            Next(a) => write!(f, "X {a}"),
            Eventually(a) => write!(f, "F {a}"),
            Globally(a) => write!(f, "G {a}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Iff(a, b) => write!(f, "({a} <-> {b})"),
            Until(a, b) => write!(f, "({a} U {b})"),
            Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantBlock {
    pub kind: Quantifier,
    pub vars: VarSet,
}

impl QuantBlock {
    pub fn exists(vars: VarSet) -> Self {
        QuantBlock {
            kind: Quantifier::Exists,
            vars,
        }
    }
    pub fn forall(vars: VarSet) -> Self {
        QuantBlock {
            kind: Quantifier::Forall,
            vars,
        }
    }
    pub fn is_exists(&self) -> bool {
        self.kind == Quantifier::Exists
    }
    pub fn var_list(&self) -> Vec<Var> {
        self.vars.iter().cloned().collect()
    }
}

/// A prenex formula `℘ψ`: alternating quantifier blocks over an LTL matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantifiedFormula {
    prefix: Vec<QuantBlock>,
    matrix: Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FragmentTag {
    Pi0,
    Sigma0,
    Sigma1,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FragmentClass {
    pub tag: FragmentTag,
    /// Existential blocks with a nonempty universal block somewhere to their left.
    pub block_count: usize,
}

impl QuantifiedFormula {
    /// Builds a formula, merging adjacent blocks of the same kind and dropping
    /// empty ones. Fails when a variable is bound twice.
    pub fn new(prefix: Vec<QuantBlock>, matrix: Matrix) -> Result<Self> {
        let mut merged: Vec<QuantBlock> = Vec::new();
        let mut bound = VarSet::new();
        for block in prefix {
            for v in &block.vars {
                if !bound.insert(v.clone()) {
                    return Err(Error::Rebound(v.to_string()));
                }
            }
            if block.vars.is_empty() {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.kind == block.kind => last.vars.extend(block.vars),
                _ => merged.push(block),
            }
        }
        Ok(QuantifiedFormula {
            prefix: merged,
            matrix,
        })
    }

    pub fn prefix(&self) -> &[QuantBlock] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn bound_vars(&self) -> VarSet {
        self.prefix
            .iter()
            .flat_map(|b| b.vars.iter().cloned())
            .collect()
    }

    pub fn free_vars(&self) -> VarSet {
        let bound = self.bound_vars();
        self.matrix
            .vars()
            .into_iter()
            .filter(|v| !bound.contains(v))
            .collect()
    }

    /// Every variable mentioned anywhere (prefix or matrix).
    pub fn all_vars(&self) -> VarSet {
        let mut vs = self.bound_vars();
        vs.extend(self.matrix.vars());
        vs
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn existential_vars(&self) -> VarSet {
        self.vars_of(Quantifier::Exists)
    }

    pub fn universal_vars(&self) -> VarSet {
        self.vars_of(Quantifier::Forall)
    }

    fn vars_of(&self, kind: Quantifier) -> VarSet {
        self.prefix
            .iter()
            .filter(|b| b.kind == kind)
            .flat_map(|b| b.vars.iter().cloned())
            .collect()
    }

    /// Dual prefix over the negated matrix.
    pub fn negate(&self) -> QuantifiedFormula {
        QuantifiedFormula {
            prefix: self
                .prefix
                .iter()
                .map(|b| QuantBlock {
                    kind: b.kind.dual(),
                    vars: b.vars.clone(),
                })
                .collect(),
            matrix: Matrix::not(self.matrix.clone()),
        }
    }

    /// Prepends `∃vars`, merging into a leading existential block.
    pub fn with_leading_exists(&self, vars: VarSet) -> QuantifiedFormula {
        let mut prefix = vec![QuantBlock::exists(vars)];
        prefix.extend(self.prefix.iter().cloned());
        QuantifiedFormula::new(prefix, self.matrix.clone()).expect("free vars are unbound")
    }

    pub fn classify(&self) -> FragmentClass {
        let kinds: Vec<Quantifier> = self.prefix.iter().map(|b| b.kind).collect();
        let tag = match kinds.as_slice() {
            [] | [Quantifier::Exists] => FragmentTag::Sigma0,
            [Quantifier::Forall] => FragmentTag::Pi0,
            [Quantifier::Exists, Quantifier::Forall] => FragmentTag::Sigma1,
            _ => FragmentTag::General,
        };
        let mut seen_forall = false;
        let mut block_count = 0;
        for b in &self.prefix {
            match b.kind {
                Quantifier::Forall => seen_forall |= !b.vars.is_empty(),
                Quantifier::Exists if seen_forall => block_count += 1,
                Quantifier::Exists => {}
            }
        }
        FragmentClass { tag, block_count }
    }

    /// `Dep^F(block)`: `free` plus every universal variable left of `block`.
    pub fn dep(&self, block: usize, free: &VarSet) -> Result<VarSet> {
        dep(&self.prefix, block, free)
    }
}

/// `Dep^F` over an explicit prefix; `block` indexes into `prefix`.
pub fn dep(prefix: &[QuantBlock], block: usize, free: &VarSet) -> Result<VarSet> {
    let target = prefix
        .get(block)
        .ok_or_else(|| Error::Invalid(format!("no block {block}")))?;
    if !target.is_exists() {
        return Err(Error::NotExistential(
            target.vars.iter().map(|v| v.to_string()).collect(),
        ));
    }
    let mut out = free.clone();
    for b in &prefix[..block] {
        if b.kind == Quantifier::Forall {
            out.extend(b.vars.iter().cloned());
        }
    }
    Ok(out)
}

impl fmt::Display for QuantifiedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.prefix {
            let q = match b.kind {
                Quantifier::Exists => "E",
                Quantifier::Forall => "A",
            };
            let names: Vec<&str> = b.vars.iter().map(|v| v.as_str()).collect();
            write!(f, "{q}{{{}}} ", names.join(","))?;
        }
        write!(f, "{}", self.matrix)
    }
}
