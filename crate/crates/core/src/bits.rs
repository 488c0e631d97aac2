//! Small bit-level utilities: a growable bitset for state sets and helpers
//! for letters encoded as bitmasks over an ordered variable list.

use std::fmt;

use crate::formula::Var;

/// Dense set of small unsigned integers.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new() -> Self {
        BitSet { words: Vec::new() }
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = BitSet::new();
        s.insert(i);
        s
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &BitSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
        self.normalize();
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut out = BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        };
        out.normalize();
        out
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    // trailing zero words would break Eq/Hash between equal sets
    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = BitSet::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A letter over an ordered list of variables: bit `i` set iff `vars[i]` holds.
pub type Letter = u32;

pub fn letter_count(vars: &[Var]) -> usize {
    1usize << vars.len()
}

/// Re-encodes `letter` (over `from`) as a letter over `to`, dropping variables
/// that `to` does not contain.
pub fn remap(letter: Letter, from: &[Var], to: &[Var]) -> Letter {
    let mut out = 0;
    for (i, v) in from.iter().enumerate() {
        if letter & (1 << i) != 0 {
            if let Ok(j) = to.binary_search(v) {
                out |= 1 << j;
            }
        }
    }
    out
}

/// Precomputed `remap` table for every letter of `from`.
pub fn remap_table(from: &[Var], to: &[Var]) -> Vec<Letter> {
    (0..letter_count(from) as Letter)
        .map(|l| remap(l, from, to))
        .collect()
}

/// Mask (over `vars`) selecting the positions of `subset`.
pub fn mask_of(vars: &[Var], subset: &[Var]) -> Letter {
    subset
        .iter()
        .filter_map(|v| vars.binary_search(v).ok())
        .fold(0, |m, i| m | (1 << i))
}

pub fn letter_vars(letter: Letter, vars: &[Var]) -> Vec<Var> {
    vars.iter()
        .enumerate()
        .filter(|(i, _)| letter & (1 << i) != 0)
        .map(|(_, v)| v.clone())
        .collect()
}

pub fn letter_from_names<'a>(
    names: impl IntoIterator<Item = &'a str>,
    vars: &[Var],
) -> Option<Letter> {
    let mut l = 0;
    for n in names {
        let i = vars.iter().position(|v| v.as_str() == n)?;
        l |= 1 << i;
    }
    Some(l)
}

/// Renders a letter as `{x,y}`.
pub fn show_letter(letter: Letter, vars: &[Var]) -> String {
    let names: Vec<&str> = vars
        .iter()
        .enumerate()
        .filter(|(i, _)| letter & (1 << i) != 0)
        .map(|(_, v)| v.as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

/// Inverse of [`show_letter`].
pub fn parse_letter(text: &str, vars: &[Var]) -> Option<Letter> {
    let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
    let names = inner.split(',').map(str::trim).filter(|s| !s.is_empty());
    letter_from_names(names, vars)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<Var> {
        names.iter().map(|n| Var::new(n).unwrap()).collect()
    }

    #[test]
    fn bitset_ops() {
        let mut a: BitSet = [1, 70, 3].into_iter().collect();
        assert!(a.contains(70) && a.contains(1) && !a.contains(2));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 3, 70]);
        let b: BitSet = [70].into_iter().collect();
        a.difference_with(&b);
        assert_eq!(a, [1, 3].into_iter().collect());
        assert!(!a.intersects(&b));
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn remap_drops_missing_vars() {
        let from = vars(&["a", "b", "c"]);
        let to = vars(&["a", "c"]);
        assert_eq!(remap(0b111, &from, &to), 0b11);
        assert_eq!(remap(0b010, &from, &to), 0);
        assert_eq!(mask_of(&from, &to), 0b101);
    }

    #[test]
    fn letter_text_round_trip() {
        let v = vars(&["x", "y"]);
        for l in 0..4 {
            assert_eq!(parse_letter(&show_letter(l, &v), &v), Some(l));
        }
        assert_eq!(show_letter(0, &v), "{}");
        assert_eq!(parse_letter("{z}", &v), None);
    }
}
