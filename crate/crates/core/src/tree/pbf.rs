use std::collections::BTreeSet;
use std::fmt;

use crate::bits::Letter;

/// Positive boolean formula over (state, direction) atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pbf {
    True,
    False,
    Atom(u32, Letter),
    And(Vec<Pbf>),
    Or(Vec<Pbf>),
}

pub type Model = Vec<(u32, Letter)>;

impl Pbf {
    pub fn atom(state: u32, dir: Letter) -> Pbf {
        Pbf::Atom(state, dir)
    }

    pub fn and(parts: impl IntoIterator<Item = Pbf>) -> Pbf {
        let mut out = BTreeSet::new();
        for p in parts {
            match p {
                Pbf::True => {}
                Pbf::False => return Pbf::False,
                Pbf::And(xs) => out.extend(xs),
                p => {
                    out.insert(p);
                }
            }
        }
        match out.len() {
            0 => Pbf::True,
            1 => out.into_iter().next().expect("one part"),
            _ => Pbf::And(out.into_iter().collect()),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Pbf>) -> Pbf {
        let mut out = BTreeSet::new();
        for p in parts {
            match p {
                Pbf::False => {}
                Pbf::True => return Pbf::True,
                Pbf::Or(xs) => out.extend(xs),
                p => {
                    out.insert(p);
                }
            }
        }
        match out.len() {
            0 => Pbf::False,
            1 => out.into_iter().next().expect("one part"),
            _ => Pbf::Or(out.into_iter().collect()),
        }
    }

    pub fn eval(&self, holds: &impl Fn(u32, Letter) -> bool) -> bool {
        match self {
            Pbf::True => true,
            Pbf::False => false,
            Pbf::Atom(q, d) => holds(*q, *d),
            Pbf::And(xs) => xs.iter().all(|x| x.eval(holds)),
            Pbf::Or(xs) => xs.iter().any(|x| x.eval(holds)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<(u32, Letter)> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<(u32, Letter)>) {
        match self {
            Pbf::Atom(q, d) => {
                out.insert((*q, *d));
            }
            Pbf::And(xs) | Pbf::Or(xs) => xs.iter().for_each(|x| x.collect(out)),
            _ => {}
        }
    }

    /// The minimal satisfying atom sets, sorted; `limit` bounds intermediate
    /// growth.
    pub fn minimal_models(&self, limit: usize) -> Option<Vec<Model>> {
        let models: Vec<BTreeSet<(u32, Letter)>> = match self {
            Pbf::True => vec![BTreeSet::new()],
            Pbf::False => Vec::new(),
            Pbf::Atom(q, d) => vec![BTreeSet::from([(*q, *d)])],
            Pbf::Or(xs) => {
                let mut all = Vec::new();
                for x in xs {
                    all.extend(
                        x.minimal_models(limit)?
                            .into_iter()
                            .map(BTreeSet::from_iter),
                    );
                }
                all
            }
            Pbf::And(xs) => {
                let mut acc = vec![BTreeSet::new()];
                for x in xs {
                    let ms = x.minimal_models(limit)?;
                    if acc.len() * ms.len() > limit {
                        return None;
                    }
                    let mut next = Vec::new();
                    for a in &acc {
                        for m in &ms {
                            let mut u = a.clone();
                            u.extend(m.iter().copied());
                            next.push(u);
                        }
                    }
                    acc = minimize(next);
                }
                acc
            }
        };
        Some(
            minimize(models)
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect(),
        )
    }

    pub fn map_atoms(&self, f: &impl Fn(u32, Letter) -> Pbf) -> Pbf {
        match self {
            Pbf::True => Pbf::True,
            Pbf::False => Pbf::False,
            Pbf::Atom(q, d) => f(*q, *d),
            Pbf::And(xs) => Pbf::and(xs.iter().map(|x| x.map_atoms(f))),
            Pbf::Or(xs) => Pbf::or(xs.iter().map(|x| x.map_atoms(f))),
        }
    }
}

fn minimize(mut sets: Vec<BTreeSet<(u32, Letter)>>) -> Vec<BTreeSet<(u32, Letter)>> {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut out: Vec<BTreeSet<(u32, Letter)>> = Vec::new();
    for s in sets {
        if !out.iter().any(|o| o.is_subset(&s)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

impl fmt::Display for Pbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pbf::True => write!(f, "true"),
            Pbf::False => write!(f, "false"),
            Pbf::Atom(q, d) => write!(f, "({q},{d})"),
            Pbf::And(xs) | Pbf::Or(xs) => {
                let op = if matches!(self, Pbf::And(_)) {
                    " & "
                } else {
                    " | "
                };
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}
