use rand::Rng;
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::formula::{QuantifiedFormula, Quantifier};
use crate::random;
use crate::solver::{solve, validate_witness, Semantics, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Determinacy,
    Lattice,
    FragmentCollapse,
    SingleBlock,
}

impl Property {
    const ALL: [Property; 4] = [
        Property::Determinacy,
        Property::Lattice,
        Property::FragmentCollapse,
        Property::SingleBlock,
    ];

    fn name(self) -> &'static str {
        match self {
            Property::Determinacy => "determinacy",
            Property::Lattice => "lattice",
            Property::FragmentCollapse => "fragment-collapse",
            Property::SingleBlock => "single-block",
        }
    }

    pub fn parse_list(text: &str) -> Result<Vec<Property>, String> {
        if text.trim() == "all" {
            return Ok(Property::ALL.to_vec());
        }
        text.split(',')
            .map(str::trim)
            .map(|s| {
                Property::ALL
                    .into_iter()
                    .find(|p| p.name() == s)
                    .ok_or_else(|| format!("unknown property `{s}`"))
            })
            .collect()
    }

    /// The sample: each property draws from its own stream so that running
    /// a subset does not change the formulas.
    fn sample(self, n: usize, seed: u64) -> Vec<QuantifiedFormula> {
        let index = Property::ALL
            .iter()
            .position(|&p| p == self)
            .expect("listed") as u64;
        let mut rng = random::rng(seed.wrapping_mul(31).wrapping_add(index));
        let shapes: [&[Quantifier]; 3] = [
            &[Quantifier::Exists],
            &[Quantifier::Forall],
            &[Quantifier::Exists, Quantifier::Forall],
        ];
        (0..n)
            .map(|i| match self {
                Property::Determinacy | Property::Lattice => {
                    let blocks = rng.gen_range(1..=2);
                    random::closed_formula(&mut rng, blocks, 2, 8)
                }
                Property::FragmentCollapse => {
                    let per = rng.gen_range(1..=2);
                    random::shaped_formula(&mut rng, shapes[i % 3], per, 8)
                }
                Property::SingleBlock => random::shaped_formula(
                    &mut rng,
                    &[Quantifier::Forall, Quantifier::Exists],
                    1,
                    8,
                ),
            })
            .collect()
    }
}

pub struct PropertyResult {
    property: Property,
    passed: usize,
    total: usize,
    failures: Vec<String>,
}

pub struct Report {
    seed: u64,
    n: usize,
    results: Vec<PropertyResult>,
    witnesses_checked: usize,
    witness_failures: Vec<String>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.witness_failures.is_empty() && self.results.iter().all(|r| r.passed == r.total)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "n": self.n,
            "properties": self.results.iter().map(|r| json!({
                "property": r.property.name(),
                "passed": r.passed,
                "total": r.total,
                "failures": r.failures,
            })).collect::<Vec<_>>(),
            "witnesses": {
                "checked": self.witnesses_checked,
                "failures": self.witness_failures,
            },
            "pass": self.all_pass(),
        })
    }
}

struct Runner<'a> {
    budget: &'a Budget,
    checked: usize,
    witness_failures: Vec<String>,
}

impl Runner<'_> {
    /// Solves and re-validates any witness.
    fn solve(&mut self, f: &QuantifiedFormula, s: Semantics) -> Result<Verdict, String> {
        let v = solve(f, s, self.budget).map_err(|e| format!("{f} under {s}: {e}"))?;
        if let Some(w) = &v.witness {
            self.checked += 1;
            if !validate_witness(f, s, w, self.budget).unwrap_or(false) {
                self.witness_failures.push(format!("{f} under {s}"));
            }
        }
        Ok(v)
    }

    fn status(&mut self, f: &QuantifiedFormula, s: Semantics) -> Result<Status, String> {
        self.solve(f, s).map(|v| v.status)
    }

    fn holds(&mut self, p: Property, f: &QuantifiedFormula) -> Result<(), String> {
        use Semantics::{Behavioral, Classic, WeakBehavioral};
        let sat = Status::Sat;
        match p {
            Property::Determinacy => {
                let a = self.status(f, Classic)?;
                let b = self.status(&f.negate(), Classic)?;
                if (a == sat) == (b == sat) {
                    return Err(format!("{f}: classic {a}, negation {b}"));
                }
            }
            Property::Lattice => {
                let b = self.status(f, Behavioral)?;
                let c = self.status(f, Classic)?;
                let wb = self.status(f, WeakBehavioral)?;
                let bn = self.status(&f.negate(), Behavioral)?;
                if b == sat && (c != sat || wb != sat) {
                    return Err(format!("{f}: behavioral {b}, classic {c}, weak {wb}"));
                }
                if b == sat && bn == sat {
                    return Err(format!("{f}: behavioral sat with its negation"));
                }
            }
            Property::FragmentCollapse => {
                let b = self.status(f, Behavioral)?;
                let c = self.status(f, Classic)?;
                if b != c {
                    return Err(format!("{f}: behavioral {b}, classic {c}"));
                }
            }
            Property::SingleBlock => {
                let b = self.status(f, Behavioral)?;
                let wb = self.status(f, WeakBehavioral)?;
                if b != wb {
                    return Err(format!("{f}: behavioral {b}, weak {wb}"));
                }
            }
        }
        Ok(())
    }
}

pub fn run(props: &[Property], n: usize, seed: u64, budget: &Budget) -> Report {
    let mut runner = Runner {
        budget,
        checked: 0,
        witness_failures: Vec::new(),
    };
    let results = props
        .iter()
        .map(|&p| {
            let mut failures = Vec::new();
            let sample = p.sample(n, seed);
            for f in &sample {
                if let Err(e) = runner.holds(p, f) {
                    failures.push(e);
                }
            }
            PropertyResult {
                property: p,
                passed: sample.len() - failures.len(),
                total: sample.len(),
                failures,
            }
        })
        .collect();
    Report {
        seed,
        n,
        results,
        witnesses_checked: runner.checked,
        witness_failures: runner.witness_failures,
    }
}
