//! Finite-memory Skolem machines, one per existential block.
//!
//! At instant k a machine in memory m outputs `output[m][now(k)]`, where
//! `now(k)` is the current letter restricted to its present-time inputs, and
//! then moves to `update[m][input(k)]`.

use std::collections::HashMap;

use serde_json::{json, Map, Value};

use crate::bits::{letter_count, parse_letter, remap, show_letter, Letter};
use crate::error::{Error, Result};
use crate::formula::{dep, QuantifiedFormula, Var, VarSet};
use crate::trace::LassoTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Behavioral,
    WeakBehavioral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    block: Vec<Var>,
    inputs: Vec<Var>,
    now: Vec<Var>,
    initial: u32,
    update: Vec<Vec<u32>>,
    output: Vec<Vec<Letter>>,
}

impl MealyMachine {
    pub fn new(
        block: &VarSet,
        inputs: &VarSet,
        now: &VarSet,
        initial: u32,
        update: Vec<Vec<u32>>,
        output: Vec<Vec<Letter>>,
    ) -> Result<MealyMachine> {
        let m = MealyMachine {
            block: block.iter().cloned().collect(),
            inputs: inputs.iter().cloned().collect(),
            now: now.iter().cloned().collect(),
            initial,
            update,
            output,
        };
        let n = m.update.len();
        let ok = n > 0
            && (initial as usize) < n
            && m.output.len() == n
            && m.update
                .iter()
                .all(|r| r.len() == letter_count(&m.inputs) && r.iter().all(|&t| (t as usize) < n))
            && m.output.iter().all(|r| {
                r.len() == letter_count(&m.now)
                    && r.iter().all(|&o| (o as usize) < letter_count(&m.block))
            });
        if !ok {
            return Err(Error::Invalid("malformed Mealy machine".into()));
        }
        if block.iter().any(|v| inputs.contains(v) || now.contains(v)) {
            return Err(Error::Invalid(
                "a machine cannot read its own outputs".into(),
            ));
        }
        Ok(m)
    }

    /// Outputs `label` forever.
    pub fn constant(block: &VarSet, label: Letter) -> Result<MealyMachine> {
        let e = VarSet::new();
        MealyMachine::new(block, &e, &e, 0, vec![vec![0]], vec![vec![label]])
    }

    /// Outputs the lasso `word` (over `block`), reading nothing.
    pub fn from_lasso(word: &LassoTrace) -> Result<MealyMachine> {
        let stem = word.stem().len();
        let span = word.span();
        let update = (0..span)
            .map(|i| {
                vec![if i + 1 < span {
                    i as u32 + 1
                } else {
                    stem as u32
                }]
            })
            .collect();
        let output = (0..span).map(|i| vec![word.letter(i)]).collect();
        let e = VarSet::new();
        MealyMachine::new(&word.universe_set(), &e, &e, 0, update, output)
    }

    pub fn block(&self) -> &[Var] {
        &self.block
    }

    pub fn block_set(&self) -> VarSet {
        self.block.iter().cloned().collect()
    }

    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    pub fn now(&self) -> &[Var] {
        &self.now
    }

    pub fn memory(&self) -> usize {
        self.update.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    /// Output over the block for the current letter `full` over `vars`.
    pub fn output_on(&self, m: u32, full: Letter, vars: &[Var]) -> Letter {
        self.output[m as usize][remap(full, vars, &self.now) as usize]
    }

    pub fn update_on(&self, m: u32, full: Letter, vars: &[Var]) -> u32 {
        self.update[m as usize][remap(full, vars, &self.inputs) as usize]
    }

    pub fn output(&self, m: u32, now: Letter) -> Letter {
        self.output[m as usize][now as usize]
    }

    pub fn update(&self, m: u32, input: Letter) -> u32 {
        self.update[m as usize][input as usize]
    }

    pub fn to_json(&self) -> Value {
        let names = |vs: &[Var]| vs.iter().map(|v| json!(v.as_str())).collect::<Vec<_>>();
        let table = |rows: &Vec<Vec<u32>>, vars: &[Var], show: &dyn Fn(u32) -> Value| {
            let mut out = Map::new();
            for (m, row) in rows.iter().enumerate() {
                let mut r = Map::new();
                for (l, &v) in row.iter().enumerate() {
                    r.insert(show_letter(l as Letter, vars), show(v));
                }
                out.insert(m.to_string(), Value::Object(r));
            }
            Value::Object(out)
        };
        let block = self
            .block
            .iter()
            .map(Var::as_str)
            .collect::<Vec<_>>()
            .join(",");
        json!({
            "block": block,
            "memory": (0..self.memory()).collect::<Vec<_>>(),
            "initial": self.initial,
            "update": table(&self.update, &self.inputs, &|t| json!(t)),
            "output": table(&self.output, &self.now, &|o| json!(show_letter(o, &self.block))),
            "reads": names(&self.inputs),
            "readsNow": names(&self.now),
        })
    }

    pub fn from_json(v: &Value) -> Result<MealyMachine> {
        let bad = |what: &str| Error::Invalid(format!("Mealy JSON: {what}"));
        let names = |key: &str| -> Result<VarSet> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(key))?
                .iter()
                .map(|n| Var::new(n.as_str().ok_or_else(|| bad(key))?))
                .collect()
        };
        let block: VarSet = v
            .get("block")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("block"))?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Var::new)
            .collect::<Result<_>>()?;
        let inputs = names("reads")?;
        let now = names("readsNow")?;
        let memory = v
            .get("memory")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("memory"))?
            .len();
        let initial = v
            .get("initial")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("initial"))? as u32;
        let in_list: Vec<Var> = inputs.iter().cloned().collect();
        let now_list: Vec<Var> = now.iter().cloned().collect();
        let block_list: Vec<Var> = block.iter().cloned().collect();
        let read_table = |key: &str, vars: &[Var], cell: &dyn Fn(&Value) -> Option<u32>| {
            let t = v
                .get(key)
                .and_then(Value::as_object)
                .ok_or_else(|| bad(key))?;
            (0..memory)
                .map(|m| {
                    let row = t
                        .get(&m.to_string())
                        .and_then(Value::as_object)
                        .ok_or_else(|| bad(key))?;
                    let mut out = vec![None; letter_count(vars)];
                    for (l, c) in row {
                        let l = parse_letter(l, vars).ok_or_else(|| bad(key))?;
                        out[l as usize] = Some(cell(c).ok_or_else(|| bad(key))?);
                    }
                    out.into_iter()
                        .map(|c| c.ok_or_else(|| bad(key)))
                        .collect::<Result<Vec<u32>>>()
                })
                .collect::<Result<Vec<_>>>()
        };
        let update = read_table("update", &in_list, &|c| c.as_u64().map(|x| x as u32))?;
        let output = read_table("output", &now_list, &|c| {
            c.as_str().and_then(|s| parse_letter(s, &block_list))
        })?;
        MealyMachine::new(&block, &inputs, &now, initial, update, output)
    }
}

/// One machine per existential block, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkolemFamily {
    pub machines: Vec<MealyMachine>,
}

impl SkolemFamily {
    pub fn new(machines: Vec<MealyMachine>) -> SkolemFamily {
        SkolemFamily { machines }
    }

    pub fn outputs(&self) -> VarSet {
        self.machines
            .iter()
            .flat_map(|m| m.block.iter().cloned())
            .collect()
    }

    pub fn reads(&self) -> VarSet {
        self.machines
            .iter()
            .flat_map(|m| m.inputs.iter().chain(&m.now).cloned())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.machines.iter().map(MealyMachine::to_json).collect())
    }

    /// One cluster per machine; nodes list the outputs per present letter,
    /// edges carry the input letters.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph family {\n");
        for (i, m) in self.machines.iter().enumerate() {
            s.push_str(&format!(
                "  subgraph cluster_{i} {{\n    label=\"{}\";\n",
                m.block
                    .iter()
                    .map(Var::as_str)
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            s.push_str(&format!(
                "    init{i} [shape=point];\n    init{i} -> s{i}_{};\n",
                m.initial
            ));
            for q in 0..m.memory() {
                let outs: Vec<String> = m.output[q]
                    .iter()
                    .enumerate()
                    .map(|(l, &o)| {
                        format!(
                            "{} / {}",
                            show_letter(l as Letter, &m.now),
                            show_letter(o, &m.block)
                        )
                    })
                    .collect();
                s.push_str(&format!(
                    "    s{i}_{q} [shape=box, label=\"{q}\\n{}\"];\n",
                    outs.join("\\n")
                ));
                for (l, &t) in m.update[q].iter().enumerate() {
                    s.push_str(&format!(
                        "    s{i}_{q} -> s{i}_{t} [label=\"{}\"];\n",
                        show_letter(l as Letter, &m.inputs)
                    ));
                }
            }
            s.push_str("  }\n");
        }
        s.push_str("}\n");
        s
    }

    pub fn from_json(v: &Value) -> Result<SkolemFamily> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Invalid("a family is a JSON array of machines".into()))?;
        Ok(SkolemFamily {
            machines: items
                .iter()
                .map(MealyMachine::from_json)
                .collect::<Result<_>>()?,
        })
    }

    /// Extends `pi` with the machines' outputs. The result is again a lasso:
    /// the joint run repeats once a loop position meets the same memories.
    pub fn apply(&self, pi: &LassoTrace) -> Result<LassoTrace> {
        let universe = pi.universe_set();
        let outputs = self.outputs();
        if !self.reads().is_subset(&universe) || !outputs.is_disjoint(&universe) {
            return Err(Error::AlphabetMismatch(format!(
                "interpretation over {universe:?} cannot feed machines reading {:?} and writing {outputs:?}",
                self.reads()
            )));
        }
        let joint_set: VarSet = universe.union(&outputs).cloned().collect();
        let joint: Vec<Var> = joint_set.iter().cloned().collect();
        let mut mem: Vec<u32> = self.machines.iter().map(|m| m.initial).collect();
        let mut seen: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
        let mut letters = Vec::new();
        let stem = pi.stem().len();
        let mut k = 0usize;
        loop {
            let pos = pi.normalize(k);
            if k >= stem {
                if let Some(&start) = seen.get(&(pos, mem.clone())) {
                    let cycle = letters.split_off(start);
                    return LassoTrace::new(joint_set, letters, cycle);
                }
                seen.insert((pos, mem.clone()), letters.len());
            }
            let input = pi.letter(pos);
            let mut letter = remap(input, pi.universe(), &joint);
            for (i, m) in self.machines.iter().enumerate() {
                let o = m.output_on(mem[i], input, pi.universe());
                letter |= remap(o, &m.block, &joint);
            }
            for (i, m) in self.machines.iter().enumerate() {
                mem[i] = m.update_on(mem[i], input, pi.universe());
            }
            letters.push(letter);
            k += 1;
        }
    }
}

/// Whether every machine reads only what `mode` licenses for its block:
/// behavioral machines read the past and present of the block's
/// dependencies, weak-behavioral ones the past of every free or universal
/// variable and the present of the dependencies.
pub fn check_conformance(family: &SkolemFamily, f: &QuantifiedFormula, mode: Mode) -> bool {
    let free = f.free_vars();
    let exists: Vec<usize> = (0..f.prefix().len())
        .filter(|&i| f.prefix()[i].is_exists())
        .collect();
    if exists.len() != family.machines.len() {
        return false;
    }
    let observable: VarSet = free.union(&f.universal_vars()).cloned().collect();
    exists.iter().zip(&family.machines).all(|(&b, m)| {
        let Ok(d) = dep(f.prefix(), b, &free) else {
            return false;
        };
        let inputs: VarSet = m.inputs.iter().cloned().collect();
        let now: VarSet = m.now.iter().cloned().collect();
        let past_ok = match mode {
            Mode::Behavioral => inputs.is_subset(&d),
            Mode::WeakBehavioral => inputs.is_subset(&observable),
        };
        m.block_set() == f.prefix()[b].vars && past_ok && now.is_subset(&d)
    })
}
