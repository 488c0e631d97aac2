//! Finite-memory labeled trees. Directions and labels are letters over
//! their own variable lists; the node reached by a direction sequence is
//! labeled by the memory state that sequence leads to.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use serde_json::{json, Value};

use crate::bits::{letter_count, remap, show_letter, Letter};
use crate::error::{Error, Result};
use crate::formula::{Var, VarSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularTree {
    dir_vars: Vec<Var>,
    label_vars: Vec<Var>,
    initial: u32,
    update: Vec<Vec<u32>>,
    labels: Vec<Letter>,
}

impl RegularTree {
    pub fn new(
        dir_vars: &VarSet,
        label_vars: &VarSet,
        initial: u32,
        update: Vec<Vec<u32>>,
        labels: Vec<Letter>,
    ) -> Result<RegularTree> {
        let dir_vars: Vec<Var> = dir_vars.iter().cloned().collect();
        let label_vars: Vec<Var> = label_vars.iter().cloned().collect();
        let n = labels.len();
        let dirs = letter_count(&dir_vars);
        let labels_ok = labels
            .iter()
            .all(|&l| (l as usize) < letter_count(&label_vars));
        let update_ok = update.len() == n
            && update
                .iter()
                .all(|row| row.len() == dirs && row.iter().all(|&m| (m as usize) < n));
        if (initial as usize) >= n || !labels_ok || !update_ok {
            return Err(Error::Invalid("malformed regular tree".into()));
        }
        Ok(RegularTree {
            dir_vars,
            label_vars,
            initial,
            update,
            labels,
        })
    }

    /// The tree labeling every node with `label`.
    pub fn constant(dir_vars: &VarSet, label_vars: &VarSet, label: Letter) -> Result<RegularTree> {
        let dirs = 1usize << dir_vars.len();
        RegularTree::new(dir_vars, label_vars, 0, vec![vec![0; dirs]], vec![label])
    }

    pub fn dir_vars(&self) -> &[Var] {
        &self.dir_vars
    }

    pub fn label_vars(&self) -> &[Var] {
        &self.label_vars
    }

    pub fn memory(&self) -> usize {
        self.labels.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn directions(&self) -> usize {
        letter_count(&self.dir_vars)
    }

    pub fn step(&self, m: u32, dir: Letter) -> u32 {
        self.update[m as usize][dir as usize]
    }

    pub fn label_of(&self, m: u32) -> Letter {
        self.labels[m as usize]
    }

    pub fn node(&self, path: &[Letter]) -> u32 {
        path.iter().fold(self.initial, |m, &d| self.step(m, d))
    }

    pub fn label_at(&self, path: &[Letter]) -> Letter {
        self.label_of(self.node(path))
    }

    /// Same labels, read over a wider direction alphabet that the labels
    /// ignore beyond the original directions.
    pub fn widen(&self, dir_vars: &VarSet) -> Result<RegularTree> {
        let wide: Vec<Var> = dir_vars.iter().cloned().collect();
        if !self.dir_vars.iter().all(|v| dir_vars.contains(v)) {
            return Err(Error::AlphabetMismatch(
                "widening must keep every direction variable".into(),
            ));
        }
        let update = self
            .update
            .iter()
            .map(|row| {
                (0..letter_count(&wide) as Letter)
                    .map(|d| row[remap(d, &wide, &self.dir_vars) as usize])
                    .collect()
            })
            .collect();
        Ok(RegularTree {
            dir_vars: wide,
            label_vars: self.label_vars.clone(),
            initial: self.initial,
            update,
            labels: self.labels.clone(),
        })
    }

    /// Relabels over `label_vars` (a superset of the current ones).
    fn relabel(&self, label_vars: &[Var]) -> Vec<Letter> {
        self.labels
            .iter()
            .map(|&l| remap(l, &self.label_vars, label_vars))
            .collect()
    }

    /// Keeps the reachable memory, renumbered in breadth-first order.
    pub fn trim(&self) -> RegularTree {
        let mut ids = HashMap::new();
        let mut order = vec![self.initial];
        ids.insert(self.initial, 0u32);
        let mut i = 0;
        while i < order.len() {
            let m = order[i];
            for &t in &self.update[m as usize] {
                if let Entry::Vacant(e) = ids.entry(t) {
                    e.insert(order.len() as u32);
                    order.push(t);
                }
            }
            i += 1;
        }
        RegularTree {
            dir_vars: self.dir_vars.clone(),
            label_vars: self.label_vars.clone(),
            initial: 0,
            update: order
                .iter()
                .map(|&m| self.update[m as usize].iter().map(|t| ids[t]).collect())
                .collect(),
            labels: order.iter().map(|&m| self.labels[m as usize]).collect(),
        }
    }

    /// Whether both trees label every node alike (same alphabets required).
    pub fn equivalent(&self, other: &RegularTree) -> bool {
        if self.dir_vars != other.dir_vars || self.label_vars != other.label_vars {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::from([(self.initial, other.initial)]);
        seen.insert((self.initial, other.initial));
        while let Some((a, b)) = queue.pop_front() {
            if self.label_of(a) != other.label_of(b) {
                return false;
            }
            for d in 0..self.directions() as Letter {
                let p = (self.step(a, d), other.step(b, d));
                if seen.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        true
    }

    /// Removes the `hidden` variables from a direction.
    pub fn hide(dir: Letter, dir_vars: &[Var], hidden: &VarSet) -> Letter {
        let kept: Vec<Var> = dir_vars
            .iter()
            .filter(|v| !hidden.contains(*v))
            .cloned()
            .collect();
        remap(dir, dir_vars, &kept)
    }

    pub fn to_json(&self) -> Value {
        let names = |vs: &[Var]| {
            vs.iter()
                .map(|v| v.as_str().to_string())
                .collect::<Vec<_>>()
        };
        let update: serde_json::Map<String, Value> = self
            .update
            .iter()
            .enumerate()
            .map(|(m, row)| {
                let r: serde_json::Map<String, Value> = row
                    .iter()
                    .enumerate()
                    .map(|(d, t)| (show_letter(d as Letter, &self.dir_vars), json!(t)))
                    .collect();
                (m.to_string(), Value::Object(r))
            })
            .collect();
        let labels: serde_json::Map<String, Value> = self
            .labels
            .iter()
            .enumerate()
            .map(|(m, &l)| (m.to_string(), json!(show_letter(l, &self.label_vars))))
            .collect();
        json!({
            "directions": names(&self.dir_vars),
            "labels": names(&self.label_vars),
            "memory": (0..self.memory()).collect::<Vec<_>>(),
            "initial": self.initial,
            "update": update,
            "labelOf": labels,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph tree {\n  init [shape=point];\n");
        s.push_str(&format!("  init -> m{};\n", self.initial));
        for m in 0..self.memory() {
            s.push_str(&format!(
                "  m{m} [label=\"{m}: {}\"];\n",
                show_letter(self.labels[m], &self.label_vars)
            ));
            for (d, t) in self.update[m].iter().enumerate() {
                s.push_str(&format!(
                    "  m{m} -> m{t} [label=\"{}\"];\n",
                    show_letter(d as Letter, &self.dir_vars)
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Composition of trees with disjoint labels: each tree is widened to the
/// union of the direction alphabets, which must be one of them, and the
/// labels are joined on the product memory.
pub fn tree_compose(trees: &[&RegularTree]) -> Result<RegularTree> {
    let Some(widest) = trees.iter().max_by_key(|t| t.dir_vars.len()) else {
        return Err(Error::Invalid("nothing to compose".into()));
    };
    let dirs: VarSet = widest.dir_vars.iter().cloned().collect();
    let mut labels = VarSet::new();
    for t in trees {
        for v in &t.label_vars {
            if !labels.insert(v.clone()) {
                return Err(Error::OverlappingUniverse(vec![v.as_str().to_string()]));
            }
        }
    }
    let label_list: Vec<Var> = labels.iter().cloned().collect();
    let parts: Vec<RegularTree> = trees
        .iter()
        .map(|t| t.widen(&dirs))
        .collect::<Result<_>>()?;
    let d = letter_count(&widest.dir_vars);
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let start: Vec<u32> = parts.iter().map(|t| t.initial).collect();
    ids.insert(start.clone(), 0);
    let mut order = vec![start];
    let mut update = Vec::new();
    let mut out_labels = Vec::new();
    let relabeled: Vec<Vec<Letter>> = parts.iter().map(|t| t.relabel(&label_list)).collect();
    let mut i = 0;
    while i < order.len() {
        let ms = order[i].clone();
        out_labels.push(
            ms.iter()
                .enumerate()
                .fold(0, |acc, (k, &m)| acc | relabeled[k][m as usize]),
        );
        let mut row = Vec::with_capacity(d);
        for dir in 0..d as Letter {
            let next: Vec<u32> = ms
                .iter()
                .enumerate()
                .map(|(k, &m)| parts[k].step(m, dir))
                .collect();
            let n = ids.len() as u32;
            let id = *ids.entry(next.clone()).or_insert_with(|| {
                order.push(next);
                n
            });
            row.push(id);
        }
        update.push(row);
        i += 1;
    }
    RegularTree::new(&dirs, &labels, 0, update, out_labels)
}

/// Every tree with at most `bound` memory states over the given alphabets,
/// initial memory 0, in a fixed order.
pub fn all_trees(dir_vars: &VarSet, label_vars: &VarSet, bound: usize) -> Vec<RegularTree> {
    let dirs = 1usize << dir_vars.len();
    let labels = 1u32 << label_vars.len();
    let mut out = Vec::new();
    for n in 1..=bound {
        let cells = n * dirs;
        let updates = n.pow(cells as u32);
        let labelings = (labels as usize).pow(n as u32);
        for u in 0..updates {
            let mut code = u;
            let update: Vec<Vec<u32>> = (0..n)
                .map(|_| {
                    (0..dirs)
                        .map(|_| {
                            let t = (code % n) as u32;
                            code /= n;
                            t
                        })
                        .collect()
                })
                .collect();
            for l in 0..labelings {
                let mut code = l;
                let labs = (0..n)
                    .map(|_| {
                        let x = (code % labels as usize) as Letter;
                        code /= labels as usize;
                        x
                    })
                    .collect();
                out.push(
                    RegularTree::new(dir_vars, label_vars, 0, update.clone(), labs)
                        .expect("well formed"),
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::var_set;

    pub(crate) fn copy_tree() -> RegularTree {
        // memory 0 = last direction {} (label {}), 1 = last direction {x}
        RegularTree::new(
            &var_set(&["x"]),
            &var_set(&["y"]),
            0,
            vec![vec![0, 1], vec![0, 1]],
            vec![0, 1],
        )
        .unwrap()
    }

    #[test]
    fn copy_tree_labels_follow_last_direction() {
        let t = copy_tree();
        assert_eq!(t.label_at(&[1, 1, 0]), 0);
        assert_eq!(t.label_at(&[0, 1]), 1);
    }

    #[test]
    fn composition_ignores_unseen_directions() {
        // y1 copies x1 over 2^{x1}; y2 copies x2 over 2^{x1 x2}
        let t1 = RegularTree::new(
            &var_set(&["x1"]),
            &var_set(&["y1"]),
            0,
            vec![vec![0, 1], vec![0, 1]],
            vec![0, 1],
        )
        .unwrap();
        let t2 = RegularTree::new(
            &var_set(&["x1", "x2"]),
            &var_set(&["y2"]),
            0,
            vec![vec![0, 0, 1, 1], vec![0, 0, 1, 1]],
            vec![0, 1],
        )
        .unwrap();
        let t = tree_compose(&[&t1, &t2]).unwrap();
        assert_eq!(t.label_vars().len(), 2);
        // directions over (x1, x2): bit 0 = x1, bit 1 = x2; labels bit 0 = y1
        for d in 0..4u32 {
            assert_eq!(t.label_at(&[d]), d);
        }
        assert!(tree_compose(&[&t1, &t1]).is_err());
    }

    #[test]
    fn hide_drops_components() {
        let vars: Vec<Var> = var_set(&["x1", "x2"]).into_iter().collect();
        assert_eq!(RegularTree::hide(0b11, &vars, &var_set(&["x2"])), 1);
        assert_eq!(RegularTree::hide(0b10, &vars, &var_set(&["x2"])), 0);
    }

    #[test]
    fn trim_and_equivalence() {
        let t = copy_tree();
        let bigger = RegularTree::new(
            &var_set(&["x"]),
            &var_set(&["y"]),
            0,
            vec![vec![2, 1], vec![0, 1], vec![2, 1]],
            vec![0, 1, 0],
        )
        .unwrap();
        assert!(t.equivalent(&bigger));
        assert_eq!(bigger.trim().memory(), 3);
        let c = RegularTree::constant(&var_set(&["x"]), &var_set(&["y"]), 1).unwrap();
        assert!(!t.equivalent(&c));
    }

    #[test]
    fn enumeration_counts() {
        let ts = all_trees(&var_set(&["x"]), &var_set(&["y"]), 2);
        assert_eq!(ts.len(), 2 + 16 * 4);
    }
}
