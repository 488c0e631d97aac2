use std::collections::{BTreeSet, HashMap};

use super::mealy::MealyMachine;
use crate::bits::{letter_count, remap, Letter};
use crate::error::{Error, Result};
use crate::formula::{dep, QuantifiedFormula, Var, VarSet};
use crate::tree::{tree_compose, RegularTree};

/// Splits a joint strategy tree (labels: all existential variables,
/// directions: all universal ones) into one tree per existential block over
/// the block's dependencies. Fails when some block's labels differ on two
/// nodes its dependencies cannot tell apart.
pub fn decompose(joint: &RegularTree, f: &QuantifiedFormula) -> Result<Vec<RegularTree>> {
    let free = f.free_vars();
    let mut parts = Vec::new();
    for (b, block) in f.prefix().iter().enumerate() {
        if !block.is_exists() {
            continue;
        }
        let d = dep(f.prefix(), b, &free)?;
        parts.push(project(joint, &block.vars, &d)?);
    }
    let refs: Vec<&RegularTree> = parts.iter().collect();
    if !refs.is_empty() {
        let all_dirs: VarSet = joint.dir_vars().iter().cloned().collect();
        let again = tree_compose(&refs)?.widen(&all_dirs)?;
        if !again.equivalent(joint) {
            return Err(Error::NotBehavioral(
                "components do not recompose into the joint tree".into(),
            ));
        }
    }
    Ok(parts)
}

fn project(joint: &RegularTree, labels: &VarSet, dirs: &VarSet) -> Result<RegularTree> {
    let label_list: Vec<Var> = labels.iter().cloned().collect();
    let dir_list: Vec<Var> = dirs.iter().cloned().collect();
    if !dirs.iter().all(|v| joint.dir_vars().contains(v)) {
        return Err(Error::AlphabetMismatch(
            "dependencies must be directions of the joint tree".into(),
        ));
    }
    let mut fibers: Vec<Vec<Letter>> = vec![Vec::new(); letter_count(&dir_list)];
    for d in 0..joint.directions() as Letter {
        fibers[remap(d, joint.dir_vars(), &dir_list) as usize].push(d);
    }
    let label = |m: u32| remap(joint.label_of(m), joint.label_vars(), &label_list);
    let start: BTreeSet<u32> = BTreeSet::from([joint.initial()]);
    let mut ids: HashMap<BTreeSet<u32>, u32> = HashMap::from([(start.clone(), 0)]);
    let mut order = vec![start];
    let mut update = Vec::new();
    let mut out_labels = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let set = order[i].clone();
        let mut ls = set.iter().map(|&m| label(m));
        let first = ls.next().expect("nonempty set");
        if ls.any(|l| l != first) {
            return Err(Error::NotBehavioral(format!(
                "labels of {label_list:?} depend on directions outside {dir_list:?}"
            )));
        }
        out_labels.push(first);
        let mut row = Vec::with_capacity(fibers.len());
        for fiber in &fibers {
            let next: BTreeSet<u32> = set
                .iter()
                .flat_map(|&m| fiber.iter().map(move |&d| joint.step(m, d)))
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
    RegularTree::new(dirs, labels, 0, update, out_labels)
}

/// The behavioral machine reading a strategy tree: its memory is the tree
/// memory, and the outputs at instant k are the label of the node reached
/// by the directions of instants 0..=k.
pub fn tree_to_mealy(t: &RegularTree) -> Result<MealyMachine> {
    let dirs: VarSet = t.dir_vars().iter().cloned().collect();
    let labels: VarSet = t.label_vars().iter().cloned().collect();
    let n = t.directions() as Letter;
    let update = (0..t.memory() as u32)
        .map(|m| (0..n).map(|d| t.step(m, d)).collect())
        .collect();
    let output = (0..t.memory() as u32)
        .map(|m| (0..n).map(|d| t.label_of(t.step(m, d))).collect())
        .collect();
    MealyMachine::new(&labels, &dirs, &dirs, t.initial(), update, output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var_set};
    use crate::skolem::{check_conformance, Mode, SkolemFamily};

    /// Joint tree over directions (x1, x2), labels (y1, y2) copying both.
    fn joint_copy(y1_reads_x2: bool) -> RegularTree {
        // memory = last direction; label bit 0 = y1, bit 1 = y2
        let update = vec![vec![0, 1, 2, 3]; 4];
        let labels = (0..4u32)
            .map(|d| {
                let y1 = if y1_reads_x2 { (d >> 1) & 1 } else { d & 1 };
                y1 | (((d >> 1) & 1) << 1)
            })
            .collect();
        RegularTree::new(
            &var_set(&["x1", "x2"]),
            &var_set(&["y1", "y2"]),
            0,
            update,
            labels,
        )
        .unwrap()
    }

    #[test]
    fn copies_split_per_block() {
        let f = parse("A{x1} E{y1} A{x2} E{y2} G ((y1 <-> x1) & (y2 <-> x2))").unwrap();
        let parts = decompose(&joint_copy(false), &f).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].dir_vars().len(), 1);
        assert_eq!(parts[1].dir_vars().len(), 2);
        let again = tree_compose(&[&parts[0], &parts[1]]).unwrap();
        for path in [[0u32, 1, 2, 3], [3, 3, 0, 1], [2, 1, 1, 0]] {
            assert_eq!(again.label_at(&path), joint_copy(false).label_at(&path));
        }
        let fam = SkolemFamily::new(parts.iter().map(|t| tree_to_mealy(t).unwrap()).collect());
        assert!(check_conformance(&fam, &f, Mode::Behavioral));
    }

    #[test]
    fn constant_tree_gives_constant_parts() {
        let f = parse("A{x1} E{y1} A{x2} E{y2} G (y1 & y2)").unwrap();
        let t = RegularTree::constant(&var_set(&["x1", "x2"]), &var_set(&["y1", "y2"]), 3).unwrap();
        let parts = decompose(&t, &f).unwrap();
        assert!(parts.iter().all(|p| p.memory() == 1 && p.label_of(0) == 1));
    }

    #[test]
    fn hidden_reads_are_refused() {
        let f = parse("A{x1} E{y1} A{x2} E{y2} G ((y1 <-> x1) & (y2 <-> x2))").unwrap();
        assert!(matches!(
            decompose(&joint_copy(true), &f),
            Err(Error::NotBehavioral(_))
        ));
    }
}
