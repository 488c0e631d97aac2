use super::automata::{Apt, Npt};
use super::pbf::Pbf;
use crate::bits::{letter_count, remap, Letter};
use crate::error::{Error, Result};
use crate::formula::{Var, VarSet};

/// Hides the `xi` labels and the directions outside `upsilon`: the result
/// reads the remaining labels over `upsilon` directions and accepts a tree
/// iff some `xi`-labeled tree over all the directions composes with it into
/// the language of `n`. Each copy guesses the hidden label at its node and
/// sends one copy per full direction along its visible part.
pub fn change(n: &Npt, xi: &VarSet, upsilon: &VarSet) -> Result<Apt> {
    let labels: VarSet = n.label_vars.iter().cloned().collect();
    let dirs: VarSet = n.dir_vars.iter().cloned().collect();
    if !xi.is_subset(&labels) || !upsilon.is_subset(&dirs) {
        return Err(Error::Partition(
            "hidden labels and kept directions must belong to the automaton".into(),
        ));
    }
    let sigma: Vec<Var> = labels.difference(xi).cloned().collect();
    let xis: Vec<Var> = xi.iter().cloned().collect();
    let ups: Vec<Var> = upsilon.iter().cloned().collect();
    let visible: Vec<Letter> = (0..n.directions() as Letter)
        .map(|d| remap(d, &n.dir_vars, &ups))
        .collect();
    let delta = (0..n.states() as u32)
        .map(|q| {
            (0..letter_count(&sigma) as Letter)
                .map(|s| {
                    let own = remap(s, &sigma, &n.label_vars);
                    Pbf::or((0..letter_count(&xis) as Letter).flat_map(|g| {
                        let full = own | remap(g, &xis, &n.label_vars);
                        n.choices(q, full)
                            .iter()
                            .map(|c| {
                                Pbf::and(
                                    c.iter()
                                        .enumerate()
                                        .map(|(d, &q2)| Pbf::atom(q2, visible[d])),
                                )
                            })
                            .collect::<Vec<_>>()
                    }))
                })
                .collect()
        })
        .collect();
    Apt::new(
        &sigma.into_iter().collect(),
        upsilon,
        n.initial,
        delta,
        n.colors.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::var_set;
    use crate::tree::{all_trees, RegularTree};

    /// 2^{y}-labeled 2^{x}-trees whose every non-root label equals the
    /// direction leading to it.
    fn label_is_last_direction() -> Npt {
        // states: 0 root, 1 expects {}, 2 expects {y}, 3 rejecting sink
        let goto = vec![1, 2];
        let delta = vec![
            vec![vec![goto.clone()], vec![goto.clone()]],
            vec![vec![goto.clone()], vec![vec![3, 3]]],
            vec![vec![vec![3, 3]], vec![goto]],
            vec![vec![vec![3, 3]], vec![vec![3, 3]]],
        ];
        Npt::new(
            &var_set(&["y"]),
            &var_set(&["x"]),
            0,
            delta,
            vec![0, 0, 0, 1],
        )
        .unwrap()
    }

    #[test]
    fn nothing_hidden_is_identity() {
        let n = label_is_last_direction();
        let a = change(&n, &VarSet::new(), &var_set(&["x"])).unwrap();
        for t in all_trees(&var_set(&["x"]), &var_set(&["y"]), 2) {
            assert_eq!(a.accepts(&t).unwrap(), n.accepts(&t).unwrap());
        }
    }

    #[test]
    fn visible_labels_cannot_follow_hidden_directions() {
        let n = label_is_last_direction();
        let a = change(&n, &VarSet::new(), &VarSet::new()).unwrap();
        assert!(a.dir_vars().is_empty());
        for l in 0..2 {
            let t = RegularTree::constant(&VarSet::new(), &var_set(&["y"]), l).unwrap();
            assert!(!a.accepts(&t).unwrap());
        }
    }

    #[test]
    fn hidden_labels_see_every_direction() {
        let n = label_is_last_direction();
        let a = change(&n, &var_set(&["y"]), &VarSet::new()).unwrap();
        assert!(a.label_vars().is_empty() && a.dir_vars().is_empty());
        let t = RegularTree::constant(&VarSet::new(), &VarSet::new(), 0).unwrap();
        assert!(a.accepts(&t).unwrap());
    }

    #[test]
    fn label_projection() {
        // accepts exactly the constant {y} tree over one direction
        let delta = vec![
            vec![vec![vec![1]], vec![vec![0]]],
            vec![vec![vec![1]], vec![vec![1]]],
        ];
        let n = Npt::new(&var_set(&["y"]), &VarSet::new(), 0, delta, vec![0, 1]).unwrap();
        let a = change(&n, &var_set(&["y"]), &VarSet::new()).unwrap();
        let t = RegularTree::constant(&VarSet::new(), &VarSet::new(), 0).unwrap();
        assert!(a.accepts(&t).unwrap());
    }
}
