//! Safra-tree determinization with compact dynamic names.
//!
//! Trees over an NBW with `n` states use names `1..=n`; a parent is always
//! named below its children and older siblings below younger ones. One step
//! on a letter yields the successor tree together with a min-parity priority
//! in `1..=2n+1`: `2f` when the smallest green name `f` beats the smallest
//! removed name `e`, `2e-1` otherwise, `2n+1` when nothing happened.

use crate::bits::BitSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SafraNode {
    pub name: u32,
    pub label: BitSet,
    /// Oldest first.
    pub children: Vec<SafraNode>,
}

/// A Safra tree; `None` is the empty tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SafraTree {
    pub root: Option<SafraNode>,
}

impl SafraTree {
    pub fn initial(states: impl IntoIterator<Item = usize>) -> SafraTree {
        let label: BitSet = states.into_iter().collect();
        if label.is_empty() {
            return SafraTree { root: None };
        }
        SafraTree {
            root: Some(SafraNode {
                name: 1,
                label,
                children: Vec::new(),
            }),
        }
    }

    /// Union of all labels, i.e. the root label.
    pub fn reach(&self) -> BitSet {
        self.root
            .as_ref()
            .map(|r| r.label.clone())
            .unwrap_or_default()
    }

    /// One deterministic step. `post` maps a set of NBW states to its
    /// successors under the current letter; `accepting` is the Büchi set and
    /// `n` the number of NBW states.
    pub fn step(
        &self,
        post: &mut impl FnMut(&BitSet) -> BitSet,
        accepting: &BitSet,
        n: usize,
    ) -> (SafraTree, u32) {
        let Some(root) = &self.root else {
            return (SafraTree { root: None }, 2 * n as u32 + 1);
        };
        let mut root = root.clone();
        let mut fresh = n as u32 + 1;
        spawn(&mut root, accepting, &mut fresh);
        update(&mut root, post);
        let full = root.label.clone();
        horizontal(&mut root, &full);
        let mut removed = u32::MAX;
        let old = n as u32;
        let mut root = if root.label.is_empty() {
            collect_names(&root, old, &mut removed);
            None
        } else {
            prune(&mut root, old, &mut removed);
            Some(root)
        };
        let mut green = u32::MAX;
        if let Some(r) = root.as_mut() {
            vertical(r, old, &mut removed, &mut green);
        }
        if let Some(r) = root.as_mut() {
            let mut names = Vec::new();
            gather(r, &mut names);
            names.sort_unstable();
            rename(r, &names);
        }
        let prio = if green < removed && green != u32::MAX {
            2 * green
        } else if removed != u32::MAX {
            2 * removed - 1
        } else {
            2 * n as u32 + 1
        };
        (SafraTree { root }, prio)
    }
}

fn spawn(node: &mut SafraNode, accepting: &BitSet, fresh: &mut u32) {
    for c in node.children.iter_mut() {
        spawn(c, accepting, fresh);
    }
    let hit = node.label.intersection(accepting);
    if !hit.is_empty() {
        node.children.push(SafraNode {
            name: *fresh,
            label: hit,
            children: Vec::new(),
        });
        *fresh += 1;
    }
}

fn update(node: &mut SafraNode, post: &mut impl FnMut(&BitSet) -> BitSet) {
    node.label = post(&node.label);
    for c in node.children.iter_mut() {
        update(c, post);
    }
}

// A state kept by an older sibling (or an older sibling of an ancestor) is
// dropped from younger nodes; labels are also clipped to the parent's.
fn horizontal(node: &mut SafraNode, allowed: &BitSet) {
    node.label = node.label.intersection(allowed);
    let mut used = BitSet::new();
    for c in node.children.iter_mut() {
        let mut room = node.label.clone();
        room.difference_with(&used);
        horizontal(c, &room);
        used.union_with(&c.label);
    }
}

fn collect_names(node: &SafraNode, old: u32, removed: &mut u32) {
    if node.name <= old {
        *removed = (*removed).min(node.name);
    }
    for c in &node.children {
        collect_names(c, old, removed);
    }
}

fn prune(node: &mut SafraNode, old: u32, removed: &mut u32) {
    node.children.retain(|c| {
        if c.label.is_empty() {
            collect_names(c, old, removed);
            false
        } else {
            true
        }
    });
    for c in node.children.iter_mut() {
        prune(c, old, removed);
    }
}

fn vertical(node: &mut SafraNode, old: u32, removed: &mut u32, green: &mut u32) {
    let covered: usize = node.children.iter().map(|c| c.label.len()).sum();
    if !node.children.is_empty() && covered == node.label.len() {
        for c in &node.children {
            collect_names(c, old, removed);
        }
        node.children.clear();
        *green = (*green).min(node.name);
        return;
    }
    for c in node.children.iter_mut() {
        vertical(c, old, removed, green);
    }
}

fn gather(node: &SafraNode, names: &mut Vec<u32>) {
    names.push(node.name);
    for c in &node.children {
        gather(c, names);
    }
}

fn rename(node: &mut SafraNode, sorted: &[u32]) {
    node.name = sorted.binary_search(&node.name).expect("known name") as u32 + 1;
    for c in node.children.iter_mut() {
        rename(c, sorted);
    }
}

/// Converts a min-parity priority over `1..=2n+1` to the max-even color.
pub fn max_color(prio: u32, n: usize) -> u32 {
    2 * n as u32 + 2 - prio
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_accepting_self_loop_goes_green() {
        // one accepting state with a self-loop
        let acc = BitSet::singleton(0);
        let t = SafraTree::initial([0]);
        let mut post = |s: &BitSet| s.clone();
        let (t2, prio) = t.step(&mut post, &acc, 1);
        assert_eq!(prio, 2);
        assert_eq!(t2, t);
        assert_eq!(max_color(prio, 1), 2);
    }

    #[test]
    fn dying_run_removes_the_root() {
        let acc = BitSet::new();
        let t = SafraTree::initial([0]);
        let mut post = |_: &BitSet| BitSet::new();
        let (t2, prio) = t.step(&mut post, &acc, 1);
        assert!(t2.root.is_none());
        assert_eq!(prio, 1);
        let (t3, prio) = t2.step(&mut post, &acc, 1);
        assert!(t3.root.is_none());
        assert_eq!(prio, 3);
    }

    #[test]
    fn names_stay_compact() {
        // states 0 (non-accepting) and 1 (accepting), 0 -> {0,1}, 1 -> {1}
        let acc = BitSet::singleton(1);
        let mut post = |s: &BitSet| {
            let mut out = BitSet::new();
            for q in s.iter() {
                if q == 0 {
                    out.insert(0);
                }
                out.insert(1);
            }
            out
        };
        let mut t = SafraTree::initial([0]);
        for _ in 0..6 {
            let (next, _) = t.step(&mut post, &acc, 2);
            t = next;
            let mut names = Vec::new();
            gather(t.root.as_ref().unwrap(), &mut names);
            names.sort_unstable();
            assert_eq!(names, (1..=names.len() as u32).collect::<Vec<_>>());
            assert!(names.len() <= 2);
        }
    }
}
