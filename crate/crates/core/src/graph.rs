//! Plain directed-graph helpers over dense `usize` vertices.

use std::collections::VecDeque;

/// Strongly connected components (iterative Tarjan). Returns the component
/// index of every vertex; components are numbered in reverse topological
/// order (sinks first).
pub fn scc(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut count = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < adj[v].len() {
                let w = adj[v][*edge];
                *edge += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (comp, count)
}

/// Vertices in a component with at least one internal edge.
pub fn nontrivial(adj: &[Vec<usize>], comp: &[usize], count: usize) -> Vec<bool> {
    let mut size = vec![0usize; count];
    for &c in comp {
        size[c] += 1;
    }
    (0..adj.len())
        .map(|v| size[comp[v]] > 1 || adj[v].contains(&v))
        .collect()
}

/// Vertices reachable from `from`.
pub fn reachable(adj: &[Vec<usize>], from: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &f in from {
        if !seen[f] {
            seen[f] = true;
            queue.push_back(f);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest nonempty path from `from` to a vertex satisfying `goal`, staying
/// inside vertices allowed by `inside`. Returned as `(vertex, edge index)`
/// steps. With `goal(from)` this finds a shortest cycle through `from`.
pub fn shortest_path(
    adj: &[Vec<usize>],
    from: usize,
    inside: impl Fn(usize) -> bool,
    goal: impl Fn(usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let n = adj.len();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    // `from` stays unmarked so that it can be re-entered as a goal
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        for (k, &w) in adj[v].iter().enumerate() {
            if seen[w] || !inside(w) {
                continue;
            }
            seen[w] = true;
            parent[w] = Some((v, k));
            if goal(w) {
                let mut path = Vec::new();
                let mut cur = w;
                loop {
                    let (p, k) = parent[cur].expect("path parent");
                    path.push((p, k));
                    if p == from {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Shortest path, possibly empty, from `from` to a `goal` vertex.
pub fn path_to(
    adj: &[Vec<usize>],
    from: usize,
    goal: impl Fn(usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    if goal(from) {
        return Some(vec![]);
    }
    shortest_path(adj, from, |_| true, goal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_basic() {
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![]];
        let (comp, count) = scc(&adj);
        assert_eq!(count, 2);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[1], comp[2]);
        assert_ne!(comp[2], comp[3]);
        let nt = nontrivial(&adj, &comp, count);
        assert_eq!(nt, vec![true, true, true, false]);
    }

    #[test]
    fn cycle_search() {
        let adj = vec![vec![1], vec![2], vec![0]];
        let p = shortest_path(&adj, 0, |_| true, |v| v == 0).unwrap();
        assert_eq!(p.len(), 3);
        let adj = vec![vec![0]];
        let p = shortest_path(&adj, 0, |_| true, |v| v == 0).unwrap();
        assert_eq!(p, vec![(0, 0)]);
        let adj = vec![vec![1], vec![]];
        assert!(shortest_path(&adj, 0, |_| true, |v| v == 0).is_none());
    }
}
