//! Simple-cycle enumeration (Johnson's algorithm) on a vertex subset of a
//! digraph, ignoring self-loops.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::cellset::CellSet;
use crate::dynamics::Digraph;

/// Default cap on the number of simple cycles visited.
pub const DEFAULT_CYCLE_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("more than {limit} simple cycles")]
pub struct CycleBudgetExceeded {
    pub limit: usize,
}

/// Calls `visit` on every simple cycle of length at least two inside
/// `within`. Each cycle starts at its smallest cell. Stops early when
/// `visit` breaks, and fails once more than `budget` cycles were seen.
pub fn for_each_simple_cycle<F>(
    graph: &Digraph,
    within: &CellSet,
    budget: usize,
    mut visit: F,
) -> Result<(), CycleBudgetExceeded>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let verts: Vec<usize> = within.iter().collect();
    let n = verts.len();
    let mut local = vec![usize::MAX; graph.len()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let adj: Vec<Vec<usize>> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            graph
                .successors(v)
                .iter()
                .map(|w| local[w])
                .filter(|&w| w != usize::MAX && w != i)
                .collect()
        })
        .collect();

    let mut count = 0usize;
    let mut blocked = vec![false; n];
    let mut closed = vec![false; n];
    let mut b_sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut path: Vec<usize> = Vec::new();
    let mut out: Vec<usize> = Vec::new();

    for s in 0..n {
        blocked.iter_mut().for_each(|b| *b = false);
        closed.iter_mut().for_each(|c| *c = false);
        b_sets.iter_mut().for_each(Vec::clear);
        path.clear();
        path.push(s);
        blocked[s] = true;
        // (vertex, next neighbour position)
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];

        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            while *pos < adj[v].len() && adj[v][*pos] < s {
                *pos += 1;
            }
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if w == s {
                    count += 1;
                    if count > budget {
                        return Err(CycleBudgetExceeded { limit: budget });
                    }
                    out.clear();
                    out.extend(path.iter().map(|&i| verts[i]));
                    if visit(&out).is_break() {
                        return Ok(());
                    }
                    for &p in &path {
                        closed[p] = true;
                    }
                } else if !blocked[w] {
                    path.push(w);
                    closed[w] = false;
                    blocked[w] = true;
                    stack.push((w, 0));
                }
                continue;
            }
            if closed[v] {
                unblock(v, &mut blocked, &mut b_sets);
            } else {
                for &w in &adj[v] {
                    if w >= s && !b_sets[w].contains(&v) {
                        b_sets[w].push(v);
                    }
                }
            }
            stack.pop();
            path.pop();
        }
    }
    Ok(())
}

fn unblock(v: usize, blocked: &mut [bool], b_sets: &mut [Vec<usize>]) {
    let mut work = vec![v];
    while let Some(u) = work.pop() {
        if blocked[u] {
            blocked[u] = false;
            work.append(&mut b_sets[u]);
        }
    }
}

/// All simple cycles inside `within`, in enumeration order.
pub fn simple_cycles(graph: &Digraph, within: &CellSet, budget: usize) -> Result<Vec<Vec<usize>>, CycleBudgetExceeded> {
    let mut all = Vec::new();
    for_each_simple_cycle(graph, within, budget, |c| {
        all.push(c.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Digraph {
        let mut succ = vec![CellSet::empty(n); n];
        for (x, s) in succ.iter_mut().enumerate() {
            s.insert(x);
        }
        for &(a, b) in edges {
            succ[a].insert(b);
        }
        Digraph::from_successors(succ)
    }

    /// Canonical form: rotate so the smallest vertex comes first.
    fn canon(c: &[usize]) -> Vec<usize> {
        let k = (0..c.len()).min_by_key(|&i| c[i]).unwrap();
        c[k..].iter().chain(&c[..k]).copied().collect()
    }

    /// Brute force: every permutation prefix that closes up.
    fn brute(n: usize, g: &Digraph) -> BTreeSet<Vec<usize>> {
        fn extend(g: &Digraph, path: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut BTreeSet<Vec<usize>>) {
            let last = *path.last().unwrap();
            let s = path[0];
            for w in 0..used.len() {
                if w == last || !g.has_edge(last, w) {
                    continue;
                }
                if w == s && path.len() >= 2 {
                    out.insert(canon(path));
                } else if !used[w] && w > s {
                    used[w] = true;
                    path.push(w);
                    extend(g, path, used, out);
                    path.pop();
                    used[w] = false;
                }
            }
        }
        let mut out = BTreeSet::new();
        for s in 0..n {
            let mut used = vec![false; n];
            used[s] = true;
            extend(g, &mut vec![s], &mut used, &mut out);
        }
        out
    }

    #[test]
    fn triangle_with_chord() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0), (1, 0)]);
        let cycles = simple_cycles(&g, &CellSet::full(3), 100).unwrap();
        let set: BTreeSet<_> = cycles.iter().map(|c| canon(c)).collect();
        assert_eq!(set, BTreeSet::from([vec![0, 1], vec![0, 1, 2]]));
        assert_eq!(cycles.len(), 2);
    }

    #[test]
    fn loops_are_ignored_and_subsets_respected() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(simple_cycles(&g, &CellSet::from_cells(3, [0, 1]), 10).unwrap().is_empty());
        assert!(simple_cycles(&g, &CellSet::empty(3), 10).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let n = 6;
        let edges: Vec<_> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        let g = graph(n, &edges);
        assert_eq!(
            simple_cycles(&g, &CellSet::full(n), 5),
            Err(CycleBudgetExceeded { limit: 5 })
        );
        // complete digraph on 6 vertices: sum_{k=2..6} C(6,k) (k-1)!
        assert_eq!(simple_cycles(&g, &CellSet::full(n), 1000).unwrap().len(), 409);
    }

    proptest! {
        #[test]
        fn matches_brute_force(n in 1usize..7, raw in proptest::collection::vec((0usize..7, 0usize..7), 0..20)) {
            let edges: Vec<_> = raw.into_iter().filter(|&(a, b)| a < n && b < n).collect();
            let g = graph(n, &edges);
            let cycles = simple_cycles(&g, &CellSet::full(n), 100_000).unwrap();
            let set: BTreeSet<_> = cycles.iter().map(|c| canon(c)).collect();
            prop_assert_eq!(set.len(), cycles.len());
            for c in &cycles {
                prop_assert!(g.is_closed_walk(c));
            }
            prop_assert_eq!(set, brute(n, &g));
        }
    }
}
