//! Simple-cycle enumeration over the parent-correctness implication graph.
//!
//! Johnson's algorithm: repeatedly take the strongly connected component
//! containing the smallest unprocessed vertex and enumerate every simple
//! cycle through that vertex, blocking vertices along fruitless paths so
//! each cycle costs amortized linear time. The traversal is iterative, so
//! deep components cannot overflow the call stack. Enumeration aborts once
//! the cycle cap or the time budget is exceeded.

use std::collections::BTreeSet;
use std::time::Instant;

use crate::error::Error;
use crate::Result;

struct Budget {
    ops: u64,
    deadline: Option<Instant>,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.ops += 1;
        if self.ops % 1024 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Error::Timeout);
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn simple_cycles(
    n: usize,
    edges: &[(usize, usize)],
    cap: usize,
    deadline: Option<Instant>,
) -> Result<Vec<Vec<usize>>> {
    let mut budget = Budget { ops: 0, deadline };
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut selfs: BTreeSet<usize> = BTreeSet::new();
    let mut adj_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        if u == v {
            selfs.insert(u);
        } else {
            adj_sets[u].insert(v);
        }
    }
    for v in selfs {
        if cycles.len() == cap {
            return Err(Error::CycleBudget { cap });
        }
        cycles.push(vec![v]);
    }
    let adj: Vec<Vec<usize>> = adj_sets.into_iter().map(|s| s.into_iter().collect()).collect();

    let mut s = 0;
    while s < n {
        let components = strongly_connected(&adj, s, &mut budget)?;
        let Some(component) = components
            .into_iter()
            .filter(|c| c.len() >= 2)
            .min_by_key(|c| *c.iter().min().unwrap())
        else {
            break;
        };
        let start = *component.iter().min().unwrap();
        circuit(&adj, &component, start, cap, &mut cycles, &mut budget)?;
        s = start + 1;
    }
    Ok(cycles)
}

/// Strongly connected components of the subgraph on vertices `>= min`,
/// via Kosaraju's two passes with iterative depth-first search.
fn strongly_connected(
    adj: &[Vec<usize>],
    min: usize,
    budget: &mut Budget,
) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let mut order: Vec<usize> = Vec::new();
    let mut seen = vec![false; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in min..n {
        if seen[root] || adj[root].is_empty() {
            continue;
        }
        seen[root] = true;
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            budget.tick()?;
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if w >= min && !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }

    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in min..n {
        for &w in &adj[v] {
            if w >= min {
                radj[w].push(v);
            }
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &root in order.iter().rev() {
        if component[root] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = Vec::new();
        let mut work = vec![root];
        component[root] = id;
        while let Some(v) = work.pop() {
            budget.tick()?;
            members.push(v);
            for &w in &radj[v] {
                if component[w] == usize::MAX {
                    component[w] = id;
                    work.push(w);
                }
            }
        }
        components.push(members);
    }
    Ok(components)
}

fn circuit(
    adj: &[Vec<usize>],
    component: &[usize],
    start: usize,
    cap: usize,
    cycles: &mut Vec<Vec<usize>>,
    budget: &mut Budget,
) -> Result<()> {
    let n = adj.len();
    let mut in_scc = vec![false; n];
    for &v in component {
        in_scc[v] = true;
    }
    let mut blocked = vec![false; n];
    let mut b_lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut path: Vec<usize> = Vec::new();

    struct Frame {
        v: usize,
        next: usize,
        found: bool,
    }
    let mut frames = vec![Frame { v: start, next: 0, found: false }];
    path.push(start);
    blocked[start] = true;

    while let Some(top) = frames.last_mut() {
        budget.tick()?;
        let v = top.v;
        if top.next < adj[v].len() {
            let w = adj[v][top.next];
            top.next += 1;
            if !in_scc[w] {
                continue;
            }
            if w == start {
                if cycles.len() == cap {
                    return Err(Error::CycleBudget { cap });
                }
                cycles.push(path.clone());
                top.found = true;
            } else if !blocked[w] {
                frames.push(Frame { v: w, next: 0, found: false });
                path.push(w);
                blocked[w] = true;
            }
        } else {
            let found = top.found;
            if found {
                let mut work = vec![v];
                while let Some(u) = work.pop() {
                    if blocked[u] {
                        blocked[u] = false;
                        work.append(&mut b_lists[u]);
                    }
                }
            } else {
                for &w in &adj[v] {
                    if in_scc[w] && !b_lists[w].contains(&v) {
                        b_lists[w].push(v);
                    }
                }
            }
            path.pop();
            frames.pop();
            if let Some(parent) = frames.last_mut() {
                parent.found |= found;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn normalize(mut cycle: Vec<usize>) -> Vec<usize> {
        let min_pos = cycle
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| *v)
            .map(|(i, _)| i)
            .unwrap();
        cycle.rotate_left(min_pos);
        cycle
    }

    fn as_set(cycles: Vec<Vec<usize>>) -> BTreeSet<Vec<usize>> {
        cycles.into_iter().map(normalize).collect()
    }

    /// Exhaustive search: every simple cycle, anchored at its minimum vertex.
    fn naive(n: usize, edges: &[(usize, usize)]) -> BTreeSet<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
        }
        let mut out = BTreeSet::new();
        fn dfs(
            adj: &[Vec<usize>],
            start: usize,
            v: usize,
            path: &mut Vec<usize>,
            on_path: &mut Vec<bool>,
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            for &w in &adj[v] {
                if w == start {
                    out.insert(path.clone());
                } else if w > start && !on_path[w] {
                    path.push(w);
                    on_path[w] = true;
                    dfs(adj, start, w, path, on_path, out);
                    on_path[w] = false;
                    path.pop();
                }
            }
        }
        for start in 0..n {
            let mut path = vec![start];
            let mut on_path = vec![false; n];
            on_path[start] = true;
            dfs(&adj, start, start, &mut path, &mut on_path, &mut out);
        }
        out
    }

    #[test]
    fn matches_exhaustive_search_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let n = rng.gen_range(2..8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let got = as_set(simple_cycles(n, &edges, 1_000_000, None).unwrap());
            assert_eq!(got, naive(n, &edges));
        }
    }

    #[test]
    fn complete_digraph_on_four_vertices_has_twenty_cycles() {
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        let cycles = simple_cycles(4, &edges, 1_000_000, None).unwrap();
        assert_eq!(cycles.len(), 20);
    }

    #[test]
    fn disjoint_two_cycles_and_self_loops() {
        let edges = [(0, 1), (1, 0), (2, 3), (3, 2), (4, 4)];
        let cycles = as_set(simple_cycles(5, &edges, 100, None).unwrap());
        let expected: BTreeSet<Vec<usize>> =
            [vec![0, 1], vec![2, 3], vec![4]].into_iter().collect();
        assert_eq!(cycles, expected);
    }

    #[test]
    fn acyclic_graphs_yield_nothing() {
        let edges = [(0, 1), (1, 2), (0, 2), (2, 3)];
        assert!(simple_cycles(4, &edges, 100, None).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        match simple_cycles(4, &edges, 5, None) {
            Err(Error::CycleBudget { cap: 5 }) => {}
            other => panic!("expected cycle budget error, got {other:?}"),
        }
    }
}
