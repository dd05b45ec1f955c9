//! Bipartite maximum matching.
//!
//! Unordered and parent constraints pair a node's children (or parents) with
//! cell slots one-to-one. Because cells partition the symbol set, the fast
//! path in the encoder just compares sorted cell multisets; this module is
//! the independent correspondence oracle used to cross-check that logic and
//! to decide matchability in tests. Hopcroft-Karp is overkill at arity five,
//! but it is small, exact, and needs no tuning.

use std::collections::VecDeque;

const UNMATCHED: usize = usize::MAX;
const INF: u32 = u32::MAX;

/// Maximum bipartite matching via Hopcroft-Karp. `adj[l]` lists the right
/// vertices reachable from left vertex `l`. Returns each left vertex's
/// partner.
#[must_use]
pub fn maximum_matching(rights: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let lefts = adj.len();
    let mut match_l = vec![UNMATCHED; lefts];
    let mut match_r = vec![UNMATCHED; rights];
    let mut dist = vec![INF; lefts];

    loop {
        let mut queue = VecDeque::new();
        for l in 0..lefts {
            if match_l[l] == UNMATCHED {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut reachable_free = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = match_r[r];
                if next == UNMATCHED {
                    reachable_free = true;
                } else if dist[next] == INF {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !reachable_free {
            break;
        }
        for l in 0..lefts {
            if match_l[l] == UNMATCHED {
                augment(l, adj, &mut dist, &mut match_l, &mut match_r);
            }
        }
    }

    match_l
        .into_iter()
        .map(|r| if r == UNMATCHED { None } else { Some(r) })
        .collect()
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    dist: &mut [u32],
    match_l: &mut [usize],
    match_r: &mut [usize],
) -> bool {
    for &r in &adj[l] {
        let next = match_r[r];
        if next == UNMATCHED
            || (dist[next] == dist[l] + 1 && augment(next, adj, dist, match_l, match_r))
        {
            match_l[l] = r;
            match_r[r] = l;
            return true;
        }
    }
    dist[l] = INF;
    false
}

/// True when every left vertex can be matched.
#[must_use]
pub fn has_perfect_matching(rights: usize, adj: &[Vec<usize>]) -> bool {
    maximum_matching(rights, adj).iter().all(Option::is_some)
}
