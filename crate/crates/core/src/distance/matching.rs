//! Maximum cardinality bipartite matching (Hopcroft-Karp).

use std::collections::VecDeque;

const UNSEEN: usize = usize::MAX;

/// Maximum matching of a bipartite graph given by left-side adjacency lists.
///
/// Returns `left_to_right[u] = Some(v)` for each matched left vertex.
pub fn hopcroft_karp(n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n_left = adj.len();
    let mut left_to_right: Vec<Option<usize>> = vec![None; n_left];
    let mut right_to_left: Vec<Option<usize>> = vec![None; n_right];
    let mut level = vec![UNSEEN; n_left];

    loop {
        // BFS from free left vertices builds the layered graph.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if left_to_right[u].is_none() {
                level[u] = 0;
                queue.push_back(u);
            } else {
                level[u] = UNSEEN;
            }
        }
        let mut found_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match right_to_left[v] {
                    None => found_free = true,
                    Some(w) if level[w] == UNSEEN => {
                        level[w] = level[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found_free {
            break;
        }

        let mut next_edge = vec![0usize; n_left];
        let mut augmented = false;
        for u in 0..n_left {
            if left_to_right[u].is_none()
                && augment(
                    u,
                    adj,
                    &mut level,
                    &mut next_edge,
                    &mut left_to_right,
                    &mut right_to_left,
                )
            {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    left_to_right
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    level: &mut [usize],
    next_edge: &mut [usize],
    left_to_right: &mut [Option<usize>],
    right_to_left: &mut [Option<usize>],
) -> bool {
    while next_edge[u] < adj[u].len() {
        let v = adj[u][next_edge[u]];
        next_edge[u] += 1;
        let ok = match right_to_left[v] {
            None => true,
            Some(w) => {
                level[w] == level[u] + 1
                    && augment(w, adj, level, next_edge, left_to_right, right_to_left)
            }
        };
        if ok {
            left_to_right[u] = Some(v);
            right_to_left[v] = Some(u);
            return true;
        }
    }
    level[u] = UNSEEN;
    false
}
