//! Hopcroft-Karp maximum matching on an explicit bipartite graph.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum matching. `adj[u]` lists right-side neighbours of left vertex `u`,
/// in the order they should be tried. Returns the partner of each left vertex.
pub fn max_matching(right_count: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let left_count = adj.len();
    let mut match_left = vec![NIL; left_count];
    let mut match_right = vec![NIL; right_count];
    let mut dist = vec![0usize; left_count];

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..left_count {
            if match_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }

        let mut next_edge = vec![0usize; left_count];
        for u in 0..left_count {
            if match_left[u] == NIL {
                augment(u, adj, &mut match_left, &mut match_right, &mut dist, &mut next_edge);
            }
        }
    }

    match_left.into_iter().map(|v| (v != NIL).then_some(v)).collect()
}

// Iterative DFS along the BFS layers; avoids deep recursion on long paths.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        if next_edge[u] == adj[u].len() {
            dist[u] = usize::MAX;
            stack.pop();
            continue;
        }
        let v = adj[u][next_edge[u]];
        let w = match_right[v];
        if w == NIL {
            // Flip the path recorded on the stack.
            let mut right = v;
            while let Some(l) = stack.pop() {
                let prev = match_left[l];
                match_left[l] = right;
                match_right[right] = l;
                right = prev;
            }
            return true;
        }
        if dist[w] == dist[u].wrapping_add(1) {
            stack.push(w);
        } else {
            next_edge[u] += 1;
        }
    }
    false
}
