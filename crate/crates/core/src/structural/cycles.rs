//! Girth and greedy colouring.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::graph::SimpleGraph;

/// Shortest cycle length. Self-loops give 1 and parallel pairs give 2, otherwise the
/// shortest simple cycle; `None` for a forest.
pub fn girth(g: &SimpleGraph, has_triangle: bool) -> Option<usize> {
    if g.has_self_loop() {
        return Some(1);
    }
    if g.has_parallel_edges() {
        return Some(2);
    }
    if has_triangle {
        return Some(3);
    }
    let n = g.node_count();
    let best = AtomicUsize::new(usize::MAX);
    (0..n).into_par_iter().for_each_init(
        || (vec![u32::MAX; n], vec![u32::MAX; n], VecDeque::new(), Vec::new()),
        |(dist, parent, queue, touched), root| {
            for &v in touched.iter() {
                dist[v] = u32::MAX;
                parent[v] = u32::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                let dv = dist[v] as usize;
                // Any cycle found from here on is at least 2·dv + 1 long.
                if 2 * dv + 1 >= best.load(Ordering::Relaxed) {
                    break;
                }
                for &w in g.neighbors(v) {
                    let w = w as usize;
                    if dist[w] == u32::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v as u32;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent[v] != w as u32 {
                        best.fetch_min(dv + dist[w] as usize + 1, Ordering::Relaxed);
                    }
                }
            }
        },
    );
    match best.into_inner() {
        usize::MAX => None,
        b => Some(b),
    }
}

/// Greedy colouring in largest-degree-first order (ties by node id); returns the
/// number of colours used, an upper bound on the chromatic number.
pub fn greedy_chromatic(g: &SimpleGraph) -> usize {
    let n = g.node_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    let mut color = vec![usize::MAX; n];
    let mut used = Vec::new();
    let mut colors = 0;
    for v in order {
        used.clear();
        used.resize(g.degree(v) + 1, false);
        for &w in g.neighbors(v) {
            let c = color[w as usize];
            if c < used.len() {
                used[c] = true;
            }
        }
        let c = used.iter().position(|&u| !u).expect("degree + 1 slots");
        color[v] = c;
        colors = colors.max(c + 1);
    }
    colors
}
