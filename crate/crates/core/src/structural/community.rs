//! Seeded Louvain community detection and Newman–Girvan modularity.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::SimpleGraph;
use crate::stats::entropy_bits;

#[derive(Debug, Clone, PartialEq)]
pub struct Communities {
    /// Community label per node, numbered by first appearance in node order.
    pub labels: Vec<usize>,
    pub count: usize,
    /// `None` for a graph without edges.
    pub modularity: Option<f64>,
    /// Bits, over community-size fractions.
    pub structural_entropy: f64,
    pub levels: usize,
}

/// `Q = Σ_c [ L_c / m − (d_c / 2m)² ]` for a given labelling.
pub fn modularity(g: &SimpleGraph, labels: &[usize]) -> Option<f64> {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return None;
    }
    let count = labels.iter().copied().max().map_or(0, |c| c + 1);
    let mut internal = vec![0.0; count];
    let mut degree = vec![0.0; count];
    for v in 0..g.node_count() {
        degree[labels[v]] += g.degree(v) as f64;
    }
    for &(u, v) in g.edges() {
        if labels[u as usize] == labels[v as usize] {
            internal[labels[u as usize]] += 1.0;
        }
    }
    Some((0..count).map(|c| internal[c] / m - (degree[c] / (2.0 * m)).powi(2)).sum())
}

struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_weight: Vec<f64>,
}

impl Level {
    fn strength(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|e| e.1).sum::<f64>() + 2.0 * self.self_weight[v]
    }
}

/// One round of local moves. Returns the community of every node, or `None` if nothing moved.
fn local_moves(level: &Level, m2: f64, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let n = level.adj.len();
    let k: Vec<f64> = (0..n).map(|v| level.strength(v)).collect();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot = k.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut moved_any = false;
    let mut links: HashMap<usize, f64> = HashMap::new();
    let mut candidates: Vec<usize> = Vec::new();
    loop {
        let mut moved = false;
        for &v in &order {
            links.clear();
            candidates.clear();
            for &(w, wt) in &level.adj[v] {
                let c = comm[w];
                let entry = links.entry(c).or_insert_with(|| {
                    candidates.push(c);
                    0.0
                });
                *entry += wt;
            }
            let own = comm[v];
            tot[own] -= k[v];
            let gain = |c: usize| links.get(&c).copied().unwrap_or(0.0) - tot[c] * k[v] / m2;
            let mut best = own;
            let mut best_gain = gain(own);
            for &c in &candidates {
                let g = gain(c);
                if g > best_gain + 1e-12 {
                    best = c;
                    best_gain = g;
                }
            }
            tot[best] += k[v];
            if best != own {
                comm[v] = best;
                moved = true;
                moved_any = true;
            }
        }
        if !moved {
            break;
        }
    }
    moved_any.then_some(comm)
}

fn renumber(labels: &mut [usize]) -> usize {
    let mut map: HashMap<usize, usize> = HashMap::new();
    for l in labels.iter_mut() {
        let next = map.len();
        *l = *map.entry(*l).or_insert(next);
    }
    map.len()
}

fn aggregate(level: &Level, comm: &[usize], count: usize) -> Level {
    let mut self_weight = vec![0.0; count];
    let mut weights: Vec<HashMap<usize, f64>> = vec![HashMap::new(); count];
    for (v, edges) in level.adj.iter().enumerate() {
        let cv = comm[v];
        self_weight[cv] += level.self_weight[v];
        for &(w, wt) in edges {
            let cw = comm[w];
            if cv == cw {
                // Each internal edge is seen from both ends.
                self_weight[cv] += wt / 2.0;
            } else {
                *weights[cv].entry(cw).or_insert(0.0) += wt;
            }
        }
    }
    let adj = weights
        .into_iter()
        .map(|m| {
            let mut v: Vec<(usize, f64)> = m.into_iter().collect();
            v.sort_unstable_by_key(|e| e.0);
            v
        })
        .collect();
    Level { adj, self_weight }
}

/// Multilevel Louvain. The node visit order at each level is a seeded shuffle,
/// so the partition is a function of the graph and `seed`.
pub fn louvain(g: &SimpleGraph, seed: u64) -> Communities {
    let n = g.node_count();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut levels = 0;
    if g.edge_count() > 0 {
        let m2 = 2.0 * g.edge_count() as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut level = Level {
            adj: (0..n).map(|v| g.neighbors(v).iter().map(|&w| (w as usize, 1.0)).collect()).collect(),
            self_weight: vec![0.0; n],
        };
        while let Some(mut comm) = local_moves(&level, m2, &mut rng) {
            let count = renumber(&mut comm);
            for l in labels.iter_mut() {
                *l = comm[*l];
            }
            level = aggregate(&level, &comm, count);
            levels += 1;
        }
    }
    let count = renumber(&mut labels);
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        sizes[l] += 1;
    }
    Communities {
        modularity: modularity(g, &labels),
        structural_entropy: entropy_bits(sizes),
        labels,
        count,
        levels,
    }
}
