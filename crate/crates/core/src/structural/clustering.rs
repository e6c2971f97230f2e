use crate::graph::SimpleGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Triangles through each node.
    pub triangles: Vec<u64>,
    pub local: Vec<f64>,
    pub local_mean: f64,
    /// Reported as the mean local coefficient.
    pub global: f64,
    pub transitivity: f64,
}

/// Per-node triangle counts by forward enumeration over a degree ordering.
pub fn triangle_counts(g: &SimpleGraph) -> Vec<u64> {
    let n = g.node_count();
    let rank = |v: usize| (g.degree(v), v);
    let forward: Vec<Vec<u32>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().filter(|&w| rank(w as usize) > rank(v)).collect())
        .collect();
    let mut tri = vec![0u64; n];
    for u in 0..n {
        for &v in &forward[u] {
            let (a, b) = (&forward[u], &forward[v as usize]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        tri[u] += 1;
                        tri[v as usize] += 1;
                        tri[a[i] as usize] += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    tri
}

pub fn clustering(g: &SimpleGraph) -> Clustering {
    let n = g.node_count();
    let triangles = triangle_counts(g);
    let local: Vec<f64> = (0..n)
        .map(|v| {
            let d = g.degree(v) as f64;
            if d < 2.0 { 0.0 } else { 2.0 * triangles[v] as f64 / (d * (d - 1.0)) }
        })
        .collect();
    let local_mean = if n == 0 { 0.0 } else { local.iter().sum::<f64>() / n as f64 };
    let closed: u64 = triangles.iter().sum();
    let wedges: u64 = (0..n).map(|v| (g.degree(v) * g.degree(v).saturating_sub(1) / 2) as u64).sum();
    let transitivity = if wedges == 0 { 0.0 } else { closed as f64 / wedges as f64 };
    Clustering { triangles, local, local_mean, global: local_mean, transitivity }
}
