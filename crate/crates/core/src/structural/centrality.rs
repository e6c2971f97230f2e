//! Degree, closeness, betweenness, eigenvector and PageRank centralities.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, SimpleGraph};
use crate::linalg::{dot, largest_eigenpairs, norm, LanczosConfig, LinearOperator};

/// Sources handled by one sequential accumulator. Fixed so that the summation
/// order never depends on the thread count.
const SOURCE_CHUNK: usize = 32;
/// Chunks whose partial sums are held in memory at once.
const CHUNK_WAVE: usize = 16;

/// Sum `per_chunk` outputs over fixed chunks of `sources`, in chunk order.
fn ordered_sum<F>(sources: &[usize], width: usize, per_chunk: F) -> Vec<f64>
where
    F: Fn(&[usize]) -> Vec<f64> + Sync,
{
    let chunks: Vec<&[usize]> = sources.chunks(SOURCE_CHUNK).collect();
    let mut total = vec![0.0; width];
    for wave in chunks.chunks(CHUNK_WAVE) {
        let parts: Vec<Vec<f64>> = wave.par_iter().map(|c| per_chunk(c)).collect();
        for part in parts {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
    }
    total
}

/// `deg(v) / (n − 1)`; a single node gets 1.
pub fn degree_centrality(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    if n <= 1 {
        return vec![1.0; n];
    }
    g.degrees().into_iter().map(|d| d as f64 / (n - 1) as f64).collect()
}

/// BFS distances from `s`; unreachable nodes get `u32::MAX`.
pub(crate) fn bfs_distances(g: &SimpleGraph, s: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) {
    dist.fill(u32::MAX);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            let w = w as usize;
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Closeness with the Wasserman–Faust component-size correction:
/// `((r − 1) / Σ d) · ((r − 1) / (n − 1))` with `r` the number of reachable nodes.
pub fn closeness_centrality(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], VecDeque::new()),
            |(dist, queue), s| {
                bfs_distances(g, s, dist, queue);
                let (mut reach, mut total) = (0usize, 0u64);
                for &d in dist.iter() {
                    if d != u32::MAX {
                        reach += 1;
                        total += d as u64;
                    }
                }
                if total == 0 || n <= 1 {
                    return 0.0;
                }
                let r = (reach - 1) as f64;
                (r / total as f64) * (r / (n - 1) as f64)
            },
        )
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Betweenness {
    /// Normalized node betweenness.
    pub nodes: Vec<f64>,
    /// Normalized edge betweenness, aligned with `SimpleGraph::edges`.
    pub edges: Vec<f64>,
    /// `None` when every node served as a source.
    pub pivots: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetweennessMode {
    Exact,
    Sampled { pivots: usize, seed: u64 },
}

struct BrandesScratch {
    stack: Vec<usize>,
    preds: Vec<Vec<(u32, u32)>>,
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    queue: VecDeque<usize>,
}

fn edge_index(g: &SimpleGraph) -> Vec<Vec<u32>> {
    // Position of each adjacency entry in the sorted edge list.
    let mut idx: Vec<Vec<u32>> = (0..g.node_count()).map(|v| vec![0; g.degree(v)]).collect();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let pu = g.neighbors(u as usize).binary_search(&v).expect("edge endpoint");
        let pv = g.neighbors(v as usize).binary_search(&u).expect("edge endpoint");
        idx[u as usize][pu] = e as u32;
        idx[v as usize][pv] = e as u32;
    }
    idx
}

fn brandes_source(g: &SimpleGraph, eidx: &[Vec<u32>], s: usize, sc: &mut BrandesScratch, acc: &mut [f64]) {
    let n = g.node_count();
    sc.stack.clear();
    for p in sc.preds.iter_mut() {
        p.clear();
    }
    sc.sigma.fill(0.0);
    sc.dist.fill(-1);
    sc.delta.fill(0.0);
    sc.sigma[s] = 1.0;
    sc.dist[s] = 0;
    sc.queue.clear();
    sc.queue.push_back(s);
    while let Some(v) = sc.queue.pop_front() {
        sc.stack.push(v);
        for (pos, &w) in g.neighbors(v).iter().enumerate() {
            let w = w as usize;
            if sc.dist[w] < 0 {
                sc.dist[w] = sc.dist[v] + 1;
                sc.queue.push_back(w);
            }
            if sc.dist[w] == sc.dist[v] + 1 {
                sc.sigma[w] += sc.sigma[v];
                sc.preds[w].push((v as u32, eidx[v][pos]));
            }
        }
    }
    let (node_acc, edge_acc) = acc.split_at_mut(n);
    while let Some(w) = sc.stack.pop() {
        let coeff = (1.0 + sc.delta[w]) / sc.sigma[w];
        for &(v, e) in &sc.preds[w] {
            let c = sc.sigma[v as usize] * coeff;
            edge_acc[e as usize] += c;
            sc.delta[v as usize] += c;
        }
        if w != s {
            node_acc[w] += sc.delta[w];
        }
    }
}

/// Brandes node and edge betweenness on the undirected simple view, normalized
/// as `2 / ((n−1)(n−2))` for nodes and `2 / (n(n−1))` for edges (per unordered pair).
/// Sampled mode rescales the pivot sums by `n / pivots`.
pub fn betweenness(g: &SimpleGraph, mode: BetweennessMode) -> Betweenness {
    let n = g.node_count();
    let m = g.edge_count();
    let (sources, pivots): (Vec<usize>, Option<usize>) = match mode {
        BetweennessMode::Sampled { pivots, seed } if pivots < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = sample(&mut rng, n, pivots).into_vec();
            picked.sort_unstable();
            (picked, Some(pivots))
        }
        _ => ((0..n).collect(), None),
    };
    let eidx = edge_index(g);
    let total = ordered_sum(&sources, n + m, |chunk| {
        let mut sc = BrandesScratch {
            stack: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            queue: VecDeque::new(),
        };
        let mut acc = vec![0.0; n + m];
        for &s in chunk {
            brandes_source(g, &eidx, s, &mut sc, &mut acc);
        }
        acc
    });
    let sample_scale = match pivots {
        Some(k) => n as f64 / k as f64,
        None => 1.0,
    };
    let node_scale = if n > 2 { sample_scale / ((n - 1) * (n - 2)) as f64 } else { sample_scale * 0.5 };
    let edge_scale = if n > 1 { sample_scale / (n * (n - 1)) as f64 } else { sample_scale * 0.5 };
    Betweenness {
        nodes: total[..n].iter().map(|v| v * node_scale).collect(),
        edges: total[n..].iter().map(|v| v * edge_scale).collect(),
        pivots,
    }
}

#[derive(Debug, Clone)]
pub struct EigenvectorCentrality {
    /// Per node; zero outside the largest component.
    pub values: Vec<f64>,
    pub eigenvalue: f64,
    /// `‖A v − λ v‖ / ‖v‖` on the largest component.
    pub residual: f64,
    pub iterations: usize,
    /// Set when power iteration stalled and Lanczos produced the vector.
    pub lanczos_fallback: bool,
}

struct Adjacency<'a>(&'a SimpleGraph);

impl LinearOperator<f64> for Adjacency<'_> {
    fn dim(&self) -> usize {
        self.0.node_count()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            *out = self.0.neighbors(v).iter().map(|&w| x[w as usize]).sum();
        }
    }
}

pub(crate) fn adjacency_operator(g: &SimpleGraph) -> impl LinearOperator<f64> + '_ {
    Adjacency(g)
}

fn eigen_residual(g: &SimpleGraph, x: &[f64]) -> (f64, f64) {
    let mut ax = vec![0.0; x.len()];
    Adjacency(g).apply(x, &mut ax);
    let lambda = dot(x, &ax) / dot(x, x);
    let r: Vec<f64> = ax.iter().zip(x).map(|(a, b)| a - lambda * b).collect();
    (lambda, norm(&r) / norm(x))
}

/// Power iteration on `A + I` over the largest component, L2-normalized.
/// Stops once the eigen-residual drops to `tol`; falls back to Lanczos after `max_iter`.
pub fn eigenvector_centrality(g: &SimpleGraph, tol: f64, max_iter: usize, seed: u64) -> Result<EigenvectorCentrality> {
    let n = g.node_count();
    let comp = g.largest_component();
    if comp.is_empty() {
        return Err(Error::Empty("eigenvector centrality needs at least one node"));
    }
    let sub = g.induced(&comp);
    let size = comp.len();
    let mut x = vec![1.0 / (size as f64).sqrt(); size];
    let mut y = vec![0.0; size];
    let mut iterations = 0;
    let mut residual = eigen_residual(&sub, &x).1;
    while residual > tol && iterations < max_iter {
        Adjacency(&sub).apply(&x, &mut y);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let s = norm(&y);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / s;
        }
        iterations += 1;
        residual = eigen_residual(&sub, &x).1;
    }
    let mut lanczos_fallback = false;
    if residual > tol {
        let cfg = LanczosConfig { tol, seed, max_restarts: 2000, ..Default::default() };
        let pairs = largest_eigenpairs(&Adjacency(&sub), 1, &[], &cfg)?;
        x = pairs.vectors.into_iter().next().expect("one pair");
        let s = norm(&x);
        let sign = if x.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        for xi in x.iter_mut() {
            *xi *= sign / s;
        }
        residual = eigen_residual(&sub, &x).1;
        lanczos_fallback = true;
        if residual > tol {
            return Err(Error::NoConvergence { what: "eigenvector centrality", iterations, residual });
        }
    }
    let eigenvalue = eigen_residual(&sub, &x).0;
    let mut values = vec![0.0; n];
    for (i, &v) in comp.iter().enumerate() {
        // Perron vector: clear tiny negative round-off.
        values[v] = x[i].max(0.0);
    }
    Ok(EigenvectorCentrality { values, eigenvalue, residual, iterations, lanczos_fallback })
}

#[derive(Debug, Clone)]
pub struct PageRank {
    pub values: Vec<f64>,
    pub iterations: usize,
}

/// PageRank on a directed multigraph with uniform teleport and dangling mass
/// spread uniformly. Converged when `Σ |Δx| < n · tol`.
pub fn pagerank(g: &DirectedMultigraph, damping: f64, tol: f64, max_iter: usize) -> Result<PageRank> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Empty("pagerank needs at least one node"));
    }
    let nf = n as f64;
    let out_deg: Vec<usize> = (0..n).map(|v| g.out_arcs(v).len()).collect();
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut err = f64::INFINITY;
    for it in 1..=max_iter {
        let dangling: f64 = (0..n).filter(|&v| out_deg[v] == 0).map(|v| x[v]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        next.fill(base);
        for v in 0..n {
            if out_deg[v] > 0 {
                let share = damping * x[v] / out_deg[v] as f64;
                for &w in g.out_arcs(v) {
                    next[w as usize] += share;
                }
            }
        }
        err = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if err < nf * tol {
            return Ok(PageRank { values: x, iterations: it });
        }
    }
    Err(Error::NoConvergence { what: "pagerank", iterations: max_iter, residual: err })
}
