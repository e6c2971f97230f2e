//! Structural and spectral graph measures.
//!
//! Everything runs on the undirected simple view except PageRank, which uses the
//! directed multigraph. Each profile carries `method_notes` naming the algorithm and
//! parameters behind every number.

mod centrality;
mod clustering;
mod community;
mod cycles;
mod spectral;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use centrality::{
    betweenness, closeness_centrality, degree_centrality, eigenvector_centrality, pagerank, Betweenness,
    BetweennessMode, EigenvectorCentrality, PageRank,
};
pub use clustering::{clustering, triangle_counts, Clustering};
pub use community::{louvain, modularity, Communities};
pub use cycles::{girth, greedy_chromatic};
pub use spectral::{laplacian_matrix, spectral_measures, SpectralConfig, SpectralMeasures};

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, KnowledgeGraph, SimpleGraph};
use crate::seeding::derive_seed;
use crate::stats::{entropy_bits, mean, pearson};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructuralConfig {
    /// Exact Brandes up to this many nodes, pivot sampling above.
    pub exact_betweenness_limit: usize,
    pub betweenness_pivots: usize,
    pub eigenvector_tol: f64,
    pub eigenvector_max_iter: usize,
    pub pagerank_damping: f64,
    pub pagerank_tol: f64,
    pub pagerank_max_iter: usize,
    pub dense_spectrum_limit: usize,
    pub spectral_tol: f64,
    pub seed: u64,
}

impl Default for StructuralConfig {
    fn default() -> Self {
        Self {
            exact_betweenness_limit: 20_000,
            betweenness_pivots: 5_000,
            eigenvector_tol: 1e-8,
            eigenvector_max_iter: 1_000,
            pagerank_damping: 0.85,
            pagerank_tol: 1e-10,
            pagerank_max_iter: 1_000,
            dense_spectrum_limit: 2_500,
            spectral_tol: 1e-6,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralProfile {
    pub nodes: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub degree_entropy: f64,
    pub degree_centrality_mean: f64,
    pub betweenness_centrality_mean: f64,
    pub edge_betweenness_mean: Option<f64>,
    pub closeness_centrality_mean: f64,
    pub eigenvector_centrality_mean: f64,
    pub eigenvector_residual: f64,
    pub pagerank_mean: f64,
    pub pagerank_sum: f64,
    pub local_clustering_mean: f64,
    pub global_clustering: f64,
    pub transitivity: f64,
    pub modularity: Option<f64>,
    pub communities: usize,
    pub structural_entropy: f64,
    pub assortativity: Option<f64>,
    pub algebraic_connectivity: Option<f64>,
    pub spectral_gap: Option<f64>,
    pub chromatic_number_estimate: usize,
    pub chromatic_is_estimate: bool,
    pub girth: Option<usize>,
    pub girth_infinite: bool,
    pub method_notes: BTreeMap<String, String>,
}

/// `2|E| / |V|` on the simple view.
pub fn average_degree(g: &SimpleGraph) -> Result<f64> {
    if g.node_count() == 0 {
        return Err(Error::Empty("average degree needs at least one node"));
    }
    Ok(2.0 * g.edge_count() as f64 / g.node_count() as f64)
}

/// Entropy (bits) of the distribution of nodes over distinct degree values.
pub fn degree_entropy(g: &SimpleGraph) -> f64 {
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for d in g.degrees() {
        *hist.entry(d).or_insert(0) += 1;
    }
    entropy_bits(hist.into_values())
}

/// Degree assortativity: Pearson correlation of endpoint degrees over both
/// orientations of every edge.
pub fn assortativity(g: &SimpleGraph) -> Result<f64> {
    if g.edge_count() < 2 {
        return Err(Error::Undefined("assortativity needs at least 2 edges".into()));
    }
    let mut xs = Vec::with_capacity(2 * g.edge_count());
    let mut ys = Vec::with_capacity(2 * g.edge_count());
    for &(u, v) in g.edges() {
        let (du, dv) = (g.degree(u as usize) as f64, g.degree(v as usize) as f64);
        xs.extend([du, dv]);
        ys.extend([dv, du]);
    }
    pearson(&xs, &ys).map_err(|_| Error::Undefined("all edge endpoints have equal degree".into()))
}

pub fn structural_profile(kg: &KnowledgeGraph, config: &StructuralConfig) -> Result<StructuralProfile> {
    profile_of(&kg.undirected_view(), &kg.directed_view(), config)
}

/// Profile of a simple view plus the directed view used for PageRank.
pub fn profile_of(g: &SimpleGraph, directed: &DirectedMultigraph, config: &StructuralConfig) -> Result<StructuralProfile> {
    let n = g.node_count();
    let mut notes = BTreeMap::new();
    let mut note = |k: &str, v: String| {
        notes.insert(k.to_owned(), v);
    };
    let average_degree = average_degree(g)?;
    note("average_degree", "2|E|/|V| on the undirected simple view".into());
    note("degree_entropy", "Shannon entropy (bits) of the distinct-degree histogram".into());
    note("degree_centrality", "deg(v)/(|V|-1), mean over all nodes".into());

    let mode = if n <= config.exact_betweenness_limit {
        BetweennessMode::Exact
    } else {
        BetweennessMode::Sampled {
            pivots: config.betweenness_pivots.min(n),
            seed: derive_seed(config.seed, "betweenness-pivots"),
        }
    };
    if let BetweennessMode::Sampled { pivots, .. } = mode {
        log::info!("betweenness: sampling {pivots} pivots over {n} nodes");
    }
    let bc = betweenness(g, mode);
    let bc_desc = match bc.pivots {
        None => "exact Brandes".to_owned(),
        Some(k) => format!("Brandes over {k} seeded pivots (seed {}), scaled by n/k", config.seed),
    };
    note("betweenness", format!("{bc_desc}; normalized by 2/((n-1)(n-2))"));
    note("edge_betweenness", format!("{bc_desc}; normalized by 2/(n(n-1)), mean over simple edges"));
    note("closeness", "BFS distances within each component, Wasserman-Faust correction".into());

    let ev = eigenvector_centrality(
        g,
        config.eigenvector_tol,
        config.eigenvector_max_iter,
        derive_seed(config.seed, "eigenvector"),
    )?;
    if ev.lanczos_fallback {
        log::warn!("eigenvector centrality: power iteration stalled after {} steps, used Lanczos", ev.iterations);
    }
    note(
        "eigenvector",
        format!(
            "power iteration on A+I over the largest component, residual tol {:e}, max {} iterations ({} used){}; L2-normalized, zero off-component",
            config.eigenvector_tol,
            config.eigenvector_max_iter,
            ev.iterations,
            if ev.lanczos_fallback { ", finished by restarted Lanczos" } else { "" }
        ),
    );
    let pr = pagerank(directed, config.pagerank_damping, config.pagerank_tol, config.pagerank_max_iter)?;
    note(
        "pagerank",
        format!(
            "directed multigraph, damping {}, L1 tol n*{:e}, uniform teleport and dangling redistribution, {} iterations",
            config.pagerank_damping, config.pagerank_tol, pr.iterations
        ),
    );

    let cl = clustering(g);
    note("clustering", "local mean with deg<2 -> 0; global reported as the local mean; transitivity = 3T/wedges".into());
    let comm = louvain(g, derive_seed(config.seed, "louvain"));
    note(
        "modularity",
        format!("seeded multilevel Louvain (seed {}, {} levels), Newman-Girvan Q", config.seed, comm.levels),
    );
    note("structural_entropy", "Shannon entropy (bits) of community-size fractions".into());

    let assortativity = match assortativity(g) {
        Ok(r) => Some(r),
        Err(e) => {
            note("assortativity_undefined", e.to_string());
            None
        }
    };
    note("assortativity", "Pearson correlation of endpoint degrees over both edge orientations".into());

    let spec_cfg = SpectralConfig {
        dense_limit: config.dense_spectrum_limit,
        tol: config.spectral_tol,
        seed: derive_seed(config.seed, "spectral"),
        ..Default::default()
    };
    let sp = spectral_measures(g, &spec_cfg)?;
    let solver = if sp.dense {
        "dense symmetric QL".to_owned()
    } else {
        format!("restarted Lanczos, tol {:e}, max residual {:e}", config.spectral_tol, sp.max_residual)
    };
    note(
        "algebraic_connectivity",
        format!(
            "second-smallest eigenvalue of the combinatorial Laplacian of the largest component ({} nodes), {solver}{}",
            sp.component_size,
            if sp.clamped { "; value in (-1e-6, 0) clamped to 0" } else { "" }
        ),
    );
    note("spectral_gap", format!("lambda1(A) - lambda2(A) on the largest component, {solver}"));
    note("chromatic_number", "greedy colouring, largest degree first, ties by node id (upper bound)".into());
    let has_triangle = cl.triangles.iter().any(|&t| t > 0);
    let girth = girth(g, has_triangle);
    note("girth", "1 if a self-loop triple exists, 2 if an entity pair has parallel triples, else shortest cycle by BFS".into());

    Ok(StructuralProfile {
        nodes: n,
        edges: g.edge_count(),
        average_degree,
        degree_entropy: degree_entropy(g),
        degree_centrality_mean: mean(&degree_centrality(g)).unwrap_or(0.0),
        betweenness_centrality_mean: mean(&bc.nodes).unwrap_or(0.0),
        edge_betweenness_mean: mean(&bc.edges),
        closeness_centrality_mean: mean(&closeness_centrality(g)).unwrap_or(0.0),
        eigenvector_centrality_mean: mean(&ev.values).unwrap_or(0.0),
        eigenvector_residual: ev.residual,
        pagerank_mean: mean(&pr.values).unwrap_or(0.0),
        pagerank_sum: pr.values.iter().sum(),
        local_clustering_mean: cl.local_mean,
        global_clustering: cl.global,
        transitivity: cl.transitivity,
        modularity: comm.modularity,
        communities: comm.count,
        structural_entropy: comm.structural_entropy,
        assortativity,
        algebraic_connectivity: sp.algebraic_connectivity,
        spectral_gap: sp.spectral_gap,
        chromatic_number_estimate: greedy_chromatic(g),
        chromatic_is_estimate: true,
        girth_infinite: girth.is_none(),
        girth,
        method_notes: notes,
    })
}
