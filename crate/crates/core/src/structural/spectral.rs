//! Algebraic connectivity and adjacency spectral gap on the largest component.

use crate::error::Result;
use crate::graph::SimpleGraph;
use crate::linalg::{largest_eigenpairs, symmetric_eigen, LanczosConfig, LinearOperator, Matrix};

use super::centrality::adjacency_operator;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasures {
    /// `λ₂(L)`, `None` when the component has a single node.
    pub algebraic_connectivity: Option<f64>,
    /// `λ₁(A) − λ₂(A)`, `None` when the component has a single node.
    pub spectral_gap: Option<f64>,
    pub component_size: usize,
    pub dense: bool,
    pub max_residual: f64,
    /// The raw value was in `(−1e-6, 0)` and reported as 0.
    pub clamped: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralConfig {
    /// Largest component size handled by a full dense decomposition.
    pub dense_limit: usize,
    pub tol: f64,
    pub basis_size: usize,
    pub seed: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { dense_limit: 2500, tol: 1e-6, basis_size: 96, seed: 0 }
    }
}

/// `σ I − L`, whose top eigenvalues are the bottom of `L`.
struct ShiftedLaplacian<'a> {
    g: &'a SimpleGraph,
    sigma: f64,
}

impl LinearOperator<f64> for ShiftedLaplacian<'_> {
    fn dim(&self) -> usize {
        self.g.node_count()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            let nb: f64 = self.g.neighbors(v).iter().map(|&w| x[w as usize]).sum();
            *out = (self.sigma - self.g.degree(v) as f64) * x[v] + nb;
        }
    }
}

fn adjacency_matrix(g: &SimpleGraph) -> Matrix<f64> {
    let n = g.node_count();
    let mut a = Matrix::zeros(n, n);
    for &(u, v) in g.edges() {
        a[(u as usize, v as usize)] = 1.0;
        a[(v as usize, u as usize)] = 1.0;
    }
    a
}

pub fn laplacian_matrix(g: &SimpleGraph) -> Matrix<f64> {
    let mut l = adjacency_matrix(g).map(|x| -x);
    for v in 0..g.node_count() {
        l[(v, v)] = g.degree(v) as f64;
    }
    l
}

fn clamp(value: f64) -> (f64, bool) {
    if value < 0.0 && value > -1e-6 { (0.0, true) } else { (value, false) }
}

pub fn spectral_measures(g: &SimpleGraph, config: &SpectralConfig) -> Result<SpectralMeasures> {
    let comp = g.largest_component();
    let size = comp.len();
    if size < 2 {
        return Ok(SpectralMeasures {
            algebraic_connectivity: None,
            spectral_gap: None,
            component_size: size,
            dense: true,
            max_residual: 0.0,
            clamped: false,
        });
    }
    let sub = g.induced(&comp);
    if size <= config.dense_limit {
        let lap = symmetric_eigen(&laplacian_matrix(&sub), false)?;
        let adj = symmetric_eigen(&adjacency_matrix(&sub), false)?;
        let (ac, clamped) = clamp(lap.values[1]);
        return Ok(SpectralMeasures {
            algebraic_connectivity: Some(ac),
            spectral_gap: Some(adj.values[size - 1] - adj.values[size - 2]),
            component_size: size,
            dense: true,
            max_residual: 0.0,
            clamped,
        });
    }
    let cfg = LanczosConfig { basis_size: config.basis_size, tol: config.tol, max_restarts: 5000, seed: config.seed };
    // Gershgorin: λ_max(L) ≤ 2 · max degree.
    let sigma = 2.0 * sub.degrees().into_iter().max().unwrap_or(0) as f64;
    let ones = vec![1.0 / (size as f64).sqrt(); size];
    let low = largest_eigenpairs(&ShiftedLaplacian { g: &sub, sigma }, 1, &[ones], &cfg)?;
    let top = largest_eigenpairs(&adjacency_operator(&sub), 2, &[], &cfg)?;
    let (ac, clamped) = clamp(sigma - low.values[0]);
    let max_residual = low.residuals.iter().chain(&top.residuals).fold(0.0f64, |a, &r| a.max(r));
    Ok(SpectralMeasures {
        algebraic_connectivity: Some(ac),
        spectral_gap: Some(top.values[0] - top.values[1]),
        component_size: size,
        dense: false,
        max_residual,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_p3() {
        let s = spectral_measures(&SimpleGraph::from_pairs(3, [(0, 1), (1, 2)]), &SpectralConfig::default()).unwrap();
        assert!((s.algebraic_connectivity.unwrap() - 1.0).abs() < 1e-12);
        assert!((s.spectral_gap.unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn complete_k4() {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let s = spectral_measures(&SimpleGraph::from_pairs(4, pairs), &SpectralConfig::default()).unwrap();
        assert!((s.algebraic_connectivity.unwrap() - 4.0).abs() < 1e-12);
        assert!((s.spectral_gap.unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn iterative_path_matches_dense() {
        let n = 80;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| [(i, (i + 1) % n), (i, (i * 5 + 3) % n)]).collect();
        let g = SimpleGraph::from_pairs(n, pairs);
        let dense = spectral_measures(&g, &SpectralConfig::default()).unwrap();
        let cfg = SpectralConfig { dense_limit: 10, tol: 1e-9, basis_size: 40, seed: 5 };
        let iter = spectral_measures(&g, &cfg).unwrap();
        assert!(!iter.dense);
        assert!((dense.algebraic_connectivity.unwrap() - iter.algebraic_connectivity.unwrap()).abs() < 1e-6);
        assert!((dense.spectral_gap.unwrap() - iter.spectral_gap.unwrap()).abs() < 1e-6);
    }

    #[test]
    fn single_node_is_undefined() {
        let s = spectral_measures(&SimpleGraph::from_pairs(2, []), &SpectralConfig::default()).unwrap();
        assert_eq!(s.algebraic_connectivity, None);
    }
}
