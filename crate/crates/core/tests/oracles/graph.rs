//! Brute-force graph measures on a dense adjacency matrix.

use std::collections::VecDeque;

use kgcx_core::graph::{DirectedMultigraph, SimpleGraph};
use kgcx_core::structural::{
    assortativity, betweenness, closeness_centrality, clustering, degree_centrality, eigenvector_centrality,
    greedy_chromatic, girth, modularity, pagerank, spectral_measures, BetweennessMode, SpectralConfig,
};

use super::eigen::jacobi;

const INF: usize = usize::MAX / 4;

pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in pairs {
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        Dense { n, adj }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Floyd–Warshall hop distances.
    pub fn distances(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut d = vec![vec![INF; n]; n];
        for i in 0..n {
            d[i][i] = 0;
            for j in 0..n {
                if self.adj[i][j] {
                    d[i][j] = 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    /// Shortest-path counts by dynamic programming over the distance matrix.
    pub fn path_counts(&self, d: &[Vec<usize>]) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut sigma = vec![vec![0.0; n]; n];
        for s in 0..n {
            let mut order: Vec<usize> = (0..n).filter(|&t| d[s][t] < INF).collect();
            order.sort_by_key(|&t| d[s][t]);
            for &t in &order {
                if t == s {
                    sigma[s][t] = 1.0;
                    continue;
                }
                sigma[s][t] = (0..n).filter(|&v| self.adj[v][t] && d[s][v] + 1 == d[s][t]).map(|v| sigma[s][v]).sum();
            }
        }
        sigma
    }

    pub fn closeness(&self) -> Vec<f64> {
        let d = self.distances();
        let n = self.n;
        (0..n)
            .map(|u| {
                let reach: Vec<usize> = (0..n).filter(|&v| d[u][v] < INF).collect();
                let total: usize = reach.iter().map(|&v| d[u][v]).sum();
                if total == 0 {
                    return 0.0;
                }
                let r = (reach.len() - 1) as f64;
                r / total as f64 * r / (n - 1) as f64
            })
            .collect()
    }

    /// Normalized node and edge betweenness over unordered pairs.
    pub fn betweenness(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let d = self.distances();
        let sigma = self.path_counts(&d);
        let mut node = vec![0.0; n];
        for s in 0..n {
            for t in s + 1..n {
                if d[s][t] >= INF {
                    continue;
                }
                for v in 0..n {
                    if v != s && v != t && d[s][v] + d[v][t] == d[s][t] {
                        node[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                    }
                }
            }
        }
        let edges = self.edges();
        let mut edge = vec![0.0; edges.len()];
        for (e, &(u, w)) in edges.iter().enumerate() {
            for s in 0..n {
                for t in s + 1..n {
                    if d[s][t] >= INF {
                        continue;
                    }
                    for (a, b) in [(u, w), (w, u)] {
                        if d[s][a] < INF && d[b][t] < INF && d[s][a] + 1 + d[b][t] == d[s][t] {
                            edge[e] += sigma[s][a] * sigma[b][t] / sigma[s][t];
                        }
                    }
                }
            }
        }
        let ns = if n > 2 { 2.0 / ((n - 1) * (n - 2)) as f64 } else { 1.0 };
        let es = if n > 1 { 2.0 / (n * (n - 1)) as f64 } else { 1.0 };
        (node.iter().map(|v| v * ns).collect(), edge.iter().map(|v| v * es).collect())
    }

    /// Triangles through each node by checking every node triple.
    pub fn triangles(&self) -> Vec<u64> {
        let n = self.n;
        let mut t = vec![0u64; n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if self.adj[a][b] && self.adj[b][c] && self.adj[a][c] {
                        t[a] += 1;
                        t[b] += 1;
                        t[c] += 1;
                    }
                }
            }
        }
        t
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for w in 0..self.n {
                    if self.adj[v][w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Largest component; ties go to the one holding the smallest node.
    pub fn largest_component(&self) -> Vec<usize> {
        let comps = self.components();
        let best = comps.iter().map(Vec::len).max().unwrap_or(0);
        comps.into_iter().find(|c| c.len() == best).unwrap_or_default()
    }

    fn sub_matrix(&self, nodes: &[usize], laplacian: bool) -> Vec<Vec<f64>> {
        nodes
            .iter()
            .map(|&i| {
                nodes
                    .iter()
                    .map(|&j| {
                        let a = if self.adj[i][j] { 1.0 } else { 0.0 };
                        if !laplacian {
                            a
                        } else if i == j {
                            nodes.iter().filter(|&&k| self.adj[i][k]).count() as f64
                        } else {
                            -a
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `(λ₂(L), λ₁(A) − λ₂(A))` on the largest component.
    pub fn spectral(&self) -> Option<(f64, f64)> {
        let comp = self.largest_component();
        if comp.len() < 2 {
            return None;
        }
        let l = jacobi(&self.sub_matrix(&comp, true)).0;
        let a = jacobi(&self.sub_matrix(&comp, false)).0;
        let m = comp.len();
        Some((l[1], a[m - 1] - a[m - 2]))
    }

    /// Perron vector of the largest component, non-negative, unit L2 norm, zero elsewhere.
    pub fn eigenvector(&self) -> Vec<f64> {
        let comp = self.largest_component();
        let (_, vecs) = jacobi(&self.sub_matrix(&comp, false));
        let last = comp.len() - 1;
        let mut col: Vec<f64> = (0..comp.len()).map(|r| vecs[r][last]).collect();
        if col.iter().sum::<f64>() < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        let mut out = vec![0.0; self.n];
        for (i, &v) in comp.iter().enumerate() {
            out[v] = col[i];
        }
        out
    }

    /// Newman–Girvan Q as the double sum `1/2m Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)`.
    pub fn modularity(&self, labels: &[usize]) -> f64 {
        let m2: f64 = (0..self.n).map(|v| self.degree(v) as f64).sum();
        let mut q = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if labels[i] == labels[j] {
                    let a = if self.adj[i][j] { 1.0 } else { 0.0 };
                    q += a - (self.degree(i) * self.degree(j)) as f64 / m2;
                }
            }
        }
        q / m2
    }

    /// Newman's edge-list assortativity formula.
    pub fn assortativity(&self) -> f64 {
        let edges = self.edges();
        let m = edges.len() as f64;
        let (mut prod, mut half_sum, mut half_sq) = (0.0, 0.0, 0.0);
        for &(u, v) in &edges {
            let (j, k) = (self.degree(u) as f64, self.degree(v) as f64);
            prod += j * k;
            half_sum += 0.5 * (j + k);
            half_sq += 0.5 * (j * j + k * k);
        }
        let mean = half_sum / m;
        (prod / m - mean * mean) / (half_sq / m - mean * mean)
    }

    /// Shortest cycle: for every edge, the shortest detour between its endpoints
    /// without using it.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (u, v) in self.edges() {
            let mut dist = vec![INF; self.n];
            dist[u] = 0;
            let mut q = VecDeque::from([u]);
            while let Some(x) = q.pop_front() {
                for y in 0..self.n {
                    if self.adj[x][y] && !((x == u && y == v) || (x == v && y == u)) && dist[y] == INF {
                        dist[y] = dist[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            if dist[v] < INF {
                let c = dist[v] + 1;
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        best
    }

    /// Largest-degree-first greedy colouring, ties by id; also checks properness.
    pub fn greedy_colours(&self) -> usize {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        let mut colour: Vec<Option<usize>> = vec![None; self.n];
        for v in order {
            let mut c = 0;
            while (0..self.n).any(|w| self.adj[v][w] && colour[w] == Some(c)) {
                c += 1;
            }
            colour[v] = Some(c);
        }
        for (u, v) in self.edges() {
            assert_ne!(colour[u], colour[v], "improper colouring");
        }
        colour.iter().flatten().max().map_or(0, |c| c + 1)
    }
}

/// PageRank by solving `(I − d Pᵀ) x = (1 − d)/n` with Gaussian elimination;
/// dangling rows of `P` are uniform.
pub fn pagerank_dense(n: usize, arcs: &[(usize, usize)], d: f64) -> Vec<f64> {
    let mut out = vec![0usize; n];
    for &(a, _) in arcs {
        out[a] += 1;
    }
    let mut p = vec![vec![0.0; n]; n];
    for &(a, b) in arcs {
        p[a][b] += 1.0 / out[a] as f64;
    }
    for a in 0..n {
        if out[a] == 0 {
            p[a].iter_mut().for_each(|x| *x = 1.0 / n as f64);
        }
    }
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 } - d * p[j][i]).collect();
            row.push((1.0 - d) / n as f64);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    (0..n).map(|i| m[i][n] / m[i][i]).collect()
}

/// Compare every library measure on `(n, pairs)` with its oracle. Returns one
/// message per mismatch.
pub fn compare_structural(n: usize, pairs: &[(usize, usize)], seed: u64) -> Vec<String> {
    const TOL: f64 = 1e-6;
    let g = SimpleGraph::from_pairs(n, pairs.iter().copied());
    let dense = Dense::from_pairs(n, pairs);
    let mut bad = Vec::new();
    let close = |bad: &mut Vec<String>, what: &str, got: &[f64], want: &[f64]| {
        if got.len() != want.len() {
            bad.push(format!("{what}: length {} vs {}", got.len(), want.len()));
        } else if let Some(i) = (0..got.len()).find(|&i| (got[i] - want[i]).abs() > TOL || got[i].is_nan()) {
            bad.push(format!("{what}[{i}]: {} vs oracle {}", got[i], want[i]));
        }
    };

    let dc: Vec<f64> = (0..n).map(|v| dense.degree(v) as f64 / (n - 1) as f64).collect();
    close(&mut bad, "degree_centrality", &degree_centrality(&g), &dc);
    close(&mut bad, "closeness", &closeness_centrality(&g), &dense.closeness());
    let (bn, be) = dense.betweenness();
    let b = betweenness(&g, BetweennessMode::Exact);
    close(&mut bad, "betweenness", &b.nodes, &bn);
    close(&mut bad, "edge_betweenness", &b.edges, &be);

    let tri = dense.triangles();
    let cl = clustering(&g);
    if cl.triangles != tri {
        bad.push(format!("triangles: {:?} vs oracle {:?}", cl.triangles, tri));
    }
    let local: Vec<f64> = (0..n)
        .map(|v| {
            let k = dense.degree(v) as f64;
            if k < 2.0 { 0.0 } else { 2.0 * tri[v] as f64 / (k * (k - 1.0)) }
        })
        .collect();
    close(&mut bad, "local_clustering", &cl.local, &local);
    let wedges: f64 = (0..n).map(|v| (dense.degree(v) * dense.degree(v).saturating_sub(1)) as f64 / 2.0).sum();
    let trans = if wedges == 0.0 { 0.0 } else { tri.iter().sum::<u64>() as f64 / wedges };
    close(&mut bad, "transitivity", &[cl.transitivity], &[trans]);

    if !dense.edges().is_empty() {
        let ev = eigenvector_centrality(&g, 1e-10, 1000, seed).expect("eigenvector centrality");
        close(&mut bad, "eigenvector", &ev.values, &dense.eigenvector());
        // Fixed partitions: random labels and the component labelling.
        let labels: Vec<usize> = (0..n).map(|v| (v * 7 + seed as usize) % 4).collect();
        close(&mut bad, "modularity(random labels)", &[modularity(&g, &labels).unwrap()], &[dense.modularity(&labels)]);
        let comp = g.components();
        close(&mut bad, "modularity(components)", &[modularity(&g, &comp).unwrap()], &[dense.modularity(&comp)]);
    }
    match (assortativity(&g), dense.edges().len() >= 2) {
        (Ok(r), true) => close(&mut bad, "assortativity", &[r], &[dense.assortativity()]),
        (Err(_), true) => {
            let r = dense.assortativity();
            if r.is_finite() {
                bad.push(format!("assortativity undefined but oracle gives {r}"));
            }
        }
        (Ok(r), false) => bad.push(format!("assortativity {r} on fewer than 2 edges")),
        (Err(_), false) => {}
    }
    let sp = spectral_measures(&g, &SpectralConfig::default()).expect("spectral measures");
    match dense.spectral() {
        Some((ac, gap)) => {
            close(&mut bad, "algebraic_connectivity", &[sp.algebraic_connectivity.unwrap_or(f64::NAN)], &[ac.max(0.0)]);
            close(&mut bad, "spectral_gap", &[sp.spectral_gap.unwrap_or(f64::NAN)], &[gap]);
        }
        None => {
            if sp.algebraic_connectivity.is_some() {
                bad.push("algebraic connectivity defined on a single-node component".into());
            }
        }
    }
    let tri_any = tri.iter().any(|&t| t > 0);
    let gg = girth(&g, tri_any);
    if gg != dense.girth() {
        bad.push(format!("girth: {gg:?} vs oracle {:?}", dense.girth()));
    }
    let colours = greedy_chromatic(&g);
    if colours != dense.greedy_colours() {
        bad.push(format!("chromatic: {colours} vs oracle {}", dense.greedy_colours()));
    }

    let arcs: Vec<(usize, usize)> = pairs.to_vec();
    let pr = pagerank(&DirectedMultigraph::from_arcs(n, arcs.iter().copied()), 0.85, 1e-13, 10_000).expect("pagerank");
    close(&mut bad, "pagerank", &pr.values, &pagerank_dense(n, &arcs, 0.85));
    bad
}
