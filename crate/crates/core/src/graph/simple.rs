use std::collections::{HashMap, VecDeque};

/// Undirected simple graph over dense node ids `0..n`.
///
/// Built from a (multi)set of endpoint pairs: self-loops and repeated pairs are
/// collapsed but remembered, since girth needs them.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleGraph {
    adjacency: Vec<Vec<u32>>,
    /// `(u, v)` with `u < v`, sorted.
    edges: Vec<(u32, u32)>,
    /// Number of source pairs that collapsed onto each edge.
    multiplicity: Vec<u32>,
    self_loops: Vec<u32>,
}

impl SimpleGraph {
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut self_loops = vec![0u32; n];
        let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
        for (a, b) in pairs {
            assert!(a < n && b < n, "node id out of range");
            if a == b {
                self_loops[a] += 1;
                continue;
            }
            let key = if a < b { (a as u32, b as u32) } else { (b as u32, a as u32) };
            *counts.entry(key).or_insert(0) += 1;
        }
        let mut edges: Vec<((u32, u32), u32)> = counts.into_iter().collect();
        edges.sort_unstable();
        let mut adjacency = vec![Vec::new(); n];
        for &((u, v), _) in &edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            adjacency,
            multiplicity: edges.iter().map(|e| e.1).collect(),
            edges: edges.into_iter().map(|e| e.0).collect(),
            self_loops,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Sorted neighbour ids.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_multiplicity(&self, i: usize) -> u32 {
        self.multiplicity[i]
    }

    pub fn has_self_loop(&self) -> bool {
        self.self_loops.iter().any(|&c| c > 0)
    }

    pub fn self_loop_count(&self, v: usize) -> u32 {
        self.self_loops[v]
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.multiplicity.iter().any(|&m| m > 1)
    }

    /// Connected-component label per node; labels are dense and ordered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    let w = w as usize;
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Nodes of the largest connected component, ascending. Ties go to the component
    /// containing the smallest node id.
    pub fn largest_component(&self) -> Vec<usize> {
        let labels = self.components();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l] += 1;
        }
        let Some(best) = (0..count).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a))) else {
            return Vec::new();
        };
        (0..labels.len()).filter(|&v| labels[v] == best).collect()
    }

    /// Subgraph induced by `nodes` (ascending), relabelled `0..nodes.len()`.
    pub fn induced(&self, nodes: &[usize]) -> SimpleGraph {
        let mut map = vec![u32::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            map[v] = i as u32;
        }
        let pairs = self.edges.iter().filter_map(|&(u, v)| {
            let (a, b) = (map[u as usize], map[v as usize]);
            (a != u32::MAX && b != u32::MAX).then_some((a as usize, b as usize))
        });
        SimpleGraph::from_pairs(nodes.len(), pairs)
    }
}

/// Directed multigraph: one arc per source pair, self-loops kept.
#[derive(Debug, Clone)]
pub struct DirectedMultigraph {
    out: Vec<Vec<u32>>,
}

impl DirectedMultigraph {
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); n];
        for (a, b) in arcs {
            out[a].push(b as u32);
        }
        Self { out }
    }

    /// Both orientations of every undirected edge.
    pub fn from_undirected(g: &SimpleGraph) -> Self {
        Self::from_arcs(
            g.node_count(),
            g.edges().iter().flat_map(|&(u, v)| [(u as usize, v as usize), (v as usize, u as usize)]),
        )
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn out_arcs(&self, v: usize) -> &[u32] {
        &self.out[v]
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }
}
