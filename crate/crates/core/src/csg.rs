//! Cumulative spectral gradient over tail-entity classes.
//!
//! Every distinct tail entity is a class whose members are the `(head, relation)`
//! pairs pointing at it. Members are embedded as `e_h ⊕ e_r`, sampled per class,
//! and a global k-NN search counts how often the neighbours of class `i` fall in
//! class `j`. The resulting row-stochastic matrix is symmetrized, turned into a
//! normalized Laplacian, and CSG is read off its eigenvalue spectrum as
//! `λ_{k_c} − λ_0`.

use std::collections::hash_map::{Entry, HashMap};
use std::io::Write;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embeddings::{CompositeVector, EmbeddingTable};
use crate::error::{Error, Result};
use crate::graph::{EntityId, KnowledgeGraph, RelationId};
use crate::linalg::{largest_eigenpairs, residual_norm, symmetric_eigen, LanczosConfig, LinearOperator, Matrix};
use crate::scalar::Scalar;
use crate::seeding::derive_seed;

/// Above this class count the spectrum is reduced to its two extremes.
pub const DENSE_SPECTRUM_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "m")]
pub enum ClassSelection {
    All,
    TopFrequency(usize),
    Random(usize),
}

impl ClassSelection {
    pub fn requested(self) -> Option<usize> {
        match self {
            ClassSelection::All => None,
            ClassSelection::TopFrequency(m) | ClassSelection::Random(m) => Some(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailClass {
    pub tail: EntityId,
    /// Distinct `(head, relation)` pairs, in first-occurrence order.
    pub members: Vec<(EntityId, RelationId)>,
    /// Triples (with duplicates) ending at `tail`.
    pub triple_count: usize,
}

/// Selected tail classes, ordered by tail id.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPartition {
    pub classes: Vec<TailClass>,
    pub selection: ClassSelection,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

pub fn partition_by_tail(kg: &KnowledgeGraph, selection: ClassSelection, seed: u64) -> Result<ClassPartition> {
    if kg.is_empty() {
        return Err(Error::Empty("knowledge graph has no triples"));
    }
    let n = kg.num_entities();
    let mut members: Vec<Vec<(EntityId, RelationId)>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    let mut seen = std::collections::HashSet::new();
    for t in kg.triples() {
        counts[t.tail.index()] += 1;
        if seen.insert((t.head, t.relation, t.tail)) {
            members[t.tail.index()].push((t.head, t.relation));
        }
    }
    let tails: Vec<usize> = (0..n).filter(|&e| counts[e] > 0).collect();
    let check = |m: usize| {
        if m > tails.len() {
            Err(Error::TooManyClasses { requested: m, available: tails.len() })
        } else if m == 0 {
            Err(Error::InvalidConfig("class count must be positive".into()))
        } else {
            Ok(m)
        }
    };
    let mut chosen: Vec<usize> = match selection {
        ClassSelection::All => tails,
        ClassSelection::TopFrequency(m) => {
            let m = check(m)?;
            let mut order = tails;
            order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
            order.truncate(m);
            order
        }
        ClassSelection::Random(m) => {
            let m = check(m)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            index::sample(&mut rng, tails.len(), m).into_iter().map(|i| tails[i]).collect()
        }
    };
    chosen.sort_unstable();
    let classes = chosen
        .into_iter()
        .map(|e| TailClass {
            tail: EntityId(e as u32),
            members: std::mem::take(&mut members[e]),
            triple_count: counts[e],
        })
        .collect();
    Ok(ClassPartition { classes, selection })
}

/// Composite vectors of the sampled class members, pooled class by class.
#[derive(Debug, Clone)]
pub struct SampledClasses<T> {
    dimension: usize,
    data: Vec<T>,
    /// Class `i` owns pool rows `offsets[i]..offsets[i + 1]`.
    offsets: Vec<usize>,
    origins: Vec<(EntityId, RelationId)>,
}

impl<T: Scalar> SampledClasses<T> {
    /// Pool pre-built vectors; `classes[i]` holds the rows of class `i`.
    pub fn from_class_vectors(classes: Vec<Vec<Vec<T>>>) -> Result<Self> {
        let dimension = classes.iter().flatten().map(Vec::len).next().unwrap_or(0);
        let mut data = Vec::new();
        let mut offsets = vec![0];
        let mut origins = Vec::new();
        for (ci, rows) in classes.into_iter().enumerate() {
            if rows.is_empty() {
                return Err(Error::InvalidConfig(format!("class {ci} has no vectors")));
            }
            for (ri, row) in rows.into_iter().enumerate() {
                if row.len() != dimension {
                    return Err(Error::DimensionMismatch { label: format!("class {ci} row {ri}"), expected: dimension, found: row.len() });
                }
                data.extend(row);
                origins.push((EntityId(u32::MAX), RelationId(u32::MAX)));
            }
            offsets.push(origins.len());
        }
        let s = Self { dimension, data, offsets, origins };
        s.check_finite()?;
        Ok(s)
    }

    fn check_finite(&self) -> Result<()> {
        if let Some(pos) = self.data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: pos / self.dimension.max(1), col: pos % self.dimension.max(1) });
        }
        Ok(())
    }

    pub fn class_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.offsets[class + 1] - self.offsets[class]
    }

    pub fn total(&self) -> usize {
        self.origins.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn class_of_row(&self, i: usize) -> usize {
        self.offsets.partition_point(|&o| o <= i) - 1
    }

    /// Sampled members of `class` with their composite vectors.
    pub fn class_vectors(&self, class: usize) -> Vec<CompositeVector<T>> {
        (self.offsets[class]..self.offsets[class + 1])
            .map(|i| CompositeVector { values: self.row(i).to_vec(), head: self.origins[i].0, relation: self.origins[i].1 })
            .collect()
    }

    /// Class index of every pooled row.
    pub fn row_labels(&self) -> Vec<usize> {
        (0..self.total()).map(|i| self.class_of_row(i)).collect()
    }
}

/// Draw `min(n_samples, |class|)` members per class without replacement and embed them.
///
/// Each class draws from its own stream keyed by `(seed, tail id)`, so the sample of a
/// class does not depend on which other classes were selected.
pub fn sample_class_vectors<T: Scalar>(
    partition: &ClassPartition,
    kg: &KnowledgeGraph,
    table: &EmbeddingTable<T>,
    n_samples: usize,
    seed: u64,
) -> Result<SampledClasses<T>> {
    if n_samples == 0 {
        return Err(Error::InvalidConfig("n_samples must be at least 1".into()));
    }
    let d = table.dimension();
    let picks: Vec<Vec<usize>> = partition
        .classes
        .iter()
        .map(|c| {
            let size = c.members.len();
            if size <= n_samples {
                return (0..size).collect();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("class-sample/{}", c.tail.0)));
            let mut idx = index::sample(&mut rng, size, n_samples).into_vec();
            idx.sort_unstable();
            idx
        })
        .collect();

    let total: usize = picks.iter().map(Vec::len).sum();
    let mut data = Vec::with_capacity(total * 2 * d);
    let mut offsets = Vec::with_capacity(partition.len() + 1);
    let mut origins = Vec::with_capacity(total);
    let mut cache: HashMap<(bool, u32), Vec<T>> = HashMap::new();
    offsets.push(0);
    for (class, idx) in partition.classes.iter().zip(&picks) {
        for &i in idx {
            let (h, r) = class.members[i];
            for key in [(true, h.0), (false, r.0)] {
                if let Entry::Vacant(slot) = cache.entry(key) {
                    let label = if key.0 { kg.entity_label(EntityId(key.1)) } else { kg.relation_label(RelationId(key.1)) };
                    slot.insert(table.get(label)?.into_owned());
                }
                data.extend_from_slice(&cache[&key]);
            }
            origins.push((h, r));
        }
        offsets.push(origins.len());
    }
    let s = SampledClasses { dimension: 2 * d, data, offsets, origins };
    s.check_finite()?;
    Ok(s)
}

/// Sorted k-nearest-neighbour lists (self excluded) for every pooled row.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    k_max: usize,
    neighbors: Vec<u32>,
}

impl NeighborTable {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// The `k` nearest rows to `row`, nearest first.
    pub fn of(&self, row: usize, k: usize) -> &[u32] {
        assert!(k <= self.k_max);
        &self.neighbors[row * self.k_max..row * self.k_max + k]
    }
}

fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Exact brute-force k-NN under L2 distance. Ties are broken by pool index, i.e. by
/// (class, within-class sample index). Parallel over queries; output order is fixed.
pub fn nearest_neighbors<T: Scalar>(sampled: &SampledClasses<T>, k_max: usize) -> Result<NeighborTable> {
    let n = sampled.total();
    if k_max == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if n < k_max + 1 {
        return Err(Error::TooFewVectors { needed: k_max + 1, available: n });
    }
    let lists: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|q| {
            let query = sampled.row(q);
            let mut cand: Vec<(T, u32)> = (0..n)
                .filter(|&j| j != q)
                .map(|j| (squared_distance(query, sampled.row(j)), j as u32))
                .collect();
            let cmp = |a: &(T, u32), b: &(T, u32)| {
                a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1))
            };
            if k_max < cand.len() {
                cand.select_nth_unstable_by(k_max - 1, cmp);
                cand.truncate(k_max);
            }
            cand.sort_unstable_by(cmp);
            cand.into_iter().map(|c| c.1).collect()
        })
        .collect();
    Ok(NeighborTable { k_max, neighbors: lists.into_iter().flatten().collect() })
}

/// `S_ij = (1 / (n_i k)) Σ_{m ∈ class i} |N_k(m) ∩ class j|`, with `n_i` the class's
/// actual sample count, so every row sums to one.
pub fn similarity_from_neighbors<T: Scalar>(sampled: &SampledClasses<T>, table: &NeighborTable, k: usize) -> Result<Matrix<T>> {
    if k == 0 || k > table.k_max() {
        return Err(Error::InvalidConfig(format!("k = {k} outside 1..={}", table.k_max())));
    }
    let m = sampled.class_count();
    let labels = sampled.row_labels();
    let mut counts = vec![0usize; m * m];
    for (row, &ci) in labels.iter().enumerate() {
        for &nb in table.of(row, k) {
            counts[ci * m + labels[nb as usize]] += 1;
        }
    }
    Ok(Matrix::from_fn(m, m, |i, j| {
        T::of_usize(counts[i * m + j]) / (T::of_usize(sampled.class_size(i)) * T::of_usize(k))
    }))
}

pub fn build_similarity<T: Scalar>(sampled: &SampledClasses<T>, k: usize) -> Result<Matrix<T>> {
    let table = nearest_neighbors(sampled, k)?;
    similarity_from_neighbors(sampled, &table, k)
}

/// Spectrum of the normalized Laplacian of a class-similarity matrix.
#[derive(Debug, Clone)]
pub struct SpectralResult<T> {
    /// Similarity as given (row-stochastic when produced by [`build_similarity`]).
    pub similarity: Matrix<T>,
    /// `(S + Sᵀ) / 2`.
    pub symmetrized: Matrix<T>,
    pub degrees: Vec<T>,
    pub laplacian: Matrix<T>,
    /// Ascending. Holds only `[λ_min, λ_max]` when `partial` is set.
    pub eigenvalues: Vec<T>,
    pub partial: bool,
    /// Largest `‖L u − λ u‖` over the checked eigenpairs.
    pub max_residual: T,
}

struct DenseSym<'a, T>(&'a Matrix<T>, T, T);

impl<T: Scalar> LinearOperator<T> for DenseSym<'_, T> {
    fn dim(&self) -> usize {
        self.0.rows()
    }
    // y = shift·x + sign·A x
    fn apply(&self, x: &[T], y: &mut [T]) {
        let ax = self.0.mul_vec(x);
        for ((yi, &xi), axi) in y.iter_mut().zip(x).zip(ax) {
            *yi = self.1 * xi + self.2 * axi;
        }
    }
}

pub fn laplacian_spectrum<T: Scalar>(similarity: &Matrix<T>) -> Result<SpectralResult<T>> {
    if !similarity.is_square() {
        return Err(Error::InvalidConfig("similarity matrix must be square".into()));
    }
    let m = similarity.rows();
    if m == 0 {
        return Err(Error::Empty("similarity matrix"));
    }
    for i in 0..m {
        for j in 0..m {
            let v = similarity[(i, j)];
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
            if v < T::zero() {
                return Err(Error::InvalidConfig(format!("negative similarity at ({i}, {j})")));
            }
        }
    }
    let half = T::of(0.5);
    let sym = Matrix::from_fn(m, m, |i, j| (similarity[(i, j)] + similarity[(j, i)]) * half);
    let degrees: Vec<T> = (0..m).map(|i| sym.row(i).iter().copied().sum()).collect();
    let inv_sqrt: Vec<T> = degrees.iter().map(|&d| if d > T::zero() { T::one() / d.sqrt() } else { T::zero() }).collect();
    let laplacian = Matrix::from_fn(m, m, |i, j| {
        let id = if i == j { T::one() } else { T::zero() };
        id - inv_sqrt[i] * sym[(i, j)] * inv_sqrt[j]
    });

    let (eigenvalues, partial, max_residual) = if m <= DENSE_SPECTRUM_LIMIT {
        let eig = symmetric_eigen(&laplacian, true)?;
        let vectors = eig.vectors.as_ref().expect("vectors requested");
        let checked: Vec<usize> = if m <= 1000 { (0..m).collect() } else { (0..8).chain(m - 8..m).collect() };
        let worst = checked
            .into_iter()
            .map(|k| residual_norm(&laplacian, eig.values[k], &vectors.column(k)))
            .fold(T::zero(), T::max);
        (eig.values, false, worst)
    } else {
        let cfg = LanczosConfig { tol: 1e-9, ..LanczosConfig::default() };
        let top = largest_eigenpairs(&DenseSym(&laplacian, T::zero(), T::one()), 1, &[], &cfg)?;
        let two = T::of(2.0);
        let bottom = largest_eigenpairs(&DenseSym(&laplacian, two, -T::one()), 1, &[], &cfg)?;
        let lo = two - bottom.values[0];
        (vec![lo, top.values[0]], true, top.residuals[0].max(bottom.residuals[0]))
    };

    Ok(SpectralResult { similarity: similarity.clone(), symmetrized: sym, degrees, laplacian, eigenvalues, partial, max_residual })
}

impl<T: Scalar> SpectralResult<T> {
    pub fn class_count(&self) -> usize {
        self.similarity.rows()
    }

    pub fn lambda_min(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> T {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// `λ_{k_c} − λ_0`, the sum of the first `k_c` consecutive eigenvalue gaps.
    pub fn csg_at(&self, k_c: usize) -> Result<T> {
        let m = self.class_count();
        if k_c == 0 || k_c >= m {
            return Err(Error::CutoffOutOfRange { k_c, max: m.saturating_sub(1) });
        }
        if self.partial {
            if k_c != m - 1 {
                return Err(Error::InvalidConfig(format!(
                    "only the full CSG is available for {m} classes (spectrum reduced to its extremes)"
                )));
            }
            return Ok(self.lambda_max() - self.lambda_min());
        }
        Ok(self.eigenvalues[k_c] - self.eigenvalues[0])
    }

    /// `λ_{M−1} − λ_0`; zero for a single class.
    pub fn csg_full(&self) -> T {
        self.lambda_max() - self.lambda_min()
    }

    /// Row-major `S` and the eigenvalues, for debugging dumps.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "M": self.class_count(),
            "S": self.similarity.as_slice().iter().map(|v| v.as_f64()).collect::<Vec<_>>(),
            "eigenvalues": self.eigenvalues.iter().map(|v| v.as_f64()).collect::<Vec<_>>(),
            "partial": self.partial,
        })
    }
}

/// CSG from a spectrum; see [`SpectralResult::csg_at`].
pub fn csg<T: Scalar>(result: &SpectralResult<T>, k_c: usize) -> Result<T> {
    result.csg_at(k_c)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CsgConfig {
    pub k: usize,
    pub n_samples: usize,
    pub classes: ClassSelection,
    /// Gap-summation cutoff; `None` means `M − 1`.
    pub k_c: Option<usize>,
    pub seed: u64,
}

impl Default for CsgConfig {
    fn default() -> Self {
        Self { k: 50, n_samples: 120, classes: ClassSelection::All, k_c: None, seed: 42 }
    }
}

/// One CSG measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsgRecord {
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub selection: ClassSelection,
    pub k_c: usize,
    pub csg: f64,
    pub csg_full: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub total_vectors: usize,
}

/// Partition, sample and embed once; the pool can then be reused across many `k`.
pub fn prepare_classes<T: Scalar>(
    kg: &KnowledgeGraph,
    table: &EmbeddingTable<T>,
    classes: ClassSelection,
    n_samples: usize,
    seed: u64,
) -> Result<(ClassPartition, SampledClasses<T>)> {
    let partition = partition_by_tail(kg, classes, derive_seed(seed, "partition"))?;
    let sampled = sample_class_vectors(&partition, kg, table, n_samples, derive_seed(seed, "sampling"))?;
    Ok((partition, sampled))
}

pub fn run_csg<T: Scalar>(kg: &KnowledgeGraph, table: &EmbeddingTable<T>, config: &CsgConfig) -> Result<(CsgRecord, SpectralResult<T>)> {
    let (partition, sampled) = prepare_classes(kg, table, config.classes, config.n_samples, config.seed)?;
    let m = partition.len();
    if m < 2 {
        return Err(Error::InvalidConfig(format!("CSG needs at least 2 classes, have {m}")));
    }
    let k_c = config.k_c.unwrap_or(m - 1);
    let s = build_similarity(&sampled, config.k)?;
    let spectrum = laplacian_spectrum(&s)?;
    let record = CsgRecord {
        k: config.k,
        m,
        n_samples: config.n_samples,
        seed: config.seed,
        selection: config.classes,
        k_c,
        csg: spectrum.csg_at(k_c)?.as_f64(),
        csg_full: spectrum.csg_full().as_f64(),
        lambda_min: spectrum.lambda_min().as_f64(),
        lambda_max: spectrum.lambda_max().as_f64(),
        total_vectors: sampled.total(),
    };
    Ok((record, spectrum))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub dataset: String,
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub csg_full: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// CSG over every `(k, classes)` combination. The class pool is drawn once per
/// class selection so that only `k` varies along a row group.
pub fn sweep<T: Scalar>(
    dataset: &str,
    kg: &KnowledgeGraph,
    table: &EmbeddingTable<T>,
    ks: &[usize],
    class_selections: &[ClassSelection],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if ks.is_empty() || class_selections.is_empty() {
        return Err(Error::InvalidConfig("sweep ranges must be non-empty".into()));
    }
    let k_max = *ks.iter().max().expect("non-empty");
    let mut rows = Vec::with_capacity(ks.len() * class_selections.len());
    for &sel in class_selections {
        let (partition, sampled) = prepare_classes(kg, table, sel, n_samples, seed)?;
        let table_nn = nearest_neighbors(&sampled, k_max)?;
        for &k in ks {
            let s = similarity_from_neighbors(&sampled, &table_nn, k)?;
            let spectrum = laplacian_spectrum(&s)?;
            rows.push(SweepRow {
                dataset: dataset.to_owned(),
                k,
                m: partition.len(),
                n_samples,
                seed,
                csg_full: spectrum.csg_full().as_f64(),
                lambda_min: spectrum.lambda_min().as_f64(),
                lambda_max: spectrum.lambda_max().as_f64(),
            });
        }
    }
    Ok(rows)
}

/// `dataset,k,M,n_samples,seed,csg_full,lambda_min,lambda_max`
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("sweep.csv", e))?;
    Ok(())
}
